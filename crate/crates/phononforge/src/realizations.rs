//! Exact small-Hilbert-space oracles for the physical realizations.
//!
//! Both realizations are driven beyond first order by exponentiating the
//! full anti-Hermitian generator on the composite space, so the tests can
//! verify that the conditional maps reduce to the claimed measurement
//! operators with an O(ε²) residual:
//!
//! * qubit ⊗ oscillator coupled by H/ħ = −iΩ(bσ₊ − b†σ₋), qubit projected
//!   onto B*|g⟩ − A*|e⟩ after preparing A|g⟩ + B|e⟩, which targets
//!   Υ = Ωτ(A²b + B²b†);
//! * two optical polarizations ⊗ mechanics evolved by the generator of
//!   1 + (θ/2 a_h†b e^{−iφ} − r a_v†b† e^{iϕ} + μ a_h† − H.c.), passed
//!   through the wave plate a_h → (a_h+a_v)/√2, a_v → (a_v−a_h)/√2 and
//!   projected on a single-photon port, which targets the herald operator.
//!
//! Tensor ordering is fixed as (a_h, a_v, b) with the leftmost factor
//! slowest-varying; the qubit oracle puts the qubit slowest.

use ndarray::Array2;
use num_complex::Complex64;

use crate::channels::{Detection, HeraldSpec};
use crate::error::{Error, Result};
use crate::fock::{annihilation_op, MatrixOperator, PureState};
use crate::linalg::{self, kron, CMatrix, CVector, ZERO};

/// Input qubit amplitudes A|g⟩ + B|e⟩.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QubitAmplitudes {
    pub a: Complex64,
    pub b: Complex64,
}

impl QubitAmplitudes {
    pub fn new(a: Complex64, b: Complex64) -> Result<Self> {
        let q = Self { a, b };
        q.validate()?;
        Ok(q)
    }

    pub fn validate(&self) -> Result<()> {
        let norm = self.a.norm_sqr() + self.b.norm_sqr();
        if (norm - 1.0).abs() >= 1e-12 {
            return Err(Error::NotNormalized {
                deviation: (norm - 1.0).abs(),
            });
        }
        Ok(())
    }
}

/// Tensor-factor bookkeeping, leftmost factor slowest-varying.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompositeSpace {
    factor_dims: Vec<usize>,
}

impl CompositeSpace {
    pub fn new(factor_dims: Vec<usize>) -> Result<Self> {
        if factor_dims.is_empty() || factor_dims.contains(&0) {
            return Err(Error::InvalidDimension(
                "factor dimensions must be >= 1".into(),
            ));
        }
        Ok(Self { factor_dims })
    }

    pub fn factor_dims(&self) -> &[usize] {
        &self.factor_dims
    }

    pub fn total_dim(&self) -> usize {
        self.factor_dims.iter().product()
    }

    /// Flat index of a basis label, leftmost slowest.
    pub fn index(&self, labels: &[usize]) -> Result<usize> {
        if labels.len() != self.factor_dims.len() {
            return Err(Error::DimensionMismatch("label length mismatch".into()));
        }
        let mut idx = 0usize;
        for (label, dim) in labels.iter().zip(&self.factor_dims) {
            if label >= dim {
                return Err(Error::InvalidParameter(format!(
                    "label {label} out of range for factor dimension {dim}"
                )));
            }
            idx = idx * dim + label;
        }
        Ok(idx)
    }

    /// Basis labels of a flat index.
    pub fn labels(&self, mut index: usize) -> Vec<usize> {
        let mut out = vec![0; self.factor_dims.len()];
        for (slot, dim) in out.iter_mut().zip(&self.factor_dims).rev() {
            *slot = index % dim;
            index /= dim;
        }
        out
    }
}

/// Exact conditional oscillator map for the Jaynes–Cummings qubit scheme.
pub fn jc_conditional_map(
    q: &QubitAmplitudes,
    omega_tau: f64,
    dim: usize,
) -> Result<MatrixOperator> {
    q.validate()?;
    if !(omega_tau > 0.0 && omega_tau <= 0.1) {
        return Err(Error::InvalidParameter(format!(
            "omega_tau must be in (0, 0.1], got {omega_tau}"
        )));
    }
    if dim < 3 {
        return Err(Error::InvalidDimension(
            "oscillator dimension must be >= 3".into(),
        ));
    }

    let b = annihilation_op(dim)?;
    let bdag = b.dagger();
    let mut sigma_plus = Array2::from_elem((2, 2), ZERO);
    sigma_plus[[1, 0]] = linalg::ONE; // |e⟩⟨g|
    let sigma_minus = linalg::dagger(&sigma_plus);

    // U = exp(−Ωτ (b σ₊ − b† σ₋)), qubit factor slowest.
    let gen = kron(&sigma_plus, b.entries()) - kron(&sigma_minus, bdag.entries());
    let u = linalg::expm(&gen.mapv(|z| z * Complex64::new(-omega_tau, 0.0)));

    // ⟨out| U |in⟩ with in = A|g⟩ + B|e⟩ and out = B*|g⟩ − A*|e⟩.
    let in_amp = [q.a, q.b];
    let out_conj = [q.b, -q.a]; // conj of (B*, −A*)
    let mut m = Array2::from_elem((dim, dim), ZERO);
    for (qp, co) in out_conj.iter().enumerate() {
        if *co == ZERO {
            continue;
        }
        for (qi, ai) in in_amp.iter().enumerate() {
            if *ai == ZERO {
                continue;
            }
            for row in 0..dim {
                for col in 0..dim {
                    m[[row, col]] += co * u[[qp * dim + row, qi * dim + col]] * ai;
                }
            }
        }
    }
    Ok(MatrixOperator::new(m))
}

/// Exact two-polarization optomechanical evolution: interaction unitary
/// followed by the wave plate, on the (a_h, a_v, b) composite space.
pub struct OptomechOracle {
    space: CompositeSpace,
    /// Wave plate × interaction unitary.
    total: CMatrix,
    /// Interaction unitary alone.
    interaction: CMatrix,
    mech_dim: usize,
}

impl OptomechOracle {
    pub fn new(spec: &HeraldSpec, optical_dim: usize, mech_dim: usize) -> Result<Self> {
        spec.validate()?;
        for (name, v) in [
            ("theta_half", spec.theta_half),
            ("r", spec.r),
            ("|mu|", spec.mu.norm()),
        ] {
            if v > 0.1 {
                return Err(Error::InvalidParameter(format!(
                    "{name} = {v} exceeds the oracle's first-order regime bound 0.1"
                )));
            }
        }
        if optical_dim < 3 {
            return Err(Error::InvalidDimension(
                "optical dimension must be >= 3 to witness two-photon leakage".into(),
            ));
        }
        if mech_dim < 2 {
            return Err(Error::InvalidDimension(
                "mechanical dimension must be >= 2".into(),
            ));
        }

        let space = CompositeSpace::new(vec![optical_dim, optical_dim, mech_dim])?;
        let a_opt = annihilation_op(optical_dim)?;
        let id_opt = linalg::identity(optical_dim);
        let id_mech = linalg::identity(mech_dim);
        let b_mech = annihilation_op(mech_dim)?;

        let a_h = kron(&kron(a_opt.entries(), &id_opt), &id_mech);
        let a_v = kron(&kron(&id_opt, a_opt.entries()), &id_mech);
        let b = kron(&kron(&id_opt, &id_opt), b_mech.entries());
        let a_h_dag = linalg::dagger(&a_h);
        let a_v_dag = linalg::dagger(&a_v);
        let b_dag = linalg::dagger(&b);

        // S = θ/2 e^{−iφ} a_h†b − r e^{iϕ} a_v†b† + μ a_h†; generator S − S†.
        let s = a_h_dag
            .dot(&b)
            .mapv(|z| z * Complex64::from_polar(spec.theta_half, -spec.phi))
            - a_v_dag
                .dot(&b_dag)
                .mapv(|z| z * Complex64::from_polar(spec.r, spec.varphi))
            + a_h_dag.mapv(|z| z * spec.mu);
        let gen = &s - &linalg::dagger(&s);
        let interaction = linalg::expm(&gen);

        // Wave plate: W a_h W† = (a_h+a_v)/√2, W a_v W† = (a_v−a_h)/√2.
        let mix = kron(&kron(a_opt.dagger().entries(), a_opt.entries()), &id_mech);
        let w_gen = (&mix - &linalg::dagger(&mix))
            .mapv(|z| z * Complex64::new(-std::f64::consts::FRAC_PI_4, 0.0));
        let wave_plate = linalg::expm(&w_gen);

        let total = wave_plate.dot(&interaction);
        Ok(Self {
            space,
            total,
            interaction,
            mech_dim,
        })
    }

    pub fn space(&self) -> &CompositeSpace {
        &self.space
    }

    /// Interaction unitary before the wave plate (for unitarity checks).
    pub fn interaction_unitary(&self) -> &CMatrix {
        &self.interaction
    }

    /// Mechanical-space block ⟨n_h, n_v| (wave plate · U) |0_h, 0_v⟩.
    pub fn port_block(&self, n_h: usize, n_v: usize) -> Result<MatrixOperator> {
        let mut m = Array2::from_elem((self.mech_dim, self.mech_dim), ZERO);
        for row in 0..self.mech_dim {
            let flat_row = self.space.index(&[n_h, n_v, row])?;
            for col in 0..self.mech_dim {
                let flat_col = self.space.index(&[0, 0, col])?;
                m[[row, col]] = self.total[[flat_row, flat_col]];
            }
        }
        Ok(MatrixOperator::new(m))
    }

    /// Full output vector for optical vacuum ⊗ probe.
    pub fn evolve_probe(&self, probe: &PureState) -> Result<CVector> {
        if probe.dim() != self.mech_dim {
            return Err(Error::DimensionMismatch(format!(
                "probe dimension {} does not match mechanical dimension {}",
                probe.dim(),
                self.mech_dim
            )));
        }
        probe.check_normalized()?;
        let total_dim = self.space.total_dim();
        let mut input = ndarray::Array1::from_elem(total_dim, ZERO);
        for m in 0..self.mech_dim {
            input[self.space.index(&[0, 0, m])?] = probe.amp(m);
        }
        Ok(self.total.dot(&input))
    }

    /// Probability of finding exactly (n_h, n_v) scattered photons.
    pub fn port_probability(&self, output: &CVector, n_h: usize, n_v: usize) -> Result<f64> {
        let mut p = 0.0;
        for m in 0..self.mech_dim {
            p += output[self.space.index(&[n_h, n_v, m])?].norm_sqr();
        }
        Ok(p)
    }

    /// Total probability of two or more photons across both optical modes.
    pub fn multiphoton_probability(&self, output: &CVector) -> f64 {
        let mut p = 0.0;
        for (flat, amp) in output.iter().enumerate() {
            let labels = self.space.labels(flat);
            if labels[0] + labels[1] >= 2 {
                p += amp.norm_sqr();
            }
        }
        p
    }
}

/// Conditional mechanical map for the requested detection port:
/// ⟨1_h, 0_v| for h, ⟨0_h, 1_v| for v.
pub fn optomech_conditional_map(
    spec: &HeraldSpec,
    optical_dim: usize,
    mech_dim: usize,
) -> Result<MatrixOperator> {
    let oracle = OptomechOracle::new(spec, optical_dim, mech_dim)?;
    match spec.detection {
        Detection::H => oracle.port_block(1, 0),
        Detection::V => oracle.port_block(0, 1),
    }
}

/// Probability of ≥ 2 scattered photons for the given probe state.
pub fn multiphoton_leakage(
    spec: &HeraldSpec,
    optical_dim: usize,
    mech_dim: usize,
    probe: &PureState,
) -> Result<f64> {
    let oracle = OptomechOracle::new(spec, optical_dim, mech_dim)?;
    let output = oracle.evolve_probe(probe)?;
    Ok(oracle.multiphoton_probability(&output))
}

/// Least-squares slope of ln(y) against ln(x).
pub fn log_log_slope(xs: &[f64], ys: &[f64]) -> f64 {
    assert_eq!(xs.len(), ys.len());
    let n = xs.len() as f64;
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let cov: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let var: f64 = lx.iter().map(|x| (x - mx) * (x - mx)).sum();
    cov / var
}

/// First-order residual sweep used by the command-line report.
#[derive(Debug, Clone)]
pub struct RealizationReport {
    pub epsilons: Vec<f64>,
    pub jc_residuals: Vec<f64>,
    pub jc_slope: f64,
    pub optomech_residuals: Vec<f64>,
    pub optomech_slope: f64,
    /// ‖M_v + herald_op(φ+π, v)‖_max / ε at ε = 1e−3.
    pub v_port_residual: f64,
    /// log10 of leakage(1e−2)/leakage(1e−3) on probe |1⟩; 4 when quartic.
    pub leakage_log10_ratio: f64,
}

/// Run the residual sweeps at ε ∈ {1e−2, 1e−3, 1e−4}.
pub fn realization_sweep() -> Result<RealizationReport> {
    let epsilons = vec![1e-2, 1e-3, 1e-4];
    let dim = 10;
    let inv = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    let q = QubitAmplitudes::new(inv, inv)?;
    let b = annihilation_op(dim)?;
    let bdag = b.dagger();

    let mut jc_residuals = Vec::new();
    for &eps in &epsilons {
        let map = jc_conditional_map(&q, eps, dim)?;
        let target = b
            .scaled(q.a * q.a * eps)
            .add(&bdag.scaled(q.b * q.b * eps))?;
        jc_residuals.push(map.max_abs_diff(&target));
    }
    let jc_slope = log_log_slope(&epsilons, &jc_residuals);

    let mech_dim = 10;
    let mut optomech_residuals = Vec::new();
    for &eps in &epsilons {
        let spec = sweep_spec(eps);
        let map = optomech_conditional_map(&spec, 3, mech_dim)?;
        let target = crate::channels::herald_op(mech_dim, &spec)?;
        optomech_residuals.push(map.max_abs_diff(&target));
    }
    let optomech_slope = log_log_slope(&epsilons, &optomech_residuals);

    let eps = 1e-3;
    let spec_v = HeraldSpec {
        detection: Detection::V,
        ..sweep_spec(eps)
    };
    let map_v = optomech_conditional_map(&spec_v, 3, mech_dim)?;
    let shifted = HeraldSpec {
        phi: spec_v.phi + std::f64::consts::PI,
        ..spec_v
    };
    let target_v = crate::channels::herald_op(mech_dim, &shifted)?.scaled(-linalg::ONE);
    let v_port_residual = map_v.max_abs_diff(&target_v) / eps;

    let probe = PureState::fock(mech_dim, 1)?;
    let leak_hi = multiphoton_leakage(&sweep_spec(1e-2), 3, mech_dim, &probe)?;
    let leak_lo = multiphoton_leakage(&sweep_spec(1e-3), 3, mech_dim, &probe)?;
    let leakage_log10_ratio = (leak_hi / leak_lo).log10();

    Ok(RealizationReport {
        epsilons,
        jc_residuals,
        jc_slope,
        optomech_residuals,
        optomech_slope,
        v_port_residual,
        leakage_log10_ratio,
    })
}

fn sweep_spec(eps: f64) -> HeraldSpec {
    HeraldSpec {
        theta_half: eps,
        r: eps,
        mu: Complex64::new(eps, 0.0),
        phi: 0.0,
        varphi: 0.0,
        detection: Detection::H,
    }
}
