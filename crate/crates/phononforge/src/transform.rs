//! Arbitrary state transformation by repeated heralded identity+subtraction.
//!
//! Applying Φ = ∏ⱼ (μⱼ + νⱼ b)/√2 = Σᵢ Cᵢ bⁱ to a known state ψ reaches a
//! target φ when the coefficients solve Σᵢ Cᵢ ψ_{i+n} √((i+n)!/n!) = φₙ.
//! The system is triangular (back-substitution from the top level) and
//! solvable whenever ψ_N ≠ 0; the factor steps come from the roots of the
//! coefficient polynomial.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fock::{self, annihilation_op, creation_op, number_op, MatrixOperator, PureState};
use crate::linalg::{ONE, ZERO};
use crate::poly;

/// |ψ_N| below this makes the system unsolvable.
pub const SOLVABILITY_THRESHOLD: f64 = 1e-12;
/// Relative threshold for trimming negligible coefficients.
pub const COEFF_TRIM: f64 = 1e-12;
/// Re-expansion residual allowed for a factored plan.
pub const EXPANSION_RESIDUAL: f64 = 1e-9;

/// One heralded factor (μ + ν b)/√2.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FactorStep {
    pub mu: Complex64,
    pub nu: Complex64,
}

/// Solved coefficients plus the ordered factor steps realizing them.
#[derive(Debug, Clone, PartialEq)]
pub struct TransformPlan {
    /// Trimmed coefficients C_0..C_degree.
    pub coeffs: Vec<Complex64>,
    /// Exactly `degree` factor steps, sorted by ascending root magnitude.
    pub steps: Vec<FactorStep>,
    /// Scalar relating the step product to the coefficients:
    /// scale · ∏(μⱼ + νⱼ b)/√2 = Σ Cᵢ bⁱ.
    pub scale: Complex64,
    /// Success probability predicted by the closed-form product; 0 until a
    /// caller evaluates it against a concrete input state.
    pub predicted_probability: f64,
}

impl TransformPlan {
    pub fn degree(&self) -> usize {
        self.steps.len()
    }

    /// Re-expand the factor steps and compare against the coefficients.
    pub fn expansion_residual(&self) -> f64 {
        let mut product = vec![ONE];
        for step in &self.steps {
            product = poly::convolve(&product, &[step.mu, step.nu]);
        }
        let norm = std::f64::consts::SQRT_2.powi(self.steps.len() as i32);
        let mut residual = 0.0f64;
        for i in 0..self.coeffs.len().max(product.len()) {
            let lhs = product.get(i).copied().unwrap_or(ZERO) * self.scale / norm;
            let rhs = self.coeffs.get(i).copied().unwrap_or(ZERO);
            residual = residual.max((lhs - rhs).norm());
        }
        residual
    }

    pub fn verify(&self) -> Result<()> {
        let residual = self.expansion_residual();
        let max_c = self.coeffs.iter().fold(0.0f64, |m, c| m.max(c.norm()));
        if residual <= EXPANSION_RESIDUAL * max_c.max(1.0) {
            Ok(())
        } else {
            Err(Error::NumericalIntegrity(format!(
                "plan re-expansion residual {residual:.3e} exceeds {EXPANSION_RESIDUAL:.0e}"
            )))
        }
    }
}

/// Step normalization convention.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StepNormalization {
    /// μⱼ = 1 for every finite root (zero roots become pure subtraction).
    UnitIdentity,
    /// max(|μⱼ|, |νⱼ|) = 1 per step.
    UnitMax,
}

/// Solve Σᵢ Cᵢ ψ_{i+n} √((i+n)!/n!) = φₙ for C_0..C_N by back-substitution.
pub fn solve_coefficients(psi: &PureState, phi: &PureState) -> Result<Vec<Complex64>> {
    psi.check_normalized()?;
    phi.check_normalized()?;
    if psi.dim() != phi.dim() {
        return Err(Error::DimensionMismatch(format!(
            "input dimension {} differs from target dimension {}; apply dimension_match first",
            psi.dim(),
            phi.dim()
        )));
    }
    let top = psi.dim() - 1;
    if psi.amp(top).norm() <= SOLVABILITY_THRESHOLD {
        return Err(Error::Unsolvable(format!(
            "top amplitude |ψ_{top}| = {:.3e} is below {SOLVABILITY_THRESHOLD:.0e}; \
             apply dimension_match to make the top level occupied",
            psi.amp(top).norm()
        )));
    }

    let dim = psi.dim();
    let mut coeffs = vec![ZERO; dim];
    for n in (0..dim).rev() {
        let i_new = top - n;
        let mut partial = ZERO;
        for (i, coeff) in coeffs.iter().enumerate().take(i_new) {
            partial += coeff * psi.amp(i + n) * root_ratio(i + n, n);
        }
        coeffs[i_new] = (phi.amp(n) - partial) / (psi.amp(top) * root_ratio(top, n));
    }

    for n in 0..dim {
        let lhs: Complex64 = (0..=top - n)
            .map(|i| coeffs[i] * psi.amp(i + n) * root_ratio(i + n, n))
            .sum();
        let residual = (lhs - phi.amp(n)).norm();
        if residual >= 1e-10 {
            return Err(Error::NumericalIntegrity(format!(
                "coefficient equation n={n} has residual {residual:.3e}"
            )));
        }
    }
    Ok(coeffs)
}

/// √((top)!/(bottom)!) as an iterative product of square roots.
pub fn root_ratio(top: usize, bottom: usize) -> f64 {
    debug_assert!(top >= bottom);
    (bottom + 1..=top).map(|k| (k as f64).sqrt()).product()
}

/// Factor coefficients into heralded identity+subtraction steps.
///
/// Trailing coefficients below `COEFF_TRIM`·max|C| are trimmed, so the plan
/// degree is the polynomial degree, not the state dimension. Leading
/// near-zero coefficients become pure-subtraction steps (μ, ν) = (0, 1).
pub fn factor_plan(
    coeffs: &[Complex64],
    normalization: StepNormalization,
    seed: u64,
) -> Result<TransformPlan> {
    let max_c = coeffs.iter().fold(0.0f64, |m, c| m.max(c.norm()));
    if max_c == 0.0 || !max_c.is_finite() {
        return Err(Error::InvalidParameter(
            "coefficients must contain a finite nonzero entry".into(),
        ));
    }

    let mut trimmed: Vec<Complex64> = coeffs.to_vec();
    while trimmed.len() > 1 && trimmed.last().unwrap().norm() < COEFF_TRIM * max_c {
        trimmed.pop();
    }
    let zero_roots = trimmed
        .iter()
        .take_while(|c| c.norm() < COEFF_TRIM * max_c)
        .count()
        .min(trimmed.len() - 1);

    let reduced = &trimmed[zero_roots..];
    let finite_roots = if reduced.len() > 1 {
        poly::find_roots(reduced, seed)?
    } else {
        Vec::new()
    };

    let mut roots: Vec<Option<Complex64>> = Vec::new();
    roots.extend(std::iter::repeat_n(None, zero_roots));
    roots.extend(finite_roots.into_iter().map(Some));
    roots.sort_by(|a, b| {
        let key = |r: &Option<Complex64>| match r {
            None => (0.0, 0.0),
            Some(z) => (z.norm(), z.arg()),
        };
        key(a).partial_cmp(&key(b)).unwrap()
    });

    let steps: Vec<FactorStep> = roots
        .iter()
        .map(|root| match (root, normalization) {
            (None, _) => FactorStep { mu: ZERO, nu: ONE },
            (Some(z), StepNormalization::UnitIdentity) => FactorStep {
                mu: ONE,
                nu: -ONE / z,
            },
            (Some(z), StepNormalization::UnitMax) => {
                if z.norm() >= 1.0 {
                    FactorStep {
                        mu: ONE,
                        nu: -ONE / z,
                    }
                } else {
                    FactorStep { mu: -z, nu: ONE }
                }
            }
        })
        .collect();

    let mut expansion = vec![ONE];
    for step in &steps {
        expansion = poly::convolve(&expansion, &[step.mu, step.nu]);
    }
    let (anchor, anchor_val) = expansion
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.norm().partial_cmp(&b.1.norm()).unwrap())
        .expect("expansion is nonempty");
    let sqrt2_pow = (std::f64::consts::SQRT_2).powi(steps.len() as i32);
    let scale = trimmed[anchor] * sqrt2_pow / anchor_val;

    let plan = TransformPlan {
        coeffs: trimmed,
        steps,
        scale,
        predicted_probability: 0.0,
    };
    plan.verify()?;
    Ok(plan)
}

/// Ladder operation applied by `dimension_match`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LadderDirection {
    Raised,
    Lowered,
}

/// Raise or lower the top occupied level to `target_dim − 1` by repeated
/// creation/annihilation with renormalization, recording each application.
pub fn dimension_match(
    psi: &PureState,
    target_dim: usize,
) -> Result<(PureState, Vec<LadderDirection>)> {
    psi.check_normalized()?;
    if target_dim == 0 {
        return Err(Error::InvalidDimension(
            "target dimension must be >= 1".into(),
        ));
    }
    let top = psi
        .top_occupied_level()
        .ok_or_else(|| Error::InvalidParameter("state has no occupied level".into()))?;
    let target_top = target_dim - 1;
    let mut ops = Vec::new();

    let mut state = if top >= target_top {
        psi.clone()
    } else {
        psi.resized(psi.dim().max(target_dim))?
    };

    if top < target_top {
        let raise = creation_op(state.dim())?;
        for _ in top..target_top {
            let (raw, norm_sqr) = fock::apply(&raise, &state)?;
            if norm_sqr < 1e-24 {
                return Err(Error::HeraldingImpossible {
                    probability: norm_sqr,
                    threshold: 1e-24,
                });
            }
            state = raw.normalize()?;
            ops.push(LadderDirection::Raised);
        }
    } else if top > target_top {
        let lower = annihilation_op(state.dim())?;
        for _ in target_top..top {
            let (raw, norm_sqr) = fock::apply(&lower, &state)?;
            if norm_sqr < 1e-24 {
                return Err(Error::HeraldingImpossible {
                    probability: norm_sqr,
                    threshold: 1e-24,
                });
            }
            state = raw.normalize()?;
            ops.push(LadderDirection::Lowered);
        }
    }

    let final_state = shrink_to(&state, target_dim)?;
    Ok((final_state, ops))
}

/// Copy the lowest `dim` levels, requiring the dropped weight to be at the
/// floating-point floor, then renormalize.
fn shrink_to(state: &PureState, dim: usize) -> Result<PureState> {
    if state.dim() <= dim {
        return state.resized(dim);
    }
    let dropped: f64 = (dim..state.dim()).map(|n| state.amp(n).norm_sqr()).sum();
    if dropped > 1e-20 {
        return Err(Error::Truncation {
            leakage: dropped,
            tolerance: 1e-20,
            required_dim: state.top_occupied_level().map_or(dim, |t| t + 1),
        });
    }
    let amps: Vec<Complex64> = (0..dim).map(|n| state.amp(n)).collect();
    PureState::new(amps)?.normalize()
}

/// Record of one executed factor step.
#[derive(Debug, Clone, PartialEq)]
pub struct StepOutcome {
    /// Normalized state after the step.
    pub state: PureState,
    /// Squared norm of the unnormalized step output.
    pub probability: f64,
}

/// Full execution record of a plan.
#[derive(Debug, Clone, PartialEq)]
pub struct ExecutionTrace {
    pub per_step: Vec<StepOutcome>,
    /// Product of the per-step probabilities = ‖(∏ factors)ψ‖².
    pub total_probability: f64,
    /// |⟨target|final⟩|² when a target was supplied.
    pub final_fidelity: Option<f64>,
}

impl ExecutionTrace {
    pub fn final_state(&self) -> Option<&PureState> {
        self.per_step.last().map(|s| &s.state)
    }
}

/// Apply each factor (μⱼ + νⱼ b)/√2 in order, recording normalized
/// intermediate states and per-step probabilities.
pub fn execute_plan(
    psi: &PureState,
    plan: &TransformPlan,
    target: Option<&PureState>,
) -> Result<ExecutionTrace> {
    psi.check_normalized()?;
    // A factor can nearly annihilate the running state (a root close to the
    // state's support), and the 1e−12 step-permutation invariance of the
    // total probability is then beyond plain f64. The unnormalized chain is
    // carried in compensated double-double arithmetic, which keeps the
    // accumulated norm accurate across such cancellations.
    let mut running: Vec<dd::Cdd> = psi.amps().iter().map(|z| dd::Cdd::from_c64(*z)).collect();
    let mut running_norm_sqr = dd::Dd::from_f64(1.0);
    let mut per_step = Vec::with_capacity(plan.steps.len());

    for step in &plan.steps {
        running = dd::apply_factor(step.mu, step.nu, &running);
        let image_norm_sqr = dd::norm_sqr(&running);
        let probability = image_norm_sqr.div(running_norm_sqr).to_f64();
        if probability < crate::channels::HERALDING_FLOOR {
            return Err(Error::HeraldingImpossible {
                probability,
                threshold: crate::channels::HERALDING_FLOOR,
            });
        }
        let state = PureState::new(dd::rounded(&running))?.normalize()?;
        per_step.push(StepOutcome { state, probability });
        running_norm_sqr = image_norm_sqr;
    }

    let final_fidelity = match (target, per_step.last()) {
        (Some(t), Some(last)) => Some(fock::overlap(t, &last.state)?.norm_sqr()),
        (Some(t), None) => Some(fock::overlap(t, psi)?.norm_sqr()),
        (None, _) => None,
    };
    Ok(ExecutionTrace {
        per_step,
        total_probability: running_norm_sqr.to_f64(),
        final_fidelity,
    })
}

/// Compensated (double-double) arithmetic for the execution chain.
mod dd {
    use num_complex::Complex64;

    /// Unevaluated sum hi + lo with |lo| ≤ ulp(hi)/2.
    #[derive(Debug, Clone, Copy)]
    pub struct Dd {
        hi: f64,
        lo: f64,
    }

    fn quick_two_sum(a: f64, b: f64) -> Dd {
        // Requires |a| >= |b|.
        let s = a + b;
        Dd {
            hi: s,
            lo: b - (s - a),
        }
    }

    fn two_sum(a: f64, b: f64) -> Dd {
        let s = a + b;
        let bb = s - a;
        Dd {
            hi: s,
            lo: (a - (s - bb)) + (b - bb),
        }
    }

    fn two_prod(a: f64, b: f64) -> Dd {
        let p = a * b;
        Dd {
            hi: p,
            lo: a.mul_add(b, -p),
        }
    }

    impl Dd {
        pub fn from_f64(x: f64) -> Self {
            Dd { hi: x, lo: 0.0 }
        }

        pub fn to_f64(self) -> f64 {
            self.hi + self.lo
        }

        pub fn add(self, other: Dd) -> Dd {
            let s = two_sum(self.hi, other.hi);
            quick_two_sum(s.hi, s.lo + self.lo + other.lo)
        }

        pub fn neg(self) -> Dd {
            Dd {
                hi: -self.hi,
                lo: -self.lo,
            }
        }

        pub fn mul(self, other: Dd) -> Dd {
            let p = two_prod(self.hi, other.hi);
            quick_two_sum(p.hi, p.lo + self.hi * other.lo + self.lo * other.hi)
        }

        pub fn div(self, other: Dd) -> Dd {
            let q1 = self.hi / other.hi;
            let r = self.add(other.mul(Dd::from_f64(q1)).neg());
            let q2 = r.to_f64() / other.hi;
            quick_two_sum(q1, q2)
        }
    }

    /// Complex number with double-double components.
    #[derive(Debug, Clone, Copy)]
    pub struct Cdd {
        re: Dd,
        im: Dd,
    }

    impl Cdd {
        pub fn from_c64(z: Complex64) -> Self {
            Cdd {
                re: Dd::from_f64(z.re),
                im: Dd::from_f64(z.im),
            }
        }

        pub fn to_c64(self) -> Complex64 {
            Complex64::new(self.re.to_f64(), self.im.to_f64())
        }

        pub fn add(self, other: Cdd) -> Cdd {
            Cdd {
                re: self.re.add(other.re),
                im: self.im.add(other.im),
            }
        }

        pub fn mul(self, other: Cdd) -> Cdd {
            let re = self.re.mul(other.re).add(self.im.mul(other.im).neg());
            let im = self.re.mul(other.im).add(self.im.mul(other.re));
            Cdd { re, im }
        }

        pub fn norm_sqr(self) -> Dd {
            self.re.mul(self.re).add(self.im.mul(self.im))
        }
    }

    /// Apply (μ + ν b)/√2 to the running vector.
    pub fn apply_factor(mu: Complex64, nu: Complex64, v: &[Cdd]) -> Vec<Cdd> {
        let inv_sqrt2 = Dd::from_f64(std::f64::consts::FRAC_1_SQRT_2);
        let mu_dd = Cdd::from_c64(mu);
        let nu_dd = Cdd::from_c64(nu);
        let dim = v.len();
        (0..dim)
            .map(|n| {
                let mut out = mu_dd.mul(v[n]);
                if n + 1 < dim {
                    let root = Cdd::from_c64(Complex64::new(((n + 1) as f64).sqrt(), 0.0));
                    out = out.add(nu_dd.mul(root).mul(v[n + 1]));
                }
                Cdd {
                    re: out.re.mul(inv_sqrt2),
                    im: out.im.mul(inv_sqrt2),
                }
            })
            .collect()
    }

    pub fn norm_sqr(v: &[Cdd]) -> Dd {
        v.iter()
            .fold(Dd::from_f64(0.0), |acc, z| acc.add(z.norm_sqr()))
    }

    pub fn rounded(v: &[Cdd]) -> Vec<Complex64> {
        v.iter().map(|z| z.to_c64()).collect()
    }

}

fn step_operator(step: &FactorStep, dim: usize) -> Result<MatrixOperator> {
    let inv_sqrt2 = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    annihilation_op(dim)?
        .scaled(step.nu)
        .add(&MatrixOperator::identity(dim).scaled(step.mu))
        .map(|op| op.scaled(inv_sqrt2))
}

/// Closed-form success probability ∏ᵢ (|νᵢ|²⟨b†b⟩ᵢ + |μᵢ|²)/2 with ⟨b†b⟩ᵢ
/// taken on the normalized state before step i.
///
/// Exact when every intermediate has ⟨b⟩ = 0 (the cross term between the
/// identity and subtraction components then vanishes); otherwise an
/// approximation — the norm-based total from [`execute_plan`] is
/// authoritative.
pub fn predicted_success(psi: &PureState, plan: &TransformPlan) -> Result<f64> {
    psi.check_normalized()?;
    let number = number_op(psi.dim())?;
    let mut state = psi.clone();
    let mut product = 1.0;
    for step in &plan.steps {
        let n_exp = fock::expectation(&number, &state)?.re;
        product *= (step.nu.norm_sqr() * n_exp + step.mu.norm_sqr()) / 2.0;
        let op = step_operator(step, state.dim())?;
        let (raw, probability) = fock::apply(&op, &state)?;
        if probability < crate::channels::HERALDING_FLOOR {
            return Err(Error::HeraldingImpossible {
                probability,
                threshold: crate::channels::HERALDING_FLOOR,
            });
        }
        state = raw.normalize()?;
    }
    Ok(product)
}
