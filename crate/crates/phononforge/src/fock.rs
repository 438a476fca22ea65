//! Truncated Fock-space linear algebra.
//!
//! States are complex amplitude vectors over the number basis |0⟩..|dim−1⟩,
//! operators are dense complex matrices. Ladder operators follow
//! b|n⟩ = √n|n−1⟩, b†|n⟩ = √(n+1)|n+1⟩, and quadratures use
//! X_φ = (b e^{−iφ} + b† e^{iφ})/√2, so the vacuum variance is 1/2.
//!
//! Truncation hygiene: any operation that can raise excitation requires the
//! top two levels to hold less than [`TRUNCATION_GUARD`] probability, so a
//! single application of b† cannot silently push weight past the cutoff.

use ndarray::{Array1, Array2};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix, CVector, ONE, ZERO};

/// Normalization tolerance on |Σ|amp|² − 1|.
pub const NORM_TOLERANCE: f64 = 1e-12;
/// Maximum combined occupation of the top two levels before an
/// excitation-raising operation is refused.
pub const TRUNCATION_GUARD: f64 = 1e-10;
/// |⟨b⟩| below this is treated as a degenerate (angle-free) mean.
pub const MEAN_DEGENERACY_TOLERANCE: f64 = 1e-12;

/// Pure state on a truncated Fock space: amplitudes over |0⟩..|dim−1⟩.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    amps: CVector,
}

impl PureState {
    pub fn new(amps: Vec<Complex64>) -> Result<Self> {
        if amps.is_empty() {
            return Err(Error::InvalidDimension(
                "state dimension must be >= 1".into(),
            ));
        }
        if amps.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidParameter(
                "state amplitudes must be finite".into(),
            ));
        }
        Ok(Self {
            amps: Array1::from(amps),
        })
    }

    /// Number basis state |n⟩ embedded in `dim` levels.
    pub fn fock(dim: usize, n: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidDimension(
                "state dimension must be >= 1".into(),
            ));
        }
        if n >= dim {
            return Err(Error::InvalidParameter(format!(
                "fock level {n} does not fit in dimension {dim}"
            )));
        }
        let mut amps = Array1::from_elem(dim, ZERO);
        amps[n] = ONE;
        Ok(Self { amps })
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amps(&self) -> &CVector {
        &self.amps
    }

    pub fn amp(&self, n: usize) -> Complex64 {
        self.amps[n]
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn is_normalized(&self) -> bool {
        (self.norm_sqr() - 1.0).abs() < NORM_TOLERANCE
    }

    pub fn check_normalized(&self) -> Result<()> {
        let deviation = (self.norm_sqr() - 1.0).abs();
        if deviation < NORM_TOLERANCE {
            Ok(())
        } else {
            Err(Error::NotNormalized { deviation })
        }
    }

    /// Normalized copy. Fails on a (numerically) zero vector.
    pub fn normalize(&self) -> Result<Self> {
        let n2 = self.norm_sqr();
        if n2 <= 0.0 || !n2.is_finite() {
            return Err(Error::InvalidParameter(
                "cannot normalize a zero state".into(),
            ));
        }
        let inv = 1.0 / n2.sqrt();
        Ok(Self {
            amps: self.amps.mapv(|z| z * inv),
        })
    }

    /// Copy padded with zeros (or truncated) to `dim` levels.
    /// Truncation is only allowed when the dropped amplitudes are all zero.
    pub fn resized(&self, dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidDimension(
                "state dimension must be >= 1".into(),
            ));
        }
        let mut amps = Array1::from_elem(dim, ZERO);
        for n in 0..self.dim().min(dim) {
            amps[n] = self.amps[n];
        }
        if self.dim() > dim {
            let dropped: f64 = (dim..self.dim()).map(|n| self.amps[n].norm_sqr()).sum();
            if dropped > 0.0 {
                return Err(Error::Truncation {
                    leakage: dropped,
                    tolerance: 0.0,
                    required_dim: self.top_occupied_level().map_or(dim, |t| t + 1),
                });
            }
        }
        Ok(Self { amps })
    }

    /// Highest level with |amplitude| above 1e−12, if any.
    pub fn top_occupied_level(&self) -> Option<usize> {
        (0..self.dim()).rev().find(|&n| self.amps[n].norm() > 1e-12)
    }

    pub(crate) fn from_vector(amps: CVector) -> Self {
        Self { amps }
    }
}

/// Dense operator between truncated Fock spaces (dim_out × dim_in).
#[derive(Debug, Clone, PartialEq)]
pub struct MatrixOperator {
    entries: CMatrix,
}

impl MatrixOperator {
    pub fn new(entries: CMatrix) -> Self {
        Self { entries }
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            entries: linalg::identity(dim),
        }
    }

    pub fn dim_in(&self) -> usize {
        self.entries.ncols()
    }

    pub fn dim_out(&self) -> usize {
        self.entries.nrows()
    }

    pub fn entries(&self) -> &CMatrix {
        &self.entries
    }

    pub fn entry(&self, row: usize, col: usize) -> Complex64 {
        self.entries[[row, col]]
    }

    pub fn dagger(&self) -> Self {
        Self {
            entries: linalg::dagger(&self.entries),
        }
    }

    /// self · other (apply `other` first).
    pub fn compose(&self, other: &Self) -> Result<Self> {
        if self.dim_in() != other.dim_out() {
            return Err(Error::DimensionMismatch(format!(
                "cannot compose {}x{} with {}x{}",
                self.dim_out(),
                self.dim_in(),
                other.dim_out(),
                other.dim_in()
            )));
        }
        Ok(Self {
            entries: self.entries.dot(&other.entries),
        })
    }

    pub fn scaled(&self, factor: Complex64) -> Self {
        Self {
            entries: self.entries.mapv(|z| z * factor),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.entries.dim() != other.entries.dim() {
            return Err(Error::DimensionMismatch("operator shapes differ".into()));
        }
        Ok(Self {
            entries: &self.entries + &other.entries,
        })
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        linalg::max_abs_diff(&self.entries, &other.entries)
    }
}

/// Annihilation operator b with entries[n−1][n] = √n.
pub fn annihilation_op(dim: usize) -> Result<MatrixOperator> {
    if dim == 0 {
        return Err(Error::InvalidDimension(
            "operator dimension must be >= 1".into(),
        ));
    }
    let mut m = Array2::from_elem((dim, dim), ZERO);
    for n in 1..dim {
        m[[n - 1, n]] = Complex64::new((n as f64).sqrt(), 0.0);
    }
    Ok(MatrixOperator::new(m))
}

/// Creation operator b†, the conjugate transpose of b.
pub fn creation_op(dim: usize) -> Result<MatrixOperator> {
    if dim < 2 {
        return Err(Error::InvalidDimension(
            "creation operator needs dimension >= 2".into(),
        ));
    }
    Ok(annihilation_op(dim)?.dagger())
}

/// Number operator b†b (diagonal 0..dim−1).
pub fn number_op(dim: usize) -> Result<MatrixOperator> {
    if dim == 0 {
        return Err(Error::InvalidDimension(
            "operator dimension must be >= 1".into(),
        ));
    }
    let mut m = Array2::from_elem((dim, dim), ZERO);
    for n in 0..dim {
        m[[n, n]] = Complex64::new(n as f64, 0.0);
    }
    Ok(MatrixOperator::new(m))
}

/// Quadrature X_φ = (b e^{−iφ} + b† e^{iφ})/√2, Hermitian by construction.
pub fn quadrature_op(dim: usize, phi: f64) -> Result<MatrixOperator> {
    if dim < 2 {
        return Err(Error::InvalidDimension(
            "quadrature operator needs dimension >= 2".into(),
        ));
    }
    let inv_sqrt2 = std::f64::consts::FRAC_1_SQRT_2;
    let upper = Complex64::from_polar(inv_sqrt2, -phi);
    let mut m = Array2::from_elem((dim, dim), ZERO);
    for n in 1..dim {
        let root = (n as f64).sqrt();
        m[[n - 1, n]] = upper * root;
        m[[n, n - 1]] = upper.conj() * root;
    }
    Ok(MatrixOperator::new(m))
}

/// ⟨b⟩ = Σₙ conj(ψₙ) ψₙ₊₁ √(n+1), evaluated in the truncation.
pub fn mean_amplitude(state: &PureState) -> Result<Complex64> {
    state.check_normalized()?;
    let mut mean = ZERO;
    for n in 0..state.dim().saturating_sub(1) {
        mean += state.amp(n).conj() * state.amp(n + 1) * ((n + 1) as f64).sqrt();
    }
    Ok(mean)
}

/// Angle of the state's mean amplitude, with a degeneracy flag.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeanAngle {
    /// arg⟨b⟩, conventionally 0 when degenerate.
    pub angle: f64,
    /// Set when |⟨b⟩| < [`MEAN_DEGENERACY_TOLERANCE`].
    pub degenerate: bool,
}

pub fn mean_angle(state: &PureState) -> Result<MeanAngle> {
    let mean = mean_amplitude(state)?;
    if mean.norm() < MEAN_DEGENERACY_TOLERANCE {
        Ok(MeanAngle {
            angle: 0.0,
            degenerate: true,
        })
    } else {
        Ok(MeanAngle {
            angle: mean.arg(),
            degenerate: false,
        })
    }
}

/// Displaced squeezed test-state recipe D(α) S(z) |0⟩.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianSpec {
    /// Phase-space displacement α.
    pub displacement: Complex64,
    /// Squeezing magnitude |z| ≥ 0.
    pub squeeze_magnitude: f64,
    /// Squeezing angle arg z in radians.
    pub squeeze_angle: f64,
}

impl GaussianSpec {
    pub fn coherent(displacement: Complex64) -> Self {
        Self {
            displacement,
            squeeze_magnitude: 0.0,
            squeeze_angle: 0.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !self.displacement.re.is_finite()
            || !self.displacement.im.is_finite()
            || !self.squeeze_magnitude.is_finite()
            || !self.squeeze_angle.is_finite()
        {
            return Err(Error::InvalidParameter(
                "gaussian spec fields must be finite".into(),
            ));
        }
        if self.squeeze_magnitude < 0.0 {
            return Err(Error::InvalidParameter(
                "squeeze magnitude must be >= 0".into(),
            ));
        }
        Ok(())
    }
}

/// Displacement operator D(α) = exp(α b† − α* b) on the truncated space.
pub fn displacement_op(dim: usize, alpha: Complex64) -> Result<MatrixOperator> {
    if dim == 0 {
        return Err(Error::InvalidDimension(
            "operator dimension must be >= 1".into(),
        ));
    }
    let mut gen = Array2::from_elem((dim, dim), ZERO);
    for n in 1..dim {
        let root = (n as f64).sqrt();
        gen[[n, n - 1]] = alpha * root;
        gen[[n - 1, n]] = -alpha.conj() * root;
    }
    Ok(MatrixOperator::new(linalg::expm(&gen)))
}

/// Squeezing operator S(z) = exp((z* b² − z b†²)/2).
pub fn squeeze_op(dim: usize, z: Complex64) -> Result<MatrixOperator> {
    if dim == 0 {
        return Err(Error::InvalidDimension(
            "operator dimension must be >= 1".into(),
        ));
    }
    let b = annihilation_op(dim)?;
    let b2 = b.compose(&b)?;
    let half = Complex64::new(0.5, 0.0);
    let gen = &b2.entries * (z.conj() * half) - linalg::dagger(&b2.entries) * (z * half);
    Ok(MatrixOperator::new(linalg::expm(&gen)))
}

/// Normalized truncation of D(α) S(z) |0⟩.
///
/// Fails with a truncation error (naming a sufficient dimension) when the
/// generated state leaks into the top two levels.
pub fn gaussian_state(spec: &GaussianSpec, dim: usize) -> Result<PureState> {
    spec.validate()?;
    if dim == 0 {
        return Err(Error::InvalidDimension(
            "state dimension must be >= 1".into(),
        ));
    }
    let state = build_gaussian(spec, dim)?;
    let guard_levels = 2.min(dim);
    let leakage = top_occupation(&state, guard_levels);
    if leakage >= TRUNCATION_GUARD {
        return Err(Error::Truncation {
            leakage,
            tolerance: TRUNCATION_GUARD,
            required_dim: scan_required_dim(spec, dim),
        });
    }
    state.normalize()
}

fn build_gaussian(spec: &GaussianSpec, dim: usize) -> Result<PureState> {
    let z = Complex64::from_polar(spec.squeeze_magnitude, spec.squeeze_angle);
    let squeezed = if spec.squeeze_magnitude > 0.0 {
        let s = squeeze_op(dim, z)?;
        s.entries.column(0).to_owned()
    } else {
        PureState::fock(dim, 0)?.amps().clone()
    };
    let displaced = if spec.displacement != ZERO {
        let d = displacement_op(dim, spec.displacement)?;
        d.entries.dot(&squeezed)
    } else {
        squeezed
    };
    Ok(PureState::from_vector(displaced))
}

/// Smallest tested dimension at which the spec passes the leakage guard.
fn scan_required_dim(spec: &GaussianSpec, start_dim: usize) -> usize {
    let n_mean = spec.displacement.norm_sqr() + spec.squeeze_magnitude.sinh().powi(2);
    let guess = (n_mean + 10.0 * (n_mean + 1.0).sqrt() + 10.0).ceil() as usize;
    let mut dim = guess.max(start_dim + 2);
    while dim <= 1024 {
        if let Ok(state) = build_gaussian(spec, dim) {
            if top_occupation(&state, 2) < TRUNCATION_GUARD {
                return dim;
            }
        }
        dim = dim + (dim / 4).max(8);
    }
    dim
}

/// Apply an operator; returns the (unnormalized) image and its squared norm.
pub fn apply(op: &MatrixOperator, state: &PureState) -> Result<(PureState, f64)> {
    if op.dim_in() != state.dim() {
        return Err(Error::DimensionMismatch(format!(
            "operator expects dimension {}, state has {}",
            op.dim_in(),
            state.dim()
        )));
    }
    let image = PureState::from_vector(op.entries.dot(state.amps()));
    let norm_sqr = image.norm_sqr();
    Ok((image, norm_sqr))
}

/// ⟨s1|s2⟩.
pub fn overlap(s1: &PureState, s2: &PureState) -> Result<Complex64> {
    if s1.dim() != s2.dim() {
        return Err(Error::DimensionMismatch(format!(
            "overlap of dimensions {} and {}",
            s1.dim(),
            s2.dim()
        )));
    }
    Ok(s1
        .amps()
        .iter()
        .zip(s2.amps().iter())
        .map(|(a, b)| a.conj() * b)
        .sum())
}

/// ⟨ψ|Op|ψ⟩.
pub fn expectation(op: &MatrixOperator, state: &PureState) -> Result<Complex64> {
    if op.dim_in() != state.dim() || op.dim_out() != state.dim() {
        return Err(Error::DimensionMismatch(
            "expectation needs a square operator matching the state".into(),
        ));
    }
    let (image, _) = apply(op, state)?;
    overlap(state, &image)
}

/// Total probability held in the top `k` levels.
pub fn top_occupation(state: &PureState, k: usize) -> f64 {
    let dim = state.dim();
    let k = k.min(dim);
    (dim - k..dim).map(|n| state.amp(n).norm_sqr()).sum()
}

/// Truncation guard for excitation-raising operations: the top two levels
/// must be effectively empty before b† may act.
pub fn require_headroom(state: &PureState) -> Result<()> {
    let leakage = top_occupation(state, 2.min(state.dim()));
    if leakage < TRUNCATION_GUARD {
        Ok(())
    } else {
        Err(Error::Truncation {
            leakage,
            tolerance: TRUNCATION_GUARD,
            required_dim: state.dim() + 8,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, PI};

    fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
        (a - b).norm() < tol
    }

    #[test]
    fn annihilation_dim2_matrix() {
        let b = annihilation_op(2).unwrap();
        assert_eq!(b.entry(0, 0), ZERO);
        assert_eq!(b.entry(0, 1), ONE);
        assert_eq!(b.entry(1, 0), ZERO);
        assert_eq!(b.entry(1, 1), ZERO);
    }

    #[test]
    fn annihilation_dim3_sqrt2_entry() {
        let b = annihilation_op(3).unwrap();
        assert!((b.entry(1, 2).re - 2f64.sqrt()).abs() < 1e-15);
        assert_eq!(b.entry(1, 2).im, 0.0);
    }

    #[test]
    fn annihilation_on_fock5_matches_ladder_rule() {
        // Oracle: b|n⟩ = √n |n−1⟩ applied directly.
        let b = annihilation_op(16).unwrap();
        let five = PureState::fock(16, 5).unwrap();
        let (image, norm_sqr) = apply(&b, &five).unwrap();
        for n in 0..16 {
            let expected = if n == 4 {
                Complex64::new(5f64.sqrt(), 0.0)
            } else {
                ZERO
            };
            assert!(close(image.amp(n), expected, 1e-15));
        }
        assert!((norm_sqr - 5.0).abs() < 1e-12);
    }

    #[test]
    fn annihilation_dim_zero_rejected() {
        assert!(matches!(
            annihilation_op(0),
            Err(Error::InvalidDimension(_))
        ));
        assert!(matches!(creation_op(1), Err(Error::InvalidDimension(_))));
    }

    #[test]
    fn creation_is_dagger_of_annihilation() {
        let b = annihilation_op(9).unwrap();
        let bdag = creation_op(9).unwrap();
        assert!(b.dagger().max_abs_diff(&bdag) == 0.0);
    }

    #[test]
    fn quadrature_zero_phase_equals_symmetric_combination() {
        let dim = 8;
        let b = annihilation_op(dim).unwrap();
        let combo = b
            .add(&b.dagger())
            .unwrap()
            .scaled(Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0));
        let x0 = quadrature_op(dim, 0.0).unwrap();
        assert!(x0.max_abs_diff(&combo) < 1e-15);
    }

    #[test]
    fn quadrature_exactly_hermitian() {
        let x = quadrature_op(12, 1.234).unwrap();
        assert_eq!(x.dagger().max_abs_diff(&x), 0.0);
    }

    #[test]
    fn vacuum_quadrature_variance_is_half() {
        for &phi in &[0.0, 0.3, FRAC_PI_2, 2.0, -1.7] {
            let dim = 6;
            let x = quadrature_op(dim, phi).unwrap();
            let x2 = x.compose(&x).unwrap();
            let vac = PureState::fock(dim, 0).unwrap();
            let v = expectation(&x2, &vac).unwrap();
            assert!(close(v, Complex64::new(0.5, 0.0), 1e-14), "phi = {phi}");
        }
    }

    #[test]
    fn commutator_truncation_law() {
        let dim = 7;
        let b = annihilation_op(dim).unwrap();
        let bdag = creation_op(dim).unwrap();
        let comm = b.compose(&bdag).unwrap().entries() - bdag.compose(&b).unwrap().entries();
        for i in 0..dim {
            for j in 0..dim {
                let expected = if i == j && i < dim - 1 {
                    ONE
                } else if i == dim - 1 && j == dim - 1 {
                    Complex64::new(-((dim - 1) as f64), 0.0)
                } else {
                    ZERO
                };
                assert!(close(comm[[i, j]], expected, 1e-12), "entry ({i},{j})");
            }
        }
    }

    #[test]
    fn mean_amplitude_of_coherent_state_matches_displacement() {
        let spec = GaussianSpec::coherent(Complex64::new(2.0, 0.0));
        let state = gaussian_state(&spec, 32).unwrap();
        let mean = mean_amplitude(&state).unwrap();
        assert!(close(mean, Complex64::new(2.0, 0.0), 1e-6));
        let angle = mean_angle(&state).unwrap();
        assert!(!angle.degenerate);
        assert!(angle.angle.abs() < 1e-6);
    }

    #[test]
    fn mean_amplitude_of_fock_state_is_exactly_zero() {
        for n in 0..5 {
            let state = PureState::fock(8, n).unwrap();
            let mean = mean_amplitude(&state).unwrap();
            assert_eq!(mean, ZERO);
            let angle = mean_angle(&state).unwrap();
            assert!(angle.degenerate);
            assert_eq!(angle.angle, 0.0);
        }
    }

    #[test]
    fn mean_amplitude_two_level_arithmetic() {
        let inv = std::f64::consts::FRAC_1_SQRT_2;
        let state =
            PureState::new(vec![Complex64::new(inv, 0.0), Complex64::new(0.0, inv)]).unwrap();
        let mean = mean_amplitude(&state).unwrap();
        assert!(close(mean, Complex64::new(0.0, 0.5), 1e-15));
        let angle = mean_angle(&state).unwrap();
        assert!((angle.angle - FRAC_PI_2).abs() < 1e-15);
    }

    #[test]
    fn gaussian_identity_case_is_vacuum() {
        let spec = GaussianSpec::coherent(ZERO);
        let state = gaussian_state(&spec, 10).unwrap();
        assert!(close(state.amp(0), ONE, 1e-15));
        for n in 1..10 {
            assert!(state.amp(n).norm() < 1e-15);
        }
    }

    #[test]
    fn coherent_amplitudes_match_closed_form() {
        // Oracle: ⟨n|α⟩ = e^{−|α|²/2} αⁿ/√n!.
        let alpha = Complex64::new(1.5, 0.0);
        let state = gaussian_state(&GaussianSpec::coherent(alpha), 40).unwrap();
        let mut expected = (-(alpha.norm_sqr()) / 2.0).exp() * ONE;
        for n in 0..40 {
            assert!(close(state.amp(n), expected, 1e-8), "level {n}");
            expected *= alpha / ((n + 1) as f64).sqrt();
        }
    }

    #[test]
    fn squeezed_vacuum_quadrature_variance() {
        // Oracle: ⟨X₀²⟩ = e^{−2r}/2 for S(r)|0⟩ with real r.
        let spec = GaussianSpec {
            displacement: ZERO,
            squeeze_magnitude: 0.5,
            squeeze_angle: 0.0,
        };
        let dim = 40;
        let state = gaussian_state(&spec, dim).unwrap();
        let x0 = quadrature_op(dim, 0.0).unwrap();
        let x2 = x0.compose(&x0).unwrap();
        let v = expectation(&x2, &state).unwrap();
        assert!((v.re - (-1.0f64).exp() / 2.0).abs() < 1e-6);
        assert!(v.im.abs() < 1e-12);
    }

    #[test]
    fn gaussian_state_norm_after_truncation() {
        let spec = GaussianSpec {
            displacement: Complex64::new(1.2, -0.7),
            squeeze_magnitude: 0.4,
            squeeze_angle: 1.1,
        };
        let state = gaussian_state(&spec, 40).unwrap();
        assert!((state.norm_sqr() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn gaussian_leakage_decreases_with_dimension() {
        // Mean occupation 2: the top-level tail is well above roundoff at
        // dim 20 yet already inside the guard, so the comparison is meaningful.
        let spec = GaussianSpec::coherent(Complex64::new(std::f64::consts::SQRT_2, 0.0));
        let dim = 20;
        let state = gaussian_state(&spec, dim).unwrap();
        let bigger = gaussian_state(&spec, dim + 8).unwrap();
        let leak = top_occupation(&state, 2);
        let leak_bigger = top_occupation(&bigger, 2);
        assert!(leak > 1e-14, "leakage should be resolvable, got {leak:.3e}");
        assert!(leak_bigger < leak);
    }

    #[test]
    fn gaussian_state_truncation_error_names_sufficient_dim() {
        let spec = GaussianSpec::coherent(Complex64::new(3.0, 0.0));
        match gaussian_state(&spec, 10) {
            Err(Error::Truncation { required_dim, .. }) => {
                let retry = gaussian_state(&spec, required_dim).unwrap();
                assert!(retry.is_normalized());
            }
            other => panic!("expected truncation error, got {other:?}"),
        }
    }

    #[test]
    fn apply_annihilation_to_vacuum_gives_zero_vector() {
        let b = annihilation_op(4).unwrap();
        let vac = PureState::fock(4, 0).unwrap();
        let (image, norm_sqr) = apply(&b, &vac).unwrap();
        assert_eq!(norm_sqr, 0.0);
        assert!(image.amps().iter().all(|z| *z == ZERO));
    }

    #[test]
    fn overlap_orthonormal_basis() {
        let two = PureState::fock(6, 2).unwrap();
        let one = PureState::fock(6, 1).unwrap();
        assert_eq!(overlap(&two, &two).unwrap(), ONE);
        assert_eq!(overlap(&one, &two).unwrap(), ZERO);
    }

    #[test]
    fn number_expectation_of_coherent_state() {
        // Oracle: ⟨b†b⟩ = |α|² = 1.44 for α = 1.2.
        let state = gaussian_state(&GaussianSpec::coherent(Complex64::new(1.2, 0.0)), 32).unwrap();
        let n = number_op(32).unwrap();
        let v = expectation(&n, &state).unwrap();
        assert!((v.re - 1.44).abs() < 1e-8);
        assert!(v.im.abs() < 1e-14);
    }

    #[test]
    fn dimension_mismatch_reported() {
        let b = annihilation_op(4).unwrap();
        let s = PureState::fock(5, 0).unwrap();
        assert!(matches!(apply(&b, &s), Err(Error::DimensionMismatch(_))));
        let t = PureState::fock(4, 0).unwrap();
        assert!(matches!(overlap(&s, &t), Err(Error::DimensionMismatch(_))));
    }

    #[test]
    fn headroom_guard_rejects_top_occupation() {
        let top = PureState::fock(6, 5).unwrap();
        assert!(matches!(
            require_headroom(&top),
            Err(Error::Truncation { .. })
        ));
        let low = PureState::fock(6, 1).unwrap();
        assert!(require_headroom(&low).is_ok());
    }

    #[test]
    fn displacement_covariance_of_mean() {
        // D(α)|0⟩ has ⟨b⟩ = α for any phase of α.
        let alpha = Complex64::from_polar(0.9, PI / 3.0);
        let d = displacement_op(32, alpha).unwrap();
        let vac = PureState::fock(32, 0).unwrap();
        let (coh, _) = apply(&d, &vac).unwrap();
        let coh = coh.normalize().unwrap();
        let mean = mean_amplitude(&coh).unwrap();
        assert!(close(mean, alpha, 1e-10));
        let angle = mean_angle(&coh).unwrap();
        assert!((angle.angle - PI / 3.0).abs() < 1e-10);
    }
}
