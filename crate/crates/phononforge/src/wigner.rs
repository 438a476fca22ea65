//! Wigner functions on rectangular phase-space grids.
//!
//! Quadrature units follow the rest of the crate: vacuum variance 1/2 and
//! α = (x + ip)/√2, normalized so ∫∫ W dx dp = 1 with the vacuum peaking at
//! 1/π. Values come from the displaced-parity form
//!
//! W(x, p) = (1/π) ⟨ψ| D(α) Π D†(α) |ψ⟩,
//!
//! evaluated with truncated displacement matrices. D(−α) is split into a
//! position factor D(−x/√2) and a momentum factor obtained from a position
//! factor by diag(iⁿ) conjugation; the split's global phase cancels under
//! the parity sandwich. Grid evaluation caches one displacement matrix per
//! distinct axis tick magnitude and reuses D(−c) = D(c)†.
//!
//! Truncation caveat: the displaced state must fit the basis, so the state
//! should be embedded in a dimension comfortably above
//! (max|α| + support radius)² before evaluating wide grids.

use ndarray::Array1;
use num_complex::Complex64;
use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::fock::PureState;
use crate::linalg::{self, CMatrix, CVector, ZERO};

/// Largest imaginary residue tolerated in a parity expectation.
pub const IMAG_RESIDUE_LIMIT: f64 = 1e-10;

/// Rectangular grid request: bounds and step in quadrature units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub x_min: f64,
    pub x_max: f64,
    pub p_min: f64,
    pub p_max: f64,
    pub step: f64,
}

impl GridSpec {
    /// Symmetric square grid [−bound, bound]².
    pub fn square(bound: f64, step: f64) -> Self {
        Self {
            x_min: -bound,
            x_max: bound,
            p_min: -bound,
            p_max: bound,
            step,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let fields = [self.x_min, self.x_max, self.p_min, self.p_max, self.step];
        if fields.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter(
                "grid bounds and step must be finite".into(),
            ));
        }
        if self.step <= 0.0 {
            return Err(Error::InvalidParameter("grid step must be > 0".into()));
        }
        if self.x_min > self.x_max || self.p_min > self.p_max {
            return Err(Error::InvalidParameter(
                "grid bounds must be ordered".into(),
            ));
        }
        Ok(())
    }
}

/// Evaluated Wigner values on a grid, row-major with rows indexed by p.
///
/// Axis samples are the integer multiples of `step` inside the bounds, so
/// the origin is always a sample point when the bounds straddle zero.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseSpaceGrid {
    pub x_min: f64,
    pub x_max: f64,
    pub p_min: f64,
    pub p_max: f64,
    pub step: f64,
    /// values[i][j] = W(xs[j], ps[i]).
    pub values: Vec<Vec<f64>>,
}

impl PhaseSpaceGrid {
    pub fn xs(&self) -> Vec<f64> {
        axis_ticks(self.x_min, self.x_max, self.step)
    }

    pub fn ps(&self) -> Vec<f64> {
        axis_ticks(self.p_min, self.p_max, self.step)
    }
}

/// Integer-multiple-of-step samples inside [min, max].
fn axis_ticks(min: f64, max: f64, step: f64) -> Vec<f64> {
    let k_min = (min / step - 1e-9).ceil() as i64;
    let k_max = (max / step + 1e-9).floor() as i64;
    (k_min..=k_max).map(|k| k as f64 * step).collect()
}

/// Cached displaced-parity evaluator for one basis dimension.
pub struct WignerEvaluator {
    dim: usize,
    parity: Vec<f64>,
    /// i^n and (−i)^n diagonals.
    quarter_turn: Vec<Complex64>,
    quarter_turn_conj: Vec<Complex64>,
    /// |c| → (D(|c|), D(−|c|)) displacement matrices.
    cache: HashMap<u64, (CMatrix, CMatrix)>,
}

impl WignerEvaluator {
    pub fn new(dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidDimension(
                "evaluator dimension must be >= 1".into(),
            ));
        }
        let parity = (0..dim)
            .map(|n| if n % 2 == 0 { 1.0 } else { -1.0 })
            .collect();
        let i = Complex64::new(0.0, 1.0);
        let quarter_turn: Vec<Complex64> = (0..dim).map(|n| i.powu(n as u32)).collect();
        let quarter_turn_conj = quarter_turn.iter().map(|z| z.conj()).collect();
        Ok(Self {
            dim,
            parity,
            quarter_turn,
            quarter_turn_conj,
            cache: HashMap::new(),
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// D(c) for signed real displacement c, from the per-magnitude cache.
    fn displacement(&mut self, c: f64) -> &CMatrix {
        let mag = c.abs();
        let entry = self.cache.entry(mag.to_bits()).or_insert_with(|| {
            let mut gen = ndarray::Array2::from_elem((self.dim, self.dim), ZERO);
            for n in 1..self.dim {
                let root = (n as f64).sqrt();
                gen[[n, n - 1]] = Complex64::new(mag * root, 0.0);
                gen[[n - 1, n]] = Complex64::new(-mag * root, 0.0);
            }
            let d = linalg::expm(&gen);
            let d_dag = linalg::dagger(&d);
            (d, d_dag)
        });
        if c >= 0.0 {
            &entry.0
        } else {
            &entry.1
        }
    }

    /// Momentum-row factor D(−ip/√2)·ψ = R D(−p/√2) R† ψ with R = diag(iⁿ).
    fn row_vector(&mut self, state: &PureState, p: f64) -> CVector {
        let rotated: CVector = Array1::from_iter(
            state
                .amps()
                .iter()
                .zip(&self.quarter_turn_conj)
                .map(|(a, r)| a * r),
        );
        let displaced = self
            .displacement(-p * std::f64::consts::FRAC_1_SQRT_2)
            .dot(&rotated);
        Array1::from_iter(displaced.iter().zip(&self.quarter_turn).map(|(a, r)| a * r))
    }

    fn parity_expectation(&self, chi: &CVector) -> Result<f64> {
        let mut acc = ZERO;
        for (amp, parity) in chi.iter().zip(&self.parity) {
            acc += amp.conj() * amp * Complex64::new(*parity, 0.0);
        }
        if acc.im.abs() > IMAG_RESIDUE_LIMIT {
            return Err(Error::NumericalIntegrity(format!(
                "parity expectation has imaginary residue {:.3e}",
                acc.im
            )));
        }
        Ok(acc.re)
    }

    /// W(x, p) for a normalized state of the evaluator's dimension.
    pub fn point(&mut self, state: &PureState, x: f64, p: f64) -> Result<f64> {
        self.check_state(state)?;
        let row = self.row_vector(state, p);
        self.point_in_row(&row, x)
    }

    fn point_in_row(&mut self, row: &CVector, x: f64) -> Result<f64> {
        let chi = self
            .displacement(-x * std::f64::consts::FRAC_1_SQRT_2)
            .dot(row);
        Ok(self.parity_expectation(&chi)? / std::f64::consts::PI)
    }

    /// Evaluate the whole grid; values are identical to per-point calls.
    pub fn grid(&mut self, state: &PureState, spec: &GridSpec) -> Result<PhaseSpaceGrid> {
        self.check_state(state)?;
        spec.validate()?;
        let xs = axis_ticks(spec.x_min, spec.x_max, spec.step);
        let ps = axis_ticks(spec.p_min, spec.p_max, spec.step);
        let mut values = Vec::with_capacity(ps.len());
        for &p in &ps {
            let row_vec = self.row_vector(state, p);
            let mut row = Vec::with_capacity(xs.len());
            for &x in &xs {
                row.push(self.point_in_row(&row_vec, x)?);
            }
            values.push(row);
        }
        Ok(PhaseSpaceGrid {
            x_min: spec.x_min,
            x_max: spec.x_max,
            p_min: spec.p_min,
            p_max: spec.p_max,
            step: spec.step,
            values,
        })
    }

    fn check_state(&self, state: &PureState) -> Result<()> {
        if state.dim() != self.dim {
            return Err(Error::DimensionMismatch(format!(
                "state dimension {} does not match evaluator dimension {}",
                state.dim(),
                self.dim
            )));
        }
        state.check_normalized()
    }
}

/// Single-point evaluation (transient evaluator).
pub fn wigner_point(state: &PureState, x: f64, p: f64) -> Result<f64> {
    WignerEvaluator::new(state.dim())?.point(state, x, p)
}

/// Grid evaluation with cached displacement matrices per axis tick.
pub fn wigner_grid(state: &PureState, spec: &GridSpec) -> Result<PhaseSpaceGrid> {
    WignerEvaluator::new(state.dim())?.grid(state, spec)
}

/// Trapezoidal estimate of ∫∫ W dx dp over the grid.
///
/// Endpoint samples on each axis carry half weight, so a half-plane grid
/// whose edge sits on a symmetry axis integrates to the exact half.
pub fn grid_integral(grid: &PhaseSpaceGrid) -> f64 {
    let nx = grid.xs().len();
    let np = grid.ps().len();
    let weight = |idx: usize, len: usize| -> f64 {
        if len > 1 && (idx == 0 || idx == len - 1) {
            0.5
        } else {
            1.0
        }
    };
    let mut total = 0.0;
    for (i, row) in grid.values.iter().enumerate() {
        let wp = weight(i, np);
        for (j, value) in row.iter().enumerate() {
            total += wp * weight(j, nx) * value;
        }
    }
    total * grid.step * grid.step
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channels;
    use crate::fock::{gaussian_state, GaussianSpec};
    use std::f64::consts::PI;

    const INV_PI: f64 = 1.0 / PI;

    #[test]
    fn vacuum_at_origin_is_inverse_pi() {
        let vac = PureState::fock(16, 0).unwrap();
        let w = wigner_point(&vac, 0.0, 0.0).unwrap();
        assert!((w - INV_PI).abs() < 1e-14);
    }

    #[test]
    fn one_phonon_at_origin_is_negative_inverse_pi() {
        let one = PureState::fock(16, 1).unwrap();
        let w = wigner_point(&one, 0.0, 0.0).unwrap();
        assert!((w + INV_PI).abs() < 1e-14);
    }

    #[test]
    fn fock_parity_at_origin() {
        for n in 0..=6usize {
            let state = PureState::fock(32, n).unwrap();
            let w = wigner_point(&state, 0.0, 0.0).unwrap();
            let expected = if n % 2 == 0 { INV_PI } else { -INV_PI };
            assert!((w - expected).abs() < 1e-9, "n = {n}");
        }
    }

    #[test]
    fn coherent_peak_translates() {
        let state = gaussian_state(&GaussianSpec::coherent(Complex64::new(1.0, 0.0)), 40).unwrap();
        let w_peak = wigner_point(&state, std::f64::consts::SQRT_2, 0.0).unwrap();
        assert!((w_peak - INV_PI).abs() < 1e-8);
        // Away from the peak the Gaussian has dropped.
        let w_off = wigner_point(&state, -std::f64::consts::SQRT_2, 0.0).unwrap();
        assert!(w_off < w_peak / 10.0);
    }

    #[test]
    fn axis_ticks_hit_origin_and_bounds() {
        let xs = axis_ticks(-6.0, 6.0, 0.05);
        assert_eq!(xs.len(), 241);
        assert_eq!(xs[120], 0.0);
        assert!((xs[0] + 6.0).abs() < 1e-12);
        assert!((xs[240] - 6.0).abs() < 1e-12);
        let half = axis_ticks(0.0, 6.0, 0.05);
        assert_eq!(half[0], 0.0);
        assert_eq!(half.len(), 121);
    }

    #[test]
    fn vacuum_grid_normalizes() {
        let vac = PureState::fock(48, 0).unwrap();
        let grid = wigner_grid(&vac, &GridSpec::square(6.0, 0.05)).unwrap();
        assert!((grid_integral(&grid) - 1.0).abs() < 1e-6);
    }

    #[test]
    fn vacuum_half_plane_integrates_to_half() {
        let vac = PureState::fock(48, 0).unwrap();
        let spec = GridSpec {
            x_min: 0.0,
            x_max: 6.0,
            p_min: -6.0,
            p_max: 6.0,
            step: 0.05,
        };
        let grid = wigner_grid(&vac, &spec).unwrap();
        assert!((grid_integral(&grid) - 0.5).abs() < 1e-6);
    }

    #[test]
    fn zero_values_grid_integrates_to_zero() {
        let grid = PhaseSpaceGrid {
            x_min: -1.0,
            x_max: 1.0,
            p_min: -1.0,
            p_max: 1.0,
            step: 0.5,
            values: vec![vec![0.0; 5]; 5],
        };
        assert_eq!(grid_integral(&grid), 0.0);
    }

    #[test]
    fn one_phonon_grid_symmetric_minimum_at_origin() {
        let one = PureState::fock(40, 1).unwrap();
        let grid = wigner_grid(&one, &GridSpec::square(3.0, 0.25)).unwrap();
        let ps = grid.ps();
        let xs = grid.xs();
        let origin_i = ps.iter().position(|&p| p == 0.0).unwrap();
        let origin_j = xs.iter().position(|&x| x == 0.0).unwrap();
        let min = grid
            .values
            .iter()
            .flatten()
            .fold(f64::INFINITY, |m, &v| m.min(v));
        assert!((grid.values[origin_i][origin_j] + INV_PI).abs() < 1e-9);
        assert!((min + INV_PI).abs() < 1e-9);
        // Radial symmetry: same value at (x, p) and rotated/reflected spots.
        let w_a = grid.values[origin_i][origin_j + 4];
        let w_b = grid.values[origin_i + 4][origin_j];
        let w_c = grid.values[origin_i][origin_j - 4];
        assert!((w_a - w_b).abs() < 1e-9);
        assert!((w_a - w_c).abs() < 1e-9);
    }

    #[test]
    fn orthogonalized_displaced_squeezed_state_goes_negative() {
        let spec = GaussianSpec {
            displacement: Complex64::from_polar(1.5, PI / 4.0),
            squeeze_magnitude: 0.5,
            squeeze_angle: 0.0,
        };
        let state = gaussian_state(&spec, 64).unwrap();
        let outcome = channels::orthogonalize(&state, 0.1).unwrap();
        let grid = wigner_grid(&outcome.state, &GridSpec::square(5.0, 0.1)).unwrap();
        let min = grid
            .values
            .iter()
            .flatten()
            .fold(f64::INFINITY, |m, &v| m.min(v));
        assert!(min < 0.0, "expected negativity, minimum {min}");
    }

    #[test]
    fn displacement_covariance() {
        let base = GaussianSpec {
            displacement: ZERO,
            squeeze_magnitude: 0.3,
            squeeze_angle: 0.7,
        };
        let alpha = Complex64::new(0.7, 0.4);
        let displaced = GaussianSpec {
            displacement: alpha,
            ..base
        };
        let dim = 64;
        let state = gaussian_state(&base, dim).unwrap();
        let moved = gaussian_state(&displaced, dim).unwrap();
        let dx = std::f64::consts::SQRT_2 * alpha.re;
        let dp = std::f64::consts::SQRT_2 * alpha.im;
        for &(x, p) in &[(0.0, 0.0), (0.8, -0.4), (-0.5, 1.1), (1.3, 0.9)] {
            let w_moved = wigner_point(&moved, x + dx, p + dp).unwrap();
            let w_base = wigner_point(&state, x, p).unwrap();
            assert!((w_moved - w_base).abs() < 1e-8, "at ({x}, {p})");
        }
    }

    #[test]
    fn grid_values_equal_point_values_bitwise() {
        let state = gaussian_state(&GaussianSpec::coherent(Complex64::new(0.5, -0.3)), 32).unwrap();
        let spec = GridSpec::square(1.0, 0.5);
        let grid = wigner_grid(&state, &spec).unwrap();
        let xs = grid.xs();
        let ps = grid.ps();
        for (i, &p) in ps.iter().enumerate() {
            for (j, &x) in xs.iter().enumerate() {
                let single = wigner_point(&state, x, p).unwrap();
                assert_eq!(grid.values[i][j], single, "at ({x}, {p})");
            }
        }
    }

    #[test]
    fn rejects_unnormalized_and_mismatched_states() {
        let mut amps = vec![ZERO; 8];
        amps[0] = Complex64::new(0.5, 0.0);
        let bad = PureState::new(amps).unwrap();
        assert!(matches!(
            wigner_point(&bad, 0.0, 0.0),
            Err(Error::NotNormalized { .. })
        ));

        let mut eval = WignerEvaluator::new(8).unwrap();
        let other = PureState::fock(9, 0).unwrap();
        assert!(matches!(
            eval.point(&other, 0.0, 0.0),
            Err(Error::DimensionMismatch(_))
        ));
    }
}
