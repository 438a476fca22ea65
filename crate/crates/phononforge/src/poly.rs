//! Complex polynomial utilities: evaluation, expansion from factors, and
//! root finding by simultaneous (Durand–Kerner) iteration with a
//! companion-matrix QR fallback.
//!
//! Coefficients are stored low-to-high: p(x) = c[0] + c[1]x + … + c[n]xⁿ.

use ndarray::Array2;
use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::linalg::{CMatrix, ONE, ZERO};

pub const ROOT_TOLERANCE: f64 = 1e-13;
pub const MAX_ITERATIONS: usize = 500;

/// Horner evaluation.
pub fn eval(coeffs: &[Complex64], x: Complex64) -> Complex64 {
    coeffs.iter().rev().fold(ZERO, |acc, c| acc * x + c)
}

/// Derivative coefficients.
pub fn derivative(coeffs: &[Complex64]) -> Vec<Complex64> {
    coeffs
        .iter()
        .enumerate()
        .skip(1)
        .map(|(k, c)| c * (k as f64))
        .collect()
}

/// Monic polynomial with the given roots, low-to-high coefficients.
pub fn expand_roots(roots: &[Complex64]) -> Vec<Complex64> {
    let mut coeffs = vec![ONE];
    for root in roots {
        coeffs = convolve(&coeffs, &[-root, ONE]);
    }
    coeffs
}

/// Product of two coefficient lists.
pub fn convolve(a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    let mut out = vec![ZERO; a.len() + b.len() - 1];
    for (i, ai) in a.iter().enumerate() {
        for (j, bj) in b.iter().enumerate() {
            out[i + j] += ai * bj;
        }
    }
    out
}

/// All complex roots of the polynomial (leading coefficient must be
/// resolvably nonzero). Durand–Kerner from seeded starting points; falls
/// back to companion-matrix eigenvalues if the iteration stalls.
pub fn find_roots(coeffs: &[Complex64], seed: u64) -> Result<Vec<Complex64>> {
    if coeffs.is_empty() {
        return Err(Error::InvalidParameter("empty coefficient list".into()));
    }
    let lead = coeffs[coeffs.len() - 1];
    if lead.norm() == 0.0 {
        return Err(Error::InvalidParameter(
            "leading coefficient is zero".into(),
        ));
    }
    let degree = coeffs.len() - 1;
    if degree == 0 {
        return Ok(Vec::new());
    }

    let monic: Vec<Complex64> = coeffs.iter().map(|c| c / lead).collect();
    if degree == 1 {
        return Ok(vec![-monic[0]]);
    }

    match durand_kerner(&monic, seed) {
        Ok(roots) => Ok(roots),
        Err(_) => {
            let rough = companion_eigenvalues(&monic)?;
            Ok(rough
                .into_iter()
                .map(|z| newton_polish(&monic, z))
                .collect())
        }
    }
}

fn durand_kerner(monic: &[Complex64], seed: u64) -> Result<Vec<Complex64>> {
    let degree = monic.len() - 1;
    let radius = 1.0 + monic[..degree].iter().fold(0.0f64, |m, c| m.max(c.norm()));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut roots: Vec<Complex64> = (0..degree)
        .map(|k| {
            let jitter: f64 = rng.random_range(-0.05..0.05);
            let angle = 2.0 * std::f64::consts::PI * (k as f64) / (degree as f64) + 0.4 + jitter;
            Complex64::from_polar(radius, angle)
        })
        .collect();

    let mut last_delta = f64::INFINITY;
    for _ in 0..MAX_ITERATIONS {
        let mut max_delta = 0.0f64;
        for k in 0..degree {
            let zk = roots[k];
            let mut denom = ONE;
            for (j, zj) in roots.iter().enumerate() {
                if j != k {
                    denom *= zk - zj;
                }
            }
            if denom.norm() == 0.0 {
                // Coincident iterates: nudge and keep going.
                roots[k] += Complex64::new(1e-8, 1e-8);
                max_delta = f64::INFINITY;
                continue;
            }
            let step = eval(monic, zk) / denom;
            roots[k] = zk - step;
            max_delta = max_delta.max(step.norm() / zk.norm().max(1.0));
        }
        last_delta = max_delta;
        if max_delta < ROOT_TOLERANCE {
            return Ok(roots);
        }
    }
    Err(Error::NonConvergence {
        iterations: MAX_ITERATIONS,
        last_delta,
    })
}

fn newton_polish(monic: &[Complex64], mut z: Complex64) -> Complex64 {
    let deriv = derivative(monic);
    for _ in 0..4 {
        let d = eval(&deriv, z);
        if d.norm() < 1e-30 {
            break;
        }
        z -= eval(monic, z) / d;
    }
    z
}

/// Eigenvalues of the companion matrix via complex Hessenberg QR with
/// Wilkinson shifts.
fn companion_eigenvalues(monic: &[Complex64]) -> Result<Vec<Complex64>> {
    let n = monic.len() - 1;
    let mut h: CMatrix = Array2::from_elem((n, n), ZERO);
    for i in 1..n {
        h[[i, i - 1]] = ONE;
    }
    for i in 0..n {
        h[[i, n - 1]] = -monic[i];
    }
    hessenberg_qr_eigenvalues(h)
}

fn hessenberg_qr_eigenvalues(mut h: CMatrix) -> Result<Vec<Complex64>> {
    let n = h.nrows();
    let mut eigs = Vec::with_capacity(n);
    let mut m = n;
    let mut iterations_left = 60 * n.max(1);

    while m > 0 {
        if m == 1 {
            eigs.push(h[[0, 0]]);
            m = 0;
            continue;
        }
        // Deflate a negligible subdiagonal entry at the active edge.
        let off = h[[m - 1, m - 2]].norm();
        let scale = h[[m - 1, m - 1]].norm() + h[[m - 2, m - 2]].norm();
        if off <= f64::EPSILON * scale.max(1e-300) {
            eigs.push(h[[m - 1, m - 1]]);
            m -= 1;
            continue;
        }
        if iterations_left == 0 {
            return Err(Error::NonConvergence {
                iterations: 60 * n,
                last_delta: off,
            });
        }
        iterations_left -= 1;

        let shift = wilkinson_shift(
            h[[m - 2, m - 2]],
            h[[m - 2, m - 1]],
            h[[m - 1, m - 2]],
            h[[m - 1, m - 1]],
        );
        qr_step(&mut h, m, shift);
    }
    Ok(eigs)
}

fn wilkinson_shift(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Complex64 {
    let tr_half = (a + d) * Complex64::new(0.5, 0.0);
    let diff_half = (a - d) * Complex64::new(0.5, 0.0);
    let disc = (diff_half * diff_half + b * c).sqrt();
    let e1 = tr_half + disc;
    let e2 = tr_half - disc;
    if (e1 - d).norm() < (e2 - d).norm() {
        e1
    } else {
        e2
    }
}

/// One implicit-shift QR sweep on the leading m×m Hessenberg block.
fn qr_step(h: &mut CMatrix, m: usize, shift: Complex64) {
    for i in 0..m {
        h[[i, i]] -= shift;
    }
    // Forward pass: Givens rotations eliminating the subdiagonal.
    let mut rotations = Vec::with_capacity(m - 1);
    for k in 0..m - 1 {
        let (c, s) = givens(h[[k, k]], h[[k + 1, k]]);
        rotations.push((c, s));
        for j in k..m {
            let top = h[[k, j]];
            let bottom = h[[k + 1, j]];
            h[[k, j]] = c * top + s * bottom;
            h[[k + 1, j]] = -s.conj() * top + c * bottom;
        }
    }
    // Backward pass: multiply by the adjoints on the right.
    for (k, (c, s)) in rotations.iter().enumerate() {
        let upper = (k + 2).min(m);
        for i in 0..upper {
            let left = h[[i, k]];
            let right = h[[i, k + 1]];
            h[[i, k]] = left * c + right * s.conj();
            h[[i, k + 1]] = -left * s + right * c;
        }
    }
    for i in 0..m {
        h[[i, i]] += shift;
    }
}

/// Complex Givens pair (c real, s complex) with
/// [c, s; −s̄, c]·[a; b] = [r; 0].
fn givens(a: Complex64, b: Complex64) -> (Complex64, Complex64) {
    if b.norm() == 0.0 {
        return (ONE, ZERO);
    }
    if a.norm() == 0.0 {
        return (ZERO, b.conj() / b.norm());
    }
    let denom = (a.norm_sqr() + b.norm_sqr()).sqrt();
    let c = Complex64::new(a.norm() / denom, 0.0);
    let phase = a / a.norm();
    let s = phase * b.conj() / denom;
    (c, s)
}
