//! Dense complex linear algebra: matrix exponential, Kronecker products,
//! and small helpers shared by the physics modules.
//!
//! The matrix exponential uses scaling-and-squaring with the Padé(13,13)
//! approximant (Higham 2005). For the anti-Hermitian generators used
//! throughout this crate the result is unitary to machine precision.

use ndarray::{Array1, Array2};
use num_complex::Complex64;

pub type CMatrix = Array2<Complex64>;
pub type CVector = Array1<Complex64>;

pub const ONE: Complex64 = Complex64::new(1.0, 0.0);
pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const I: Complex64 = Complex64::new(0.0, 1.0);

/// Padé(13,13) numerator/denominator coefficients (Higham 2005, Table 10.4).
const PADE13: [f64; 14] = [
    64_764_752_532_480_000.0,
    32_382_376_266_240_000.0,
    7_771_770_303_897_600.0,
    1_187_353_796_428_800.0,
    129_060_195_264_000.0,
    10_559_470_521_600.0,
    670_442_572_800.0,
    33_522_128_640.0,
    1_323_241_920.0,
    40_840_800.0,
    960_960.0,
    16_380.0,
    182.0,
    1.0,
];

/// 1-norm threshold above which the argument is scaled down.
const THETA13: f64 = 5.371_920_351_148_152;

fn c(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

pub fn identity(dim: usize) -> CMatrix {
    Array2::from_diag_elem(dim, ONE)
}

/// Max column sum of absolute values.
fn one_norm(a: &CMatrix) -> f64 {
    let mut max = 0.0f64;
    for j in 0..a.ncols() {
        let col_sum: f64 = (0..a.nrows()).map(|i| a[[i, j]].norm()).sum();
        max = max.max(col_sum);
    }
    max
}

/// Largest entry magnitude.
pub fn max_abs(a: &CMatrix) -> f64 {
    a.iter().fold(0.0f64, |m, z| m.max(z.norm()))
}

pub fn max_abs_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    assert_eq!(a.dim(), b.dim(), "max_abs_diff requires equal shapes");
    let mut max = 0.0f64;
    for (x, y) in a.iter().zip(b.iter()) {
        max = max.max((x - y).norm());
    }
    max
}

/// Conjugate transpose.
pub fn dagger(a: &CMatrix) -> CMatrix {
    a.t().mapv(|z| z.conj())
}

/// Kronecker product, left factor slowest-varying.
pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    let (ra, ca) = a.dim();
    let (rb, cb) = b.dim();
    let mut out = Array2::from_elem((ra * rb, ca * cb), ZERO);
    for ia in 0..ra {
        for ja in 0..ca {
            let f = a[[ia, ja]];
            if f == ZERO {
                continue;
            }
            for ib in 0..rb {
                for jb in 0..cb {
                    out[[ia * rb + ib, ja * cb + jb]] = f * b[[ib, jb]];
                }
            }
        }
    }
    out
}

/// Matrix exponential exp(A) for a square complex matrix.
pub fn expm(a: &CMatrix) -> CMatrix {
    let n = a.nrows();
    assert_eq!(n, a.ncols(), "expm requires a square matrix");
    if n == 0 {
        return Array2::from_elem((0, 0), ZERO);
    }
    if n == 1 {
        let mut out = Array2::from_elem((1, 1), ZERO);
        out[[0, 0]] = a[[0, 0]].exp();
        return out;
    }

    let norm = one_norm(a);
    let squarings = if norm > THETA13 {
        (norm / THETA13).log2().ceil() as u32
    } else {
        0
    };
    let scaled = a.mapv(|z| z / c((1u64 << squarings) as f64));

    let mut result = pade13(&scaled);
    for _ in 0..squarings {
        result = result.dot(&result);
    }
    result
}

fn pade13(a: &CMatrix) -> CMatrix {
    let n = a.nrows();
    let eye = identity(n);
    let a2 = a.dot(a);
    let a4 = a2.dot(&a2);
    let a6 = a2.dot(&a4);

    let w1 = &a6 * c(PADE13[13]) + &a4 * c(PADE13[11]) + &a2 * c(PADE13[9]);
    let w2 = w1.dot(&a6)
        + &a6 * c(PADE13[7])
        + &a4 * c(PADE13[5])
        + &a2 * c(PADE13[3])
        + &eye * c(PADE13[1]);
    let u = a.dot(&w2);

    let v1 = &a6 * c(PADE13[12]) + &a4 * c(PADE13[10]) + &a2 * c(PADE13[8]);
    let v = v1.dot(&a6)
        + &a6 * c(PADE13[6])
        + &a4 * c(PADE13[4])
        + &a2 * c(PADE13[2])
        + &eye * c(PADE13[0]);

    let numer = &v + &u;
    let denom = &v - &u;
    solve(denom, numer)
}

/// Solve A X = B by Gaussian elimination with partial pivoting.
///
/// Panics on a singular pivot; the Padé denominator of a properly scaled
/// argument is always well conditioned.
fn solve(mut a: CMatrix, mut b: CMatrix) -> CMatrix {
    let n = a.nrows();
    let m = b.ncols();
    assert_eq!(n, a.ncols());
    assert_eq!(n, b.nrows());

    for col in 0..n {
        let mut pivot_row = col;
        let mut pivot_mag = a[[col, col]].norm();
        for row in (col + 1)..n {
            let mag = a[[row, col]].norm();
            if mag > pivot_mag {
                pivot_mag = mag;
                pivot_row = row;
            }
        }
        assert!(pivot_mag > 0.0, "singular matrix in linear solve");
        if pivot_row != col {
            for j in 0..n {
                a.swap([col, j], [pivot_row, j]);
            }
            for j in 0..m {
                b.swap([col, j], [pivot_row, j]);
            }
        }
        let pivot = a[[col, col]];
        for row in (col + 1)..n {
            let factor = a[[row, col]] / pivot;
            if factor == ZERO {
                continue;
            }
            for j in col..n {
                let v = a[[col, j]];
                a[[row, j]] -= factor * v;
            }
            for j in 0..m {
                let v = b[[col, j]];
                b[[row, j]] -= factor * v;
            }
        }
    }

    let mut x = Array2::from_elem((n, m), ZERO);
    for col in (0..n).rev() {
        for j in 0..m {
            let mut sum = b[[col, j]];
            for k in (col + 1)..n {
                sum -= a[[col, k]] * x[[k, j]];
            }
            x[[col, j]] = sum / a[[col, col]];
        }
    }
    x
}
