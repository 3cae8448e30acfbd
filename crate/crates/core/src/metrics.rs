//! Quality measures of a selection and the closed-form guarantees they are
//! checked against.
//!
//! With `B(m, k, c) = (m + (c^2 - 1) k) / (k - m + 1)`, a `c`-locally maximal
//! selection satisfies
//!
//! * `max_{j not in S} ||X_S^+ x_j||^2 <= B`
//! * `||X_S^+ X||_F^2 <= m + B (n - k)`
//! * `||X_S^+ X||_2^2 <= 1 + B (n - k)`
//!
//! and an exchange started from a superset of the CPQR basis performs at most
//! `m/2 log_c(e k)` swaps.

use nalgebra::{DMatrix, DVector};

use crate::error::{contract, Result, SelectError};
use crate::linalg::{cholesky_checked, gram_of_columns, half_log_det};
use crate::matrix::Matrix;
use crate::subset::IndexSubset;

/// Relative slack allowed when comparing measured values with bounds.
pub const BOUND_REL_TOL: f64 = 1e-8;

/// Above this many columns the spectral norm is found by power iteration.
pub const SVD_COLUMN_LIMIT: usize = 10_000;

const POWER_TOL: f64 = 1e-10;
const POWER_MAX_ITER: usize = 1_000;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TheoreticalBounds {
    pub frob: f64,
    pub spec: f64,
    pub col: f64,
    /// `+inf` when `c = 1`.
    pub swap: f64,
}

pub fn evaluate_bounds(m: usize, k: usize, n: usize, c: f64) -> Result<TheoreticalBounds> {
    if m == 0 || m > k || k > n {
        return Err(contract(format!("need 1 <= m <= k <= n, got m={m} k={k} n={n}")));
    }
    if !c.is_finite() || c < 1.0 {
        return Err(contract(format!("c must be a finite value >= 1, got {c}")));
    }
    let (mf, kf, nf) = (m as f64, k as f64, n as f64);
    let col = (mf + (c * c - 1.0) * kf) / (kf - mf + 1.0);
    let swap = if c > 1.0 {
        0.5 * mf * (std::f64::consts::E * kf).ln() / c.ln()
    } else {
        f64::INFINITY
    };
    Ok(TheoreticalBounds {
        frob: mf + col * (nf - kf),
        spec: 1.0 + col * (nf - kf),
        col,
        swap,
    })
}

/// `ln C(k, m)`.
pub fn ln_binomial(k: usize, m: usize) -> f64 {
    assert!(m <= k);
    (1..=m).map(|i| ((k - m + i) as f64 / i as f64).ln()).sum()
}

/// `ln` of the guaranteed fraction `Vol(X_S) / max Vol` for `S` containing the
/// CPQR basis: `-(m/2 ln m + 1/2 ln C(k, m))`.
pub fn cpqr_log_ratio_bound(m: usize, k: usize) -> f64 {
    -(0.5 * m as f64 * (m as f64).ln() + 0.5 * ln_binomial(k, m))
}

/// `ln` of the guaranteed fraction `Vol(X_S) / max Vol` for a selection that
/// admits no swap with squared gain above `c^2`.
///
/// The base factor is `(k + 1) / (k - m + 1) (1 + (c^2 - 1) k / m)`; when
/// `m c^2 >= k - m + 1` (always so for `k <= 2m - 1`) the leading `k + 1`
/// sharpens to `k`.
pub fn local_max_log_ratio_bound(m: usize, k: usize, c: f64) -> f64 {
    let (mf, kf) = (m as f64, k as f64);
    let d = kf - mf + 1.0;
    let lead = if mf * c * c >= d { kf } else { kf + 1.0 };
    -0.5 * mf * ((lead / d) * (1.0 + (c * c - 1.0) * kf / mf)).ln()
}

/// `ln 6^{-m/2}`, the advanced-initialization guarantee.
pub fn advanced_log_ratio_bound(m: usize) -> f64 {
    -0.5 * m as f64 * 6f64.ln()
}

/// `ln Vol(X_S) = 1/2 ln det(X_S X_S^T)`; `-inf` when `X_S` is rank deficient.
pub fn log_volume(x: &Matrix, selection: &[usize]) -> f64 {
    match cholesky_checked(&gram_of_columns(x.as_dmatrix(), selection)) {
        Some(l) => half_log_det(&l),
        None => f64::NEG_INFINITY,
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PinvNorms {
    /// `||X_S^+ X||_F^2`.
    pub frob_sq: f64,
    /// `||X_S^+ X||_2^2`.
    pub spec_sq: f64,
    /// `max_{j not in S} ||X_S^+ x_j||^2` (zero when `S` is everything).
    pub max_exterior_score: f64,
}

/// Norms of `X_S^+ X`.
///
/// With `X_S X_S^T = L L^T` and `Z = L^{-1} X`, column norms of `Z` are the
/// leverage scores and the singular values of `Z` are those of `X_S^+ X`.
pub fn pinv_product_norms(x: &Matrix, selection: &IndexSubset) -> Result<PinvNorms> {
    if selection.universe() != x.cols() {
        return Err(contract("subset does not match the matrix width"));
    }
    let l = cholesky_checked(&gram_of_columns(x.as_dmatrix(), selection.indices()))
        .ok_or(SelectError::SingularSelection)?;
    let z = l
        .solve_lower_triangular(x.as_dmatrix())
        .ok_or(SelectError::SingularSelection)?;
    let scores: Vec<f64> = z.column_iter().map(|c| c.norm_squared()).collect();
    let frob_sq = scores.iter().sum();
    let max_exterior_score = scores
        .iter()
        .enumerate()
        .filter(|(j, _)| !selection.contains(*j))
        .map(|(_, &v)| v)
        .fold(0.0, f64::max);
    let spec_sq = if x.cols() <= SVD_COLUMN_LIMIT {
        let sv = z.singular_values();
        sv.max() * sv.max()
    } else {
        largest_eigenvalue(&(&z * z.transpose()))
    };
    Ok(PinvNorms {
        frob_sq,
        spec_sq,
        max_exterior_score,
    })
}

/// Power iteration on a symmetric positive semi-definite matrix.
fn largest_eigenvalue(a: &DMatrix<f64>) -> f64 {
    let n = a.nrows();
    let mut v = DVector::from_element(n, 1.0 / (n as f64).sqrt());
    let mut lambda = 0.0;
    for _ in 0..POWER_MAX_ITER {
        let w = a * &v;
        let next = v.dot(&w);
        let norm = w.norm();
        if norm == 0.0 {
            return 0.0;
        }
        v = w / norm;
        if (next - lambda).abs() <= POWER_TOL * next.abs() {
            return next;
        }
        lambda = next;
    }
    lambda
}

/// Measured norms next to the guarantees for a given `(m, k, n, c)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BoundReport {
    pub frob_sq: f64,
    pub spec_sq: f64,
    pub max_exterior_score: f64,
    pub bounds: TheoreticalBounds,
    pub frob_ok: bool,
    pub spec_ok: bool,
    pub col_ok: bool,
    /// `None` when no swap count was supplied or `c = 1`.
    pub swap_ok: Option<bool>,
}

impl BoundReport {
    /// Column, Frobenius and spectral checks together.
    pub fn norms_ok(&self) -> bool {
        self.frob_ok && self.spec_ok && self.col_ok
    }

    pub fn all_ok(&self) -> bool {
        self.norms_ok() && self.swap_ok.unwrap_or(true)
    }
}

fn within(measured: f64, bound: f64) -> bool {
    measured <= bound * (1.0 + BOUND_REL_TOL)
}

pub fn bound_report(
    x: &Matrix,
    selection: &IndexSubset,
    c: f64,
    swaps: Option<usize>,
) -> Result<BoundReport> {
    let norms = pinv_product_norms(x, selection)?;
    let bounds = evaluate_bounds(x.rows(), selection.len(), x.cols(), c)?;
    let swap_ok = match swaps {
        Some(count) if bounds.swap.is_finite() => Some(count as f64 <= bounds.swap),
        _ => None,
    };
    Ok(BoundReport {
        frob_sq: norms.frob_sq,
        spec_sq: norms.spec_sq,
        max_exterior_score: norms.max_exterior_score,
        bounds,
        frob_ok: within(norms.frob_sq, bounds.frob),
        spec_ok: within(norms.spec_sq, bounds.spec),
        col_ok: within(norms.max_exterior_score, bounds.col),
        swap_ok,
    })
}
