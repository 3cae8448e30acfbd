//! Exhaustive ground truth for small instances.
//!
//! Volumes here come from LU determinants of `X_T X_T^T`, a different route
//! from the Cholesky factorizations used by the algorithms.

use nalgebra::DMatrix;

use crate::error::{contract, Result, SelectError};
use crate::matrix::Matrix;
use crate::state::ExchangeState;
use crate::subset::IndexSubset;

/// Relative slack in the local-maximality test.
pub const LOCAL_MAX_SLACK: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OracleBudget {
    pub max_subsets: u128,
}

impl Default for OracleBudget {
    fn default() -> Self {
        Self {
            max_subsets: 2_000_000,
        }
    }
}

/// Exact `C(n, k)`.
pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}

/// `ln Vol(X_T)` from a Householder QR of `X_T^T`, so the conditioning of
/// `X_T` is not squared; `-inf` if `X_T` has fewer than `m` columns or an
/// exactly zero pivot.
pub fn direct_log_volume(x: &Matrix, cols: &[usize]) -> f64 {
    if cols.len() < x.rows() {
        return f64::NEG_INFINITY;
    }
    let r = x.select_columns(cols).transpose().qr().unpack_r();
    let mut acc = 0.0;
    for i in 0..x.rows() {
        let d = r[(i, i)].abs();
        if d == 0.0 || !d.is_finite() {
            return f64::NEG_INFINITY;
        }
        acc += d.ln();
    }
    acc
}

/// Advances `c` to the next `k`-subset of `[0, n)` in colexicographic order.
fn next_colex(c: &mut [usize], n: usize) -> bool {
    let k = c.len();
    for i in 0..k {
        let limit = if i + 1 < k { c[i + 1] } else { n };
        if c[i] + 1 < limit {
            c[i] += 1;
            for (j, v) in c.iter_mut().enumerate().take(i) {
                *v = j;
            }
            return true;
        }
    }
    false
}

/// Maximum-volume `k`-column selection by enumeration; ties resolve to the
/// lexicographically smallest subset.
pub fn brute_max_volume(x: &Matrix, k: usize, budget: OracleBudget) -> Result<(IndexSubset, f64)> {
    let n = x.cols();
    if k == 0 || k > n {
        return Err(contract(format!("k = {k} outside [1, {n}]")));
    }
    let required = binomial(n, k);
    if required > budget.max_subsets {
        return Err(SelectError::BudgetExceeded {
            required,
            budget: budget.max_subsets,
        });
    }
    let mut comb: Vec<usize> = (0..k).collect();
    let mut best: Option<(Vec<usize>, f64)> = None;
    loop {
        let v = direct_log_volume(x, &comb);
        let better = match &best {
            None => true,
            Some((bs, bv)) => v > *bv || (v == *bv && comb < *bs),
        };
        if better {
            best = Some((comb.clone(), v));
        }
        if !next_colex(&mut comb, n) {
            break;
        }
    }
    let (set, v) = best.expect("at least one subset");
    if v == f64::NEG_INFINITY {
        return Err(SelectError::SingularInput { rows: x.rows() });
    }
    Ok((IndexSubset::new(set, n)?, v))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LocalMaxCheck {
    pub holds: bool,
    /// Largest `Vol(X_{S+s-r}) / Vol(X_S)` over all single swaps (0 if none exist).
    pub worst_gain: f64,
}

/// Checks `c Vol(X_S) >= Vol(X_{S+s-r})` for every `s` outside and `r` inside
/// `S`, evaluating each swapped volume from scratch.
pub fn local_max_check(x: &Matrix, selection: &IndexSubset, c: f64) -> Result<LocalMaxCheck> {
    let base = direct_log_volume(x, selection.indices());
    if base == f64::NEG_INFINITY {
        return Err(SelectError::SingularSelection);
    }
    let mut cols = selection.indices().to_vec();
    let mut worst = f64::NEG_INFINITY;
    for s in selection.complement() {
        for pos in 0..cols.len() {
            let r = cols[pos];
            cols[pos] = s;
            worst = worst.max(direct_log_volume(x, &cols) - base);
            cols[pos] = r;
        }
    }
    let worst_gain = worst.exp();
    Ok(LocalMaxCheck {
        holds: worst_gain <= c * (1.0 + LOCAL_MAX_SLACK),
        worst_gain,
    })
}

/// Largest entrywise gap between `state` and a fresh computation for `S`.
pub fn state_recompute_check(x: &Matrix, selection: &IndexSubset, state: &ExchangeState) -> Result<f64> {
    let fresh = ExchangeState::from_scratch(x, selection)?;
    Ok(state.max_deviation(&fresh))
}

/// `X_S^+ X` through an SVD pseudo-inverse of `X_S`.
pub fn dense_pinv_product(x: &Matrix, selection: &[usize]) -> DMatrix<f64> {
    let sub = x.select_columns(selection);
    let pinv = sub.pseudo_inverse(1e-13).expect("non-negative epsilon");
    pinv * x.as_dmatrix()
}
