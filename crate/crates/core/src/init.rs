//! Starting selections for the exchange loops.

use std::f64::consts::E;

use crate::error::{contract, Result, SelectError};
use crate::exchange::{dominant_split, ExchangeConfig};
use crate::factorize::cpqr_pivots;
use crate::matrix::Matrix;
use crate::state::ExchangeState;
use crate::subset::IndexSubset;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum InitKind {
    /// First `k` columns of the CPQR permutation.
    Cpqr,
    /// CPQR basis, then greedy volume-maximizing appends.
    Greedy,
    /// Greedy start on `2m - 1` columns, exchange, then greedy resize to `k`.
    Advanced,
}

impl InitKind {
    pub fn name(self) -> &'static str {
        match self {
            InitKind::Cpqr => "CPQR",
            InitKind::Greedy => "greedy",
            InitKind::Advanced => "advanced",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct InitStrategy {
    pub kind: InitKind,
    pub k: usize,
    /// Downstream exchange parameter. Not used by the built-in strategies:
    /// the advanced pipeline fixes its own internal threshold.
    pub c: f64,
}

impl InitStrategy {
    pub fn run(&self, x: &Matrix) -> Result<IndexSubset> {
        match self.kind {
            InitKind::Cpqr => init_cpqr(x, self.k),
            InitKind::Greedy => init_greedy(x, self.k),
            InitKind::Advanced => advanced_init(x, self.k),
        }
    }
}

fn check_k(x: &Matrix, k: usize) -> Result<()> {
    x.require_wide()?;
    if k < x.rows() || k > x.cols() {
        return Err(contract(format!(
            "k = {k} outside [m, n] = [{}, {}]",
            x.rows(),
            x.cols()
        )));
    }
    Ok(())
}

pub fn init_cpqr(x: &Matrix, k: usize) -> Result<IndexSubset> {
    check_k(x, k)?;
    let cp = cpqr_pivots(x)?;
    IndexSubset::new(cp.pivot_order[..k].iter().copied(), x.cols())
}

pub fn init_greedy(x: &Matrix, k: usize) -> Result<IndexSubset> {
    check_k(x, k)?;
    let cp = cpqr_pivots(x)?;
    let basis = IndexSubset::new(cp.basis().iter().copied(), x.cols())?;
    greedy_append(x, &basis, k)
}

/// Appends `argmax_{j not in S} l_j` until `|S| = k`; each append multiplies
/// `Vol^2` by `1 + l_j`.
pub fn greedy_append(x: &Matrix, start: &IndexSubset, k: usize) -> Result<IndexSubset> {
    check_k(x, k)?;
    if start.len() > k {
        return Err(contract(format!("cannot grow {} columns down to {k}", start.len())));
    }
    let mut state = ExchangeState::from_scratch(x, start)?;
    while state.selection().len() < k {
        let s = state
            .best_unselected()
            .ok_or_else(|| contract("no column left to append"))?;
        state.add(x, s)?;
    }
    Ok(state.selection().clone())
}

/// Removes `argmin_{j in S} l_j` until `|S| = k`.
///
/// Each removal keeps at least a `(|S| - m) / |S|` fraction of `Vol^2`.
pub fn greedy_remove(x: &Matrix, start: &IndexSubset, k: usize) -> Result<IndexSubset> {
    greedy_remove_traced(x, start, k).map(|(s, _)| s)
}

/// [`greedy_remove`] that also reports the removed columns in order.
pub fn greedy_remove_traced(
    x: &Matrix,
    start: &IndexSubset,
    k: usize,
) -> Result<(IndexSubset, Vec<usize>)> {
    check_k(x, k)?;
    if start.len() < k {
        return Err(contract(format!("cannot shrink {} columns up to {k}", start.len())));
    }
    let mut state = ExchangeState::from_scratch(x, start)?;
    let mut removed = Vec::with_capacity(start.len() - k);
    while state.selection().len() > k {
        let sel = state.selection().clone();
        let r = state
            .weakest_among(&sel)
            .ok_or_else(|| contract("empty selection"))?;
        state.remove(x, r)?;
        removed.push(r);
    }
    Ok((state.selection().clone(), removed))
}

/// Squared exchange threshold used inside [`advanced_init`]:
/// `min(e, 1 + 2m / (2m - 1))`.
pub fn advanced_threshold_sq(m: usize) -> f64 {
    let w = (2 * m - 1) as f64;
    E.min(1.0 + 2.0 * m as f64 / w)
}

/// CPQR basis grown greedily to `2m - 1` columns, exchanged to a local
/// volume maximum, then shrunk or grown greedily to `k` columns.
///
/// Past the first `m` pivots of a rank-`m` matrix the CPQR residuals are
/// rounding noise, so the extra columns come from greedy appends instead.
///
/// The result has at least `6^{-m/2}` of the maximum volume over all
/// `k`-column selections.
pub fn advanced_init(x: &Matrix, k: usize) -> Result<IndexSubset> {
    check_k(x, k)?;
    let m = x.rows();
    let wide = 2 * m - 1;
    if x.cols() < wide {
        return Err(SelectError::UnsupportedShape(format!(
            "advanced initialization needs n >= 2m - 1 = {wide}, got n = {}",
            x.cols()
        )));
    }
    let start = init_greedy(x, wide)?;
    let cfg = ExchangeConfig::with_c(advanced_threshold_sq(m).sqrt());
    let mid = dominant_split(x, &start, &cfg)?.selection;
    if k <= wide {
        greedy_remove(x, &mid, k)
    } else {
        greedy_append(x, &mid, k)
    }
}
