use nalgebra::{DMatrix, DVector};

use crate::error::{contract, Result, SelectError};
use crate::linalg::{cholesky_checked, gram_of_columns, half_log_det};
use crate::matrix::Matrix;
use crate::subset::IndexSubset;

/// Smallest admissible `1 - l_r` for a removal; below this the remaining
/// columns are treated as rank deficient.
pub const REMOVAL_TOL: f64 = 1e-10;

/// Gram inverse `Y = (X_S X_S^T)^{-1}` and leverage scores `l_j = x_j^T Y x_j`
/// for a selection `S`, kept consistent under single-column edits.
#[derive(Clone, Debug)]
pub struct ExchangeState {
    selection: IndexSubset,
    gram_inverse: DMatrix<f64>,
    scores: DVector<f64>,
    log_volume: f64,
}

impl ExchangeState {
    /// Factors `X_S X_S^T` and evaluates every score directly.
    pub fn from_scratch(x: &Matrix, selection: &IndexSubset) -> Result<Self> {
        if selection.universe() != x.cols() {
            return Err(contract(format!(
                "subset over {} columns used with a matrix of {} columns",
                selection.universe(),
                x.cols()
            )));
        }
        let xd = x.as_dmatrix();
        let m = x.rows();
        let l = cholesky_checked(&gram_of_columns(xd, selection.indices()))
            .ok_or(SelectError::SingularSelection)?;
        let l_inv = l
            .solve_lower_triangular(&DMatrix::identity(m, m))
            .ok_or(SelectError::SingularSelection)?;
        let z = &l_inv * xd;
        let scores = DVector::from_iterator(x.cols(), z.column_iter().map(|c| c.norm_squared()));
        let gram_inverse = l_inv.tr_mul(&l_inv);
        Ok(Self {
            selection: selection.clone(),
            gram_inverse,
            scores,
            log_volume: half_log_det(&l),
        })
    }

    pub fn selection(&self) -> &IndexSubset {
        &self.selection
    }

    pub fn gram_inverse(&self) -> &DMatrix<f64> {
        &self.gram_inverse
    }

    pub fn scores(&self) -> &DVector<f64> {
        &self.scores
    }

    pub fn score(&self, j: usize) -> f64 {
        self.scores[j]
    }

    /// Running `ln Vol(X_S)`.
    pub fn log_volume(&self) -> f64 {
        self.log_volume
    }

    /// Appends column `s`, returning `w` with `w_j = x_j^T Y x_s` for the
    /// pre-update `Y`.
    pub fn add(&mut self, x: &Matrix, s: usize) -> Result<DVector<f64>> {
        if s >= x.cols() || self.selection.contains(s) {
            return Err(contract(format!("cannot add column {s}: already selected or out of range")));
        }
        let v = &self.gram_inverse * x.column(s);
        let ls = x.column(s).dot(&v);
        let w = x.as_dmatrix().tr_mul(&v);
        let denom = 1.0 + ls;
        self.scores
            .iter_mut()
            .zip(w.iter())
            .for_each(|(l, wj)| *l -= wj * wj / denom);
        self.gram_inverse.ger(-1.0 / denom, &v, &v, 1.0);
        self.log_volume += 0.5 * denom.ln();
        self.selection.insert(s)?;
        Ok(w)
    }

    /// Drops column `r`, returning `w` with `w_j = x_j^T Y x_r` for the
    /// pre-update `Y`.
    pub fn remove(&mut self, x: &Matrix, r: usize) -> Result<DVector<f64>> {
        if !self.selection.contains(r) {
            return Err(contract(format!("cannot remove column {r}: not selected")));
        }
        let v = &self.gram_inverse * x.column(r);
        let lr = x.column(r).dot(&v);
        let denom = 1.0 - lr;
        if denom < REMOVAL_TOL {
            return Err(SelectError::RemovalBreaksRank { index: r, score: lr });
        }
        let w = x.as_dmatrix().tr_mul(&v);
        self.scores
            .iter_mut()
            .zip(w.iter())
            .for_each(|(l, wj)| *l += wj * wj / denom);
        self.gram_inverse.ger(1.0 / denom, &v, &v, 1.0);
        self.log_volume += 0.5 * denom.ln();
        self.selection.remove(r)?;
        Ok(w)
    }

    /// State for `S + s`; `self` is left untouched.
    pub fn with_added(&self, x: &Matrix, s: usize) -> Result<Self> {
        let mut next = self.clone();
        next.add(x, s)?;
        Ok(next)
    }

    /// State for `S - r`; `self` is left untouched.
    pub fn with_removed(&self, x: &Matrix, r: usize) -> Result<Self> {
        let mut next = self.clone();
        next.remove(x, r)?;
        Ok(next)
    }

    /// `argmax_{j not in S} l_j`, lowest index on ties; `None` when every
    /// column is selected.
    pub fn best_unselected(&self) -> Option<usize> {
        let mut best: Option<usize> = None;
        for (j, &l) in self.scores.iter().enumerate() {
            if self.selection.contains(j) {
                continue;
            }
            if best.is_none_or(|b| l > self.scores[b]) {
                best = Some(j);
            }
        }
        best
    }

    /// `argmin_{j in among} l_j`, lowest index on ties.
    pub fn weakest_among(&self, among: &IndexSubset) -> Option<usize> {
        let mut best: Option<usize> = None;
        for j in among.iter() {
            let l = self.scores[j];
            let better = match best {
                None => true,
                Some(b) => l < self.scores[b] || (l == self.scores[b] && j < b),
            };
            if better {
                best = Some(j);
            }
        }
        best
    }

    /// Largest entrywise difference from `other` over `Y` and `l`.
    pub fn max_deviation(&self, other: &Self) -> f64 {
        let dy = (&self.gram_inverse - &other.gram_inverse).amax();
        let dl = (&self.scores - &other.scores).amax();
        dy.max(dl)
    }

    /// Same as [`max_deviation`](Self::max_deviation) but divided by the magnitude
    /// of `other`'s entries (at least one).
    pub(crate) fn relative_deviation(&self, other: &Self) -> f64 {
        let dy = (&self.gram_inverse - &other.gram_inverse).amax() / other.gram_inverse.amax().max(1.0);
        let dl = (&self.scores - &other.scores).amax() / other.scores.amax().max(1.0);
        dy.max(dl)
    }
}
