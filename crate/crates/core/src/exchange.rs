//! Column exchange loops that drive a selection to a `c`-locally maximal
//! volume.
//!
//! Both engines keep `Y = (X_S X_S^T)^{-1}` and the leverage scores
//! `l_j = x_j^T Y x_j` up to date with Sherman-Morrison updates:
//!
//! * adding `s`:   `l_j <- l_j - (x_s^T Y x_j)^2 / (1 + l_s)`, `Vol^2 *= 1 + l_s`
//! * removing `r`: `l_j <- l_j + (x_r^T Y x_j)^2 / (1 - l_r)`, `Vol^2 *= 1 - l_r`
//!
//! [`dominant_split`] picks the best column to add and then the best one to
//! drop (`O(nm)` per swap). [`dominant_full`] scores every `(r, s)` pair
//! through the rank-two determinant update
//! `g(r, s) = (1 + l_s)(1 - l_r) + (x_s^T Y x_r)^2` (`O(nk)` per swap).

use nalgebra::DVector;

use crate::error::{contract, Result, SelectError};
use crate::factorize::lq_orthonormalize;
use crate::matrix::Matrix;
use crate::state::ExchangeState;
use crate::subset::IndexSubset;

/// Swaps between full recomputations of the incremental state.
pub const REFRESH_INTERVAL: usize = 50;

/// Largest relative disagreement tolerated at a refresh.
pub const REFRESH_TOL: f64 = 1e-6;

#[derive(Clone, Debug, PartialEq)]
pub struct ExchangeConfig {
    /// Volume-gain threshold, `c >= 1`.
    pub c: f64,
    /// Hard cap on executed swaps. `None` uses [`ExchangeConfig::default_cap`].
    pub max_swaps: Option<usize>,
    /// Relative slack: stop once the squared gain is `<= c^2 (1 + epsilon)`.
    pub epsilon: f64,
    /// Replace `X` by its orthonormal row factor before exchanging.
    pub precondition: bool,
}

impl Default for ExchangeConfig {
    fn default() -> Self {
        Self {
            c: 1.0,
            max_swaps: None,
            epsilon: 1e-9,
            precondition: true,
        }
    }
}

impl ExchangeConfig {
    pub fn with_c(c: f64) -> Self {
        Self {
            c,
            ..Self::default()
        }
    }

    /// `100 m ceil(log2(k + 1))`.
    pub fn default_cap(m: usize, k: usize) -> usize {
        let bits = (usize::BITS - k.leading_zeros()) as usize; // ceil(log2(k + 1))
        100 * m * bits.max(1)
    }

    pub fn validate(&self) -> Result<()> {
        if !self.c.is_finite() || self.c < 1.0 {
            return Err(contract(format!("c must be a finite value >= 1, got {}", self.c)));
        }
        if !self.epsilon.is_finite() || self.epsilon < 0.0 {
            return Err(contract(format!("epsilon must be >= 0, got {}", self.epsilon)));
        }
        if self.max_swaps == Some(0) {
            return Err(contract("max_swaps must be positive"));
        }
        Ok(())
    }

    fn threshold(&self) -> f64 {
        self.c * self.c * (1.0 + self.epsilon)
    }

    fn cap(&self, m: usize, k: usize) -> usize {
        self.max_swaps.unwrap_or_else(|| Self::default_cap(m, k))
    }
}

/// One executed exchange.
#[derive(Clone, Debug, PartialEq)]
pub struct SwapRecord {
    pub added: usize,
    pub removed: usize,
    /// `Vol^2(S + s - r) / Vol^2(S)`.
    pub gain_sq: f64,
    /// `ln Vol` after the swap, on the matrix the engine worked with.
    pub log_volume: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Termination {
    /// No admissible swap improves the squared volume by more than the threshold.
    Threshold,
    /// The swap cap was reached first.
    Cap,
}

#[derive(Clone, Debug)]
pub struct ExchangeOutcome {
    pub selection: IndexSubset,
    pub swaps: Vec<SwapRecord>,
    pub terminated_by: Termination,
    /// `ln Vol` of the starting selection on the working matrix.
    pub initial_log_volume: f64,
}

impl ExchangeOutcome {
    pub fn swap_count(&self) -> usize {
        self.swaps.len()
    }
}

fn prepare(x: &Matrix, start: &IndexSubset, cfg: &ExchangeConfig) -> Result<Option<Matrix>> {
    cfg.validate()?;
    x.require_wide()?;
    if start.universe() != x.cols() {
        return Err(contract("starting subset does not match the matrix width"));
    }
    if start.len() < x.rows() {
        return Err(contract(format!(
            "need at least m = {} selected columns, got {}",
            x.rows(),
            start.len()
        )));
    }
    if cfg.precondition {
        Ok(Some(lq_orthonormalize(x)?))
    } else {
        Ok(None)
    }
}

fn refresh(work: &Matrix, state: &ExchangeState) -> Result<ExchangeState> {
    let fresh = ExchangeState::from_scratch(work, state.selection())?;
    let deviation = state.relative_deviation(&fresh);
    if deviation.is_nan() || deviation > REFRESH_TOL {
        return Err(SelectError::NumericalDrift { deviation });
    }
    Ok(fresh)
}

/// Add-then-remove exchange.
///
/// Each iteration adds `s = argmax_{j not in S} l_j`, then drops
/// `r = argmin_{j in S} l'_j` from the enlarged set, and stops as soon as
/// `(1 + l_s)(1 - l'_r) <= c^2 (1 + epsilon)`. Ties go to the lowest index.
pub fn dominant_split(x: &Matrix, start: &IndexSubset, cfg: &ExchangeConfig) -> Result<ExchangeOutcome> {
    let pre = prepare(x, start, cfg)?;
    let work = pre.as_ref().unwrap_or(x);
    let threshold = cfg.threshold();
    let cap = cfg.cap(x.rows(), start.len());

    let mut state = ExchangeState::from_scratch(work, start)?;
    let initial_log_volume = state.log_volume();
    let mut swaps = Vec::new();

    let terminated_by = loop {
        let Some(s) = state.best_unselected() else {
            break Termination::Threshold;
        };
        let ls = state.score(s);
        let enlarged = state.with_added(work, s)?;
        let r = enlarged
            .weakest_among(state.selection())
            .ok_or_else(|| contract("empty selection"))?;
        debug_assert_ne!(r, s);
        let gain_sq = (1.0 + ls) * (1.0 - enlarged.score(r));
        if gain_sq <= threshold {
            break Termination::Threshold;
        }
        if swaps.len() >= cap {
            break Termination::Cap;
        }
        state = enlarged.with_removed(work, r)?;
        swaps.push(SwapRecord {
            added: s,
            removed: r,
            gain_sq,
            log_volume: state.log_volume(),
        });
        if swaps.len() % REFRESH_INTERVAL == 0 {
            state = refresh(work, &state)?;
        }
    };

    Ok(ExchangeOutcome {
        selection: state.selection().clone(),
        swaps,
        terminated_by,
        initial_log_volume,
    })
}

/// Cross products `x_j^T Y x_r` for every column `j` and every selected `r`,
/// one vector per position of the selection.
struct CrossScores {
    columns: Vec<DVector<f64>>,
}

impl CrossScores {
    fn compute(work: &Matrix, state: &ExchangeState) -> Self {
        let y = state.gram_inverse();
        let columns = state
            .selection()
            .iter()
            .map(|r| work.as_dmatrix().tr_mul(&(y * work.column(r))))
            .collect();
        Self { columns }
    }

    /// Rank-one correction `M[j, t] += coeff * w_j * w_t`.
    fn update(&mut self, selection: &IndexSubset, w: &DVector<f64>, coeff: f64) {
        for (col, t) in self.columns.iter_mut().zip(selection.iter()) {
            col.axpy(coeff * w[t], w, 1.0);
        }
    }
}

/// Best-pair exchange over all `k (n - k)` candidate swaps.
///
/// Stops when `max g(r, s) <= c^2 (1 + epsilon)`, at which point no single
/// swap raises the volume by more than a factor `c` (up to the slack).
pub fn dominant_full(x: &Matrix, start: &IndexSubset, cfg: &ExchangeConfig) -> Result<ExchangeOutcome> {
    let pre = prepare(x, start, cfg)?;
    let work = pre.as_ref().unwrap_or(x);
    let threshold = cfg.threshold();
    let cap = cfg.cap(x.rows(), start.len());

    let mut state = ExchangeState::from_scratch(work, start)?;
    let initial_log_volume = state.log_volume();
    let mut cross = CrossScores::compute(work, &state);
    let mut swaps = Vec::new();

    let terminated_by = loop {
        let Some((pos, s, gain_sq)) = best_pair(&state, &cross) else {
            break Termination::Threshold;
        };
        if gain_sq <= threshold {
            break Termination::Threshold;
        }
        if swaps.len() >= cap {
            break Termination::Cap;
        }
        let r = state.selection().indices()[pos];
        assert!(!state.selection().contains(s) && r != s);

        // Add s: M picks up -w w^T / (1 + l_s) on the old selection.
        let ls = work.column(s).dot(&(state.gram_inverse() * work.column(s)));
        let old_selection = state.selection().clone();
        let w_add = state.add(work, s)?;
        cross.update(&old_selection, &w_add, -1.0 / (1.0 + ls));

        // Remove r: +w w^T / (1 - l'_r), then drop r's column.
        let lr = work.column(r).dot(&(state.gram_inverse() * work.column(r)));
        let w_rem = state.remove(work, r)?;
        let remaining_before = {
            let mut sel = old_selection;
            sel.remove(r)?;
            sel
        };
        cross.columns.remove(pos);
        cross.update(&remaining_before, &w_rem, 1.0 / (1.0 - lr));
        let fresh_col = work.as_dmatrix().tr_mul(&(state.gram_inverse() * work.column(s)));
        cross.columns.push(fresh_col);

        swaps.push(SwapRecord {
            added: s,
            removed: r,
            gain_sq,
            log_volume: state.log_volume(),
        });
        if swaps.len() % REFRESH_INTERVAL == 0 {
            state = refresh(work, &state)?;
            cross = CrossScores::compute(work, &state);
        }
    };

    Ok(ExchangeOutcome {
        selection: state.selection().clone(),
        swaps,
        terminated_by,
        initial_log_volume,
    })
}

/// `(position of r, s, g(r, s))` maximizing the gain; ties prefer the smaller
/// `s`, then the smaller `r`.
fn best_pair(state: &ExchangeState, cross: &CrossScores) -> Option<(usize, usize, f64)> {
    let sel = state.selection();
    let l = state.scores();
    let mut best: Option<(usize, usize, f64)> = None;
    for s in 0..l.len() {
        if sel.contains(s) {
            continue;
        }
        let add = 1.0 + l[s];
        for (pos, r) in sel.iter().enumerate() {
            let m = cross.columns[pos][s];
            let g = add * (1.0 - l[r]) + m * m;
            let better = match best {
                None => true,
                Some((bpos, bs, bg)) => g > bg || (g == bg && s == bs && r < sel.indices()[bpos]),
            };
            if better {
                best = Some((pos, s, g));
            }
        }
    }
    best
}

/// Squared volume gain of swapping `r` (selected) for `s` (not selected),
/// read off a consistent state.
pub fn swap_gain(x: &Matrix, state: &ExchangeState, r: usize, s: usize) -> Result<f64> {
    let sel = state.selection();
    if !sel.contains(r) || sel.contains(s) {
        return Err(contract(format!("({r}, {s}) is not a valid swap")));
    }
    let cross = x.column(s).dot(&(state.gram_inverse() * x.column(r)));
    Ok((1.0 + state.score(s)) * (1.0 - state.score(r)) + cross * cross)
}
