//! Householder QR with optional column pivoting, and the two views of it the
//! selection algorithms need: CPQR pivots and an orthonormal row basis.

use nalgebra::DMatrix;

use crate::error::{Result, SelectError};
use crate::matrix::Matrix;

/// Relative size (in norm) under which a downdated column norm is recomputed.
const NORM_GUARD: f64 = 1e-6;

/// `|R_ii| / |R_00|` below this means the input does not have full row rank.
/// Squared, this is the same `1e-12` relative pivot used for Gram matrices.
const RANK_RATIO_TOL: f64 = 1e-6;

/// Outcome of column-pivoted QR on an `m x n` matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct CpqrResult {
    /// Permutation of `[0, n)`; the first `m` entries are the greedy pivots.
    pub pivot_order: Vec<usize>,
    /// Diagonal of `R`, with non-increasing magnitudes.
    pub r_diagonal: Vec<f64>,
}

impl CpqrResult {
    /// The `m` basis pivots.
    pub fn basis(&self) -> &[usize] {
        &self.pivot_order[..self.r_diagonal.len()]
    }
}

/// Packed Householder factorization: `R` on and above the diagonal, reflector
/// tails below it, scaling factors in `tau`.
struct Householder {
    packed: DMatrix<f64>,
    tau: Vec<f64>,
    perm: Vec<usize>,
}

impl Householder {
    fn factor(mut a: DMatrix<f64>, pivot: bool) -> Self {
        let (rows, cols) = a.shape();
        let steps = rows.min(cols);
        let mut perm: Vec<usize> = (0..cols).collect();
        let mut tau = Vec::with_capacity(steps);

        let mut partial: Vec<f64> = a.column_iter().map(|c| c.norm()).collect();
        let mut reference = partial.clone();

        for k in 0..steps {
            if pivot {
                let mut best = k;
                for j in k + 1..cols {
                    if partial[j] > partial[best] {
                        best = j;
                    }
                }
                if best != k {
                    a.swap_columns(k, best);
                    partial.swap(k, best);
                    reference.swap(k, best);
                    perm.swap(k, best);
                }
            }

            let alpha = a[(k, k)];
            let tail_norm = a.view((k + 1, k), (rows - k - 1, 1)).norm();
            let t = if tail_norm == 0.0 {
                0.0
            } else {
                let beta = -alpha.signum() * alpha.hypot(tail_norm);
                let scale = 1.0 / (alpha - beta);
                for i in k + 1..rows {
                    a[(i, k)] *= scale;
                }
                a[(k, k)] = beta;
                (beta - alpha) / beta
            };
            tau.push(t);

            if t != 0.0 {
                for j in k + 1..cols {
                    let mut dot = a[(k, j)];
                    for i in k + 1..rows {
                        dot += a[(i, k)] * a[(i, j)];
                    }
                    let f = t * dot;
                    a[(k, j)] -= f;
                    for i in k + 1..rows {
                        a[(i, j)] -= f * a[(i, k)];
                    }
                }
            }

            if pivot {
                for j in k + 1..cols {
                    if partial[j] == 0.0 {
                        continue;
                    }
                    let r = a[(k, j)];
                    let down = (partial[j] * partial[j] - r * r).max(0.0);
                    partial[j] = down.sqrt();
                    if partial[j] < NORM_GUARD * reference[j] {
                        partial[j] = a.view((k + 1, j), (rows - k - 1, 1)).norm();
                        reference[j] = partial[j];
                    }
                }
            }
        }

        Self { packed: a, tau, perm }
    }

    fn diagonal(&self) -> Vec<f64> {
        (0..self.tau.len()).map(|i| self.packed[(i, i)]).collect()
    }

    /// Explicit thin `Q` (`rows x steps`).
    fn thin_q(&self) -> DMatrix<f64> {
        let rows = self.packed.nrows();
        let steps = self.tau.len();
        let mut q = DMatrix::<f64>::identity(rows, steps);
        for k in (0..steps).rev() {
            let t = self.tau[k];
            if t == 0.0 {
                continue;
            }
            for j in k..steps {
                let mut dot = q[(k, j)];
                for i in k + 1..rows {
                    dot += self.packed[(i, k)] * q[(i, j)];
                }
                let f = t * dot;
                q[(k, j)] -= f;
                for i in k + 1..rows {
                    q[(i, j)] -= f * self.packed[(i, k)];
                }
            }
        }
        q
    }
}

fn check_full_rank(diag: &[f64], rows: usize) -> Result<()> {
    let lead = diag.first().map(|d| d.abs()).unwrap_or(0.0);
    if lead == 0.0 || diag.iter().any(|d| d.is_nan() || d.abs() <= RANK_RATIO_TOL * lead) {
        return Err(SelectError::SingularInput { rows });
    }
    Ok(())
}

/// Greedy column pivoting: each step takes the column with the largest
/// component orthogonal to those already chosen. Ties go to the lowest index.
pub fn cpqr_pivots(x: &Matrix) -> Result<CpqrResult> {
    x.require_wide()?;
    let h = Householder::factor(x.as_dmatrix().clone(), true);
    let r_diagonal = h.diagonal();
    check_full_rank(&r_diagonal, x.rows())?;
    Ok(CpqrResult {
        pivot_order: h.perm,
        r_diagonal,
    })
}

/// Orthonormal basis `Q` of the row space of `X` from `X = L Q`, with the signs
/// fixed so that `diag(L) > 0`.
///
/// Volume ratios between column subsets of `Q` equal those of `X`.
pub fn lq_orthonormalize(x: &Matrix) -> Result<Matrix> {
    x.require_wide()?;
    let h = Householder::factor(x.as_dmatrix().transpose(), false);
    let diag = h.diagonal();
    check_full_rank(&diag, x.rows())?;
    let mut q = h.thin_q().transpose();
    for (i, d) in diag.iter().enumerate() {
        if *d < 0.0 {
            q.row_mut(i).neg_mut();
        }
    }
    Matrix::new(q)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gram_error(q: &Matrix) -> f64 {
        let g = q.as_dmatrix() * q.as_dmatrix().transpose();
        (g - DMatrix::<f64>::identity(q.rows(), q.rows())).amax()
    }

    #[test]
    fn first_pivot_is_largest_column() {
        let x = Matrix::from_row_slice(2, 2, &[2.0, 1.0, 0.0, 1.0]).unwrap();
        let r = cpqr_pivots(&x).unwrap();
        assert_eq!(r.pivot_order, vec![0, 1]);
        assert!((r.r_diagonal[0].abs() - 2.0).abs() < 1e-15);
    }

    #[test]
    fn orthogonal_columns_pick_by_norm() {
        let m = 4;
        let mut d = DMatrix::<f64>::zeros(m, m);
        for i in 0..m {
            d[(i, i)] = (m - i) as f64;
        }
        let r = cpqr_pivots(&Matrix::new(d).unwrap()).unwrap();
        assert_eq!(r.pivot_order, vec![0, 1, 2, 3]);

        let x = Matrix::from_row_slice(2, 4, &[1.0, 0.0, 3.0, 0.0, 0.0, 2.0, 0.0, 0.0]).unwrap();
        let r = cpqr_pivots(&x).unwrap();
        assert_eq!(r.basis(), &[2, 1]);
    }

    #[test]
    fn ties_go_to_lowest_index() {
        let x = Matrix::from_row_slice(2, 3, &[0.0, 1.0, 1.0, 1.0, 0.0, 0.0]).unwrap();
        let r = cpqr_pivots(&x).unwrap();
        assert_eq!(r.basis(), &[0, 1]);
    }

    #[test]
    fn rank_deficient_input_rejected() {
        let x = Matrix::from_row_slice(2, 3, &[1.0, 2.0, 3.0, 2.0, 4.0, 6.0]).unwrap();
        assert!(matches!(cpqr_pivots(&x), Err(SelectError::SingularInput { .. })));
        assert!(matches!(lq_orthonormalize(&x), Err(SelectError::SingularInput { .. })));
    }

    #[test]
    fn lq_of_diagonal_is_identity() {
        let x = Matrix::from_row_slice(2, 2, &[2.0, 0.0, 0.0, 3.0]).unwrap();
        let q = lq_orthonormalize(&x).unwrap();
        assert!((q.as_dmatrix() - DMatrix::<f64>::identity(2, 2)).amax() < 1e-15);
    }

    #[test]
    fn lq_is_idempotent_on_orthonormal_rows() {
        let x = Matrix::from_row_slice(
            3,
            5,
            &[1.0, 2.0, -1.0, 0.5, 0.3, 0.0, 1.0, 4.0, -2.0, 1.0, 2.0, -1.0, 0.0, 1.0, 3.0],
        )
        .unwrap();
        let q = lq_orthonormalize(&x).unwrap();
        assert!(gram_error(&q) < 1e-14);
        let q2 = lq_orthonormalize(&q).unwrap();
        assert!(gram_error(&q2) < 1e-14);
        assert!((q2.as_dmatrix() - q.as_dmatrix()).amax() < 1e-13);
    }

    #[test]
    fn cpqr_diagonal_non_increasing() {
        let x = Matrix::from_row_slice(
            3,
            6,
            &[
                0.2, -1.0, 2.5, 0.7, 0.0, 1.1, 1.4, 0.3, -0.6, 2.2, 0.9, -0.1, -0.8, 1.7, 0.4, 0.5,
                -1.3, 0.6,
            ],
        )
        .unwrap();
        let r = cpqr_pivots(&x).unwrap();
        let mut sorted = r.pivot_order.clone();
        sorted.sort();
        assert_eq!(sorted, (0..6).collect::<Vec<_>>());
        for w in r.r_diagonal.windows(2) {
            assert!(w[0].abs() >= w[1].abs() * (1.0 - 1e-12));
        }
    }
}
