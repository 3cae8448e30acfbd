//! Small dense kernels shared by the selection routines.

use nalgebra::DMatrix;

/// Relative pivot threshold below which a Gram matrix is declared singular.
pub(crate) const RANK_PIVOT_TOL: f64 = 1e-12;

/// Lower Cholesky factor of a symmetric matrix, or `None` when some pivot
/// falls below `RANK_PIVOT_TOL` times the largest diagonal entry.
pub(crate) fn cholesky_checked(g: &DMatrix<f64>) -> Option<DMatrix<f64>> {
    let m = g.nrows();
    let max_diag = (0..m).map(|i| g[(i, i)]).fold(0.0_f64, f64::max);
    if max_diag.is_nan() || max_diag <= 0.0 {
        return None;
    }
    let floor = RANK_PIVOT_TOL * max_diag;
    let mut l = DMatrix::<f64>::zeros(m, m);
    for j in 0..m {
        let mut d = g[(j, j)];
        for p in 0..j {
            d -= l[(j, p)] * l[(j, p)];
        }
        if d.is_nan() || d <= floor {
            return None;
        }
        let ljj = d.sqrt();
        l[(j, j)] = ljj;
        for i in j + 1..m {
            let mut v = g[(i, j)];
            for p in 0..j {
                v -= l[(i, p)] * l[(j, p)];
            }
            l[(i, j)] = v / ljj;
        }
    }
    Some(l)
}

/// Sum of `ln L_ii`, i.e. half the log-determinant of `L L^T`.
pub(crate) fn half_log_det(l: &DMatrix<f64>) -> f64 {
    (0..l.nrows()).map(|i| l[(i, i)].ln()).sum()
}

/// `X_S X_S^T` accumulated column by column without forming `X_S`.
pub(crate) fn gram_of_columns(x: &DMatrix<f64>, cols: &[usize]) -> DMatrix<f64> {
    let m = x.nrows();
    let mut g = DMatrix::<f64>::zeros(m, m);
    for &j in cols {
        let c = x.column(j);
        g.ger(1.0, &c, &c, 1.0);
    }
    g
}
