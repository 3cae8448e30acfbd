use nalgebra::{DMatrix, DVectorView};

use crate::error::{contract, Result, SelectError};

/// Dense real matrix with finite entries.
///
/// Entries are addressed as `(row, column)`; columns are the objects being
/// selected. Full row rank is not stored here, it is established by the
/// factorizations that need it.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix {
    data: DMatrix<f64>,
}

impl Matrix {
    pub fn new(data: DMatrix<f64>) -> Result<Self> {
        if data.nrows() == 0 || data.ncols() == 0 {
            return Err(contract("matrix must have at least one row and one column"));
        }
        if let Some(pos) = data.iter().position(|v| !v.is_finite()) {
            return Err(contract(format!(
                "non-finite entry at ({}, {})",
                pos % data.nrows(),
                pos / data.nrows()
            )));
        }
        Ok(Self { data })
    }

    /// Builds a matrix from entries listed row by row.
    pub fn from_row_slice(rows: usize, cols: usize, entries: &[f64]) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(contract(format!(
                "expected {} entries for a {rows}x{cols} matrix, got {}",
                rows * cols,
                entries.len()
            )));
        }
        Self::new(DMatrix::from_row_slice(rows, cols, entries))
    }

    pub fn identity(n: usize) -> Self {
        Self {
            data: DMatrix::identity(n, n),
        }
    }

    pub fn rows(&self) -> usize {
        self.data.nrows()
    }

    pub fn cols(&self) -> usize {
        self.data.ncols()
    }

    pub fn column(&self, j: usize) -> DVectorView<'_, f64> {
        self.data.column(j)
    }

    pub fn as_dmatrix(&self) -> &DMatrix<f64> {
        &self.data
    }

    pub fn into_inner(self) -> DMatrix<f64> {
        self.data
    }

    /// Copies the listed columns, in order, into a new `rows x indices.len()` matrix.
    pub fn select_columns(&self, indices: &[usize]) -> DMatrix<f64> {
        DMatrix::from_fn(self.rows(), indices.len(), |i, p| self.data[(i, indices[p])])
    }

    /// Algorithms operate on wide matrices (`rows <= cols`).
    pub(crate) fn require_wide(&self) -> Result<()> {
        if self.rows() > self.cols() {
            return Err(SelectError::UnsupportedShape(format!(
                "need rows <= cols, got {}x{}",
                self.rows(),
                self.cols()
            )));
        }
        Ok(())
    }
}

impl TryFrom<DMatrix<f64>> for Matrix {
    type Error = SelectError;

    fn try_from(data: DMatrix<f64>) -> Result<Self> {
        Self::new(data)
    }
}
