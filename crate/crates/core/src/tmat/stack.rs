use faer::{Mat, MatRef};
use num_complex::Complex64;

use super::matrix::TMatrix;
use crate::error::{Error, Result};
use crate::linalg;
use crate::parallel::Parallelism;
use crate::tcore::{fft, MultiIndex, TShape};

/// The Fourier slices of a transformed t-matrix: one complex `rows x cols`
/// matrix per frequency multi-index, in the canonical (row-major) order.
///
/// Entry `(r, c)` of slice `(i1, ..., iN)` is component `(i1, ..., iN)` of the
/// transformed t-scalar at `(r, c)`.
#[derive(Clone, Debug, PartialEq)]
pub struct FourierStack {
    shape: TShape,
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl FourierStack {
    pub(super) fn from_raw_unchecked(
        shape: TShape,
        rows: usize,
        cols: usize,
        data: Vec<Complex64>,
    ) -> Self {
        debug_assert_eq!(data.len(), shape.slice_count() * rows * cols);
        FourierStack {
            shape,
            rows,
            cols,
            data,
        }
    }

    pub fn from_slices(shape: TShape, slices: &[Mat<Complex64>]) -> Result<Self> {
        if slices.len() != shape.slice_count() {
            return Err(Error::invalid(format!(
                "shape {shape} has {} Fourier slices, got {}",
                shape.slice_count(),
                slices.len()
            )));
        }
        let (rows, cols) = (slices[0].nrows(), slices[0].ncols());
        if rows == 0 || cols == 0 {
            return Err(Error::invalid("Fourier slices must be non-empty"));
        }
        let mut data = Vec::with_capacity(slices.len() * rows * cols);
        for (k, s) in slices.iter().enumerate() {
            if s.nrows() != rows || s.ncols() != cols {
                return Err(Error::invalid(format!(
                    "slice {k} is {}x{}, expected {rows}x{cols}",
                    s.nrows(),
                    s.ncols()
                )));
            }
            for r in 0..rows {
                for c in 0..cols {
                    data.push(s[(r, c)]);
                }
            }
        }
        Ok(FourierStack {
            shape,
            rows,
            cols,
            data,
        })
    }

    pub fn shape(&self) -> &TShape {
        &self.shape
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn slice_count(&self) -> usize {
        self.shape.slice_count()
    }

    /// Slice at a zero-based linear frequency position.
    pub fn slice(&self, k: usize) -> MatRef<'_, Complex64> {
        let block = self.rows * self.cols;
        MatRef::from_row_major_slice(&self.data[k * block..(k + 1) * block], self.rows, self.cols)
    }

    pub fn slice_at(&self, idx: &MultiIndex) -> Result<MatRef<'_, Complex64>> {
        Ok(self.slice(self.shape.linear(idx)?))
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    /// Inverse multi-way DFT back to the spatial t-matrix.
    pub fn to_tmatrix(&self) -> TMatrix {
        let mut data = self.data.clone();
        fft::transform_in_place(
            &mut data,
            self.shape.dims(),
            self.rows * self.cols,
            fft::Direction::Inverse,
        );
        TMatrix::from_raw(self.shape.clone(), self.rows, self.cols, data)
            .expect("stack dimensions are validated on construction")
    }

    /// Slice-wise canonical product.
    pub fn mul(&self, other: &FourierStack, par: Parallelism) -> Result<FourierStack> {
        if self.shape != other.shape || self.cols != other.rows {
            return Err(Error::invalid(format!(
                "Fourier stack product: {}x{} over {} times {}x{} over {}",
                self.rows, self.cols, self.shape, other.rows, other.cols, other.shape
            )));
        }
        let products = par.map(self.slice_count(), |k| {
            linalg::mat_mul(self.slice(k), other.slice(k))
        });
        FourierStack::from_slices(self.shape.clone(), &products)
    }
}
