use num_complex::Complex64;

use super::stack::FourierStack;
use crate::error::{Error, Result};
use crate::parallel::Parallelism;
use crate::tcore::{fft, TScalar, TShape};

/// A `rows x cols` matrix of t-scalars, stored as one complex array of shape
/// `I1 x ... x IN x rows x cols` (row-major, so the matrix indices vary
/// fastest and every spatial slice is contiguous).
///
/// Matrix positions `(row, col)` are zero-based; t-scalar multi-indices are
/// one-based (see [`crate::MultiIndex`]).
#[derive(Clone, Debug, PartialEq)]
pub struct TMatrix {
    shape: TShape,
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

/// A t-vector is a single-column [`TMatrix`].
pub type TVector = TMatrix;

impl TMatrix {
    fn check_dims(rows: usize, cols: usize) -> Result<()> {
        if rows == 0 || cols == 0 {
            return Err(Error::invalid(format!(
                "t-matrix dimensions must be positive, got {rows}x{cols}"
            )));
        }
        Ok(())
    }

    /// Wraps a raw buffer in the `I1 x ... x IN x rows x cols` layout.
    pub fn from_raw(shape: TShape, rows: usize, cols: usize, data: Vec<Complex64>) -> Result<Self> {
        Self::check_dims(rows, cols)?;
        let expected = shape.slice_count() * rows * cols;
        if data.len() != expected {
            return Err(Error::invalid(format!(
                "t-matrix {rows}x{cols} over {shape} needs {expected} values, got {}",
                data.len()
            )));
        }
        Ok(TMatrix {
            shape,
            rows,
            cols,
            data,
        })
    }

    pub fn from_real_raw(shape: TShape, rows: usize, cols: usize, data: &[f64]) -> Result<Self> {
        let data = data.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        Self::from_raw(shape, rows, cols, data)
    }

    pub fn zeros(shape: &TShape, rows: usize, cols: usize) -> Result<Self> {
        Self::check_dims(rows, cols)?;
        Ok(TMatrix {
            shape: shape.clone(),
            rows,
            cols,
            data: vec![Complex64::new(0.0, 0.0); shape.slice_count() * rows * cols],
        })
    }

    /// `diag(E, ..., E)` with `E` the identity t-scalar.
    pub fn identity(shape: &TShape, dim: usize) -> Result<Self> {
        let mut out = Self::zeros(shape, dim, dim)?;
        for d in 0..dim {
            out.data[d * dim + d] = Complex64::new(1.0, 0.0);
        }
        Ok(out)
    }

    pub fn from_entries<F>(shape: &TShape, rows: usize, cols: usize, mut entry: F) -> Result<Self>
    where
        F: FnMut(usize, usize) -> TScalar,
    {
        let mut out = Self::zeros(shape, rows, cols)?;
        for r in 0..rows {
            for c in 0..cols {
                out.set_entry(r, c, &entry(r, c))?;
            }
        }
        Ok(out)
    }

    /// A t-vector from its t-scalar entries.
    pub fn tvector(entries: &[TScalar]) -> Result<Self> {
        let first = entries
            .first()
            .ok_or_else(|| Error::invalid("a t-vector needs at least one entry"))?;
        let shape = first.shape().clone();
        Self::from_entries(&shape, entries.len(), 1, |r, _| entries[r].clone())
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

    pub fn is_vector(&self) -> bool {
        self.cols == 1
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn into_vec(self) -> Vec<Complex64> {
        self.data
    }

    fn block(&self) -> usize {
        self.rows * self.cols
    }

    fn check_position(&self, row: usize, col: usize) -> Result<()> {
        if row >= self.rows || col >= self.cols {
            return Err(Error::invalid(format!(
                "position ({row},{col}) outside {}x{} t-matrix",
                self.rows, self.cols
            )));
        }
        Ok(())
    }

    pub fn entry(&self, row: usize, col: usize) -> Result<TScalar> {
        self.check_position(row, col)?;
        let offset = row * self.cols + col;
        let data = self
            .data
            .iter()
            .skip(offset)
            .step_by(self.block())
            .copied()
            .collect();
        TScalar::from_vec(self.shape.clone(), data)
    }

    pub fn set_entry(&mut self, row: usize, col: usize, value: &TScalar) -> Result<()> {
        self.check_position(row, col)?;
        if value.shape() != &self.shape {
            return Err(Error::invalid(format!(
                "entry of shape {} does not fit a t-matrix over {}",
                value.shape(),
                self.shape
            )));
        }
        let block = self.block();
        let offset = row * self.cols + col;
        for (k, v) in value.as_slice().iter().enumerate() {
            self.data[k * block + offset] = *v;
        }
        Ok(())
    }

    fn check_same(&self, other: &TMatrix, op: &str) -> Result<()> {
        if self.shape != other.shape || self.rows != other.rows || self.cols != other.cols {
            return Err(Error::invalid(format!(
                "t-matrix {op}: {}x{} over {} vs {}x{} over {}",
                self.rows, self.cols, self.shape, other.rows, other.cols, other.shape
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &TMatrix) -> Result<TMatrix> {
        self.check_same(other, "addition")?;
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect();
        Ok(TMatrix {
            data,
            ..self.clone_meta()
        })
    }

    pub fn sub(&self, other: &TMatrix) -> Result<TMatrix> {
        self.check_same(other, "subtraction")?;
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect();
        Ok(TMatrix {
            data,
            ..self.clone_meta()
        })
    }

    pub fn scale(&self, factor: Complex64) -> TMatrix {
        TMatrix {
            data: self.data.iter().map(|v| v * factor).collect(),
            ..self.clone_meta()
        }
    }

    fn clone_meta(&self) -> TMatrix {
        TMatrix {
            shape: self.shape.clone(),
            rows: self.rows,
            cols: self.cols,
            data: Vec::new(),
        }
    }

    /// T-matrix product, computed slice-wise in the Fourier domain.
    pub fn mul(&self, other: &TMatrix) -> Result<TMatrix> {
        self.mul_with(other, Parallelism::sequential())
    }

    pub fn mul_with(&self, other: &TMatrix, par: Parallelism) -> Result<TMatrix> {
        if self.shape != other.shape || self.cols != other.rows {
            return Err(Error::invalid(format!(
                "t-matrix product: {}x{} over {} times {}x{} over {}",
                self.rows, self.cols, self.shape, other.rows, other.cols, other.shape
            )));
        }
        let product = self.to_fourier_stack().mul(&other.to_fourier_stack(), par)?;
        Ok(product.to_tmatrix())
    }

    /// `result(c, r) = conj(self(r, c))` with t-scalar conjugation.
    pub fn conj_transpose(&self) -> TMatrix {
        let (rows, cols) = (self.rows, self.cols);
        let block = rows * cols;
        let mut data = vec![Complex64::new(0.0, 0.0); self.data.len()];
        for k in 0..self.shape.slice_count() {
            let m = self.shape.mirror(k);
            let src = &self.data[k * block..(k + 1) * block];
            let dst = &mut data[m * block..(m + 1) * block];
            for r in 0..rows {
                for c in 0..cols {
                    dst[c * rows + r] = src[r * cols + c].conj();
                }
            }
        }
        TMatrix {
            shape: self.shape.clone(),
            rows: cols,
            cols: rows,
            data,
        }
    }

    /// Multi-way DFT of every entry, regrouped into one complex matrix per
    /// frequency multi-index.
    pub fn to_fourier_stack(&self) -> FourierStack {
        let mut data = self.data.clone();
        fft::transform_in_place(&mut data, self.shape.dims(), self.block(), fft::Direction::Forward);
        FourierStack::from_raw_unchecked(self.shape.clone(), self.rows, self.cols, data)
    }

    /// The sub-t-matrix made of columns `start..end`.
    pub fn columns(&self, start: usize, end: usize) -> Result<TMatrix> {
        if start >= end || end > self.cols {
            return Err(Error::invalid(format!(
                "column range {start}..{end} invalid for {} columns",
                self.cols
            )));
        }
        let width = end - start;
        let mut data = Vec::with_capacity(self.shape.slice_count() * self.rows * width);
        for chunk in self.data.chunks_exact(self.block()) {
            for r in 0..self.rows {
                data.extend_from_slice(&chunk[r * self.cols + start..r * self.cols + end]);
            }
        }
        TMatrix::from_raw(self.shape.clone(), self.rows, width, data)
    }

    /// The sub-t-matrix made of rows `start..end`.
    pub fn row_range(&self, start: usize, end: usize) -> Result<TMatrix> {
        if start >= end || end > self.rows {
            return Err(Error::invalid(format!(
                "row range {start}..{end} invalid for {} rows",
                self.rows
            )));
        }
        let mut data = Vec::with_capacity(self.shape.slice_count() * (end - start) * self.cols);
        for chunk in self.data.chunks_exact(self.block()) {
            data.extend_from_slice(&chunk[start * self.cols..end * self.cols]);
        }
        TMatrix::from_raw(self.shape.clone(), end - start, self.cols, data)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs_imag(&self) -> f64 {
        self.data.iter().map(|v| v.im.abs()).fold(0.0, f64::max)
    }

    pub fn is_real(&self) -> bool {
        self.data.iter().all(|v| v.im == 0.0)
    }

    /// Copy with every imaginary part set to zero.
    pub fn real_part(&self) -> TMatrix {
        TMatrix {
            data: self.data.iter().map(|v| Complex64::new(v.re, 0.0)).collect(),
            ..self.clone_meta()
        }
    }

    /// Relative Frobenius distance `||self - other|| / max(||other||, tiny)`.
    pub fn relative_distance(&self, other: &TMatrix) -> Result<f64> {
        self.check_same(other, "comparison")?;
        let diff: f64 = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt();
        Ok(diff / other.frobenius_norm().max(f64::MIN_POSITIVE))
    }
}
