use faer::linalg::matmul::matmul;
use faer::{Accum, Mat, MatRef, Par};
use num_complex::{Complex32, Complex64};

use crate::error::{Error, Result};
use crate::linalg;
use crate::Precision;

/// Fourier-domain training data for a set of slices, `slices x count x dim`
/// row-major, held at the configured storage precision.
#[derive(Clone, Debug)]
pub enum SliceBuffer {
    C64(Vec<Complex32>),
    C128(Vec<Complex64>),
}

impl SliceBuffer {
    pub fn zeros(precision: Precision, len: usize) -> Self {
        match precision {
            Precision::C64 => SliceBuffer::C64(vec![Complex32::new(0.0, 0.0); len]),
            Precision::C128 => SliceBuffer::C128(vec![Complex64::new(0.0, 0.0); len]),
        }
    }

    pub fn len(&self) -> usize {
        match self {
            SliceBuffer::C64(v) => v.len(),
            SliceBuffer::C128(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn set(&mut self, pos: usize, value: Complex64) {
        match self {
            SliceBuffer::C64(v) => v[pos] = Complex32::new(value.re as f32, value.im as f32),
            SliceBuffer::C128(v) => v[pos] = value,
        }
    }

    pub fn get(&self, pos: usize) -> Complex64 {
        match self {
            SliceBuffer::C64(v) => Complex64::new(v[pos].re as f64, v[pos].im as f64),
            SliceBuffer::C128(v) => v[pos],
        }
    }

    /// Copies `rows x cols` values starting at `offset` into a complex matrix.
    pub fn matrix(&self, offset: usize, rows: usize, cols: usize) -> Mat<Complex64> {
        Mat::from_fn(rows, cols, |r, c| self.get(offset + r * cols + c))
    }

    /// Real parts of the same block.
    pub fn real_matrix(&self, offset: usize, rows: usize, cols: usize) -> Mat<f64> {
        Mat::from_fn(rows, cols, |r, c| self.get(offset + r * cols + c).re)
    }
}

/// Mean and `1/(K-1)`-normalized covariance of the rows of `samples`
/// (`K x D`, one observation per row).
pub(crate) fn real_covariance(samples: MatRef<'_, f64>) -> Result<(Vec<f64>, Mat<f64>)> {
    let (k, d) = (samples.nrows(), samples.ncols());
    check_count(k)?;
    let mean: Vec<f64> = (0..d)
        .map(|j| (0..k).map(|i| samples[(i, j)]).sum::<f64>() / k as f64)
        .collect();
    let centered = Mat::from_fn(k, d, |i, j| samples[(i, j)] - mean[j]);
    let mut g = Mat::<f64>::zeros(d, d);
    matmul(
        g.as_mut(),
        Accum::Replace,
        centered.transpose(),
        centered.as_ref(),
        1.0 / (k - 1) as f64,
        Par::Seq,
    );
    Ok((mean, g))
}

/// Complex counterpart of [`real_covariance`]: `1/(K-1) sum (x-m)(x-m)^H`.
pub(crate) fn complex_covariance(
    samples: MatRef<'_, Complex64>,
) -> Result<(Vec<Complex64>, Mat<Complex64>)> {
    let (k, d) = (samples.nrows(), samples.ncols());
    check_count(k)?;
    let scale = 1.0 / k as f64;
    let mean: Vec<Complex64> = (0..d)
        .map(|j| (0..k).map(|i| samples[(i, j)]).sum::<Complex64>() * scale)
        .collect();
    let centered = Mat::from_fn(k, d, |i, j| samples[(i, j)] - mean[j]);
    let mut g = Mat::<Complex64>::zeros(d, d);
    matmul(
        g.as_mut(),
        Accum::Replace,
        centered.transpose(),
        centered.conjugate(),
        Complex64::new(1.0 / (k - 1) as f64, 0.0),
        Par::Seq,
    );
    Ok((mean, g))
}

fn check_count(k: usize) -> Result<()> {
    if k < 2 {
        return Err(Error::invalid(format!(
            "covariance needs at least 2 training samples, got {k}"
        )));
    }
    Ok(())
}

/// Mean, unitary basis and spectrum of one Fourier slice.
#[derive(Clone, Debug, PartialEq)]
pub struct SliceModel {
    mean: Vec<Complex64>,
    basis: Mat<Complex64>,
    eigenvalues: Vec<f64>,
}

impl SliceModel {
    pub fn new(mean: Vec<Complex64>, basis: Mat<Complex64>, eigenvalues: Vec<f64>) -> Result<Self> {
        let d = mean.len();
        if basis.nrows() != d || basis.ncols() != d || eigenvalues.len() != d {
            return Err(Error::invalid(format!(
                "slice model parts disagree: mean {d}, basis {}x{}, eigenvalues {}",
                basis.nrows(),
                basis.ncols(),
                eigenvalues.len()
            )));
        }
        Ok(SliceModel {
            mean,
            basis,
            eigenvalues,
        })
    }

    /// Fits a slice from complex samples (`K x D`, one per row).
    pub fn fit(samples: MatRef<'_, Complex64>) -> Result<Self> {
        let (mean, g) = complex_covariance(samples)?;
        let eig = linalg::hermitian_psd_eigen(g.as_ref())?;
        Ok(SliceModel {
            mean,
            basis: eig.vectors,
            eigenvalues: eig.values,
        })
    }

    /// Fits a slice whose samples are real, through the real symmetric route.
    pub fn fit_real(samples: MatRef<'_, f64>) -> Result<Self> {
        let (mean, g) = real_covariance(samples)?;
        let eig = linalg::symmetric_psd_eigen(g.as_ref())?;
        let d = mean.len();
        Ok(SliceModel {
            mean: mean.into_iter().map(|v| Complex64::new(v, 0.0)).collect(),
            basis: Mat::from_fn(d, d, |r, c| Complex64::new(eig.vectors[(r, c)], 0.0)),
            eigenvalues: eig.values,
        })
    }

    /// The model of the conjugate-partner slice.
    pub fn conjugate(&self) -> Self {
        SliceModel {
            mean: self.mean.iter().map(|v| v.conj()).collect(),
            basis: Mat::from_fn(self.dim(), self.dim(), |r, c| self.basis[(r, c)].conj()),
            eigenvalues: self.eigenvalues.clone(),
        }
    }

    pub fn dim(&self) -> usize {
        self.mean.len()
    }

    pub fn mean(&self) -> &[Complex64] {
        &self.mean
    }

    pub fn basis(&self) -> MatRef<'_, Complex64> {
        self.basis.as_ref()
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    /// Multiplies basis column `col` by `factor`; used to probe phase invariance.
    pub fn rotate_column(&mut self, col: usize, factor: Complex64) {
        for r in 0..self.dim() {
            self.basis[(r, col)] *= factor;
        }
    }

    /// Full-length features `U^H (y - mean)` for each row of `queries` (`Q x D`).
    pub fn features(&self, queries: MatRef<'_, Complex64>) -> Mat<Complex64> {
        let centered = Mat::from_fn(queries.nrows(), self.dim(), |i, j| {
            queries[(i, j)] - self.mean[j]
        });
        let mut out = Mat::<Complex64>::zeros(queries.nrows(), self.dim());
        // Row form: f^T = (y - m)^T conj(U).
        matmul(
            out.as_mut(),
            Accum::Replace,
            centered.as_ref(),
            self.basis.conjugate(),
            Complex64::new(1.0, 0.0),
            Par::Seq,
        );
        out
    }

    /// `U[:, :d] f[:d] + mean` for each row of `features`, once per entry of
    /// `dims` (which must be increasing and within `1..=D`).
    pub fn reconstruct_prefixes(
        &self,
        features: MatRef<'_, Complex64>,
        dims: &[usize],
    ) -> Result<Vec<Mat<Complex64>>> {
        let d_full = self.dim();
        check_dims(dims, d_full)?;
        if features.ncols() != d_full {
            return Err(Error::invalid(format!(
                "features have {} columns, model dimension is {d_full}",
                features.ncols()
            )));
        }
        let q = features.nrows();
        let mut acc = Mat::from_fn(q, d_full, |_, j| self.mean[j]);
        let mut out = Vec::with_capacity(dims.len());
        let mut done = 0;
        for &d in dims {
            if d > done {
                matmul(
                    acc.as_mut(),
                    Accum::Add,
                    features.subcols(done, d - done),
                    self.basis.as_ref().subcols(done, d - done).transpose(),
                    Complex64::new(1.0, 0.0),
                    Par::Seq,
                );
                done = d;
            }
            out.push(acc.clone());
        }
        Ok(out)
    }
}

pub(crate) fn check_dims(dims: &[usize], full: usize) -> Result<()> {
    if dims.is_empty() {
        return Err(Error::invalid("no feature dimensions requested"));
    }
    let mut prev = 0;
    for &d in dims {
        if d == 0 || d > full {
            return Err(Error::invalid(format!(
                "feature dimension {d} outside 1..={full}"
            )));
        }
        if d < prev {
            return Err(Error::invalid("feature dimensions must be non-decreasing"));
        }
        prev = d;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn precision_round_trip() {
        let mut b = SliceBuffer::zeros(Precision::C64, 2);
        b.set(1, Complex64::new(0.1, -2.5));
        assert!((b.get(1) - Complex64::new(0.1, -2.5)).norm() < 1e-7);
        assert_eq!(b.len(), 2);
        let mut b = SliceBuffer::zeros(Precision::C128, 1);
        b.set(0, Complex64::new(0.1, -2.5));
        assert_eq!(b.get(0), Complex64::new(0.1, -2.5));
    }

    #[test]
    fn single_sample_rejected() {
        let x = Mat::<f64>::zeros(1, 3);
        assert!(SliceModel::fit_real(x.as_ref()).is_err());
    }

    #[test]
    fn conjugate_model_reconstructs_conjugate() {
        let x = Mat::<Complex64>::from_fn(5, 3, |i, j| {
            Complex64::new((i * 3 + j) as f64 * 0.4, (i as f64 - j as f64).sin())
        });
        let m = SliceModel::fit(x.as_ref()).unwrap();
        let mc = m.conjugate();
        let y = Mat::<Complex64>::from_fn(1, 3, |_, j| Complex64::new(j as f64, 1.0));
        let yc = Mat::<Complex64>::from_fn(1, 3, |_, j| y[(0, j)].conj());
        let r = m.reconstruct_prefixes(m.features(y.as_ref()).as_ref(), &[2]).unwrap();
        let rc = mc.reconstruct_prefixes(mc.features(yc.as_ref()).as_ref(), &[2]).unwrap();
        for j in 0..3 {
            assert!((r[0][(0, j)].conj() - rc[0][(0, j)]).norm() < 1e-12);
        }
    }

    #[test]
    fn dims_are_validated() {
        assert!(check_dims(&[], 4).is_err());
        assert!(check_dims(&[0], 4).is_err());
        assert!(check_dims(&[5], 4).is_err());
        assert!(check_dims(&[3, 2], 4).is_err());
        assert!(check_dims(&[1, 4], 4).is_ok());
    }
}
