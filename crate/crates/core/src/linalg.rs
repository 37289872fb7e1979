//! Dense Hermitian eigensolvers and matrix products used slice by slice.
//!
//! Backed by `faer`, always run single-threaded so that slice-level
//! parallelism is the only source of concurrency and results do not depend on
//! the thread count.

use faer::linalg::matmul::matmul;
use faer::traits::ComplexField;
use faer::{Accum, Mat, MatRef, Par, Side};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub use faer;

/// Relative tolerance below which negative eigenvalues are treated as
/// round-off and clamped to zero.
pub const PSD_TOLERANCE: f64 = 1e-8;

/// Eigendecomposition `A = V diag(values) V^H` with eigenvalues sorted in
/// descending order. Ties keep the solver's original order.
#[derive(Clone, Debug)]
pub struct Eigen<T> {
    pub values: Vec<f64>,
    pub vectors: Mat<T>,
}

/// Eigendecomposition of a Hermitian positive semidefinite matrix. Only the
/// lower triangle is read.
pub fn hermitian_psd_eigen(a: MatRef<'_, Complex64>) -> Result<Eigen<Complex64>> {
    let n = square(a.nrows(), a.ncols())?;
    let scale = a.norm_l2();
    let (raw, vectors) = run_evd(a, n)?;
    let values: Vec<f64> = raw.iter().map(|v| v.re).collect();
    finish(values, vectors, scale)
}

/// Real symmetric counterpart of [`hermitian_psd_eigen`].
pub fn symmetric_psd_eigen(a: MatRef<'_, f64>) -> Result<Eigen<f64>> {
    let n = square(a.nrows(), a.ncols())?;
    let scale = a.norm_l2();
    let (values, vectors) = run_evd(a, n)?;
    finish(values, vectors, scale)
}

fn square(rows: usize, cols: usize) -> Result<usize> {
    if rows != cols {
        return Err(Error::invalid(format!(
            "eigendecomposition needs a square matrix, got {rows}x{cols}"
        )));
    }
    Ok(rows)
}

fn run_evd<T: ComplexField>(a: MatRef<'_, T>, n: usize) -> Result<(Vec<T>, Mat<T>)> {
    if n == 0 {
        return Ok((Vec::new(), Mat::zeros(0, 0)));
    }
    let evd = a
        .self_adjoint_eigen(Side::Lower)
        .map_err(|e| Error::domain(format!("eigensolver did not converge: {e:?}")))?;
    let s = evd.S().column_vector();
    let values = (0..n).map(|i| s[i].clone()).collect();
    Ok((values, evd.U().to_owned()))
}

fn finish<T: Clone>(values: Vec<f64>, vectors: Mat<T>, scale: f64) -> Result<Eigen<T>> {
    if !scale.is_finite() || values.iter().any(|v| !v.is_finite()) {
        return Err(Error::domain("matrix has non-finite entries"));
    }
    let floor = -PSD_TOLERANCE * scale;
    if let Some(v) = values.iter().find(|&&v| v < floor) {
        return Err(Error::domain(format!(
            "eigenvalue {v:e} is negative beyond tolerance {floor:e}; matrix is not PSD"
        )));
    }
    let n = values.len();
    let mut order: Vec<usize> = (0..n).collect();
    // The solver reports ascending values; a stable sort keeps its order on ties.
    order.sort_by(|&i, &j| values[j].total_cmp(&values[i]));
    let sorted = order.iter().map(|&i| values[i].max(0.0)).collect();
    let vectors = Mat::from_fn(n, n, |r, c| vectors[(r, order[c])].clone());
    Ok(Eigen {
        values: sorted,
        vectors,
    })
}

/// `dst = lhs * rhs`, single-threaded.
pub fn mat_mul<T: ComplexField>(lhs: MatRef<'_, T>, rhs: MatRef<'_, T>) -> Mat<T> {
    let mut out = Mat::<T>::zeros(lhs.nrows(), rhs.ncols());
    matmul(out.as_mut(), Accum::Replace, lhs, rhs, T::one_impl(), Par::Seq);
    out
}

/// Largest entry-wise deviation from Hermitian symmetry, relative to the
/// Frobenius norm.
pub fn hermitian_defect(a: MatRef<'_, Complex64>) -> f64 {
    let norm = a.norm_l2();
    if norm == 0.0 {
        return 0.0;
    }
    let n = a.nrows();
    let mut worst = 0.0f64;
    for c in 0..n {
        for r in c..n {
            worst = worst.max((a[(r, c)] - a[(c, r)].conj()).norm());
        }
    }
    worst / norm
}
