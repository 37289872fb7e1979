use faer::Mat;
use num_complex::Complex64;

use super::matrix::TMatrix;
use super::stack::FourierStack;
use crate::error::{Error, Result};
use crate::linalg;
use crate::parallel::Parallelism;

/// Maximum relative deviation from Hermitian symmetry accepted per slice.
pub const HERMITIAN_TOLERANCE: f64 = 1e-8;

/// `G = U o S o U*` for a Hermitian positive semidefinite t-matrix `G`.
#[derive(Clone, Debug)]
pub struct Tsvd {
    /// Unitary t-matrix: `U* o U = I`.
    pub u: TMatrix,
    /// Diagonal t-matrix; every Fourier slice is real, nonnegative and
    /// sorted in descending order.
    pub s: TMatrix,
}

/// Slice-wise Hermitian eigendecomposition of a square t-matrix.
///
/// Eigenvector phases are left as the solver returns them. Within a block of
/// equal eigenvalues the columns of `U` are an arbitrary orthonormal basis of
/// that eigenspace.
pub fn tsvd_hermitian(g: &TMatrix, par: Parallelism) -> Result<Tsvd> {
    if g.rows() != g.cols() {
        return Err(Error::invalid(format!(
            "TSVD needs a square t-matrix, got {}x{}",
            g.rows(),
            g.cols()
        )));
    }
    let n = g.rows();
    let stack = g.to_fourier_stack();
    let parts = par.try_map(stack.slice_count(), |k| {
        let slice = stack.slice(k);
        let defect = linalg::hermitian_defect(slice);
        if defect > HERMITIAN_TOLERANCE {
            return Err(Error::domain(format!(
                "Fourier slice {} is not Hermitian (relative defect {defect:e})",
                stack.shape().multi_index(k)
            )));
        }
        let eig = linalg::hermitian_psd_eigen(slice)
            .map_err(|e| e.context(format!("Fourier slice {}", stack.shape().multi_index(k))))?;
        let s = Mat::<Complex64>::from_fn(n, n, |r, c| {
            if r == c {
                Complex64::new(eig.values[r], 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        });
        Ok((eig.vectors, s))
    })?;
    let (us, ss): (Vec<_>, Vec<_>) = parts.into_iter().unzip();
    let u = FourierStack::from_slices(stack.shape().clone(), &us)?.to_tmatrix();
    let s = FourierStack::from_slices(stack.shape().clone(), &ss)?.to_tmatrix();
    Ok(Tsvd { u, s })
}
