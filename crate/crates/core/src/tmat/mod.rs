//! Vectors and matrices over the t-algebra, their Fourier-slice
//! decomposition, and the Hermitian TSVD.

mod matrix;
mod stack;
mod tsvd;

pub use matrix::{TMatrix, TVector};
pub use stack::FourierStack;
pub use tsvd::{tsvd_hermitian, Tsvd, HERMITIAN_TOLERANCE};
