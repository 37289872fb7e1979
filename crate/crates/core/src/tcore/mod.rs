//! T-scalars and the multi-way Fourier transform that diagonalizes their product.

pub mod fft;
mod scalar;
mod shape;

pub use scalar::TScalar;
pub use shape::{MultiIndex, TShape};
