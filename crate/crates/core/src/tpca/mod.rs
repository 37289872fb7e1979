//! Canonical PCA and tensorial PCA.
//!
//! Tensorial PCA is fitted slice by slice in the Fourier domain: every
//! frequency multi-index gets its own mean vector, covariance matrix and
//! unitary basis. For real training data the slices at a frequency and at its
//! axis-wise mirror are complex conjugates, so only one of each pair is
//! decomposed and the partner is obtained by conjugation. That keeps
//! reconstructions of real inputs real to round-off.

mod io;
mod pca;
mod slice;
mod tensorial;

pub use io::{read_model, write_model, MODEL_MAGIC, MODEL_VERSION};
pub use pca::PcaModel;
pub use slice::{SliceBuffer, SliceModel};
pub use tensorial::{FitOptions, TpcaModel, REALNESS_TOLERANCE};
