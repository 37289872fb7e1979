//! Tensorial algebra over t-scalars.
//!
//! A t-scalar is a fixed-shape complex array `I1 x ... x IN` whose product is
//! the N-way circular convolution. The multi-way DFT turns that product into
//! an entry-wise one, so every t-matrix computation splits into
//! `I1 * ... * IN` independent complex-matrix computations ("Fourier
//! slices"). This crate provides:
//!
//! * [`tcore`]: [`TShape`], [`TScalar`] and the multi-way transform.
//! * [`tmat`]: [`TMatrix`] / [`TVector`], Fourier stacks and the Hermitian TSVD.
//! * [`tpca`]: canonical PCA and tensorial PCA (fit, features, reconstruction).
//! * [`compound`]: compound images built from pixel neighborhoods.
//! * [`bench`]: the MNIST reconstruction benchmark (IDX loading, sampling,
//!   PSNR, CSV/SVG/PGM reports).

pub mod bench;
pub mod compound;
mod error;
pub mod linalg;
pub mod parallel;
pub mod tcore;
pub mod tmat;
pub mod tpca;

pub use error::{Error, Result};
pub use num_complex::Complex64;
pub use parallel::Parallelism;
pub use tcore::{MultiIndex, TScalar, TShape};
pub use tmat::{FourierStack, TMatrix, TVector};

/// Storage precision for Fourier-domain training data.
///
/// Names follow the NumPy convention: `C64` is a pair of 32-bit floats,
/// `C128` a pair of 64-bit floats. Arithmetic is always carried out in 64-bit;
/// the precision only controls how cached transforms are held in memory.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum Precision {
    C64,
    #[default]
    C128,
}

impl Precision {
    pub fn name(self) -> &'static str {
        match self {
            Precision::C64 => "c64",
            Precision::C128 => "c128",
        }
    }

    pub fn bytes_per_value(self) -> usize {
        match self {
            Precision::C64 => 8,
            Precision::C128 => 16,
        }
    }
}

impl std::str::FromStr for Precision {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "c64" => Ok(Precision::C64),
            "c128" => Ok(Precision::C128),
            other => Err(Error::invalid(format!(
                "unknown precision `{other}` (expected c64 or c128)"
            ))),
        }
    }
}
