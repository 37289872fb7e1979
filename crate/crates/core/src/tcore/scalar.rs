use num_complex::Complex64;

use super::fft;
use super::shape::{MultiIndex, TShape};
use crate::error::{Error, Result};

/// An order-N complex array treated as a single number of the t-algebra.
///
/// Addition is entry-wise and multiplication is the N-way circular
/// convolution. Entries are stored row-major (last index fastest).
#[derive(Clone, Debug, PartialEq)]
pub struct TScalar {
    shape: TShape,
    data: Vec<Complex64>,
}

impl TScalar {
    pub fn from_vec(shape: TShape, data: Vec<Complex64>) -> Result<Self> {
        if data.len() != shape.slice_count() {
            return Err(Error::invalid(format!(
                "t-scalar of shape {shape} needs {} entries, got {}",
                shape.slice_count(),
                data.len()
            )));
        }
        Ok(TScalar { shape, data })
    }

    pub fn from_real(shape: TShape, data: &[f64]) -> Result<Self> {
        Self::from_vec(shape, data.iter().map(|&v| Complex64::new(v, 0.0)).collect())
    }

    pub fn zero(shape: &TShape) -> Self {
        TScalar {
            shape: shape.clone(),
            data: vec![Complex64::new(0.0, 0.0); shape.slice_count()],
        }
    }

    /// The convolution delta: 1 at `(1, ..., 1)`, 0 elsewhere.
    pub fn identity(shape: &TShape) -> Self {
        let mut out = Self::zero(shape);
        out.data[0] = Complex64::new(1.0, 0.0);
        out
    }

    pub fn shape(&self) -> &TShape {
        &self.shape
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn into_vec(self) -> Vec<Complex64> {
        self.data
    }

    pub fn get(&self, idx: &MultiIndex) -> Result<Complex64> {
        Ok(self.data[self.shape.linear(idx)?])
    }

    fn check_shape(&self, other: &TScalar, op: &str) -> Result<()> {
        if self.shape != other.shape {
            return Err(Error::invalid(format!(
                "t-scalar {op}: shapes {} and {} differ",
                self.shape, other.shape
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &TScalar) -> Result<TScalar> {
        self.check_shape(other, "addition")?;
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect();
        Ok(TScalar {
            shape: self.shape.clone(),
            data,
        })
    }

    pub fn scale(&self, factor: Complex64) -> TScalar {
        TScalar {
            shape: self.shape.clone(),
            data: self.data.iter().map(|v| v * factor).collect(),
        }
    }

    /// Circular-convolution product, evaluated through the multi-way DFT.
    pub fn mul(&self, other: &TScalar) -> Result<TScalar> {
        self.check_shape(other, "multiplication")?;
        if self.shape.slice_count() == 1 {
            return Ok(TScalar {
                shape: self.shape.clone(),
                data: vec![self.data[0] * other.data[0]],
            });
        }
        let dims = self.shape.dims();
        let mut a = fft::forward(&self.data, dims, 1);
        let b = fft::forward(&other.data, dims, 1);
        for (x, y) in a.iter_mut().zip(&b) {
            *x *= y;
        }
        fft::transform_in_place(&mut a, dims, 1, fft::Direction::Inverse);
        Ok(TScalar {
            shape: self.shape.clone(),
            data: a,
        })
    }

    /// The t-scalar whose transform is the entry-wise conjugate of this one's:
    /// complex conjugation composed with circular index reversal on every axis.
    pub fn conj(&self) -> TScalar {
        let mut data = vec![Complex64::new(0.0, 0.0); self.data.len()];
        for (k, v) in self.data.iter().enumerate() {
            data[self.shape.mirror(k)] = v.conj();
        }
        TScalar {
            shape: self.shape.clone(),
            data,
        }
    }

    pub fn dft(&self) -> TScalar {
        TScalar {
            shape: self.shape.clone(),
            data: fft::forward(&self.data, self.shape.dims(), 1),
        }
    }

    pub fn idft(&self) -> TScalar {
        TScalar {
            shape: self.shape.clone(),
            data: fft::inverse(&self.data, self.shape.dims(), 1),
        }
    }

    pub fn norm(&self) -> f64 {
        self.data.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt()
    }
}
