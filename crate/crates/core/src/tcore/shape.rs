use std::fmt;

use crate::error::{Error, Result};

/// The shape `I1 x ... x IN` shared by every t-scalar of a computation.
///
/// Linear order is row-major (last index fastest). An empty `dims` list is the
/// order-zero shape, equivalent to canonical scalars.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TShape {
    dims: Vec<usize>,
}

impl TShape {
    pub fn new(dims: impl Into<Vec<usize>>) -> Result<Self> {
        let dims = dims.into();
        if let Some(pos) = dims.iter().position(|&d| d == 0) {
            return Err(Error::invalid(format!(
                "t-scalar shape {dims:?} has a zero extent on axis {}",
                pos + 1
            )));
        }
        Ok(TShape { dims })
    }

    /// Order-zero shape: t-scalars are plain complex numbers.
    pub fn scalar() -> Self {
        TShape { dims: Vec::new() }
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    /// Number of axes `N`.
    pub fn order(&self) -> usize {
        self.dims.len()
    }

    /// `I1 * ... * IN`, the number of entries of a t-scalar and the number of
    /// Fourier slices of a t-matrix.
    pub fn slice_count(&self) -> usize {
        self.dims.iter().product()
    }

    /// True when every extent is 1, i.e. the algebra is the complex field.
    pub fn is_trivial(&self) -> bool {
        self.dims.iter().all(|&d| d == 1)
    }

    pub fn linear(&self, idx: &MultiIndex) -> Result<usize> {
        if idx.0.len() != self.dims.len() {
            return Err(Error::invalid(format!(
                "multi-index {idx} has {} components, shape {self} has {}",
                idx.0.len(),
                self.dims.len()
            )));
        }
        let mut linear = 0;
        for (axis, (&i, &extent)) in idx.0.iter().zip(&self.dims).enumerate() {
            if i == 0 || i > extent {
                return Err(Error::invalid(format!(
                    "multi-index {idx} is out of bounds for shape {self} on axis {}",
                    axis + 1
                )));
            }
            linear = linear * extent + (i - 1);
        }
        Ok(linear)
    }

    /// Zero-based coordinates of a linear position.
    pub fn coords(&self, mut linear: usize) -> Vec<usize> {
        let mut out = vec![0; self.dims.len()];
        for (slot, &extent) in out.iter_mut().zip(&self.dims).rev() {
            *slot = linear % extent;
            linear /= extent;
        }
        out
    }

    pub fn multi_index(&self, linear: usize) -> MultiIndex {
        MultiIndex(self.coords(linear).into_iter().map(|c| c + 1).collect())
    }

    /// Linear position of zero-based coordinates (no bounds check beyond debug).
    pub fn linear_from_coords(&self, coords: &[usize]) -> usize {
        debug_assert_eq!(coords.len(), self.dims.len());
        coords
            .iter()
            .zip(&self.dims)
            .fold(0, |acc, (&c, &extent)| acc * extent + c)
    }

    /// Axis-wise circular reversal `i -> (I - i) mod I` (zero-based). In the
    /// frequency domain this pairs a frequency with its conjugate partner.
    pub fn mirror(&self, linear: usize) -> usize {
        let coords: Vec<usize> = self
            .coords(linear)
            .into_iter()
            .zip(&self.dims)
            .map(|(c, &extent)| (extent - c) % extent)
            .collect();
        self.linear_from_coords(&coords)
    }

    /// `((I1+1)/2, ..., (IN+1)/2)`; every extent must be odd.
    pub fn center(&self) -> Result<MultiIndex> {
        if let Some(pos) = self.dims.iter().position(|&d| d % 2 == 0) {
            return Err(Error::invalid(format!(
                "shape {self} has an even extent on axis {}; no central index",
                pos + 1
            )));
        }
        Ok(MultiIndex(self.dims.iter().map(|&d| d.div_ceil(2)).collect()))
    }
}

impl fmt::Display for TShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.dims.is_empty() {
            return f.write_str("()");
        }
        let parts: Vec<String> = self.dims.iter().map(|d| d.to_string()).collect();
        f.write_str(&parts.join("x"))
    }
}

/// A 1-based multi-index `(i1, ..., iN)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MultiIndex(Vec<usize>);

impl MultiIndex {
    pub fn new(indices: impl Into<Vec<usize>>) -> Self {
        MultiIndex(indices.into())
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|d| d.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}
