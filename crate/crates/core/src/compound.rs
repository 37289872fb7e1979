//! Compound images: every pixel replaced by a t-scalar built from its
//! zero-padded neighborhood.
//!
//! Both neighborhood strategies are described by a list of axes, each with an
//! odd extent and a direction (vertical or horizontal). The entry of a
//! compound pixel at `(r, c)` and zero-based multi-index `m` is
//! `img(r + sum_vertical(m_k - c_k), c + sum_horizontal(m_k - c_k))` where
//! `c_k` is the axis center, and reads outside the image are 0.
//!
//! * Nested neighborhoods (strategy 1) with `r` reuses: axes
//!   `(3 vertical, 3 horizontal)` repeated `r` times; every nesting level reads
//!   the original image on an infinite zero-padded plane, so only the total
//!   offset matters.
//! * Windows (strategy 2) of odd size `w`: axes `(w vertical, w horizontal)`.

use std::f64::consts::TAU;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::tcore::{MultiIndex, TShape};
use crate::tmat::{TMatrix, TVector};

/// A monochrome image with pixel intensities on the raw 0..=255 scale,
/// stored row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct Image {
    rows: usize,
    cols: usize,
    pixels: Vec<f64>,
}

impl Image {
    pub fn new(rows: usize, cols: usize, pixels: Vec<f64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::invalid(format!("image size {rows}x{cols} is empty")));
        }
        if pixels.len() != rows * cols {
            return Err(Error::invalid(format!(
                "{rows}x{cols} image needs {} pixels, got {}",
                rows * cols,
                pixels.len()
            )));
        }
        Ok(Image { rows, cols, pixels })
    }

    pub fn from_bytes(rows: usize, cols: usize, bytes: &[u8]) -> Result<Self> {
        Self::new(rows, cols, bytes.iter().map(|&b| f64::from(b)).collect())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn pixels(&self) -> &[f64] {
        &self.pixels
    }

    /// Zero-based pixel access.
    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.pixels[row * self.cols + col]
    }

    /// Pixel access on the zero-padded infinite plane.
    pub fn padded(&self, row: isize, col: isize) -> f64 {
        if row < 0 || col < 0 || row as usize >= self.rows || col as usize >= self.cols {
            0.0
        } else {
            self.pixels[row as usize * self.cols + col as usize]
        }
    }

    /// Column-major raster vector (the vectorization used by both PCA and TPCA).
    pub fn raster(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.pixels.len());
        for c in 0..self.cols {
            for r in 0..self.rows {
                out.push(self.get(r, c));
            }
        }
        out
    }

    pub fn from_raster(rows: usize, cols: usize, raster: &[f64]) -> Result<Self> {
        if raster.len() != rows * cols {
            return Err(Error::invalid(format!(
                "raster of length {} does not fit {rows}x{cols}",
                raster.len()
            )));
        }
        let mut pixels = vec![0.0; rows * cols];
        for c in 0..cols {
            for r in 0..rows {
                pixels[r * cols + c] = raster[c * rows + r];
            }
        }
        Self::new(rows, cols, pixels)
    }
}

/// How a pixel is extended to a compound pixel.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Strategy {
    /// No extension: t-scalars of shape `(1,)`, i.e. canonical PCA.
    Plain,
    /// 3x3 neighborhoods nested `reuses` times: shape `3 x 3 x ... x 3`
    /// of order `2 * reuses`.
    Nested { reuses: usize },
    /// A single `size x size` window, `size` odd and at least 3.
    Window { size: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Direction {
    Vertical,
    Horizontal,
}

impl Strategy {
    pub fn validate(self) -> Result<()> {
        match self {
            Strategy::Plain => Ok(()),
            Strategy::Nested { reuses } if reuses >= 1 => Ok(()),
            Strategy::Nested { reuses } => Err(Error::invalid(format!(
                "neighborhood reuse count must be at least 1, got {reuses}"
            ))),
            Strategy::Window { size } if size >= 3 && size % 2 == 1 => Ok(()),
            Strategy::Window { size } => Err(Error::invalid(format!(
                "window size must be odd and at least 3, got {size}"
            ))),
        }
    }

    fn axes(self) -> Vec<(usize, Direction)> {
        match self {
            Strategy::Plain => vec![(1, Direction::Vertical)],
            Strategy::Nested { reuses } => (0..reuses)
                .flat_map(|_| [(3, Direction::Vertical), (3, Direction::Horizontal)])
                .collect(),
            Strategy::Window { size } => {
                vec![(size, Direction::Vertical), (size, Direction::Horizontal)]
            }
        }
    }

    pub fn shape(self) -> Result<TShape> {
        self.validate()?;
        TShape::new(self.axes().into_iter().map(|(n, _)| n).collect::<Vec<_>>())
    }

    /// `(vertical, horizontal)` source offset of every multi-index, in linear order.
    fn offsets(self) -> Result<Vec<(isize, isize)>> {
        let shape = self.shape()?;
        let axes = self.axes();
        Ok((0..shape.slice_count())
            .map(|k| {
                let mut off = (0isize, 0isize);
                for (&m, &(n, dir)) in shape.coords(k).iter().zip(&axes) {
                    let delta = m as isize - (n / 2) as isize;
                    match dir {
                        Direction::Vertical => off.0 += delta,
                        Direction::Horizontal => off.1 += delta,
                    }
                }
                off
            })
            .collect())
    }
}

/// An image whose pixels are t-scalars: a `rows x cols` t-matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct CompoundImage {
    matrix: TMatrix,
    strategy: Strategy,
}

impl CompoundImage {
    pub fn matrix(&self) -> &TMatrix {
        &self.matrix
    }

    pub fn strategy(&self) -> Strategy {
        self.strategy
    }

    pub fn shape(&self) -> &TShape {
        self.matrix.shape()
    }
}

pub fn extend(img: &Image, strategy: Strategy) -> Result<CompoundImage> {
    let shape = strategy.shape()?;
    let offsets = strategy.offsets()?;
    let (rows, cols) = (img.rows, img.cols);
    let mut data = Vec::with_capacity(offsets.len() * rows * cols);
    for &(dr, dc) in &offsets {
        for r in 0..rows {
            for c in 0..cols {
                data.push(Complex64::new(img.padded(r as isize + dr, c as isize + dc), 0.0));
            }
        }
    }
    Ok(CompoundImage {
        matrix: TMatrix::from_raw(shape, rows, cols, data)?,
        strategy,
    })
}

/// Nested 3x3 neighborhoods, `reuses` levels deep.
pub fn strategy1_extend(img: &Image, reuses: usize) -> Result<CompoundImage> {
    extend(img, Strategy::Nested { reuses })
}

/// A single odd `window x window` neighborhood.
pub fn strategy2_extend(img: &Image, window: usize) -> Result<CompoundImage> {
    extend(img, Strategy::Window { size: window })
}

/// Recasts a compound image to a t-vector of length `rows * cols`, taking the
/// compound pixels in column-major order.
pub fn image_to_tvector(img: &CompoundImage) -> TVector {
    let m = &img.matrix;
    let (rows, cols) = (m.rows(), m.cols());
    let block = rows * cols;
    let src = m.as_slice();
    let mut data = vec![Complex64::new(0.0, 0.0); src.len()];
    for (s, chunk) in src.chunks_exact(block).enumerate() {
        let dst = &mut data[s * block..(s + 1) * block];
        for r in 0..rows {
            for c in 0..cols {
                dst[c * rows + r] = chunk[r * cols + c];
            }
        }
    }
    TMatrix::from_raw(m.shape().clone(), block, 1, data).expect("sizes preserved")
}

/// Inverse of [`image_to_tvector`].
pub fn tvector_to_compound(
    x: &TVector,
    rows: usize,
    cols: usize,
    strategy: Strategy,
) -> Result<CompoundImage> {
    if x.cols() != 1 || x.rows() != rows * cols {
        return Err(Error::invalid(format!(
            "t-vector of length {} does not fit a {rows}x{cols} compound image",
            x.rows()
        )));
    }
    if &strategy.shape()? != x.shape() {
        return Err(Error::invalid(format!(
            "t-vector shape {} does not match strategy {strategy:?}",
            x.shape()
        )));
    }
    let block = rows * cols;
    let mut data = vec![Complex64::new(0.0, 0.0); x.as_slice().len()];
    for (s, chunk) in x.as_slice().chunks_exact(block).enumerate() {
        let dst = &mut data[s * block..(s + 1) * block];
        for r in 0..rows {
            for c in 0..cols {
                dst[r * cols + c] = chunk[c * rows + r];
            }
        }
    }
    Ok(CompoundImage {
        matrix: TMatrix::from_raw(x.shape().clone(), rows, cols, data)?,
        strategy,
    })
}

/// Component `idx` of every entry of `x`: a canonical vector of length `D`.
pub fn spatial_slice(x: &TVector, idx: &MultiIndex) -> Result<Vec<Complex64>> {
    if x.cols() != 1 {
        return Err(Error::invalid("spatial slices are taken from t-vectors"));
    }
    let k = x.shape().linear(idx)?;
    let d = x.rows();
    Ok(x.as_slice()[k * d..(k + 1) * d].to_vec())
}

/// The spatial slice at `((I1+1)/2, ..., (IN+1)/2)`; all extents must be odd.
pub fn central_spatial_slice(x: &TVector) -> Result<Vec<Complex64>> {
    let center = x.shape().center()?;
    spatial_slice(x, &center)
}

/// Computes Fourier slices of `image_to_tvector(extend(img, strategy))`
/// directly from the image, without materializing the compound image.
///
/// The phase factor of a frequency splits into a vertical and a horizontal
/// part, so each slice is a separable correlation of the image with two short
/// complex kernels.
#[derive(Clone, Debug)]
pub struct SliceTransform {
    strategy: Strategy,
    shape: TShape,
    axes: Vec<(usize, Direction)>,
}

impl SliceTransform {
    pub fn new(strategy: Strategy) -> Result<Self> {
        Ok(SliceTransform {
            shape: strategy.shape()?,
            axes: strategy.axes(),
            strategy,
        })
    }

    pub fn strategy(&self) -> Strategy {
        self.strategy
    }

    pub fn shape(&self) -> &TShape {
        &self.shape
    }

    /// `(center offset, weights)` of the kernel along one direction.
    fn kernel(&self, freq: &[usize], which: Direction) -> (isize, Vec<Complex64>) {
        let mut kernel = vec![Complex64::new(1.0, 0.0)];
        let mut reach = 0isize;
        for (&f, &(n, dir)) in freq.iter().zip(&self.axes) {
            if dir != which || n == 1 {
                continue;
            }
            let half = (n / 2) as isize;
            let taps: Vec<Complex64> = (0..n)
                .map(|m| Complex64::from_polar(1.0, -TAU * ((f * m) % n) as f64 / n as f64))
                .collect();
            let mut next = vec![Complex64::new(0.0, 0.0); kernel.len() + n - 1];
            for (i, a) in kernel.iter().enumerate() {
                for (j, b) in taps.iter().enumerate() {
                    next[i + j] += a * b;
                }
            }
            kernel = next;
            reach += half;
        }
        (reach, kernel)
    }

    /// Fourier slice at zero-based linear frequency `k`, as a column-major
    /// raster vector of length `rows * cols`.
    pub fn slice(&self, img: &Image, k: usize) -> Vec<Complex64> {
        let freq = self.shape.coords(k);
        let (vr, vk) = self.kernel(&freq, Direction::Vertical);
        let (hr, hk) = self.kernel(&freq, Direction::Horizontal);
        let (rows, cols) = (img.rows, img.cols);

        // Horizontal pass: tmp(r, c) = sum_b h(b) img(r, c + b).
        let mut tmp = vec![Complex64::new(0.0, 0.0); rows * cols];
        for r in 0..rows {
            for c in 0..cols {
                let mut acc = Complex64::new(0.0, 0.0);
                for (j, w) in hk.iter().enumerate() {
                    let cc = c as isize + j as isize - hr;
                    if cc >= 0 && (cc as usize) < cols {
                        acc += w * img.get(r, cc as usize);
                    }
                }
                tmp[r * cols + c] = acc;
            }
        }
        // Vertical pass, written column-major.
        let mut out = vec![Complex64::new(0.0, 0.0); rows * cols];
        for c in 0..cols {
            for r in 0..rows {
                let mut acc = Complex64::new(0.0, 0.0);
                for (i, w) in vk.iter().enumerate() {
                    let rr = r as isize + i as isize - vr;
                    if rr >= 0 && (rr as usize) < rows {
                        acc += w * tmp[rr as usize * cols + c];
                    }
                }
                out[c * rows + r] = acc;
            }
        }
        out
    }
}
