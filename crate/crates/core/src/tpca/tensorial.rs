use faer::Mat;
use num_complex::Complex64;

use super::slice::{SliceBuffer, SliceModel};
use crate::error::{Error, Result};
use crate::parallel::Parallelism;
use crate::tcore::{fft, TShape};
use crate::tmat::{FourierStack, TMatrix, TVector};
use crate::Precision;

/// Largest imaginary part, relative to the Frobenius norm, that is discarded
/// when a real input comes back from the Fourier domain.
pub const REALNESS_TOLERANCE: f64 = 1e-6;

#[derive(Clone, Copy, Debug, Default)]
pub struct FitOptions {
    pub parallelism: Parallelism,
    /// Storage precision for the cached Fourier transforms of the training set.
    pub precision: Precision,
}

/// Tensorial PCA model: one [`SliceModel`] per Fourier slice.
///
/// Equivalent to the covariance t-matrix `G = 1/(K-1) sum (X_k - X)(X_k - X)*`
/// with TSVD `G = U o S o U*`: slice `k` holds the `k`-th Fourier slices of
/// the mean t-vector and of `U`, and the diagonal of slice `k` of `S`.
#[derive(Clone, Debug, PartialEq)]
pub struct TpcaModel {
    shape: TShape,
    dim: usize,
    count: usize,
    real: bool,
    slices: Vec<SliceModel>,
}

impl TpcaModel {
    pub fn fit(train: &[TVector], options: &FitOptions) -> Result<Self> {
        let first = train
            .first()
            .ok_or_else(|| Error::invalid("no training t-vectors"))?;
        if train.len() < 2 {
            return Err(Error::invalid(format!(
                "TPCA needs at least 2 training t-vectors, got {}",
                train.len()
            )));
        }
        let shape = first.shape().clone();
        let dim = first.rows();
        for (i, x) in train.iter().enumerate() {
            if x.shape() != &shape || x.rows() != dim || x.cols() != 1 {
                return Err(Error::invalid(format!(
                    "training t-vector {i} is {}x{} over {}, expected {dim}x1 over {shape}",
                    x.rows(),
                    x.cols(),
                    x.shape()
                )));
            }
        }
        let real = train.iter().all(TMatrix::is_real);
        let count = train.len();
        let slices = shape.slice_count();

        // slices x count x dim
        let mut buffer = SliceBuffer::zeros(options.precision, slices * count * dim);
        for (k, x) in train.iter().enumerate() {
            let transformed = fft::forward(x.as_slice(), shape.dims(), dim);
            for s in 0..slices {
                for d in 0..dim {
                    buffer.set((s * count + k) * dim + d, transformed[s * dim + d]);
                }
            }
        }
        let models = fit_slices(&shape, real, options.parallelism, |s| {
            let offset = s * count * dim;
            if real && shape.mirror(s) == s {
                SliceModel::fit_real(buffer.real_matrix(offset, count, dim).as_ref())
            } else {
                SliceModel::fit(buffer.matrix(offset, count, dim).as_ref())
            }
        })?;
        Ok(TpcaModel {
            shape,
            dim,
            count,
            real,
            slices: models,
        })
    }

    /// Assembles a model from per-slice parts (used by deserialization).
    pub fn from_parts(
        shape: TShape,
        count: usize,
        real: bool,
        slices: Vec<SliceModel>,
    ) -> Result<Self> {
        if slices.len() != shape.slice_count() {
            return Err(Error::invalid(format!(
                "shape {shape} needs {} slice models, got {}",
                shape.slice_count(),
                slices.len()
            )));
        }
        if count < 2 {
            return Err(Error::invalid("training count must be at least 2"));
        }
        let dim = slices[0].dim();
        if slices.iter().any(|s| s.dim() != dim) || dim == 0 {
            return Err(Error::invalid("slice models disagree on dimension"));
        }
        Ok(TpcaModel {
            shape,
            dim,
            count,
            real,
            slices,
        })
    }

    pub fn shape(&self) -> &TShape {
        &self.shape
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn training_count(&self) -> usize {
        self.count
    }

    /// Whether the model was fitted on real t-vectors.
    pub fn is_real(&self) -> bool {
        self.real
    }

    pub fn slices(&self) -> &[SliceModel] {
        &self.slices
    }

    pub fn slices_mut(&mut self) -> &mut [SliceModel] {
        &mut self.slices
    }

    /// The mean t-vector.
    pub fn mean(&self) -> TVector {
        let slices: Vec<Mat<Complex64>> = self
            .slices
            .iter()
            .map(|s| Mat::from_fn(self.dim, 1, |r, _| s.mean()[r]))
            .collect();
        let stack = FourierStack::from_slices(self.shape.clone(), &slices)
            .expect("slice models are consistent");
        self.realify(stack.to_tmatrix(), true)
            .expect("mean of a real model is real")
    }

    /// The unitary t-matrix `U`.
    pub fn basis(&self) -> TMatrix {
        let slices: Vec<Mat<Complex64>> = self.slices.iter().map(|s| s.basis().to_owned()).collect();
        FourierStack::from_slices(self.shape.clone(), &slices)
            .expect("slice models are consistent")
            .to_tmatrix()
    }

    /// The diagonal t-matrix `S`.
    pub fn spectrum(&self) -> TMatrix {
        let slices: Vec<Mat<Complex64>> = self
            .slices
            .iter()
            .map(|s| {
                Mat::from_fn(self.dim, self.dim, |r, c| {
                    if r == c {
                        Complex64::new(s.eigenvalues()[r], 0.0)
                    } else {
                        Complex64::new(0.0, 0.0)
                    }
                })
            })
            .collect();
        FourierStack::from_slices(self.shape.clone(), &slices)
            .expect("slice models are consistent")
            .to_tmatrix()
    }

    fn check_vector(&self, y: &TVector, what: &str) -> Result<()> {
        if y.shape() != &self.shape || y.rows() != self.dim || y.cols() != 1 {
            return Err(Error::invalid(format!(
                "{what} is {}x{} over {}, model expects {}x1 over {}",
                y.rows(),
                y.cols(),
                y.shape(),
                self.dim,
                self.shape
            )));
        }
        Ok(())
    }

    /// Feature t-vector `U* o (y - mean)`, full length.
    pub fn transform(&self, y: &TVector) -> Result<TVector> {
        self.check_vector(y, "query t-vector")?;
        let real_input = y.is_real();
        let stack = y.to_fourier_stack();
        let slices: Vec<Mat<Complex64>> = (0..self.slices.len())
            .map(|k| {
                let q = stack.slice(k).transpose().to_owned();
                self.slices[k].features(q.as_ref()).transpose().to_owned()
            })
            .collect();
        let out = FourierStack::from_slices(self.shape.clone(), &slices)?.to_tmatrix();
        self.realify(out, real_input)
    }

    /// `U[:, :d] o feature[:d] + mean`.
    pub fn reconstruct(&self, feature: &TVector, d: usize) -> Result<TVector> {
        self.check_vector(feature, "feature t-vector")?;
        if d == 0 || d > self.dim {
            return Err(Error::invalid(format!(
                "feature dimension {d} outside 1..={}",
                self.dim
            )));
        }
        let real_input = feature.is_real();
        let stack = feature.to_fourier_stack();
        let slices = (0..self.slices.len())
            .map(|k| {
                let f = stack.slice(k).transpose().to_owned();
                let r = self.slices[k].reconstruct_prefixes(f.as_ref(), &[d])?;
                Ok(r[0].transpose().to_owned())
            })
            .collect::<Result<Vec<_>>>()?;
        let out = FourierStack::from_slices(self.shape.clone(), &slices)?.to_tmatrix();
        self.realify(out, real_input)
    }

    /// Drops the imaginary part of a result that must be real: the model was
    /// fitted on real data and the input was real.
    fn realify(&self, out: TMatrix, real_input: bool) -> Result<TMatrix> {
        if !(self.real && real_input) {
            return Ok(out);
        }
        let norm = out.frobenius_norm();
        let imag = out.max_abs_imag();
        if imag > REALNESS_TOLERANCE * norm {
            return Err(Error::domain(format!(
                "result of a real input has imaginary part {imag:e} (norm {norm:e})"
            )));
        }
        Ok(out.real_part())
    }
}

/// Fits every slice of `shape`. For real data only one slice of each
/// conjugate pair is decomposed; its partner is the conjugate model.
pub(crate) fn fit_slices<F>(
    shape: &TShape,
    real: bool,
    par: Parallelism,
    fit: F,
) -> Result<Vec<SliceModel>>
where
    F: Fn(usize) -> Result<SliceModel> + Sync + Send,
{
    let slices = shape.slice_count();
    let reps: Vec<usize> = (0..slices)
        .filter(|&s| !real || shape.mirror(s) >= s)
        .collect();
    let fitted = par.try_map(reps.len(), |i| {
        fit(reps[i]).map_err(|e| e.context(format!("Fourier slice {}", shape.multi_index(reps[i]))))
    })?;
    let mut out: Vec<Option<SliceModel>> = vec![None; slices];
    for (&s, model) in reps.iter().zip(fitted) {
        out[s] = Some(model);
    }
    for s in 0..slices {
        if out[s].is_none() {
            let partner = out[shape.mirror(s)]
                .as_ref()
                .expect("representative fitted")
                .conjugate();
            out[s] = Some(partner);
        }
    }
    Ok(out.into_iter().map(|m| m.expect("all slices fitted")).collect())
}
