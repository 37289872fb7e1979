//! Reconstruction experiments over the variant grid.
//!
//! Only the central spatial slice of each reconstruction is scored, so the
//! inverse multi-way transform is never formed in full: the central slice is
//! `(1/M) sum_f X(f) w(f)` where `X(f)` is Fourier slice `f` and `w(f)` the
//! phase of frequency `f` at the center index. For real images the slices of
//! a conjugate pair contribute complex-conjugate terms, so only one slice per
//! pair is fitted and its term is doubled.
//!
//! Two engines produce the Fourier slices:
//!
//! * materialized: compound images are built as t-vectors and fitted with
//!   [`TpcaModel::fit`];
//! * streaming: each slice is computed straight from the images with
//!   [`SliceTransform`] and its model is dropped once scored, so memory does
//!   not grow with the number of slices.

use std::f64::consts::TAU;
use std::time::{Duration, Instant};

use faer::{Mat, MatRef};
use num_complex::{Complex32, Complex64};

use super::psnr::{self, MAX_VALUE};
use super::sample::Dataset;
use super::variant::Variant;
use crate::compound::{extend, image_to_tvector, Image, SliceTransform, Strategy};
use crate::error::{Error, Result};
use crate::parallel::Parallelism;
use crate::tpca::{FitOptions, PcaModel, SliceModel, TpcaModel, REALNESS_TOLERANCE};
use crate::{FourierStack, Precision};

/// Memory estimate above which [`Engine::Auto`] switches to streaming.
pub const MATERIALIZE_BUDGET: usize = 1 << 30;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Engine {
    #[default]
    Auto,
    Materialized,
    Streaming,
}

impl Engine {
    pub fn name(self) -> &'static str {
        match self {
            Engine::Auto => "auto",
            Engine::Materialized => "materialized",
            Engine::Streaming => "streaming",
        }
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct ExperimentOptions {
    /// Storage precision; `None` picks c64 for TPCA-B and c128 otherwise.
    pub precision: Option<Precision>,
    pub parallelism: Parallelism,
    pub engine: Engine,
}

impl ExperimentOptions {
    pub fn precision_for(&self, variant: Variant) -> Precision {
        self.precision.unwrap_or(match variant {
            Variant::TpcaB => Precision::C64,
            _ => Precision::C128,
        })
    }

    fn engine_for(&self, strategy: Strategy, precision: Precision, k: usize, q: usize, d: usize) -> Result<Engine> {
        if self.engine != Engine::Auto {
            return Ok(self.engine);
        }
        let m = strategy.shape()?.slice_count();
        let per_slice = k * d * (16 + precision.bytes_per_value()) + d * d * 16 + q * d * 16;
        Ok(if m.saturating_mul(per_slice) <= MATERIALIZE_BUDGET {
            Engine::Materialized
        } else {
            Engine::Streaming
        })
    }
}

/// Scores of one variant over the dimension grid.
#[derive(Clone, Debug)]
pub struct VariantReport {
    pub variant: Variant,
    pub precision: Precision,
    pub engine: Engine,
    /// `[d][image]` squared error of the central slice against the source image.
    pub squared_errors: Vec<Vec<f64>>,
    /// `[d]` PSNR over all query images stacked together.
    pub aggregate_db: Vec<f64>,
    /// `[d][image]` single-image PSNR.
    pub per_image_db: Vec<Vec<f64>>,
    pub elapsed: Duration,
}

#[derive(Clone, Debug)]
pub struct PsnrReport {
    pub dims: Vec<usize>,
    pub pixels_per_image: usize,
    pub query_labels: Vec<u8>,
    pub variants: Vec<VariantReport>,
}

impl PsnrReport {
    pub fn variant(&self, v: Variant) -> Option<&VariantReport> {
        self.variants.iter().find(|r| r.variant == v)
    }

    pub fn aggregate(&self, v: Variant, d: usize) -> Option<f64> {
        let t = self.dims.iter().position(|&x| x == d)?;
        Some(self.variant(v)?.aggregate_db[t])
    }

    /// Query indices ordered by ascending per-image PSNR of PCA (or of the
    /// first variant when PCA was not run) at `dims[t]`; ties keep index order.
    pub fn sort_order(&self, t: usize) -> Vec<usize> {
        let key = self
            .variant(Variant::Pca)
            .or(self.variants.first())
            .map(|r| &r.per_image_db[t]);
        let mut order: Vec<usize> = (0..self.query_labels.len()).collect();
        if let Some(key) = key {
            order.sort_by(|&a, &b| key[a].total_cmp(&key[b]));
        }
        order
    }
}

pub fn run_experiment(
    dataset: &Dataset,
    variants: &[Variant],
    dims: &[usize],
    options: &ExperimentOptions,
) -> Result<PsnrReport> {
    let train: Vec<Image> = dataset.train.iter().map(|x| x.image.clone()).collect();
    let query: Vec<Image> = dataset.query.iter().map(|x| x.image.clone()).collect();
    let pixels = query
        .first()
        .map(|q| q.rows() * q.cols())
        .ok_or_else(|| Error::invalid("no query images"))?;
    let mut reports = Vec::with_capacity(variants.len());
    for &variant in variants {
        reports.push(run_variant(&train, &query, variant, dims, options)?);
    }
    Ok(PsnrReport {
        dims: dims.to_vec(),
        pixels_per_image: pixels,
        query_labels: dataset.query.iter().map(|x| x.label).collect(),
        variants: reports,
    })
}

pub fn run_variant(
    train: &[Image],
    query: &[Image],
    variant: Variant,
    dims: &[usize],
    options: &ExperimentOptions,
) -> Result<VariantReport> {
    let start = Instant::now();
    let precision = options.precision_for(variant);
    let (centers, engine) = reconstruct_centers(train, query, variant, dims, options)
        .map_err(|e| e.context(format!("variant {variant}")))?;
    let targets: Vec<Vec<f64>> = query.iter().map(Image::raster).collect();
    let pixels = targets[0].len();
    let mut squared_errors = Vec::with_capacity(dims.len());
    let mut aggregate_db = Vec::with_capacity(dims.len());
    let mut per_image_db = Vec::with_capacity(dims.len());
    for rec in &centers {
        let errs: Vec<f64> = targets
            .iter()
            .enumerate()
            .map(|(i, x)| (0..pixels).map(|j| (x[j] - rec[(i, j)]).powi(2)).sum())
            .collect();
        let total: f64 = errs.iter().sum();
        aggregate_db.push(psnr::from_squared_error(total, pixels * errs.len(), MAX_VALUE)?);
        per_image_db.push(
            errs.iter()
                .map(|&e| psnr::from_squared_error(e, pixels, MAX_VALUE))
                .collect::<Result<Vec<_>>>()?,
        );
        squared_errors.push(errs);
    }
    Ok(VariantReport {
        variant,
        precision,
        engine,
        squared_errors,
        aggregate_db,
        per_image_db,
        elapsed: start.elapsed(),
    })
}

/// Central-slice reconstructions of every query image, one `Q x D` matrix per
/// entry of `dims` (rows are column-major raster vectors). PCA runs through
/// [`PcaModel`]; the other variants through the tensorial engines.
pub fn reconstruct_centers(
    train: &[Image],
    query: &[Image],
    variant: Variant,
    dims: &[usize],
    options: &ExperimentOptions,
) -> Result<(Vec<Mat<f64>>, Engine)> {
    if variant == Variant::Pca {
        return Ok((pca_centers(train, query, dims)?, Engine::Materialized));
    }
    let precision = options.precision_for(variant);
    let (k, q, d) = check_inputs(train, query, dims)?;
    let engine = options.engine_for(variant.strategy(), precision, k, q, d)?;
    let out = tpca_centers(train, query, variant.strategy(), dims, precision, options.parallelism, engine)?;
    Ok((out, engine))
}

fn check_inputs(train: &[Image], query: &[Image], dims: &[usize]) -> Result<(usize, usize, usize)> {
    let first = train.first().ok_or_else(|| Error::invalid("no training images"))?;
    let (rows, cols) = (first.rows(), first.cols());
    if query.is_empty() {
        return Err(Error::invalid("no query images"));
    }
    if train.len() < 2 {
        return Err(Error::invalid("at least 2 training images are needed"));
    }
    if train.iter().chain(query).any(|x| x.rows() != rows || x.cols() != cols) {
        return Err(Error::invalid("all images must share one size"));
    }
    let d = rows * cols;
    let mut prev = 0;
    for &x in dims {
        if x <= prev || x > d {
            return Err(Error::invalid(format!(
                "feature dimensions must be increasing within 1..={d}, got {dims:?}"
            )));
        }
        prev = x;
    }
    if dims.is_empty() {
        return Err(Error::invalid("no feature dimensions requested"));
    }
    Ok((train.len(), query.len(), d))
}

/// Canonical PCA on raster vectors.
pub fn pca_centers(train: &[Image], query: &[Image], dims: &[usize]) -> Result<Vec<Mat<f64>>> {
    let (_, q, d) = check_inputs(train, query, dims)?;
    let rows = |set: &[Image]| {
        let r: Vec<Vec<f64>> = set.iter().map(Image::raster).collect();
        Mat::from_fn(set.len(), d, |i, j| r[i][j])
    };
    let model = PcaModel::fit_rows(rows(train).as_ref())?;
    let qm = rows(query);
    debug_assert_eq!(qm.nrows(), q);
    let features = model.features(qm.as_ref())?;
    model.reconstruct_prefixes(features.as_ref(), dims)
}

/// Tensorial PCA for an arbitrary strategy (including [`Strategy::Plain`]).
pub fn tpca_centers(
    train: &[Image],
    query: &[Image],
    strategy: Strategy,
    dims: &[usize],
    precision: Precision,
    par: Parallelism,
    engine: Engine,
) -> Result<Vec<Mat<f64>>> {
    let (k, q, d) = check_inputs(train, query, dims)?;
    let shape = strategy.shape()?;
    let m = shape.slice_count();
    let reps: Vec<usize> = (0..m).filter(|&s| shape.mirror(s) >= s).collect();
    let phase = |s: usize| {
        let theta: f64 = shape
            .coords(s)
            .iter()
            .zip(shape.dims())
            .map(|(&f, &n)| ((f * (n / 2)) % n) as f64 / n as f64)
            .sum();
        Complex64::from_polar(1.0 / m as f64, TAU * theta)
    };
    let shape_ref = &shape;
    let score = |s: usize, model: &SliceModel, queries: MatRef<'_, Complex64>| {
        contribution(model, queries, dims, phase(s), shape_ref.mirror(s) != s)
    };

    match engine {
        Engine::Streaming | Engine::Auto => {
            let tf = SliceTransform::new(strategy)?;
            accumulate(&reps, par, q, d, dims.len(), |s| {
                let slices: Vec<Vec<Complex64>> = train
                    .iter()
                    .map(|img| store(tf.slice(img, s), precision))
                    .collect();
                let model = if shape.mirror(s) == s {
                    SliceModel::fit_real(Mat::from_fn(k, d, |i, j| slices[i][j].re).as_ref())?
                } else {
                    SliceModel::fit(Mat::from_fn(k, d, |i, j| slices[i][j]).as_ref())?
                };
                drop(slices);
                let qs: Vec<Vec<Complex64>> = query.iter().map(|img| tf.slice(img, s)).collect();
                score(s, &model, Mat::from_fn(q, d, |i, j| qs[i][j]).as_ref())
            })
            .map_err(|e| e.context(format!("shape {shape}")))
        }
        Engine::Materialized => {
            let tvectors = train
                .iter()
                .map(|img| Ok(image_to_tvector(&extend(img, strategy)?)))
                .collect::<Result<Vec<_>>>()?;
            let model = TpcaModel::fit(&tvectors, &FitOptions { parallelism: par, precision })?;
            drop(tvectors);
            let stacks = query
                .iter()
                .map(|img| Ok(image_to_tvector(&extend(img, strategy)?).to_fourier_stack()))
                .collect::<Result<Vec<FourierStack>>>()?;
            accumulate(&reps, par, q, d, dims.len(), |s| {
                let qm = Mat::from_fn(q, d, |i, j| stacks[i].slice(s)[(j, 0)]);
                score(s, &model.slices()[s], qm.as_ref())
            })
            .map_err(|e| e.context(format!("shape {shape}")))
        }
    }
}

fn store(values: Vec<Complex64>, precision: Precision) -> Vec<Complex64> {
    match precision {
        Precision::C128 => values,
        Precision::C64 => values
            .into_iter()
            .map(|z| {
                let r = Complex32::new(z.re as f32, z.im as f32);
                Complex64::new(r.re.into(), r.im.into())
            })
            .collect(),
    }
}

struct Contribution {
    re: Vec<Mat<f64>>,
    /// Imaginary part, kept only for self-conjugate slices (paired slices
    /// cancel exactly).
    im: Option<Vec<Mat<f64>>>,
}

fn contribution(
    model: &SliceModel,
    queries: MatRef<'_, Complex64>,
    dims: &[usize],
    phase: Complex64,
    paired: bool,
) -> Result<Contribution> {
    let features = model.features(queries);
    let recs = model.reconstruct_prefixes(features.as_ref(), dims)?;
    let (q, d) = (queries.nrows(), queries.ncols());
    let weight = if paired { 2.0 } else { 1.0 };
    let re = recs
        .iter()
        .map(|r| Mat::from_fn(q, d, |i, j| weight * (r[(i, j)] * phase).re))
        .collect();
    let im = (!paired).then(|| {
        recs.iter()
            .map(|r| Mat::from_fn(q, d, |i, j| (r[(i, j)] * phase).im))
            .collect()
    });
    Ok(Contribution { re, im })
}

/// Sums slice contributions in slice order, evaluating batches in parallel.
fn accumulate<F>(reps: &[usize], par: Parallelism, q: usize, d: usize, n: usize, f: F) -> Result<Vec<Mat<f64>>>
where
    F: Fn(usize) -> Result<Contribution> + Sync + Send,
{
    let mut re = vec![Mat::<f64>::zeros(q, d); n];
    let mut im = vec![Mat::<f64>::zeros(q, d); n];
    for batch in reps.chunks(2 * par.threads()) {
        let parts = par.try_map(batch.len(), |i| {
            f(batch[i]).map_err(|e| e.context(format!("Fourier slice {}", batch[i])))
        })?;
        for part in parts {
            add_into(&mut re, &part.re);
            if let Some(pim) = &part.im {
                add_into(&mut im, pim);
            }
        }
    }
    for (r, i) in re.iter().zip(&im) {
        let norm = r.norm_l2();
        let worst = (0..d)
            .flat_map(|j| (0..q).map(move |k| (k, j)))
            .map(|(k, j)| i[(k, j)].abs())
            .fold(0.0, f64::max);
        if worst > REALNESS_TOLERANCE * norm {
            return Err(Error::domain(format!(
                "reconstruction of real images has imaginary part {worst:e} (norm {norm:e})"
            )));
        }
    }
    Ok(re)
}

fn add_into(acc: &mut [Mat<f64>], part: &[Mat<f64>]) {
    for (a, p) in acc.iter_mut().zip(part) {
        for j in 0..a.ncols() {
            for i in 0..a.nrows() {
                a[(i, j)] += p[(i, j)];
            }
        }
    }
}
