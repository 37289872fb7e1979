//! C ABI for the talgebra library.
//!
//! Every function returns a [`TalgebraStatus`]. On failure the message is
//! available from [`talgebra_last_error`] on the calling thread. Panics are
//! caught at the boundary and reported as [`TalgebraStatus::Panic`].
//!
//! T-vector buffers use the library's raw layout: `M` contiguous blocks of
//! `dim` values, one per t-scalar element in row-major multi-index order,
//! where `M = I1 * ... * IN`. Complex data is passed as separate real and
//! imaginary arrays; an imaginary pointer may be null to mean zero.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::fs::File;
use std::io::{BufReader, BufWriter};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use talgebra::compound::{extend, image_to_tvector, Image, Strategy};
use talgebra::tpca::{read_model, write_model, FitOptions, TpcaModel, REALNESS_TOLERANCE};
use talgebra::{Complex64, Error, Parallelism, TMatrix, TShape};

/// Result code of every exported function.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TalgebraStatus {
    Ok = 0,
    InvalidArgument = 1,
    NumericDomain = 2,
    Format = 3,
    Io = 4,
    NullPointer = 5,
    Panic = 6,
}

/// Compound-image extension applied to each pixel.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TalgebraStrategy {
    /// No extension; `param` is ignored.
    Plain = 0,
    /// Nested 3x3 neighborhoods; `param` is the number of reuses.
    Nested = 1,
    /// One `param x param` window (odd, at least 3).
    Window = 2,
}

/// Opaque fitted model. Release with [`talgebra_tpca_free`].
pub struct TalgebraTpcaModel(TpcaModel);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let msg = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(msg));
}

fn fail(status: TalgebraStatus, msg: impl Into<String>) -> TalgebraStatus {
    set_error(msg.into());
    status
}

fn from_error(e: Error) -> TalgebraStatus {
    let status = match e.root() {
        Error::InvalidArgument(_) => TalgebraStatus::InvalidArgument,
        Error::NumericDomain(_) => TalgebraStatus::NumericDomain,
        Error::Format { .. } => TalgebraStatus::Format,
        Error::Io { .. } => TalgebraStatus::Io,
        Error::Context { .. } => unreachable!("root strips context"),
    };
    fail(status, e.to_string())
}

struct Null(&'static str);

impl From<Null> for TalgebraStatus {
    fn from(n: Null) -> Self {
        fail(TalgebraStatus::NullPointer, format!("`{}` is null", n.0))
    }
}

/// Runs `f`, converting errors and panics into status codes.
fn guard(f: impl FnOnce() -> Result<(), TalgebraStatus>) -> TalgebraStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            TalgebraStatus::Ok
        }
        Ok(Err(status)) => status,
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            fail(TalgebraStatus::Panic, format!("panic: {msg}"))
        }
    }
}

fn lift<T>(r: talgebra::Result<T>) -> Result<T, TalgebraStatus> {
    r.map_err(from_error)
}

unsafe fn slice<'a, T>(p: *const T, len: usize, name: &'static str) -> Result<&'a [T], Null> {
    if len == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err(Null(name));
    }
    Ok(std::slice::from_raw_parts(p, len))
}

unsafe fn slice_mut<'a, T>(p: *mut T, len: usize, name: &'static str) -> Result<&'a mut [T], Null> {
    if len == 0 {
        return Ok(&mut []);
    }
    if p.is_null() {
        return Err(Null(name));
    }
    Ok(std::slice::from_raw_parts_mut(p, len))
}

unsafe fn model<'a>(p: *const TalgebraTpcaModel) -> Result<&'a TpcaModel, Null> {
    p.as_ref().map(|m| &m.0).ok_or(Null("model"))
}

unsafe fn path(p: *const c_char) -> Result<std::path::PathBuf, TalgebraStatus> {
    if p.is_null() {
        return Err(Null("path").into());
    }
    let s = CStr::from_ptr(p)
        .to_str()
        .map_err(|_| fail(TalgebraStatus::InvalidArgument, "path is not valid UTF-8"))?;
    Ok(s.into())
}

unsafe fn tvector(shape: &TShape, dim: usize, re: &[f64], im: *const f64) -> Result<TMatrix, TalgebraStatus> {
    let data: Vec<Complex64> = if im.is_null() {
        re.iter().map(|&x| Complex64::new(x, 0.0)).collect()
    } else {
        let im = slice(im, re.len(), "im")?;
        re.iter().zip(im).map(|(&a, &b)| Complex64::new(a, b)).collect()
    };
    lift(TMatrix::from_raw(shape.clone(), dim, 1, data))
}

/// Writes `v` to `re` (and `im` when non-null). With a null `im`, the
/// imaginary part must vanish up to the realness tolerance.
unsafe fn emit(v: &TMatrix, re: *mut f64, im: *mut f64) -> Result<(), TalgebraStatus> {
    let values = v.as_slice();
    if im.is_null() {
        let scale = v.frobenius_norm().max(f64::MIN_POSITIVE);
        if v.max_abs_imag() > REALNESS_TOLERANCE * scale.max(1.0) {
            return Err(fail(
                TalgebraStatus::NumericDomain,
                "result is complex; pass an imaginary output buffer",
            ));
        }
    } else {
        for (o, z) in slice_mut(im, values.len(), "out_im")?.iter_mut().zip(values) {
            *o = z.im;
        }
    }
    for (o, z) in slice_mut(re, values.len(), "out_re")?.iter_mut().zip(values) {
        *o = z.re;
    }
    Ok(())
}

/// `kind` is a [`TalgebraStrategy`] value, taken as an integer so that
/// out-of-range input is an error rather than undefined behavior.
fn strategy(kind: u32, param: usize) -> Result<Strategy, TalgebraStatus> {
    match kind {
        k if k == TalgebraStrategy::Plain as u32 => Ok(Strategy::Plain),
        k if k == TalgebraStrategy::Nested as u32 => Ok(Strategy::Nested { reuses: param }),
        k if k == TalgebraStrategy::Window as u32 => Ok(Strategy::Window { size: param }),
        k => Err(fail(TalgebraStatus::InvalidArgument, format!("unknown strategy {k}"))),
    }
}

/// Message of the last failed call on this thread, or null after a success.
/// The pointer stays valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn talgebra_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn talgebra_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Fits a model on `count` t-vectors of `dim` entries with t-scalar shape
/// `dims[0..order]`. `re`/`im` hold `count * dim * M` values, one t-vector
/// after another. `threads == 0` selects the default thread count.
///
/// # Safety
/// Pointers must be valid for the lengths implied by the arguments.
#[no_mangle]
pub unsafe extern "C" fn talgebra_tpca_fit(
    dims: *const usize,
    order: usize,
    dim: usize,
    count: usize,
    re: *const f64,
    im: *const f64,
    threads: usize,
    out: *mut *mut TalgebraTpcaModel,
) -> TalgebraStatus {
    guard(|| {
        if out.is_null() {
            return Err(Null("out").into());
        }
        let shape = lift(TShape::new(slice(dims, order, "dims")?.to_vec()))?;
        let per = dim
            .checked_mul(shape.slice_count())
            .ok_or_else(|| fail(TalgebraStatus::InvalidArgument, "size overflow"))?;
        let total = per
            .checked_mul(count)
            .ok_or_else(|| fail(TalgebraStatus::InvalidArgument, "size overflow"))?;
        let re = slice(re, total, "re")?;
        let train = (0..count)
            .map(|k| tvector(&shape, dim, &re[k * per..(k + 1) * per], if im.is_null() { im } else { im.add(k * per) }))
            .collect::<Result<Vec<_>, _>>()?;
        let parallelism = lift(Parallelism::resolve((threads > 0).then_some(threads)))?;
        let options = FitOptions { parallelism, ..FitOptions::default() };
        let fitted = lift(TpcaModel::fit(&train, &options))?;
        *out = Box::into_raw(Box::new(TalgebraTpcaModel(fitted)));
        Ok(())
    })
}

/// Releases a model. Null is accepted.
///
/// # Safety
/// `model` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn talgebra_tpca_free(model: *mut TalgebraTpcaModel) {
    if !model.is_null() {
        drop(Box::from_raw(model));
    }
}

/// Feature t-vector of one query (`dim * M` values each in and out).
///
/// # Safety
/// Buffers must hold `dim * M` values; `im` and `out_im` may be null.
#[no_mangle]
pub unsafe extern "C" fn talgebra_tpca_transform(
    model: *const TalgebraTpcaModel,
    re: *const f64,
    im: *const f64,
    out_re: *mut f64,
    out_im: *mut f64,
) -> TalgebraStatus {
    guard(|| {
        let m = self::model(model)?;
        let re = slice(re, m.dim() * m.shape().slice_count(), "re")?;
        let y = tvector(m.shape(), m.dim(), re, im)?;
        emit(&lift(m.transform(&y))?, out_re, out_im)
    })
}

/// Reconstruction from the leading `d` feature entries.
///
/// # Safety
/// Buffers must hold `dim * M` values; `im` and `out_im` may be null.
#[no_mangle]
pub unsafe extern "C" fn talgebra_tpca_reconstruct(
    model: *const TalgebraTpcaModel,
    feature_re: *const f64,
    feature_im: *const f64,
    d: usize,
    out_re: *mut f64,
    out_im: *mut f64,
) -> TalgebraStatus {
    guard(|| {
        let m = self::model(model)?;
        let re = slice(feature_re, m.dim() * m.shape().slice_count(), "feature_re")?;
        let f = tvector(m.shape(), m.dim(), re, feature_im)?;
        emit(&lift(m.reconstruct(&f, d))?, out_re, out_im)
    })
}

/// Length `D` of the t-vectors the model accepts.
///
/// # Safety
/// `model` and `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn talgebra_tpca_dim(model: *const TalgebraTpcaModel, out: *mut usize) -> TalgebraStatus {
    guard(|| {
        let m = self::model(model)?;
        *out.as_mut().ok_or(Null("out"))? = m.dim();
        Ok(())
    })
}

/// Number of training t-vectors.
///
/// # Safety
/// `model` and `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn talgebra_tpca_training_count(model: *const TalgebraTpcaModel, out: *mut usize) -> TalgebraStatus {
    guard(|| {
        let m = self::model(model)?;
        *out.as_mut().ok_or(Null("out"))? = m.training_count();
        Ok(())
    })
}

/// Whether the model was fitted on real data (1) or not (0).
///
/// # Safety
/// `model` and `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn talgebra_tpca_is_real(model: *const TalgebraTpcaModel, out: *mut i32) -> TalgebraStatus {
    guard(|| {
        let m = self::model(model)?;
        *out.as_mut().ok_or(Null("out"))? = i32::from(m.is_real());
        Ok(())
    })
}

/// T-scalar shape. Writes the order to `order`, and the dimensions to
/// `dims` when `capacity` is large enough (`dims` may be null to query the
/// order only).
///
/// # Safety
/// `dims` must hold `capacity` values when non-null.
#[no_mangle]
pub unsafe extern "C" fn talgebra_tpca_shape(
    model: *const TalgebraTpcaModel,
    dims: *mut usize,
    capacity: usize,
    order: *mut usize,
) -> TalgebraStatus {
    guard(|| {
        let m = self::model(model)?;
        let shape = m.shape().dims();
        *order.as_mut().ok_or(Null("order"))? = shape.len();
        if dims.is_null() {
            return Ok(());
        }
        if capacity < shape.len() {
            return Err(fail(
                TalgebraStatus::InvalidArgument,
                format!("shape has order {}, capacity is {capacity}", shape.len()),
            ));
        }
        slice_mut(dims, shape.len(), "dims")?.copy_from_slice(shape);
        Ok(())
    })
}

/// Writes the model to a file.
///
/// # Safety
/// `path` must be a NUL-terminated UTF-8 string.
#[no_mangle]
pub unsafe extern "C" fn talgebra_tpca_save(model: *const TalgebraTpcaModel, path: *const c_char) -> TalgebraStatus {
    guard(|| {
        let m = self::model(model)?;
        let path = self::path(path)?;
        let io = |e: std::io::Error| fail(TalgebraStatus::Io, format!("{}: {e}", path.display()));
        let file = File::create(&path).map_err(io)?;
        write_model(m, BufWriter::new(file)).map_err(io)
    })
}

/// Reads a model written by [`talgebra_tpca_save`].
///
/// # Safety
/// `path` must be a NUL-terminated UTF-8 string and `out` valid.
#[no_mangle]
pub unsafe extern "C" fn talgebra_tpca_load(path: *const c_char, out: *mut *mut TalgebraTpcaModel) -> TalgebraStatus {
    guard(|| {
        if out.is_null() {
            return Err(Null("out").into());
        }
        let path = self::path(path)?;
        let file = File::open(&path)
            .map_err(|e| fail(TalgebraStatus::Io, format!("{}: {e}", path.display())))?;
        let m = lift(read_model(BufReader::new(file)).map_err(|e| e.context(path.display().to_string())))?;
        *out = Box::into_raw(Box::new(TalgebraTpcaModel(m)));
        Ok(())
    })
}

/// Peak signal-to-noise ratio in dB of `y` against `x` (`len` values each).
/// Identical inputs give +infinity.
///
/// # Safety
/// `x` and `y` must hold `len` values; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn talgebra_psnr(
    x: *const f64,
    y: *const f64,
    len: usize,
    max_value: f64,
    out: *mut f64,
) -> TalgebraStatus {
    guard(|| {
        let (x, y) = (slice(x, len, "x")?, slice(y, len, "y")?);
        let out = out.as_mut().ok_or(Null("out"))?;
        *out = lift(talgebra::bench::psnr(x, y, max_value))?;
        Ok(())
    })
}

/// Number of t-scalar elements `M` produced by a strategy.
///
/// # Safety
/// `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn talgebra_compound_slice_count(
    kind: u32,
    param: usize,
    out: *mut usize,
) -> TalgebraStatus {
    guard(|| {
        let shape = lift(strategy(kind, param)?.shape())?;
        *out.as_mut().ok_or(Null("out"))? = shape.slice_count();
        Ok(())
    })
}

/// Compound t-vector of a row-major `rows x cols` image: `rows * cols * M`
/// real values in raw t-vector layout, entries in column-major pixel order.
///
/// # Safety
/// `pixels` must hold `rows * cols` values and `out` `out_len` values.
#[no_mangle]
pub unsafe extern "C" fn talgebra_compound_extend(
    pixels: *const f64,
    rows: usize,
    cols: usize,
    kind: u32,
    param: usize,
    out: *mut f64,
    out_len: usize,
) -> TalgebraStatus {
    guard(|| {
        let n = rows
            .checked_mul(cols)
            .ok_or_else(|| fail(TalgebraStatus::InvalidArgument, "size overflow"))?;
        let img = lift(Image::new(rows, cols, slice(pixels, n, "pixels")?.to_vec()))?;
        let v = image_to_tvector(&lift(extend(&img, strategy(kind, param)?))?);
        if out_len != v.as_slice().len() {
            return Err(fail(
                TalgebraStatus::InvalidArgument,
                format!("output holds {out_len} values, {} needed", v.as_slice().len()),
            ));
        }
        for (o, z) in slice_mut(out, out_len, "out")?.iter_mut().zip(v.as_slice()) {
            *o = z.re;
        }
        Ok(())
    })
}
