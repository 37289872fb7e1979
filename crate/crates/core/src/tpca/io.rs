//! Binary model files.
//!
//! Little-endian layout, version 1:
//!
//! ```text
//! magic        8 bytes  "TALGTPCA"
//! version      u32      1
//! flags        u32      bit 0: fitted on real data
//! order N      u32
//! dims         N x u32  I1 .. IN
//! dim D        u64
//! count K      u64
//! per slice, in row-major multi-index order:
//!   mean         D x (f64 re, f64 im)
//!   eigenvalues  D x f64, descending
//!   basis        D*D x (f64 re, f64 im), column-major
//! ```

use std::io::{Read, Write};

use faer::Mat;
use num_complex::Complex64;

use super::slice::SliceModel;
use super::tensorial::TpcaModel;
use crate::error::{Error, Result};
use crate::tcore::TShape;

pub const MODEL_MAGIC: &[u8; 8] = b"TALGTPCA";
pub const MODEL_VERSION: u32 = 1;

pub fn write_model<W: Write>(model: &TpcaModel, mut out: W) -> std::io::Result<()> {
    out.write_all(MODEL_MAGIC)?;
    out.write_all(&MODEL_VERSION.to_le_bytes())?;
    out.write_all(&u32::from(model.is_real()).to_le_bytes())?;
    let dims = model.shape().dims();
    out.write_all(&(dims.len() as u32).to_le_bytes())?;
    for &d in dims {
        out.write_all(&(d as u32).to_le_bytes())?;
    }
    out.write_all(&(model.dim() as u64).to_le_bytes())?;
    out.write_all(&(model.training_count() as u64).to_le_bytes())?;
    let mut buf = Vec::new();
    for s in model.slices() {
        buf.clear();
        for v in s.mean() {
            buf.extend_from_slice(&v.re.to_le_bytes());
            buf.extend_from_slice(&v.im.to_le_bytes());
        }
        for v in s.eigenvalues() {
            buf.extend_from_slice(&v.to_le_bytes());
        }
        let basis = s.basis();
        for c in 0..basis.ncols() {
            for r in 0..basis.nrows() {
                buf.extend_from_slice(&basis[(r, c)].re.to_le_bytes());
                buf.extend_from_slice(&basis[(r, c)].im.to_le_bytes());
            }
        }
        out.write_all(&buf)?;
    }
    out.flush()
}

struct Cursor<R> {
    inner: R,
    offset: u64,
}

impl<R: Read> Cursor<R> {
    fn bytes<const N: usize>(&mut self, what: &str) -> Result<[u8; N]> {
        let mut b = [0u8; N];
        self.inner.read_exact(&mut b).map_err(|e| Error::Format {
            offset: self.offset,
            message: format!("reading {what}: {e}"),
        })?;
        self.offset += N as u64;
        Ok(b)
    }

    fn u32(&mut self, what: &str) -> Result<u32> {
        Ok(u32::from_le_bytes(self.bytes(what)?))
    }

    fn u64(&mut self, what: &str) -> Result<u64> {
        Ok(u64::from_le_bytes(self.bytes(what)?))
    }

    fn f64(&mut self, what: &str) -> Result<f64> {
        Ok(f64::from_le_bytes(self.bytes(what)?))
    }

    fn complex(&mut self, what: &str) -> Result<Complex64> {
        Ok(Complex64::new(self.f64(what)?, self.f64(what)?))
    }

    fn fail<T>(&self, message: String) -> Result<T> {
        Err(Error::Format {
            offset: self.offset,
            message,
        })
    }
}

pub fn read_model<R: Read>(input: R) -> Result<TpcaModel> {
    let mut cur = Cursor {
        inner: input,
        offset: 0,
    };
    let magic: [u8; 8] = cur.bytes("magic")?;
    if &magic != MODEL_MAGIC {
        return Err(Error::Format {
            offset: 0,
            message: "not a TPCA model file (bad magic)".into(),
        });
    }
    let version = cur.u32("version")?;
    if version != MODEL_VERSION {
        return cur.fail(format!("unsupported model version {version}"));
    }
    let flags = cur.u32("flags")?;
    let order = cur.u32("order")? as usize;
    if order > 64 {
        return cur.fail(format!("implausible t-scalar order {order}"));
    }
    let dims = (0..order)
        .map(|_| cur.u32("shape").map(|d| d as usize))
        .collect::<Result<Vec<_>>>()?;
    let shape = TShape::new(dims).or_else(|e| cur.fail(e.to_string()))?;
    let dim = cur.u64("dimension")? as usize;
    let count = cur.u64("training count")? as usize;
    if dim == 0 {
        return cur.fail("model dimension is zero".into());
    }
    let mut slices = Vec::with_capacity(shape.slice_count());
    for _ in 0..shape.slice_count() {
        let mean = (0..dim)
            .map(|_| cur.complex("mean"))
            .collect::<Result<Vec<_>>>()?;
        let eigenvalues = (0..dim)
            .map(|_| cur.f64("eigenvalues"))
            .collect::<Result<Vec<_>>>()?;
        let mut basis = Mat::<Complex64>::zeros(dim, dim);
        for c in 0..dim {
            for r in 0..dim {
                basis[(r, c)] = cur.complex("basis")?;
            }
        }
        slices.push(SliceModel::new(mean, basis, eigenvalues)?);
    }
    TpcaModel::from_parts(shape, count, flags & 1 == 1, slices)
}
