use std::io::Write;
use std::path::Path;

use crate::compound::Image;
use crate::error::{Error, Result};

/// Binary PGM (P5, maxval 255); values are rounded and clamped to 0..=255.
pub fn encode_pgm(img: &Image) -> Vec<u8> {
    let mut out = format!("P5\n{} {}\n255\n", img.cols(), img.rows()).into_bytes();
    out.extend(img.pixels().iter().map(|&p| p.round().clamp(0.0, 255.0) as u8));
    out
}

pub fn write_pgm(path: &Path, img: &Image) -> Result<()> {
    std::fs::File::create(path)
        .and_then(|mut f| f.write_all(&encode_pgm(img)))
        .map_err(|e| Error::io(path, e))
}
