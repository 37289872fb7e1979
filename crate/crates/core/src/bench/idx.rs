//! IDX (MNIST) file reading. Files may be gzip-compressed; compression is
//! detected from the content, not the file name.

use std::io::Read;
use std::path::Path;

use flate2::read::GzDecoder;

use crate::compound::Image;
use crate::error::{Error, Result};

pub const IMAGE_MAGIC: u32 = 0x0000_0803;
pub const LABEL_MAGIC: u32 = 0x0000_0801;

#[derive(Clone, Debug, PartialEq)]
pub struct LabeledImage {
    pub image: Image,
    pub label: u8,
}

/// Reads an IDX image file and its label file.
pub fn load_idx(images: &Path, labels: &Path) -> Result<Vec<LabeledImage>> {
    let image_bytes = read_maybe_gzip(images)?;
    let label_bytes = read_maybe_gzip(labels)?;
    let imgs = parse_images(&image_bytes).map_err(|e| e.context(images.display().to_string()))?;
    let labs = parse_labels(&label_bytes).map_err(|e| e.context(labels.display().to_string()))?;
    pair(imgs, labs).map_err(|e| e.context(labels.display().to_string()))
}

/// Parses in-memory (uncompressed) IDX image and label files.
pub fn parse_idx(images: &[u8], labels: &[u8]) -> Result<Vec<LabeledImage>> {
    pair(parse_images(images)?, parse_labels(labels)?)
}

fn pair(images: Vec<Image>, labels: Vec<u8>) -> Result<Vec<LabeledImage>> {
    if images.len() != labels.len() {
        return Err(Error::format(
            4,
            format!("{} labels for {} images", labels.len(), images.len()),
        ));
    }
    Ok(images
        .into_iter()
        .zip(labels)
        .map(|(image, label)| LabeledImage { image, label })
        .collect())
}

fn read_maybe_gzip(path: &Path) -> Result<Vec<u8>> {
    let raw = std::fs::read(path).map_err(|e| Error::io(path, e))?;
    if raw.starts_with(&[0x1f, 0x8b]) {
        let mut out = Vec::new();
        GzDecoder::new(raw.as_slice())
            .read_to_end(&mut out)
            .map_err(|e| Error::io(path, e))?;
        Ok(out)
    } else {
        Ok(raw)
    }
}

fn be_u32(bytes: &[u8], offset: usize, what: &str) -> Result<u32> {
    bytes
        .get(offset..offset + 4)
        .map(|b| u32::from_be_bytes([b[0], b[1], b[2], b[3]]))
        .ok_or_else(|| Error::format(offset as u64, format!("file truncated reading {what}")))
}

fn check_magic(bytes: &[u8], expected: u32) -> Result<()> {
    let magic = be_u32(bytes, 0, "magic number")?;
    if magic != expected {
        return Err(Error::format(
            0,
            format!("magic number {magic:#010x}, expected {expected:#010x}"),
        ));
    }
    Ok(())
}

pub fn parse_images(bytes: &[u8]) -> Result<Vec<Image>> {
    check_magic(bytes, IMAGE_MAGIC)?;
    let count = be_u32(bytes, 4, "image count")? as usize;
    let rows = be_u32(bytes, 8, "row count")? as usize;
    let cols = be_u32(bytes, 12, "column count")? as usize;
    if rows == 0 || cols == 0 {
        return Err(Error::format(8, format!("image size {rows}x{cols} is empty")));
    }
    let size = rows * cols;
    let body = &bytes[16..];
    if body.len() < count * size {
        let complete = body.len() / size;
        return Err(Error::format(
            (16 + complete * size + body.len() % size) as u64,
            format!("file truncated inside image {complete} of {count}"),
        ));
    }
    body.chunks_exact(size)
        .take(count)
        .map(|px| Image::from_bytes(rows, cols, px))
        .collect()
}

pub fn parse_labels(bytes: &[u8]) -> Result<Vec<u8>> {
    check_magic(bytes, LABEL_MAGIC)?;
    let count = be_u32(bytes, 4, "label count")? as usize;
    let body = &bytes[8..];
    if body.len() < count {
        return Err(Error::format(
            bytes.len() as u64,
            format!("file truncated after {} of {count} labels", body.len()),
        ));
    }
    Ok(body[..count].to_vec())
}

/// Serializes images and labels back to uncompressed IDX bytes.
pub fn encode_idx(items: &[LabeledImage]) -> Result<(Vec<u8>, Vec<u8>)> {
    let (rows, cols) = items
        .first()
        .map_or((0, 0), |x| (x.image.rows(), x.image.cols()));
    let mut images = Vec::with_capacity(16 + items.len() * rows * cols);
    images.extend(IMAGE_MAGIC.to_be_bytes());
    images.extend((items.len() as u32).to_be_bytes());
    images.extend((rows as u32).to_be_bytes());
    images.extend((cols as u32).to_be_bytes());
    let mut labels = Vec::with_capacity(8 + items.len());
    labels.extend(LABEL_MAGIC.to_be_bytes());
    labels.extend((items.len() as u32).to_be_bytes());
    for item in items {
        if item.image.rows() != rows || item.image.cols() != cols {
            return Err(Error::invalid("IDX files hold images of a single size"));
        }
        for &p in item.image.pixels() {
            if !(0.0..=255.0).contains(&p) || p.fract() != 0.0 {
                return Err(Error::invalid(format!("pixel {p} is not a byte value")));
            }
            images.push(p as u8);
        }
        labels.push(item.label);
    }
    Ok((images, labels))
}
