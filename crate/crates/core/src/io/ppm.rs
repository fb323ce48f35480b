use std::fs::File;
use std::io::{BufWriter, Read, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::tensor::{Dims, Tensor3};

/// Converts a real value to a byte: clamp to `[0, 255]`, round to nearest.
pub fn to_byte(v: f64) -> u8 {
    if v.is_nan() {
        return 0;
    }
    v.clamp(0.0, 255.0).round() as u8
}

/// The tensor as it would be stored: every entry clamped and rounded.
pub fn quantize(t: &Tensor3) -> Tensor3 {
    t.map(|v| to_byte(v) as f64)
}

struct Header {
    channels: usize,
    width: usize,
    height: usize,
    data_start: usize,
}

fn parse_header(bytes: &[u8], path: &Path) -> Result<Header> {
    let channels = match bytes.get(..2) {
        Some(b"P6") => 3,
        Some(b"P5") => 1,
        _ => return Err(Error::BadMagic { path: path.into() }),
    };
    let mut pos = 2;
    let mut fields = [0u32; 3];
    for field in fields.iter_mut() {
        // whitespace and comments
        loop {
            match bytes.get(pos) {
                Some(b) if b.is_ascii_whitespace() => pos += 1,
                Some(b'#') => {
                    while bytes.get(pos).is_some_and(|&b| b != b'\n') {
                        pos += 1;
                    }
                }
                Some(_) => break,
                None => return Err(Error::TruncatedFile { path: path.into() }),
            }
        }
        let start = pos;
        while bytes.get(pos).is_some_and(u8::is_ascii_digit) {
            pos += 1;
        }
        if start == pos {
            return Err(Error::BadHeader {
                path: path.into(),
                reason: "expected an integer".into(),
            });
        }
        *field = std::str::from_utf8(&bytes[start..pos])
            .expect("ascii digits")
            .parse()
            .map_err(|_| Error::BadHeader {
                path: path.into(),
                reason: "integer out of range".into(),
            })?;
    }
    // exactly one whitespace byte separates the header from the raster
    match bytes.get(pos) {
        Some(b) if b.is_ascii_whitespace() => pos += 1,
        Some(_) => {
            return Err(Error::BadHeader {
                path: path.into(),
                reason: "missing separator after maxval".into(),
            })
        }
        None => return Err(Error::TruncatedFile { path: path.into() }),
    }
    let [width, height, maxval] = fields;
    if maxval != 255 {
        return Err(Error::BadMaxval {
            path: path.into(),
            maxval,
        });
    }
    if width == 0 || height == 0 {
        return Err(Error::BadHeader {
            path: path.into(),
            reason: "zero image size".into(),
        });
    }
    Ok(Header {
        channels,
        width: width as usize,
        height: height as usize,
        data_start: pos,
    })
}

/// Parses a binary PPM (P6) or PGM (P5) with maxval 255 into a
/// `height x width x channels` tensor.
pub fn parse_ppm(bytes: &[u8], path: &Path) -> Result<Tensor3> {
    let h = parse_header(bytes, path)?;
    let need = h.width * h.height * h.channels;
    let raster = &bytes[h.data_start..];
    if raster.len() < need {
        return Err(Error::TruncatedFile { path: path.into() });
    }
    let dims = Dims::new(h.height, h.width, h.channels)?;
    Ok(Tensor3::from_fn(dims, |i, j, c| {
        raster[(i * h.width + j) * h.channels + c] as f64
    }))
}

pub fn load_ppm(path: impl AsRef<Path>) -> Result<Tensor3> {
    let path = path.as_ref();
    let mut bytes = Vec::new();
    File::open(path)?.read_to_end(&mut bytes)?;
    parse_ppm(&bytes, path)
}

/// Encodes a 3-channel tensor as P6. Single-channel tensors are written as
/// P6 too, with the gray value replicated.
pub fn encode_ppm(t: &Tensor3) -> Result<Vec<u8>> {
    let d = t.dims();
    if d.n3 != 1 && d.n3 != 3 {
        return Err(Error::DimMismatch(format!(
            "image needs 1 or 3 channels, got {}",
            d.n3
        )));
    }
    let mut out = format!("P6\n{} {}\n255\n", d.n2, d.n1).into_bytes();
    out.reserve(d.n1 * d.n2 * 3);
    for i in 0..d.n1 {
        for j in 0..d.n2 {
            for c in 0..3 {
                out.push(to_byte(t.get(i, j, c.min(d.n3 - 1))));
            }
        }
    }
    Ok(out)
}

pub fn save_ppm(t: &Tensor3, path: impl AsRef<Path>) -> Result<()> {
    let bytes = encode_ppm(t)?;
    let mut w = BufWriter::new(File::create(path.as_ref())?);
    w.write_all(&bytes)?;
    w.flush()?;
    Ok(())
}

/// Luma `0.299 R + 0.587 G + 0.114 B` of a color image; gray pixels map to
/// themselves exactly.
pub fn to_luma(img: &Tensor3) -> Result<Tensor3> {
    let d = img.dims();
    match d.n3 {
        1 => Ok(img.clone()),
        3 => Ok(Tensor3::from_fn(Dims::new(d.n1, d.n2, 1)?, |i, j, _| {
            let (r, g, b) = (img.get(i, j, 0), img.get(i, j, 1), img.get(i, j, 2));
            if r == g && g == b {
                r
            } else {
                0.299 * r + 0.587 * g + 0.114 * b
            }
        })),
        n => Err(Error::DimMismatch(format!(
            "image needs 1 or 3 channels, got {n}"
        ))),
    }
}
