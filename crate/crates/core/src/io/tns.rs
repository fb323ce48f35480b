use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::tensor::{Dims, Tensor3};

pub const TNS_MAGIC: &[u8; 4] = b"TNS1";
const DTYPE_F64_LE: u8 = 0;
const HEADER_LEN: usize = 4 + 1 + 3 * 8;

/// Writes `t` as TNS1: magic, dtype byte, three little-endian `u64` dims and
/// the entries as little-endian `f64` in storage order (frontal slices one
/// after another, each column-major).
pub fn write_tns_to<W: Write>(t: &Tensor3, mut w: W) -> std::io::Result<()> {
    let d = t.dims();
    w.write_all(TNS_MAGIC)?;
    w.write_all(&[DTYPE_F64_LE])?;
    for n in [d.n1, d.n2, d.n3] {
        w.write_all(&(n as u64).to_le_bytes())?;
    }
    for v in t.data() {
        w.write_all(&v.to_le_bytes())?;
    }
    w.flush()
}

pub fn write_tns(path: impl AsRef<Path>, t: &Tensor3) -> Result<()> {
    let f = File::create(path.as_ref())?;
    write_tns_to(t, BufWriter::new(f))?;
    Ok(())
}

/// Parses TNS1 bytes; `path` is only used in error messages.
pub fn read_tns_from<R: Read>(mut r: R, path: &Path) -> Result<Tensor3> {
    let mut bytes = Vec::new();
    r.read_to_end(&mut bytes)?;
    if bytes.len() < 4 || &bytes[..4] != TNS_MAGIC {
        return Err(Error::BadMagic { path: path.into() });
    }
    if bytes.len() < HEADER_LEN {
        return Err(Error::TruncatedFile { path: path.into() });
    }
    if bytes[4] != DTYPE_F64_LE {
        return Err(Error::BadDtype {
            path: path.into(),
            dtype: bytes[4],
        });
    }
    let dim = |p: usize| u64::from_le_bytes(bytes[p..p + 8].try_into().expect("8 bytes"));
    let (n1, n2, n3) = (dim(5), dim(13), dim(21));
    let bad = |reason: &str| Error::BadHeader {
        path: path.into(),
        reason: reason.into(),
    };
    if n1 == 0 || n2 == 0 || n3 == 0 {
        return Err(bad("zero dimension"));
    }
    let expected = n1
        .checked_mul(n2)
        .and_then(|v| v.checked_mul(n3))
        .and_then(|v| v.checked_mul(8))
        .ok_or_else(|| bad("dimensions overflow"))?;
    let found = (bytes.len() - HEADER_LEN) as u64;
    if found != expected {
        return Err(Error::SizeMismatch {
            path: path.into(),
            expected,
            found,
        });
    }
    let dims =
        Dims::new(n1 as usize, n2 as usize, n3 as usize).map_err(|_| bad("zero dimension"))?;
    let data = bytes[HEADER_LEN..]
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().expect("8 bytes")))
        .collect();
    Tensor3::from_vec(dims, data)
}

pub fn read_tns(path: impl AsRef<Path>) -> Result<Tensor3> {
    let path = path.as_ref();
    read_tns_from(BufReader::new(File::open(path)?), path)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bytes_of(t: &Tensor3) -> Vec<u8> {
        let mut out = Vec::new();
        write_tns_to(t, &mut out).unwrap();
        out
    }

    #[test]
    fn header_layout() {
        let t = Tensor3::from_fn(Dims::new(2, 1, 1).unwrap(), |i, _, _| i as f64);
        let b = bytes_of(&t);
        assert_eq!(&b[..4], b"TNS1");
        assert_eq!(b[4], 0);
        assert_eq!(&b[5..13], &2u64.to_le_bytes());
        assert_eq!(b.len(), HEADER_LEN + 16);
        assert_eq!(&b[HEADER_LEN + 8..], &1.0f64.to_le_bytes());
    }

    #[test]
    fn rejects_corruption() {
        let t = Tensor3::from_fn(Dims::new(3, 4, 5).unwrap(), |i, j, k| (i * j + k) as f64);
        let p = Path::new("mem");
        let b = bytes_of(&t);
        assert_eq!(read_tns_from(&b[..], p).unwrap(), t);

        let mut bad = b.clone();
        bad[0] = b'X';
        assert!(matches!(
            read_tns_from(&bad[..], p),
            Err(Error::BadMagic { .. })
        ));
        let mut bad = b.clone();
        bad[4] = 1;
        assert!(matches!(
            read_tns_from(&bad[..], p),
            Err(Error::BadDtype { dtype: 1, .. })
        ));
        assert!(matches!(
            read_tns_from(&b[..b.len() - 3], p),
            Err(Error::SizeMismatch { .. })
        ));
        assert!(matches!(
            read_tns_from(&b[..10], p),
            Err(Error::TruncatedFile { .. })
        ));
    }
}
