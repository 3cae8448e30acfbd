//! Binary matrix files.
//!
//! Layout (all little-endian): the magic bytes `SSEL`, `u32` rows, `u32`
//! columns, then `rows * cols` IEEE-754 `f64` values in column-major order.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use nalgebra::DMatrix;

use crate::error::{Result, SelectError};
use crate::matrix::Matrix;

pub const MAGIC: [u8; 4] = *b"SSEL";

pub fn write_ssel<W: Write>(mut out: W, x: &Matrix) -> Result<()> {
    let dim = |v: usize| {
        u32::try_from(v).map_err(|_| SelectError::Format(format!("dimension {v} exceeds u32")))
    };
    out.write_all(&MAGIC)?;
    out.write_all(&dim(x.rows())?.to_le_bytes())?;
    out.write_all(&dim(x.cols())?.to_le_bytes())?;
    for v in x.as_dmatrix().iter() {
        out.write_all(&v.to_le_bytes())?;
    }
    out.flush()?;
    Ok(())
}

pub fn read_ssel<R: Read>(mut input: R) -> Result<Matrix> {
    let mut magic = [0u8; 4];
    input.read_exact(&mut magic)?;
    if magic != MAGIC {
        return Err(SelectError::Format(format!("bad magic {magic:?}")));
    }
    let mut word = [0u8; 4];
    input.read_exact(&mut word)?;
    let rows = u32::from_le_bytes(word) as usize;
    input.read_exact(&mut word)?;
    let cols = u32::from_le_bytes(word) as usize;
    let count = rows
        .checked_mul(cols)
        .ok_or_else(|| SelectError::Format("dimensions overflow".into()))?;
    let mut values = Vec::with_capacity(count);
    let mut buf = [0u8; 8];
    for _ in 0..count {
        input.read_exact(&mut buf).map_err(|e| {
            SelectError::Format(format!("truncated payload after {} values: {e}", values.len()))
        })?;
        values.push(f64::from_le_bytes(buf));
    }
    if input.read(&mut buf)? != 0 {
        return Err(SelectError::Format("trailing bytes after payload".into()));
    }
    Matrix::new(DMatrix::from_vec(rows, cols, values))
}

pub fn save(path: impl AsRef<Path>, x: &Matrix) -> Result<()> {
    write_ssel(BufWriter::new(File::create(path)?), x)
}

pub fn load(path: impl AsRef<Path>) -> Result<Matrix> {
    read_ssel(BufReader::new(File::open(path)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn header_and_column_major_payload() {
        let x = Matrix::from_row_slice(2, 3, &[1.0, 2.0, 3.0, 4.0, 5.0, 6.0]).unwrap();
        let mut bytes = Vec::new();
        write_ssel(&mut bytes, &x).unwrap();
        assert_eq!(bytes.len(), 12 + 6 * 8);
        assert_eq!(&bytes[..4], b"SSEL");
        assert_eq!(&bytes[4..8], &2u32.to_le_bytes());
        assert_eq!(&bytes[8..12], &3u32.to_le_bytes());
        let second = f64::from_le_bytes(bytes[20..28].try_into().unwrap());
        assert_eq!(second, 4.0);
        assert_eq!(read_ssel(bytes.as_slice()).unwrap(), x);
    }

    #[test]
    fn malformed_inputs() {
        assert!(matches!(read_ssel(&b"NOPE\0\0\0\0"[..]), Err(SelectError::Format(_))));
        let x = Matrix::identity(2);
        let mut bytes = Vec::new();
        write_ssel(&mut bytes, &x).unwrap();
        assert!(read_ssel(&bytes[..bytes.len() - 1]).is_err());
        bytes.push(0);
        assert!(read_ssel(bytes.as_slice()).is_err());
    }
}
