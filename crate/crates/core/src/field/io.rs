//! Binary field files.
//!
//! Layout (little endian, no padding):
//! `"CHFD"` | `u32` version | `u8` d | `u32` n | `f64` phi | `f64` xi |
//! `n^d` `f64` values, x fastest.

use std::fs;
use std::path::Path;

use super::{validate_cells, Field, ModelParams};
use crate::error::{FormatError, Result};

pub const MAGIC: &[u8; 4] = b"CHFD";
pub const VERSION: u32 = 1;
const HEADER_LEN: usize = 4 + 4 + 1 + 4 + 8 + 8;

pub fn encode_field(f: &Field) -> Vec<u8> {
    let mut out = Vec::with_capacity(HEADER_LEN + 8 * f.len());
    out.extend_from_slice(MAGIC);
    out.extend_from_slice(&VERSION.to_le_bytes());
    out.push(f.d() as u8);
    out.extend_from_slice(&(f.n() as u32).to_le_bytes());
    out.extend_from_slice(&f.params().phi().to_le_bytes());
    out.extend_from_slice(&f.params().xi().to_le_bytes());
    for v in f.values() {
        out.extend_from_slice(&v.to_le_bytes());
    }
    out
}

pub fn decode_field(bytes: &[u8]) -> std::result::Result<Field, FormatError> {
    if bytes.len() < 4 || &bytes[..4] != MAGIC {
        return Err(FormatError::BadMagic);
    }
    if bytes.len() < HEADER_LEN {
        return Err(FormatError::Truncated { expected: HEADER_LEN, found: bytes.len() });
    }
    let u32_at = |o: usize| u32::from_le_bytes(bytes[o..o + 4].try_into().unwrap());
    let f64_at = |o: usize| f64::from_le_bytes(bytes[o..o + 8].try_into().unwrap());
    let version = u32_at(4);
    if version != VERSION {
        return Err(FormatError::UnsupportedVersion(version));
    }
    let d = bytes[8] as usize;
    let n = u32_at(9) as usize;
    let phi = f64_at(13);
    let xi = f64_at(21);
    let params = ModelParams::new(d, xi, phi).map_err(|e| FormatError::BadHeader(e.to_string()))?;
    validate_cells(n).map_err(|e| FormatError::BadHeader(e.to_string()))?;
    let count = n.pow(d as u32);
    let expected = HEADER_LEN + 8 * count;
    if bytes.len() < expected {
        return Err(FormatError::Truncated { expected, found: bytes.len() });
    }
    if bytes.len() > expected {
        return Err(FormatError::TrailingBytes);
    }
    let mut values = Vec::with_capacity(count);
    for (i, chunk) in bytes[HEADER_LEN..].chunks_exact(8).enumerate() {
        let v = f64::from_le_bytes(chunk.try_into().unwrap());
        if !v.is_finite() {
            return Err(FormatError::NonFinite(i));
        }
        values.push(v);
    }
    Ok(Field::from_parts(params, n, values))
}

pub fn write_field(path: impl AsRef<Path>, f: &Field) -> Result<()> {
    fs::write(path, encode_field(f))?;
    Ok(())
}

pub fn read_field(path: impl AsRef<Path>) -> Result<Field> {
    let bytes = fs::read(path)?;
    Ok(decode_field(&bytes)?)
}
