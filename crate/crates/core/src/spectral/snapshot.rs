//! Binary field snapshots.
//!
//! Layout (all little-endian): magic `LMHD`, then `u32` version, dimension,
//! points per axis and field count, then for each field its complex
//! coefficients as `(re, im)` pairs of IEEE-754 doubles in flat FFT order.

use std::fs;
use std::path::Path;

use num_complex::Complex64;

use super::field::SpectralField;
use super::grid::Grid;
use crate::error::{Error, Result};

pub const MAGIC: &[u8; 4] = b"LMHD";
pub const VERSION: u32 = 1;
const HEADER_LEN: usize = 20;

pub fn encode(fields: &[SpectralField]) -> Result<Vec<u8>> {
    let Some(first) = fields.first() else {
        return Err(Error::Snapshot("no fields to write".into()));
    };
    let grid = first.grid();
    if fields.iter().any(|f| f.grid() != grid) {
        return Err(Error::GridMismatch);
    }
    let mut out = Vec::with_capacity(HEADER_LEN + fields.len() * grid.len() * 16);
    out.extend_from_slice(MAGIC);
    for v in [
        VERSION,
        grid.dim() as u32,
        grid.points_per_axis() as u32,
        fields.len() as u32,
    ] {
        out.extend_from_slice(&v.to_le_bytes());
    }
    for f in fields {
        for c in f.coeffs() {
            out.extend_from_slice(&c.re.to_le_bytes());
            out.extend_from_slice(&c.im.to_le_bytes());
        }
    }
    Ok(out)
}

pub fn decode(bytes: &[u8]) -> Result<(Grid, Vec<SpectralField>)> {
    if bytes.len() < HEADER_LEN || &bytes[..4] != MAGIC {
        return Err(Error::Snapshot("missing LMHD header".into()));
    }
    let word = |i: usize| u32::from_le_bytes(bytes[4 + 4 * i..8 + 4 * i].try_into().unwrap());
    let version = word(0);
    if version != VERSION {
        return Err(Error::Snapshot(format!("unsupported version {version}")));
    }
    let grid = Grid::new(word(1) as usize, word(2) as usize)?;
    let count = word(3) as usize;
    let expected = HEADER_LEN + count * grid.len() * 16;
    if bytes.len() != expected {
        return Err(Error::Snapshot(format!(
            "expected {expected} bytes, found {}",
            bytes.len()
        )));
    }
    let f64_at = |o: usize| f64::from_le_bytes(bytes[o..o + 8].try_into().unwrap());
    let mut fields = Vec::with_capacity(count);
    let mut offset = HEADER_LEN;
    for _ in 0..count {
        let coeffs = (0..grid.len())
            .map(|i| {
                let o = offset + 16 * i;
                Complex64::new(f64_at(o), f64_at(o + 8))
            })
            .collect();
        offset += grid.len() * 16;
        fields.push(SpectralField::from_coeffs(&grid, coeffs)?);
    }
    Ok((grid, fields))
}

pub fn write(path: &Path, fields: &[SpectralField]) -> Result<()> {
    let bytes = encode(fields)?;
    fs::write(path, bytes).map_err(|e| Error::io(path, e))
}

pub fn read(path: &Path) -> Result<(Grid, Vec<SpectralField>)> {
    let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
    decode(&bytes)
}
