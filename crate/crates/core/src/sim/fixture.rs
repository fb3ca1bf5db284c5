//! Binary state fixtures.
//!
//! Layout, all little-endian:
//!
//! ```text
//! offset  size      field
//! 0       8         magic "GUPPAIR1" (trailing digit is the format version)
//! 8       8         n       u64, points per axis
//! 16      8         x_min   f64
//! 24      8         x_max   f64
//! 32      8         hbar    f64
//! 40      16*n*n    amplitudes, row-major (x1 major), each (re f64, im f64)
//! ```
//!
//! Loading re-validates the grid, the normalization and the boundary decay.

use std::io::{Read, Write};

use rustfft::num_complex::Complex64;

use super::grid::GridSpec;
use super::state::PairState;
use crate::error::{Error, Result};

pub const FIXTURE_MAGIC: &[u8; 8] = b"GUPPAIR1";

pub fn write_fixture<W: Write>(state: &PairState, mut out: W) -> Result<()> {
    let g = state.grid();
    out.write_all(FIXTURE_MAGIC)?;
    out.write_all(&(g.n() as u64).to_le_bytes())?;
    out.write_all(&g.x_min().to_le_bytes())?;
    out.write_all(&g.x_max().to_le_bytes())?;
    out.write_all(&state.hbar().to_le_bytes())?;
    let mut buf = Vec::with_capacity(16 * state.amplitudes().len());
    for a in state.amplitudes() {
        buf.extend_from_slice(&a.re.to_le_bytes());
        buf.extend_from_slice(&a.im.to_le_bytes());
    }
    out.write_all(&buf)?;
    out.flush()?;
    Ok(())
}

fn read_u64<R: Read>(r: &mut R) -> Result<u64> {
    let mut b = [0u8; 8];
    r.read_exact(&mut b)
        .map_err(|e| Error::Fixture(format!("truncated header: {e}")))?;
    Ok(u64::from_le_bytes(b))
}

fn read_f64<R: Read>(r: &mut R) -> Result<f64> {
    Ok(f64::from_bits(read_u64(r)?))
}

pub fn read_fixture<R: Read>(mut input: R) -> Result<PairState> {
    let mut magic = [0u8; 8];
    input
        .read_exact(&mut magic)
        .map_err(|e| Error::Fixture(format!("missing magic: {e}")))?;
    if &magic != FIXTURE_MAGIC {
        return Err(Error::Fixture(format!(
            "bad magic {:?}, expected {:?}",
            String::from_utf8_lossy(&magic),
            String::from_utf8_lossy(FIXTURE_MAGIC)
        )));
    }
    let n = read_u64(&mut input)?;
    if n > (1 << 16) {
        return Err(Error::Fixture(format!("implausible grid size {n}")));
    }
    let n = n as usize;
    let x_min = read_f64(&mut input)?;
    let x_max = read_f64(&mut input)?;
    let hbar = read_f64(&mut input)?;
    let grid = GridSpec::new(x_min, x_max, n)?;

    let mut raw = vec![0u8; 16 * n * n];
    input
        .read_exact(&mut raw)
        .map_err(|e| Error::Fixture(format!("truncated amplitude block: {e}")))?;
    let amps = raw
        .chunks_exact(16)
        .map(|c| {
            let re = f64::from_le_bytes(c[..8].try_into().unwrap());
            let im = f64::from_le_bytes(c[8..].try_into().unwrap());
            Complex64::new(re, im)
        })
        .collect();
    let mut rest = [0u8; 1];
    if input.read(&mut rest)? != 0 {
        return Err(Error::Fixture("trailing bytes after amplitude block".into()));
    }
    PairState::from_amplitudes(grid, hbar, amps)
}
