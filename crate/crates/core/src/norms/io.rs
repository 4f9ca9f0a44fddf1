//! Flat little-endian layout for [`GridFunction2D`]:
//!
//! ```text
//! u64 n_t | u64 n_x | f64 t_extent | f64 x_extent | u64 side (0 physical, 1 fourier)
//! then n_t·n_x pairs (f64 re, f64 im), row-major in t
//! ```

use std::io::{Read, Write};

use num_complex::Complex64;

use super::grid::{Grid2D, GridFunction2D, Side};
use crate::error::{Error, Result};

pub const HEADER_BYTES: usize = 40;

pub fn write_grid_function<W: Write>(mut w: W, u: &GridFunction2D) -> Result<()> {
    let g = u.grid();
    w.write_all(&(g.n_t as u64).to_le_bytes())?;
    w.write_all(&(g.n_x as u64).to_le_bytes())?;
    w.write_all(&g.t_extent.to_le_bytes())?;
    w.write_all(&g.x_extent.to_le_bytes())?;
    let side: u64 = match u.side() {
        Side::Physical => 0,
        Side::Fourier => 1,
    };
    w.write_all(&side.to_le_bytes())?;
    let mut buf = Vec::with_capacity(u.values().len() * 16);
    for v in u.values() {
        buf.extend_from_slice(&v.re.to_le_bytes());
        buf.extend_from_slice(&v.im.to_le_bytes());
    }
    w.write_all(&buf)?;
    Ok(())
}

fn read_u64<R: Read>(r: &mut R) -> Result<u64> {
    let mut b = [0u8; 8];
    r.read_exact(&mut b)?;
    Ok(u64::from_le_bytes(b))
}

fn read_f64<R: Read>(r: &mut R) -> Result<f64> {
    Ok(f64::from_bits(read_u64(r)?))
}

pub fn read_grid_function<R: Read>(mut r: R) -> Result<GridFunction2D> {
    let n_t = read_u64(&mut r)? as usize;
    let n_x = read_u64(&mut r)? as usize;
    let t_extent = read_f64(&mut r)?;
    let x_extent = read_f64(&mut r)?;
    let side = match read_u64(&mut r)? {
        0 => Side::Physical,
        1 => Side::Fourier,
        other => return Err(Error::Format(format!("unknown side flag {other}"))),
    };
    let grid = Grid2D::new(n_t, n_x, t_extent, x_extent)?;
    let mut raw = vec![0u8; grid.len() * 16];
    r.read_exact(&mut raw)
        .map_err(|e| Error::Format(format!("payload shorter than {} samples: {e}", grid.len())))?;
    let values = raw
        .chunks_exact(16)
        .map(|c| {
            let re = f64::from_le_bytes(c[..8].try_into().unwrap());
            let im = f64::from_le_bytes(c[8..].try_into().unwrap());
            Complex64::new(re, im)
        })
        .collect();
    GridFunction2D::new(grid, side, values)
}
