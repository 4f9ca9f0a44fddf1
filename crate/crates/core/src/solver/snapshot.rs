//! State snapshots as four consecutive grid-function records
//! (`psi_plus`, `psi_minus`, `phi`, `phi_t`) in the layout of
//! [`crate::norms::io`], each a single physical row of length `n_x`.
//! Time and masses are not stored.

use std::io::{Read, Write};

use num_complex::Complex64;

use super::{DKGState, GridSpec1D};
use crate::error::{Error, Result};
use crate::norms::io::{read_grid_function, write_grid_function};
use crate::norms::{Grid2D, GridFunction2D, Side};

/// Placeholder extent of the one-row time axis.
const ROW_EXTENT: f64 = 1.0;

fn record(grid: &GridSpec1D, values: Vec<Complex64>) -> Result<GridFunction2D> {
    GridFunction2D::new(Grid2D::new(1, grid.n_x, ROW_EXTENT, grid.x_extent)?, Side::Physical, values)
}

fn real_row(v: &[f64]) -> Vec<Complex64> {
    v.iter().map(|&x| Complex64::new(x, 0.0)).collect()
}

pub fn write_snapshot<W: Write>(mut w: W, state: &DKGState) -> Result<()> {
    let g = &state.grid;
    for vals in [state.psi_plus.clone(), state.psi_minus.clone(), real_row(&state.phi), real_row(&state.phi_t)] {
        write_grid_function(&mut w, &record(g, vals)?)?;
    }
    Ok(())
}

/// Reads the four records back into a state at time `t` with the given
/// masses.
pub fn read_snapshot<R: Read>(mut r: R, t: f64, dirac_mass: f64, kg_mass: f64) -> Result<DKGState> {
    let mut rows = Vec::with_capacity(4);
    for _ in 0..4 {
        let f = read_grid_function(&mut r)?;
        f.expect_side(Side::Physical)?;
        if f.grid().n_t != 1 {
            return Err(Error::Format(format!("snapshot record has {} rows, expected 1", f.grid().n_t)));
        }
        rows.push(f);
    }
    let gx = *rows[0].grid();
    if rows.iter().any(|f| *f.grid() != gx) {
        return Err(Error::Format("snapshot records disagree on the grid".into()));
    }
    let grid = GridSpec1D::new(gx.n_x, gx.x_extent)?;
    let mut it = rows.into_iter().map(GridFunction2D::into_values);
    let psi_plus = it.next().unwrap();
    let psi_minus = it.next().unwrap();
    let phi = super::real_field(&it.next().unwrap(), 0.0)?;
    let phi_t = super::real_field(&it.next().unwrap(), 0.0)?;
    Ok(DKGState { grid, psi_plus, psi_minus, phi, phi_t, t, dirac_mass, kg_mass })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solver::{init_state, smooth_data};

    #[test]
    fn round_trip() {
        let g = GridSpec1D::new(64, 16.0).unwrap();
        let (psi, phi0, phi1) = smooth_data(&g);
        let st = init_state(&psi, &phi0, &phi1, 1.0, 0.5, g).unwrap();
        let mut buf = Vec::new();
        write_snapshot(&mut buf, &st).unwrap();
        assert_eq!(buf.len(), 4 * (40 + 64 * 16));
        assert_eq!(read_snapshot(&buf[..], 0.0, 1.0, 0.5).unwrap(), st);
        assert!(read_snapshot(&buf[..buf.len() - 8], 0.0, 1.0, 0.5).is_err());
    }
}
