use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rustfft::FftPlanner;

use super::{sobolev_norm, GridSpec1D};
use crate::error::{Error, Result};
use crate::norms::bracket;
use crate::spinor::Spinor;

/// Decay offset beyond `⟨ξ⟩^{−s−1/2}` in the rough-data spectrum.
const ROUGH_EXCESS: f64 = 0.01;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InitialData {
    Smooth,
    Rough,
}

impl std::str::FromStr for InitialData {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "smooth" => Ok(InitialData::Smooth),
            "rough" => Ok(InitialData::Rough),
            _ => Err(Error::InvalidParameter(format!("unknown data kind {s:?}"))),
        }
    }
}

/// Gaussian wave packets centred near the origin:
///
/// ```text
/// ψ₀ = (e^{−x²} e^{ix}, ½ e^{−(x−1)²}),  φ₀ = ½ e^{−x²},  φ₁ = ⅕ x e^{−x²}
/// ```
pub fn smooth_data(grid: &GridSpec1D) -> (Vec<Spinor>, Vec<f64>, Vec<f64>) {
    let xs = grid.xs();
    let psi = xs
        .iter()
        .map(|&x| {
            Spinor::new(Complex64::from_polar((-x * x).exp(), x), Complex64::new(0.5 * (-(x - 1.0).powi(2)).exp(), 0.0))
        })
        .collect();
    let phi0 = xs.iter().map(|&x| 0.5 * (-x * x).exp()).collect();
    let phi1 = xs.iter().map(|&x| 0.2 * x * (-x * x).exp()).collect();
    (psi, phi0, phi1)
}

/// Samples with spectrum `⟨ξ⟩^{−s−0.51} e^{iθ_k}` and i.i.d. uniform
/// phases, on the grid's dual lattice.
fn random_phase_profile(grid: &GridSpec1D, s: f64, rng: &mut ChaCha8Rng) -> Vec<Complex64> {
    let mut c: Vec<Complex64> = (0..grid.n_x)
        .map(|k| Complex64::from_polar(bracket(grid.xi(k)).powf(-s - 0.5 - ROUGH_EXCESS), rng.gen_range(0.0..2.0 * PI)))
        .collect();
    FftPlanner::new().plan_fft_inverse(grid.n_x).process(&mut c);
    c.iter_mut().for_each(|v| *v /= grid.x_extent);
    c
}

/// Spinor data barely in `H^s`, normalised to unit `H^s` norm; its
/// `H^{s'}` norm grows without bound in `n_x` for `s' > s + 0.01`.
/// Bit-reproducible for a fixed seed and grid.
pub fn rough_data(s: f64, seed: u64, grid: &GridSpec1D) -> Vec<Spinor> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let c1 = random_phase_profile(grid, s, &mut rng);
    let c2 = random_phase_profile(grid, s, &mut rng);
    let norm = sobolev_norm(grid, &c1, s).hypot(sobolev_norm(grid, &c2, s));
    c1.iter().zip(&c2).map(|(a, b)| Spinor::new(a / norm, b / norm)).collect()
}

/// Real field data with unit `H^r` norm and the same spectral profile.
pub fn rough_field(r: f64, seed: u64, grid: &GridSpec1D) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9_7f4a_7c15);
    let re: Vec<Complex64> =
        random_phase_profile(grid, r, &mut rng).iter().map(|v| Complex64::new(v.re, 0.0)).collect();
    let norm = sobolev_norm(grid, &re, r);
    re.iter().map(|v| v.re / norm).collect()
}
