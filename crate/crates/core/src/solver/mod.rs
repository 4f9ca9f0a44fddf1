//! Split-step spectral solver for the periodic Dirac–Klein–Gordon system
//! written in half-wave form:
//!
//! ```text
//! (D_t + D_x + M) a+ = P+(φβψ),   (D_t − D_x + M) a− = P−(φβψ),
//! φ_tt − φ_xx + m²φ = ⟨βψ, ψ⟩,    ψ = a+ (1, 1)/√2 + a− (1, −1)/√2
//! ```
//!
//! Each substep is solved exactly: free transport of `a±` and the
//! Klein–Gordon mode rotation in Fourier space, and the pointwise
//! rotation `ψ ← e^{iφβ dt} ψ` with the matching kick of `φ_t`.

mod data;
mod flows;
pub mod snapshot;

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

pub use data::{rough_data, rough_field, smooth_data, InitialData};
pub use flows::{coupling_flow, half_wave_flow, kg_flow, Stepper};

use crate::error::{Error, Result};
use crate::norms::bracket;
use crate::spinor::{decompose, Spinor};

/// Periodic grid `x_j = −X/2 + j·Δx`, `j < n_x`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec1D {
    pub n_x: usize,
    pub x_extent: f64,
}

impl GridSpec1D {
    pub fn new(n_x: usize, x_extent: f64) -> Result<Self> {
        if !n_x.is_power_of_two() || n_x < 2 {
            return Err(Error::NotPowerOfTwo(n_x));
        }
        if !(x_extent > 0.0 && x_extent.is_finite()) {
            return Err(Error::InvalidParameter(format!("box length must be positive, got {x_extent}")));
        }
        Ok(Self { n_x, x_extent })
    }

    pub fn dx(&self) -> f64 {
        self.x_extent / self.n_x as f64
    }

    pub fn x(&self, j: usize) -> f64 {
        -self.x_extent / 2.0 + j as f64 * self.dx()
    }

    /// Frequency of FFT bin `k`, in `{−n/2, …, n/2 − 1}·2π/X`.
    pub fn xi(&self, k: usize) -> f64 {
        let n = self.n_x as i64;
        let k = k as i64;
        let signed = if k < n / 2 { k } else { k - n };
        signed as f64 * 2.0 * PI / self.x_extent
    }

    pub fn xs(&self) -> Vec<f64> {
        (0..self.n_x).map(|j| self.x(j)).collect()
    }

    fn check_len(&self, len: usize) -> Result<()> {
        if len != self.n_x {
            return Err(Error::SizeMismatch { expected: self.n_x, actual: len });
        }
        Ok(())
    }
}

/// Amplitudes on the two ranges of `P±`, the field and its time
/// derivative.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DKGState {
    pub grid: GridSpec1D,
    pub psi_plus: Vec<Complex64>,
    pub psi_minus: Vec<Complex64>,
    pub phi: Vec<f64>,
    pub phi_t: Vec<f64>,
    pub t: f64,
    pub dirac_mass: f64,
    pub kg_mass: f64,
}

/// `a± = (ψ₁ ± ψ₂)/√2`.
pub fn amplitudes(psi: &Spinor) -> (Complex64, Complex64) {
    let (p, m) = decompose(psi);
    (p.c1 * std::f64::consts::SQRT_2, m.c1 * std::f64::consts::SQRT_2)
}

/// `a+ (1, 1)/√2 + a− (1, −1)/√2`.
pub fn reconstruct(a_plus: Complex64, a_minus: Complex64) -> Spinor {
    Spinor::new((a_plus + a_minus) * FRAC_1_SQRT_2, (a_plus - a_minus) * FRAC_1_SQRT_2)
}

pub fn init_state(
    psi0: &[Spinor],
    phi0: &[f64],
    phi1: &[f64],
    dirac_mass: f64,
    kg_mass: f64,
    grid: GridSpec1D,
) -> Result<DKGState> {
    grid.check_len(psi0.len())?;
    grid.check_len(phi0.len())?;
    grid.check_len(phi1.len())?;
    if psi0.iter().any(|p| !p.is_finite()) || phi0.iter().chain(phi1).any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("initial data"));
    }
    if !(dirac_mass >= 0.0 && kg_mass >= 0.0) {
        return Err(Error::InvalidParameter(format!("masses must be nonnegative, got M = {dirac_mass}, m = {kg_mass}")));
    }
    let (psi_plus, psi_minus) = psi0.iter().map(amplitudes).unzip();
    Ok(DKGState {
        grid,
        psi_plus,
        psi_minus,
        phi: phi0.to_vec(),
        phi_t: phi1.to_vec(),
        t: 0.0,
        dirac_mass,
        kg_mass,
    })
}

/// Complex field data: only the real part is dynamical, so an imaginary
/// part is an input error.
pub fn real_field(values: &[Complex64], tol: f64) -> Result<Vec<f64>> {
    if let Some(v) = values.iter().find(|v| v.im.abs() > tol) {
        return Err(Error::InvalidParameter(format!("scalar field data must be real, found imaginary part {}", v.im)));
    }
    Ok(values.iter().map(|v| v.re).collect())
}

impl DKGState {
    pub fn zeros(grid: GridSpec1D, dirac_mass: f64, kg_mass: f64) -> Self {
        let n = grid.n_x;
        Self {
            grid,
            psi_plus: vec![Complex64::default(); n],
            psi_minus: vec![Complex64::default(); n],
            phi: vec![0.0; n],
            phi_t: vec![0.0; n],
            t: 0.0,
            dirac_mass,
            kg_mass,
        }
    }

    pub fn spinor(&self) -> Vec<Spinor> {
        self.psi_plus.iter().zip(&self.psi_minus).map(|(&p, &m)| reconstruct(p, m)).collect()
    }

    pub fn is_finite(&self) -> bool {
        self.psi_plus.iter().chain(&self.psi_minus).all(|v| v.is_finite())
            && self.phi.iter().chain(&self.phi_t).all(|v| v.is_finite())
    }

    /// Largest pointwise deviation over all four fields.
    pub fn max_abs_diff(&self, other: &DKGState) -> f64 {
        let c = self
            .psi_plus
            .iter()
            .zip(&other.psi_plus)
            .chain(self.psi_minus.iter().zip(&other.psi_minus))
            .map(|(a, b)| (a - b).norm());
        let r = self.phi.iter().zip(&other.phi).chain(self.phi_t.iter().zip(&other.phi_t)).map(|(a, b)| (a - b).abs());
        c.chain(r).fold(0.0, f64::max)
    }

    /// Largest modulus over all four fields.
    pub fn max_abs(&self) -> f64 {
        let c = self.psi_plus.iter().chain(&self.psi_minus).map(|v| v.norm());
        c.chain(self.phi.iter().chain(&self.phi_t).map(|v| v.abs())).fold(0.0, f64::max)
    }
}

/// Discrete `L²` norm of the spinor, `(Σ |ψ|² Δx)^{1/2}`.
pub fn charge(state: &DKGState) -> f64 {
    let s: f64 = state.psi_plus.iter().chain(&state.psi_minus).map(|v| v.norm_sqr()).sum();
    (s * state.grid.dx()).sqrt()
}

/// `‖⟨ξ⟩^s f̂‖` scaled so that `s = 0` gives the discrete `L²` norm.
pub fn sobolev_norm(grid: &GridSpec1D, values: &[Complex64], s: f64) -> f64 {
    let mut buf = values.to_vec();
    rustfft::FftPlanner::new().plan_fft_forward(grid.n_x).process(&mut buf);
    let acc: f64 = buf.iter().enumerate().map(|(k, v)| bracket(grid.xi(k)).powf(2.0 * s) * v.norm_sqr()).sum();
    (acc * grid.dx() / grid.n_x as f64).sqrt()
}

/// `H^s` norm of the spinor (both components).
pub fn spinor_sobolev_norm(state: &DKGState, s: f64) -> f64 {
    let a = sobolev_norm(&state.grid, &state.psi_plus, s);
    let b = sobolev_norm(&state.grid, &state.psi_minus, s);
    a.hypot(b)
}

pub fn field_sobolev_norm(state: &DKGState, r: f64) -> f64 {
    let phi: Vec<Complex64> = state.phi.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    sobolev_norm(&state.grid, &phi, r)
}

/// `½ Σ (φ_t² + φ_x² + m²φ²) Δx`, with `φ_x` taken spectrally.
pub fn kg_energy(state: &DKGState) -> f64 {
    let g = &state.grid;
    let mut buf: Vec<Complex64> = state.phi.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    rustfft::FftPlanner::new().plan_fft_forward(g.n_x).process(&mut buf);
    let grad: f64 = buf.iter().enumerate().map(|(k, v)| g.xi(k).powi(2) * v.norm_sqr()).sum::<f64>() / g.n_x as f64;
    let m2 = state.kg_mass * state.kg_mass;
    let pot: f64 = state.phi_t.iter().zip(&state.phi).map(|(pt, p)| pt * pt + m2 * p * p).sum();
    0.5 * (grad + pot) * g.dx()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Splitting {
    Lie,
    Strang,
}

impl std::str::FromStr for Splitting {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "lie" => Ok(Splitting::Lie),
            "strang" => Ok(Splitting::Strang),
            _ => Err(Error::InvalidParameter(format!("unknown splitting {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    pub grid: GridSpec1D,
    pub dt: f64,
    pub t_end: f64,
    pub splitting: Splitting,
    pub diagnostics_every: usize,
    /// Sobolev exponent for the spinor diagnostic.
    pub s: f64,
    /// Sobolev exponent for the field diagnostic.
    pub r: f64,
}

impl SolverConfig {
    /// Defaults: `dt = Δx/2`, Strang splitting, diagnostics every step,
    /// `s = r = 0`.
    pub fn new(grid: GridSpec1D, t_end: f64) -> Self {
        Self { grid, dt: grid.dx() / 2.0, t_end, splitting: Splitting::Strang, diagnostics_every: 1, s: 0.0, r: 0.0 }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.dt > 0.0 && self.dt <= self.grid.dx() * (1.0 + 1e-12)) {
            return Err(Error::InvalidParameter(format!("time step {} must lie in (0, Δx = {}]", self.dt, self.grid.dx())));
        }
        if !(self.t_end >= 0.0 && self.t_end.is_finite()) {
            return Err(Error::InvalidParameter(format!("final time must be finite and nonnegative, got {}", self.t_end)));
        }
        if self.diagnostics_every == 0 {
            return Err(Error::InvalidParameter("diagnostics_every must be positive".into()));
        }
        Ok(())
    }

    /// Step sizes covering `[0, t_end]`; the last one absorbs the remainder.
    pub fn schedule(&self) -> Vec<f64> {
        let n = (self.t_end / self.dt - 1e-9).ceil().max(0.0) as usize;
        let mut steps = vec![self.dt; n];
        if let Some(last) = steps.last_mut() {
            *last = self.t_end - (n - 1) as f64 * self.dt;
        }
        steps
    }
}

/// One row of the diagnostic series.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Diagnostics {
    pub t: f64,
    pub charge: f64,
    pub hs_psi: f64,
    pub hr_phi: f64,
    pub kg_energy: f64,
}

pub fn diagnostics(state: &DKGState, s: f64, r: f64) -> Diagnostics {
    Diagnostics {
        t: state.t,
        charge: charge(state),
        hs_psi: spinor_sobolev_norm(state, s),
        hr_phi: field_sobolev_norm(state, r),
        kg_energy: kg_energy(state),
    }
}

/// One step of size `config.dt`.
pub fn step(state: &DKGState, config: &SolverConfig) -> Result<DKGState> {
    let mut out = state.clone();
    Stepper::new(config.grid)?.step(&mut out, config.dt, config.splitting);
    Ok(out)
}

/// Advances `state` to `t_end`, recording diagnostics at `t = 0`, every
/// `diagnostics_every` steps, and at the final time.
pub fn run(config: &SolverConfig, state: &mut DKGState) -> Result<Vec<Diagnostics>> {
    config.validate()?;
    if state.grid != config.grid {
        return Err(Error::GridMismatch(format!("state grid {:?} vs config grid {:?}", state.grid, config.grid)));
    }
    let stepper = Stepper::new(config.grid)?;
    let schedule = config.schedule();
    let mut out = vec![diagnostics(state, config.s, config.r)];
    for (i, &dt) in schedule.iter().enumerate() {
        stepper.step(state, dt, config.splitting);
        if !state.is_finite() {
            return Err(Error::Blowup { step: i + 1 });
        }
        if (i + 1) % config.diagnostics_every == 0 || i + 1 == schedule.len() {
            out.push(diagnostics(state, config.s, config.r));
        }
    }
    Ok(out)
}
