use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use super::{reconstruct, DKGState, GridSpec1D, Splitting};
use crate::error::Result;
use crate::spinor::null_form;

/// FFT plans and wavenumbers for one grid, shared by every substep.
pub struct Stepper {
    grid: GridSpec1D,
    fwd: Arc<dyn Fft<f64>>,
    inv: Arc<dyn Fft<f64>>,
    xi: Vec<f64>,
}

impl Stepper {
    pub fn new(grid: GridSpec1D) -> Result<Self> {
        let grid = GridSpec1D::new(grid.n_x, grid.x_extent)?;
        let mut planner = FftPlanner::new();
        Ok(Self {
            grid,
            fwd: planner.plan_fft_forward(grid.n_x),
            inv: planner.plan_fft_inverse(grid.n_x),
            xi: (0..grid.n_x).map(|k| grid.xi(k)).collect(),
        })
    }

    pub fn grid(&self) -> &GridSpec1D {
        &self.grid
    }

    /// Multiplies the spectrum of `v` by `symbol(ξ_k)`.
    fn apply_symbol(&self, v: &mut [Complex64], symbol: impl Fn(f64) -> Complex64) {
        self.fwd.process(v);
        let inv_n = 1.0 / self.grid.n_x as f64;
        v.iter_mut().zip(&self.xi).for_each(|(c, &k)| *c *= symbol(k) * inv_n);
        self.inv.process(v);
    }

    /// `â± ← e^{−i(±ξ + M)dt} â±`.
    pub fn half_wave(&self, st: &mut DKGState, dt: f64) {
        let m = st.dirac_mass;
        self.apply_symbol(&mut st.psi_plus, |k| Complex64::from_polar(1.0, -(k + m) * dt));
        self.apply_symbol(&mut st.psi_minus, |k| Complex64::from_polar(1.0, -(-k + m) * dt));
    }

    /// Exact free Klein–Gordon flow, mode by mode.
    pub fn kg(&self, st: &mut DKGState, dt: f64) {
        let n = self.grid.n_x;
        let mut p: Vec<Complex64> = st.phi.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        let mut q: Vec<Complex64> = st.phi_t.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        self.fwd.process(&mut p);
        self.fwd.process(&mut q);
        let m2 = st.kg_mass * st.kg_mass;
        let inv_n = 1.0 / n as f64;
        for ((pk, qk), &k) in p.iter_mut().zip(q.iter_mut()).zip(&self.xi) {
            let w = (k * k + m2).sqrt();
            let (s, c) = (w * dt).sin_cos();
            let sinc = if (w * dt).abs() < 1e-6 { dt * (1.0 - (w * dt).powi(2) / 6.0) } else { s / w };
            let (p0, q0) = (*pk, *qk);
            *pk = (p0 * c + q0 * sinc) * inv_n;
            *qk = (q0 * c - p0 * (w * s)) * inv_n;
        }
        self.inv.process(&mut p);
        self.inv.process(&mut q);
        st.phi.iter_mut().zip(&p).for_each(|(d, v)| *d = v.re);
        st.phi_t.iter_mut().zip(&q).for_each(|(d, v)| *d = v.re);
    }

    /// `ψ ← cos(φ dt) ψ + i sin(φ dt) βψ` and `φ_t ← φ_t + dt ⟨βψ, ψ⟩`.
    /// `|ψ₁|`, `|ψ₂|` are invariant under the rotation, so the source is
    /// constant over the substep and both updates are exact.
    pub fn coupling(&self, st: &mut DKGState, dt: f64) {
        for j in 0..self.grid.n_x {
            let (ap, am) = (st.psi_plus[j], st.psi_minus[j]);
            let psi = reconstruct(ap, am);
            st.phi_t[j] += dt * null_form(&psi, &psi).re;
            let (s, c) = (st.phi[j] * dt).sin_cos();
            let i_s = Complex64::new(0.0, s);
            // β swaps the two amplitudes
            st.psi_plus[j] = ap * c + am * i_s;
            st.psi_minus[j] = am * c + ap * i_s;
        }
    }

    /// Strang: `C(dt/2) ∘ [W(dt) ∥ K(dt)] ∘ C(dt/2)`; Lie: `C(dt) ∘ K(dt) ∘ W(dt)`.
    pub fn step(&self, st: &mut DKGState, dt: f64, splitting: Splitting) {
        match splitting {
            Splitting::Strang => {
                self.coupling(st, dt / 2.0);
                self.half_wave(st, dt);
                self.kg(st, dt);
                self.coupling(st, dt / 2.0);
            }
            Splitting::Lie => {
                self.half_wave(st, dt);
                self.kg(st, dt);
                self.coupling(st, dt);
            }
        }
        st.t += dt;
    }

    pub fn advance(&self, st: &mut DKGState, dt: f64, steps: usize, splitting: Splitting) {
        for _ in 0..steps {
            self.step(st, dt, splitting);
        }
    }
}

pub fn half_wave_flow(state: &DKGState, dt: f64) -> Result<DKGState> {
    let mut out = state.clone();
    Stepper::new(state.grid)?.half_wave(&mut out, dt);
    Ok(out)
}

pub fn kg_flow(state: &DKGState, dt: f64) -> Result<DKGState> {
    let mut out = state.clone();
    Stepper::new(state.grid)?.kg(&mut out, dt);
    Ok(out)
}

pub fn coupling_flow(state: &DKGState, dt: f64) -> Result<DKGState> {
    let mut out = state.clone();
    Stepper::new(state.grid)?.coupling(&mut out, dt);
    Ok(out)
}
