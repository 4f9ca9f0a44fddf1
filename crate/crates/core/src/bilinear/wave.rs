//! Products of free waves `u(t,x) = f(x − t)`, `v(t,x) = g(x + t)` and a
//! random probe of the embedding `X+^{0,α} · X−^{0,α} ⊂ L²`.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rustfft::FftPlanner;

use crate::error::{Error, Result};
use crate::norms::{correlate, Axis, Flavor, NormIndex, Spectrum2D, PRODUCT_FACTOR};

/// Relative size allowed at the two ends of the sample window.
const DECAY_TOL: f64 = 1e-12;

fn check_profile(f: &[Complex64], name: &str) -> Result<f64> {
    if f.len() < 2 {
        return Err(Error::InvalidParameter(format!("{name} needs at least two samples")));
    }
    if f.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("wave profile"));
    }
    let peak = f.iter().map(|v| v.norm()).fold(0.0, f64::max);
    if peak == 0.0 {
        return Err(Error::InvalidExperiment(format!("{name} is identically zero")));
    }
    let edge = f[0].norm().max(f[f.len() - 1].norm());
    if edge > DECAY_TOL * peak {
        return Err(Error::BoundaryDecay { max_abs: edge, tol: DECAY_TOL * peak });
    }
    Ok(peak)
}

/// `|f̂|²` on the half lattice `ξ = k·π/X`, split into even and odd `k`.
/// Samples sit at `x_m = (m − n/2)·X/n`.
fn half_lattice_power(f: &[Complex64], x_extent: f64) -> (f64, f64) {
    let n = f.len();
    let mut buf = vec![Complex64::default(); 2 * n];
    for (m, v) in f.iter().enumerate() {
        let j = (m as i64 - (n / 2) as i64).rem_euclid(2 * n as i64) as usize;
        buf[j] = *v;
    }
    FftPlanner::new().plan_fft_forward(2 * n).process(&mut buf);
    let dx2 = (x_extent / n as f64).powi(2);
    let mut even = 0.0;
    let mut odd = 0.0;
    for (k, v) in buf.iter().enumerate() {
        if k % 2 == 0 {
            even += v.norm_sqr() * dx2;
        } else {
            odd += v.norm_sqr() * dx2;
        }
    }
    (even, odd)
}

/// `‖Ψ‖ / (‖f̂‖ ‖ĝ‖)` with `Ψ(τ, ξ) = f̂((ξ − τ)/2) ĝ((ξ + τ)/2)`, the
/// Fourier-side form of the free-wave product after the change of
/// variables. Equal to `√2` up to quadrature error.
///
/// `f` and `g` are physical samples on `[−X/2, X/2)`; their transforms
/// are taken on the half lattice so that `(ξ ∓ τ)/2` is always a sample.
pub fn wave_product_constant(f: &[Complex64], g: &[Complex64], x_extent: f64) -> Result<f64> {
    check_profile(f, "f")?;
    check_profile(g, "g")?;
    if f.len() != g.len() {
        return Err(Error::SizeMismatch { expected: f.len(), actual: g.len() });
    }
    let (ef, of) = half_lattice_power(f, x_extent);
    let (eg, og) = half_lattice_power(g, x_extent);
    // Δ² Σ_{i ≡ k mod 2} |f̂_i|²|ĝ_k|²  over  h(Σ|f̂|²) · h(Σ|ĝ|²),  Δ = 2h
    Ok((4.0 * (ef * eg + of * og) / ((ef + of) * (eg + og))).sqrt())
}

/// `‖uv‖_{L²(dt dx)} / (‖f‖ ‖g‖)` by direct quadrature on an
/// `n_t × n` space-time grid. The translates are formed spectrally, so
/// `t_extent` need not be a multiple of `Δx`. Equal to `1/√2` for data
/// whose interaction region fits in the window.
pub fn free_wave_product_ratio(
    f: &[Complex64],
    g: &[Complex64],
    x_extent: f64,
    n_t: usize,
    t_extent: f64,
) -> Result<f64> {
    check_profile(f, "f")?;
    check_profile(g, "g")?;
    if f.len() != g.len() {
        return Err(Error::SizeMismatch { expected: f.len(), actual: g.len() });
    }
    if n_t == 0 || !(t_extent > 0.0) {
        return Err(Error::InvalidParameter(format!("bad time grid n_t = {n_t}, extent {t_extent}")));
    }
    let n = f.len();
    let dx = x_extent / n as f64;
    let dt = t_extent / n_t as f64;
    let mut planner = FftPlanner::new();
    let fwd = planner.plan_fft_forward(n);
    let inv = planner.plan_fft_inverse(n);
    // wrapped order: index j holds x = jΔx (j < n/2) or (j − n)Δx
    let wrap = |h: &[Complex64]| -> Vec<Complex64> {
        let mut a: Vec<Complex64> = (0..n).map(|j| h[(j + n / 2) % n]).collect();
        fwd.process(&mut a);
        a
    };
    let (fh, gh) = (wrap(f), wrap(g));
    let xi = |k: usize| {
        let k = if k < n / 2 { k as f64 } else { k as f64 - n as f64 };
        2.0 * PI * k / x_extent
    };
    let mut acc = 0.0;
    let (mut ur, mut vr) = (vec![Complex64::default(); n], vec![Complex64::default(); n]);
    for j in 0..n_t {
        let t = (j as f64 - (n_t / 2) as f64) * dt;
        for k in 0..n {
            let ph = Complex64::from_polar(1.0, -xi(k) * t);
            ur[k] = fh[k] * ph;
            vr[k] = gh[k] * ph.conj();
        }
        inv.process(&mut ur);
        inv.process(&mut vr);
        let scale = 1.0 / (n as f64 * n as f64);
        acc += ur.iter().zip(&vr).map(|(a, b)| (a * b).norm_sqr()).sum::<f64>() * scale * scale;
    }
    let l2 = |h: &[Complex64]| (h.iter().map(|v| v.norm_sqr()).sum::<f64>() * dx).sqrt();
    Ok((acc * dt * dx).sqrt() / (l2(f) * l2(g)))
}

/// `ṽ(τ, ξ) ↦ ṽ(−τ, −ξ)` on the mirrored window.
pub fn reflect_spectrum(s: &Spectrum2D) -> Spectrum2D {
    let tau = Axis::new(-s.tau.last(), s.tau.step, s.tau.len);
    let xi = Axis::new(-s.xi.last(), s.xi.step, s.xi.len);
    Spectrum2D { tau, xi, values: s.values.iter().rev().copied().collect() }
}

/// Transform of `uv` from `ũ`, `ṽ`: `(2π)⁻² ũ ∗ ṽ`.
fn product_of_spectra(u: &Spectrum2D, v: &Spectrum2D) -> Result<Spectrum2D> {
    let mut out = correlate(u, &reflect_spectrum(v))?;
    out.values.iter_mut().for_each(|z| *z *= PRODUCT_FACTOR);
    Ok(out)
}

/// Square frequency band `|τ|, |ξ| ≤ half_width·step`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProbeBand {
    pub half_width: usize,
    pub step: f64,
}

impl Default for ProbeBand {
    fn default() -> Self {
        Self { half_width: 32, step: 1.0 }
    }
}

impl ProbeBand {
    fn axis(&self) -> Axis {
        Axis::new(-(self.half_width as f64) * self.step, self.step, 2 * self.half_width + 1)
    }

    fn random<R: rand::Rng>(&self, rng: &mut R) -> Spectrum2D {
        let ax = self.axis();
        let mut s = Spectrum2D::zeros(ax, ax);
        for v in s.values.iter_mut() {
            *v = Complex64::new(StandardNormal.sample(rng), StandardNormal.sample(rng));
        }
        s
    }
}

fn normalized(mut s: Spectrum2D, idx: NormIndex) -> Result<Spectrum2D> {
    let n = s.weighted_norm(idx)?;
    s.values.iter_mut().for_each(|v| *v /= n);
    Ok(s)
}

/// Largest `‖uv‖_{L²} / (‖u‖_{X+^{0,α}} ‖v‖_{X−^{0,α}})` over `trials`
/// pairs with i.i.d. complex Gaussian coefficients on `band`.
pub fn embedding_probe(alpha: f64, trials: usize, seed: u64, band: ProbeBand) -> Result<f64> {
    if !(alpha > 0.5) {
        return Err(Error::InvalidParameter(format!("hyperbolic exponent must exceed 1/2, got {alpha}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (plus, minus) = (NormIndex::new(0.0, alpha, Flavor::XPlus), NormIndex::new(0.0, alpha, Flavor::XMinus));
    let mut worst = 0.0f64;
    for _ in 0..trials {
        let u = normalized(band.random(&mut rng), plus)?;
        let v = normalized(band.random(&mut rng), minus)?;
        let prod = product_of_spectra(&u, &v)?;
        // ‖(uv)~‖ = 2π ‖uv‖
        worst = worst.max(prod.weighted_norm(NormIndex::l2())? / (2.0 * PI));
    }
    Ok(worst)
}
