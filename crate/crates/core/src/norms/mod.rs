//! Discrete space-time Fourier analysis and the weighted norms
//!
//! ```text
//! ‖u‖_{X±^{a,α}} = ‖⟨ξ⟩^a ⟨τ ± ξ⟩^α ũ(τ,ξ)‖_{L²_{τ,ξ}}
//! ‖u‖_{H^{a,α}}  = ‖⟨ξ⟩^a ⟨|τ| − |ξ|⟩^α ũ(τ,ξ)‖_{L²_{τ,ξ}}
//! ```
//!
//! with `⟨x⟩ = 1 + |x|` and the transform `ũ(τ,ξ) = ∫ e^{−i(tτ+xξ)} u dt dx`
//! (no `2π` factor). All Plancherel constants live here:
//!
//! * `‖ũ‖_{L²(dτdξ)} = 2π ‖u‖_{L²(dtdx)}`
//! * `(uv)~ = (2π)⁻² ũ ∗ ṽ`, `(uv̄)~(τ,ξ) = (2π)⁻² ∫ ũ(λ,η) conj ṽ(λ−τ, η−ξ) dλdη`
//!
//! Periodic grids stand in for ℝ², so callers are expected to use data
//! that has decayed at the boundary (see
//! [`GridFunction2D::check_boundary_decay`]).

mod grid;
pub mod io;

use std::f64::consts::PI;

use num_complex::Complex64;
use rustfft::{FftDirection, FftPlanner};
use serde::{Deserialize, Serialize};

pub use grid::{Axis, Grid2D, GridFunction2D, Side, Spectrum2D};

use crate::error::{Error, Result};
use crate::fft::{fast_len, fft2, fftshift2, ifftshift2, Fft2};

/// `(2π)⁻²`, the factor between `ũ ∗ ṽ` and `(uv)~`.
pub const PRODUCT_FACTOR: f64 = 1.0 / (4.0 * PI * PI);

/// Forward transform with Riemann-sum scaling `Δt·Δx`.
pub fn transform(u: &GridFunction2D) -> Result<GridFunction2D> {
    u.expect_side(Side::Physical)?;
    let g = *u.grid();
    let mut data = ifftshift2(u.values(), g.n_t, g.n_x);
    fft2(&mut data, g.n_t, g.n_x, FftDirection::Forward);
    let scale = g.dt() * g.dx();
    let values = fftshift2(&data, g.n_t, g.n_x).into_iter().map(|v| v * scale).collect();
    GridFunction2D::new(g, Side::Fourier, values)
}

/// Two-sided inverse of [`transform`].
pub fn inverse_transform(u_hat: &GridFunction2D) -> Result<GridFunction2D> {
    u_hat.expect_side(Side::Fourier)?;
    let g = *u_hat.grid();
    let mut data = ifftshift2(u_hat.values(), g.n_t, g.n_x);
    fft2(&mut data, g.n_t, g.n_x, FftDirection::Inverse);
    let scale = 1.0 / (g.t_extent * g.x_extent);
    let values = fftshift2(&data, g.n_t, g.n_x).into_iter().map(|v| v * scale).collect();
    GridFunction2D::new(g, Side::Physical, values)
}

/// `⟨x⟩ = 1 + |x|`.
pub fn bracket(x: f64) -> f64 {
    1.0 + x.abs()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Flavor {
    XPlus,
    XMinus,
    H,
}

impl Flavor {
    /// The hyperbolic distance inside the bracket.
    pub fn hyperbolic(self, tau: f64, xi: f64) -> f64 {
        match self {
            Flavor::XPlus => tau + xi,
            Flavor::XMinus => tau - xi,
            Flavor::H => tau.abs() - xi.abs(),
        }
    }
}

impl std::str::FromStr for Flavor {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "x_plus" | "xplus" | "x+" | "plus" => Ok(Flavor::XPlus),
            "x_minus" | "xminus" | "x-" | "minus" => Ok(Flavor::XMinus),
            "h" => Ok(Flavor::H),
            _ => Err(Error::InvalidParameter(format!("unknown norm flavor {s:?}"))),
        }
    }
}

/// `(a, α, flavor)`: Sobolev exponent, hyperbolic exponent, weight kind.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NormIndex {
    pub a: f64,
    pub alpha: f64,
    pub flavor: Flavor,
}

impl NormIndex {
    pub fn new(a: f64, alpha: f64, flavor: Flavor) -> Self {
        Self { a, alpha, flavor }
    }

    pub fn l2() -> Self {
        Self::new(0.0, 0.0, Flavor::H)
    }

    pub fn weight(&self, tau: f64, xi: f64) -> f64 {
        let sob = if self.a == 0.0 { 1.0 } else { bracket(xi).powf(self.a) };
        let hyp = if self.alpha == 0.0 { 1.0 } else { bracket(self.flavor.hyperbolic(tau, xi)).powf(self.alpha) };
        sob * hyp
    }
}

impl Spectrum2D {
    /// Discrete `L²(dτ dξ)` norm of the weighted samples.
    pub fn weighted_norm(&self, idx: NormIndex) -> Result<f64> {
        let mut acc = 0.0;
        for (tau, xi, v) in self.iter() {
            if !v.is_finite() {
                return Err(Error::NonFinite("spectrum"));
            }
            if v.re == 0.0 && v.im == 0.0 {
                continue;
            }
            acc += (idx.weight(tau, xi) * v.norm()).powi(2);
        }
        Ok((acc * self.tau.step * self.xi.step).sqrt())
    }
}

/// Weighted norm of a Fourier-side grid function.
pub fn weighted_norm(u_hat: &GridFunction2D, idx: NormIndex) -> Result<f64> {
    u_hat.to_spectrum()?.weighted_norm(idx)
}

/// Physical-side `L²(dt dx)` norm.
pub fn physical_l2(u: &GridFunction2D) -> Result<f64> {
    u.expect_side(Side::Physical)?;
    let g = u.grid();
    Ok((u.values().iter().map(|v| v.norm_sqr()).sum::<f64>() * g.dt() * g.dx()).sqrt())
}

fn same_step(a: &Axis, b: &Axis) -> bool {
    (a.step - b.step).abs() <= 1e-12 * a.step.abs().max(b.step.abs())
}

/// Full linear correlation
///
/// ```text
/// out(τ, ξ) = ∫ F(λ, η) G(λ − τ, η − ξ) dλ dη
/// ```
///
/// evaluated on every lattice offset where the supports can meet. The two
/// windows must share their steps but may have different origins and
/// sizes. Computed with zero-padded FFTs.
pub fn correlate(f: &Spectrum2D, g: &Spectrum2D) -> Result<Spectrum2D> {
    if !same_step(&f.tau, &g.tau) || !same_step(&f.xi, &g.xi) {
        return Err(Error::GridMismatch(format!(
            "correlation needs equal steps, got ({}, {}) and ({}, {})",
            f.tau.step, f.xi.step, g.tau.step, g.xi.step
        )));
    }
    let (nft, nfx) = (f.tau.len, f.xi.len);
    let (ngt, ngx) = (g.tau.len, g.xi.len);
    let (out_t, out_x) = (nft + ngt - 1, nfx + ngx - 1);
    let (mt, mx) = (fast_len(out_t), fast_len(out_x));

    let mut a = vec![Complex64::default(); mt * mx];
    for k in 0..nft {
        a[k * mx..k * mx + nfx].copy_from_slice(&f.values[k * nfx..(k + 1) * nfx]);
    }
    // b[-d mod M] = g[d]
    let mut b = vec![Complex64::default(); mt * mx];
    for k in 0..ngt {
        let row = (mt - k) % mt;
        for l in 0..ngx {
            b[row * mx + (mx - l) % mx] = g.values[k * ngx + l];
        }
    }

    let mut planner = FftPlanner::new();
    let fwd = Fft2::new(&mut planner, mt, mx, FftDirection::Forward);
    let inv = Fft2::new(&mut planner, mt, mx, FftDirection::Inverse);
    let mut scratch = Vec::new();
    fwd.process(&mut a, &mut scratch);
    fwd.process(&mut b, &mut scratch);
    a.iter_mut().zip(&b).for_each(|(x, y)| *x *= y);
    drop(b);
    inv.process(&mut a, &mut scratch);
    drop(scratch);

    let scale = f.tau.step * f.xi.step / (mt * mx) as f64;
    let mut values = Vec::with_capacity(out_t * out_x);
    for o in 0..out_t {
        let d = o as i64 - (ngt as i64 - 1);
        let row = d.rem_euclid(mt as i64) as usize;
        for p in 0..out_x {
            let e = p as i64 - (ngx as i64 - 1);
            let col = e.rem_euclid(mx as i64) as usize;
            values.push(a[row * mx + col] * scale);
        }
    }
    let tau = Axis::new(f.tau.origin - g.tau.origin - (ngt - 1) as f64 * f.tau.step, f.tau.step, out_t);
    let xi = Axis::new(f.xi.origin - g.xi.origin - (ngx - 1) as f64 * f.xi.step, f.xi.step, out_x);
    Ok(Spectrum2D { tau, xi, values })
}

/// Restricts `s` to the window `(tau, xi)`; both must lie on the same lattice.
fn crop(s: &Spectrum2D, tau: Axis, xi: Axis) -> Spectrum2D {
    let off_t = ((tau.origin - s.tau.origin) / s.tau.step).round() as i64;
    let off_x = ((xi.origin - s.xi.origin) / s.xi.step).round() as i64;
    Spectrum2D::from_fn_indexed(tau, xi, |k, l| {
        let (i, j) = (k as i64 + off_t, l as i64 + off_x);
        if i < 0 || j < 0 || i >= s.tau.len as i64 || j >= s.xi.len as i64 {
            Complex64::default()
        } else {
            s.get(i as usize, j as usize)
        }
    })
}

impl Spectrum2D {
    fn from_fn_indexed(tau: Axis, xi: Axis, f: impl Fn(usize, usize) -> Complex64) -> Self {
        let mut values = Vec::with_capacity(tau.len * xi.len);
        for k in 0..tau.len {
            values.extend((0..xi.len).map(|l| f(k, l)));
        }
        Self { tau, xi, values }
    }
}

/// The correlation kernel `∫ F(λ,η) G(λ−τ, η−ξ) dλ dη` on the common grid
/// of `F` and `G` (contributions from outside the grid are zero).
pub fn bilinear_convolution(f: &GridFunction2D, g: &GridFunction2D) -> Result<GridFunction2D> {
    f.same_grid(g)?;
    let full = correlate(&f.to_spectrum()?, &g.to_spectrum()?)?;
    let grid = *f.grid();
    let out = crop(&full, grid.tau_axis(), grid.xi_axis());
    GridFunction2D::new(grid, Side::Fourier, out.values)
}

/// `ṽ(τ,ξ) ↦ ṽ(−τ,−ξ)` on a centred grid; the unpaired edge row/column
/// (index 0) maps outside the grid and is dropped.
pub fn reflect_fourier(v_hat: &GridFunction2D) -> Result<GridFunction2D> {
    v_hat.expect_side(Side::Fourier)?;
    let g = *v_hat.grid();
    let mut out = GridFunction2D::zeros(g, Side::Fourier);
    let (nt, nx) = (g.n_t, g.n_x);
    for k in 1..nt {
        for l in 1..nx {
            out.values_mut()[(nt - k) * nx + (nx - l)] = v_hat.get(k, l);
        }
    }
    Ok(out)
}

/// Transform of `u·v` (or `u·v̄`) computed from `ũ`, `ṽ` through the
/// correlation kernel, without returning to physical space.
pub fn product_spectrum_by_convolution(
    u_hat: &GridFunction2D,
    v_hat: &GridFunction2D,
    conjugate_second: bool,
) -> Result<GridFunction2D> {
    let second = if conjugate_second { v_hat.conj_values() } else { reflect_fourier(v_hat)? };
    let corr = bilinear_convolution(u_hat, &second)?;
    Ok(corr.scale(Complex64::new(PRODUCT_FACTOR, 0.0)))
}

/// Transform of `u·v` (or `u·v̄`) by pointwise multiplication in physical
/// space.
pub fn product_spectrum(u: &GridFunction2D, v: &GridFunction2D, conjugate_second: bool) -> Result<GridFunction2D> {
    u.expect_side(Side::Physical)?;
    v.expect_side(Side::Physical)?;
    u.same_grid(v)?;
    let values = u
        .values()
        .iter()
        .zip(v.values())
        .map(|(a, b)| if conjugate_second { a * b.conj() } else { a * b })
        .collect();
    transform(&GridFunction2D::new(*u.grid(), Side::Physical, values)?)
}

/// `‖u·v‖` or `‖u·v̄‖` in the indexed norm.
pub fn product_norm(u: &GridFunction2D, v: &GridFunction2D, idx: NormIndex, conjugate_second: bool) -> Result<f64> {
    weighted_norm(&product_spectrum(u, v, conjugate_second)?, idx)
}

/// Physical-side spatial reflection `u(t, x) ↦ u(t, −x)`; exchanges the
/// `X+` and `X−` norms. Index 0 (the unpaired edge) is kept in place.
pub fn reflect_space(u: &GridFunction2D) -> Result<GridFunction2D> {
    u.expect_side(Side::Physical)?;
    let g = *u.grid();
    let mut out = u.clone();
    for j in 0..g.n_t {
        for m in 1..g.n_x {
            out.values_mut()[j * g.n_x + m] = u.get(j, g.n_x - m);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn gaussian_grid() -> Grid2D {
        Grid2D::square(64, 16.0).unwrap()
    }

    fn gaussian(t: f64, x: f64) -> Complex64 {
        c((-(t * t + x * x) / 2.0).exp())
    }

    /// Direct double-sum transform, O(N⁴).
    fn direct_transform(u: &GridFunction2D) -> GridFunction2D {
        let g = *u.grid();
        GridFunction2D::from_fourier_fn(g, |tau, xi| {
            let mut acc = Complex64::default();
            for j in 0..g.n_t {
                for m in 0..g.n_x {
                    let ph = -(g.t(j) * tau + g.x(m) * xi);
                    acc += u.get(j, m) * Complex64::from_polar(1.0, ph);
                }
            }
            acc * g.dt() * g.dx()
        })
    }

    /// Direct double-sum correlation on the common grid.
    fn direct_correlation(f: &GridFunction2D, g: &GridFunction2D) -> GridFunction2D {
        let grid = *f.grid();
        let (nt, nx) = (grid.n_t as i64, grid.n_x as i64);
        let mut out = GridFunction2D::zeros(grid, Side::Fourier);
        for k in 0..nt {
            for l in 0..nx {
                let mut acc = Complex64::default();
                for i in 0..nt {
                    let ii = i - k + nt / 2;
                    if ii < 0 || ii >= nt {
                        continue;
                    }
                    for j in 0..nx {
                        let jj = j - l + nx / 2;
                        if jj < 0 || jj >= nx {
                            continue;
                        }
                        acc += f.get(i as usize, j as usize) * g.get(ii as usize, jj as usize);
                    }
                }
                out.values_mut()[(k * nx + l) as usize] = acc * grid.dtau() * grid.dxi();
            }
        }
        out
    }

    fn max_rel(a: &GridFunction2D, b: &GridFunction2D) -> f64 {
        let scale = b.values().iter().map(|v| v.norm()).fold(0.0, f64::max).max(1e-300);
        a.values().iter().zip(b.values()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max) / scale
    }

    #[test]
    fn grid_validation() {
        assert!(matches!(Grid2D::new(48, 64, 1.0, 1.0), Err(Error::NotPowerOfTwo(48))));
        assert!(Grid2D::new(64, 64, 0.0, 1.0).is_err());
        let g = Grid2D::new(8, 4, 4.0, 2.0).unwrap();
        assert!(matches!(
            GridFunction2D::new(g, Side::Physical, vec![c(0.0); 31]),
            Err(Error::SizeMismatch { expected: 32, actual: 31 })
        ));
        assert_eq!(g.t(4), 0.0);
        assert_eq!(g.tau(0), -4.0 * g.dtau());
    }

    #[test]
    fn transform_of_zero_and_point_mass() {
        let g = Grid2D::new(8, 16, 3.0, 5.0).unwrap();
        let z = transform(&GridFunction2D::zeros(g, Side::Physical)).unwrap();
        assert!(z.values().iter().all(|v| *v == Complex64::default()));

        let mut u = GridFunction2D::zeros(g, Side::Physical);
        u.values_mut()[3 * 16 + 11] = c(1.0);
        let h = transform(&u).unwrap();
        let expect = g.dt() * g.dx();
        for v in h.values() {
            assert!((v.norm() - expect).abs() < 1e-15);
        }
    }

    #[test]
    fn transform_matches_direct_sum_and_continuum() {
        let g = Grid2D::square(32, 16.0).unwrap();
        let u = GridFunction2D::from_physical_fn(g, gaussian);
        let fast = transform(&u).unwrap();
        let slow = direct_transform(&u);
        assert!(max_rel(&fast, &slow) < 1e-12);
        // continuum: ∫ e^{-(t²+x²)/2} e^{-i(tτ+xξ)} = 2π e^{-(τ²+ξ²)/2}
        let peak = 2.0 * PI;
        for k in 8..24 {
            for l in 8..24 {
                let exact = 2.0 * PI * (-(g.tau(k).powi(2) + g.xi(l).powi(2)) / 2.0).exp();
                assert!((fast.get(k, l).re - exact).abs() <= 1e-6 * peak);
            }
        }
    }

    #[test]
    fn inverse_round_trip_and_wrong_side() {
        let g = Grid2D::new(16, 32, 5.0, 9.0).unwrap();
        let u = GridFunction2D::from_physical_fn(g, |t, x| Complex64::new((t * x).sin(), (t - x).cos()));
        let back = inverse_transform(&transform(&u).unwrap()).unwrap();
        assert!(max_rel(&back, &u) < 1e-12);
        assert!(matches!(transform(&transform(&u).unwrap()), Err(Error::WrongSide { .. })));
        assert!(matches!(weighted_norm(&u, NormIndex::l2()), Err(Error::WrongSide { .. })));
    }

    #[test]
    fn bracket_values() {
        assert_eq!(bracket(0.0), 1.0);
        assert_eq!(bracket(-3.0), 4.0);
        assert_eq!(bracket(1e6), 1.0 + 1e6);
    }

    #[test]
    fn weighted_norm_single_mode() {
        // grid with Δτ = Δξ = 1 so that (τ₀, ξ₀) = (1, 2) is a node
        let g = Grid2D::square(8, 2.0 * PI).unwrap();
        let mut u = GridFunction2D::zeros(g, Side::Fourier);
        u.values_mut()[5 * 8 + 6] = c(1.0);
        assert_eq!((g.tau(5), g.xi(6)), (1.0, 2.0));
        let n = weighted_norm(&u, NormIndex::new(1.0, 1.0, Flavor::XPlus)).unwrap();
        // ⟨ξ⟩·⟨τ+ξ⟩ = ⟨2⟩·⟨3⟩ = 3·4
        assert!((n - 12.0 * (g.dtau() * g.dxi()).sqrt()).abs() < 1e-14);
        assert_eq!(weighted_norm(&GridFunction2D::zeros(g, Side::Fourier), NormIndex::l2()).unwrap(), 0.0);
    }

    #[test]
    fn weighted_norm_rejects_non_finite() {
        let g = Grid2D::square(4, 1.0).unwrap();
        let mut u = GridFunction2D::zeros(g, Side::Fourier);
        u.values_mut()[0] = c(f64::NAN);
        assert!(matches!(weighted_norm(&u, NormIndex::l2()), Err(Error::NonFinite(_))));
    }

    #[test]
    fn parseval_for_gaussian() {
        let g = gaussian_grid();
        let u = GridFunction2D::from_physical_fn(g, gaussian);
        u.check_boundary_decay(1e-12).unwrap();
        let n = weighted_norm(&transform(&u).unwrap(), NormIndex::l2()).unwrap();
        let phys = physical_l2(&u).unwrap();
        assert!((n / (2.0 * PI * phys) - 1.0).abs() < 1e-10);
        // and both agree with the continuum value ‖e^{-(t²+x²)/2}‖ = √π
        assert!((phys - PI.sqrt()).abs() < 1e-8);
    }

    #[test]
    fn homogeneity() {
        let g = gaussian_grid();
        let u = transform(&GridFunction2D::from_physical_fn(g, gaussian)).unwrap();
        let idx = NormIndex::new(0.5, -0.3, Flavor::XMinus);
        let base = weighted_norm(&u, idx).unwrap();
        let cc = Complex64::new(-3.0, 4.0);
        let scaled = weighted_norm(&u.scale(cc), idx).unwrap();
        assert!((scaled - 5.0 * base).abs() <= 1e-14 * scaled);
    }

    #[test]
    fn correlation_zero_and_delta() {
        let g = Grid2D::square(16, 4.0).unwrap();
        let z = GridFunction2D::zeros(g, Side::Fourier);
        let mut d = z.clone();
        d.values_mut()[5 * 16 + 9] = c(1.0);
        let out = bilinear_convolution(&z, &d).unwrap();
        assert!(out.values().iter().all(|v| v.norm() < 1e-15));

        let out = bilinear_convolution(&d, &d).unwrap();
        let cell = g.dtau() * g.dxi();
        for k in 0..16 {
            for l in 0..16 {
                let v = out.get(k, l).norm();
                if (g.tau(k), g.xi(l)) == (0.0, 0.0) {
                    assert!((v - cell).abs() < 1e-13);
                } else {
                    assert!(v < 1e-13);
                }
            }
        }
    }

    #[test]
    fn correlation_fft_matches_direct() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for n in [4usize, 8, 32] {
            let g = Grid2D::new(n, n, 3.0, 7.0).unwrap();
            let mut rnd = || {
                let vals = (0..g.len()).map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
                GridFunction2D::new(g, Side::Fourier, vals).unwrap()
            };
            let (f, h) = (rnd(), rnd());
            let fast = bilinear_convolution(&f, &h).unwrap();
            let slow = direct_correlation(&f, &h);
            assert!(max_rel(&fast, &slow) < 1e-10, "n = {n}");
        }
    }

    #[test]
    fn correlation_offset_windows_match_direct() {
        // two windows with different origins and sizes
        let f = Spectrum2D::from_fn(Axis::new(-3.0, 0.5, 5), Axis::new(10.0, 0.5, 7), |t, x| Complex64::new(t, x * 0.1));
        let g = Spectrum2D::from_fn(Axis::new(4.0, 0.5, 3), Axis::new(-2.0, 0.5, 6), |t, x| Complex64::new(x, -t));
        let out = correlate(&f, &g).unwrap();
        for (tau, xi, v) in out.iter() {
            let mut acc = Complex64::default();
            for (lam, eta, fv) in f.iter() {
                for (l2, e2, gv) in g.iter() {
                    if ((lam - tau) - l2).abs() < 1e-9 && ((eta - xi) - e2).abs() < 1e-9 {
                        acc += fv * gv;
                    }
                }
            }
            acc *= 0.25;
            assert!((acc - v).norm() < 1e-10, "({tau}, {xi})");
        }
        let bad = Spectrum2D::zeros(Axis::new(0.0, 0.25, 3), Axis::new(0.0, 0.5, 3));
        assert!(matches!(correlate(&f, &bad), Err(Error::GridMismatch(_))));
    }

    #[test]
    fn product_routes_agree_for_gaussians() {
        let g = gaussian_grid();
        let u = GridFunction2D::from_physical_fn(g, |t, x| Complex64::new(0.0, 1.0) * gaussian(t - 0.5, x + 0.3));
        let v = GridFunction2D::from_physical_fn(g, |t, x| gaussian(t, x) * Complex64::from_polar(1.0, 0.7 * x - 0.2 * t));
        let (uh, vh) = (transform(&u).unwrap(), transform(&v).unwrap());
        for conj in [true, false] {
            let phys = product_spectrum(&u, &v, conj).unwrap();
            let conv = product_spectrum_by_convolution(&uh, &vh, conj).unwrap();
            assert!(max_rel(&conv, &phys) < 1e-8, "conj = {conj}");
            let idx = NormIndex::new(0.7, 0.4, Flavor::H);
            let a = weighted_norm(&phys, idx).unwrap();
            let b = weighted_norm(&conv, idx).unwrap();
            assert!((a - b).abs() <= 1e-8 * a);
        }
    }

    #[test]
    fn product_with_flat_window_reduces_to_weighted_norm() {
        let g = gaussian_grid();
        let u = GridFunction2D::from_physical_fn(g, gaussian);
        let one = GridFunction2D::from_physical_fn(g, |_, _| c(1.0));
        let idx = NormIndex::new(1.0, 0.5, Flavor::XPlus);
        let direct = weighted_norm(&transform(&u).unwrap(), idx).unwrap();
        let prod = product_norm(&u, &one, idx, true).unwrap();
        assert!((direct - prod).abs() <= 1e-12 * direct);
        let zero = GridFunction2D::zeros(g, Side::Physical);
        assert_eq!(product_norm(&zero, &one, idx, false).unwrap(), 0.0);
    }

    #[test]
    fn conjugation_and_reflection() {
        let g = gaussian_grid();
        let v = GridFunction2D::from_physical_fn(g, |t, x| gaussian(t - 0.4, x + 1.0) * Complex64::from_polar(1.0, 1.3 * x + 0.6 * t));
        let vh = transform(&v).unwrap();
        let vbar = transform(&v.conj_values()).unwrap();
        let vref = transform(&reflect_space(&v).unwrap()).unwrap();
        for (a, alpha) in [(0.0, 0.0), (1.0, -0.5), (-0.7, 1.2)] {
            let h = NormIndex::new(a, alpha, Flavor::H);
            let n = weighted_norm(&vh, h).unwrap();
            assert!((weighted_norm(&vbar, h).unwrap() - n).abs() <= 1e-12 * n);
            for fl in [Flavor::XPlus, Flavor::XMinus] {
                let idx = NormIndex::new(a, alpha, fl);
                let n = weighted_norm(&vh, idx).unwrap();
                // conjugation keeps X± (τ+ξ ↦ −(τ+ξ) under ũ ↦ conj ũ(−·))
                assert!((weighted_norm(&vbar, idx).unwrap() - n).abs() <= 1e-12 * n);
                // spatial reflection swaps X+ and X−
                let other = if fl == Flavor::XPlus { Flavor::XMinus } else { Flavor::XPlus };
                let r = weighted_norm(&vref, NormIndex::new(a, alpha, other)).unwrap();
                assert!((r - n).abs() <= 1e-12 * n);
            }
        }
    }
}
