use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A uniform space-time grid on `[-T/2, T/2) × [-X/2, X/2)`.
///
/// Physical samples sit at `t_j = (j − n_t/2)·Δt`, `x_m = (m − n_x/2)·Δx`;
/// the dual grid at `τ_k = (k − n_t/2)·Δτ`, `ξ_l = (l − n_x/2)·Δξ` with
/// `Δτ = 2π/T`, `Δξ = 2π/X`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid2D {
    pub n_t: usize,
    pub n_x: usize,
    pub t_extent: f64,
    pub x_extent: f64,
}

impl Grid2D {
    pub fn new(n_t: usize, n_x: usize, t_extent: f64, x_extent: f64) -> Result<Self> {
        for n in [n_t, n_x] {
            if !n.is_power_of_two() {
                return Err(Error::NotPowerOfTwo(n));
            }
        }
        if !(t_extent > 0.0 && x_extent > 0.0 && t_extent.is_finite() && x_extent.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "grid extents must be positive and finite, got ({t_extent}, {x_extent})"
            )));
        }
        Ok(Self { n_t, n_x, t_extent, x_extent })
    }

    /// Square grid with equal extents.
    pub fn square(n: usize, extent: f64) -> Result<Self> {
        Self::new(n, n, extent, extent)
    }

    pub fn len(&self) -> usize {
        self.n_t * self.n_x
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn dt(&self) -> f64 {
        self.t_extent / self.n_t as f64
    }

    pub fn dx(&self) -> f64 {
        self.x_extent / self.n_x as f64
    }

    pub fn dtau(&self) -> f64 {
        2.0 * PI / self.t_extent
    }

    pub fn dxi(&self) -> f64 {
        2.0 * PI / self.x_extent
    }

    pub fn t(&self, j: usize) -> f64 {
        (j as f64 - (self.n_t / 2) as f64) * self.dt()
    }

    pub fn x(&self, m: usize) -> f64 {
        (m as f64 - (self.n_x / 2) as f64) * self.dx()
    }

    pub fn tau(&self, k: usize) -> f64 {
        (k as f64 - (self.n_t / 2) as f64) * self.dtau()
    }

    pub fn xi(&self, l: usize) -> f64 {
        (l as f64 - (self.n_x / 2) as f64) * self.dxi()
    }

    pub fn tau_axis(&self) -> Axis {
        Axis::new(self.tau(0), self.dtau(), self.n_t)
    }

    pub fn xi_axis(&self) -> Axis {
        Axis::new(self.xi(0), self.dxi(), self.n_x)
    }
}

/// Equispaced sample positions `origin + i·step`, `i < len`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Axis {
    pub origin: f64,
    pub step: f64,
    pub len: usize,
}

impl Axis {
    pub fn new(origin: f64, step: f64, len: usize) -> Self {
        Self { origin, step, len }
    }

    /// Smallest window with the given step covering `[lo, hi]`, with grid
    /// points on the lattice `step·ℤ`.
    pub fn covering(lo: f64, hi: f64, step: f64) -> Self {
        let i0 = (lo / step + 1e-9).floor() as i64;
        let i1 = (hi / step - 1e-9).ceil() as i64;
        Self::new(i0 as f64 * step, step, (i1 - i0 + 1) as usize)
    }

    pub fn at(&self, i: usize) -> f64 {
        self.origin + i as f64 * self.step
    }

    pub fn last(&self) -> f64 {
        self.at(self.len.saturating_sub(1))
    }

    pub fn contains_interval(&self, lo: f64, hi: f64) -> bool {
        let slack = 1e-9 * self.step;
        lo >= self.origin - slack && hi <= self.last() + slack
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Side {
    Physical,
    Fourier,
}

impl Side {
    pub fn name(self) -> &'static str {
        match self {
            Side::Physical => "physical",
            Side::Fourier => "fourier",
        }
    }
}

/// Complex samples on a [`Grid2D`], either in `(t, x)` or in `(τ, ξ)`;
/// row-major in the time (or `τ`) index.
#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction2D {
    grid: Grid2D,
    side: Side,
    values: Vec<Complex64>,
}

impl GridFunction2D {
    pub fn new(grid: Grid2D, side: Side, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::SizeMismatch { expected: grid.len(), actual: values.len() });
        }
        Ok(Self { grid, side, values })
    }

    pub fn zeros(grid: Grid2D, side: Side) -> Self {
        Self { grid, side, values: vec![Complex64::default(); grid.len()] }
    }

    /// Samples `f(t, x)` on the physical grid.
    pub fn from_physical_fn(grid: Grid2D, f: impl Fn(f64, f64) -> Complex64) -> Self {
        let mut values = Vec::with_capacity(grid.len());
        for j in 0..grid.n_t {
            let t = grid.t(j);
            values.extend((0..grid.n_x).map(|m| f(t, grid.x(m))));
        }
        Self { grid, side: Side::Physical, values }
    }

    /// Samples `f(τ, ξ)` on the dual grid.
    pub fn from_fourier_fn(grid: Grid2D, f: impl Fn(f64, f64) -> Complex64) -> Self {
        let mut values = Vec::with_capacity(grid.len());
        for k in 0..grid.n_t {
            let tau = grid.tau(k);
            values.extend((0..grid.n_x).map(|l| f(tau, grid.xi(l))));
        }
        Self { grid, side: Side::Fourier, values }
    }

    pub fn grid(&self) -> &Grid2D {
        &self.grid
    }

    pub fn side(&self) -> Side {
        self.side
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [Complex64] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.values[row * self.grid.n_x + col]
    }

    pub fn expect_side(&self, side: Side) -> Result<()> {
        if self.side != side {
            return Err(Error::WrongSide { expected: side.name(), actual: self.side.name() });
        }
        Ok(())
    }

    pub fn map(&self, f: impl Fn(Complex64) -> Complex64) -> Self {
        Self { grid: self.grid, side: self.side, values: self.values.iter().map(|&v| f(v)).collect() }
    }

    pub fn scale(&self, c: Complex64) -> Self {
        self.map(|v| v * c)
    }

    /// Pointwise complex conjugate of the stored samples.
    pub fn conj_values(&self) -> Self {
        self.map(|v| v.conj())
    }

    /// Largest modulus on the outermost rows and columns.
    pub fn boundary_max_abs(&self) -> f64 {
        let (nt, nx) = (self.grid.n_t, self.grid.n_x);
        let mut m = 0.0f64;
        for j in 0..nt {
            for l in [0, nx - 1] {
                m = m.max(self.get(j, l).norm());
            }
        }
        for l in 0..nx {
            for j in [0, nt - 1] {
                m = m.max(self.get(j, l).norm());
            }
        }
        m
    }

    /// Rejects functions that have not decayed to `tol` at the boundary.
    pub fn check_boundary_decay(&self, tol: f64) -> Result<()> {
        let max_abs = self.boundary_max_abs();
        if max_abs > tol {
            return Err(Error::BoundaryDecay { max_abs, tol });
        }
        Ok(())
    }

    pub fn to_spectrum(&self) -> Result<Spectrum2D> {
        self.expect_side(Side::Fourier)?;
        Ok(Spectrum2D {
            tau: self.grid.tau_axis(),
            xi: self.grid.xi_axis(),
            values: self.values.clone(),
        })
    }

    pub fn same_grid(&self, other: &GridFunction2D) -> Result<()> {
        if self.grid != other.grid {
            return Err(Error::GridMismatch(format!("{:?} vs {:?}", self.grid, other.grid)));
        }
        Ok(())
    }
}

/// Frequency-side samples on an arbitrary rectangular window of the
/// `(τ, ξ)` plane; row-major in `τ`.
///
/// Unlike [`GridFunction2D`], the window need not be centred at the
/// origin, so narrow supports far from zero frequency stay cheap.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum2D {
    pub tau: Axis,
    pub xi: Axis,
    pub values: Vec<Complex64>,
}

impl Spectrum2D {
    pub fn zeros(tau: Axis, xi: Axis) -> Self {
        Self { tau, xi, values: vec![Complex64::default(); tau.len * xi.len] }
    }

    pub fn from_fn(tau: Axis, xi: Axis, f: impl Fn(f64, f64) -> Complex64) -> Self {
        let mut values = Vec::with_capacity(tau.len * xi.len);
        for k in 0..tau.len {
            let t = tau.at(k);
            values.extend((0..xi.len).map(|l| f(t, xi.at(l))));
        }
        Self { tau, xi, values }
    }

    pub fn get(&self, k: usize, l: usize) -> Complex64 {
        self.values[k * self.xi.len + l]
    }

    pub fn conj_values(&self) -> Self {
        Self { tau: self.tau, xi: self.xi, values: self.values.iter().map(|v| v.conj()).collect() }
    }

    /// `(τ, ξ, value)` over every sample.
    pub fn iter(&self) -> impl Iterator<Item = (f64, f64, Complex64)> + '_ {
        let nx = self.xi.len;
        self.values.iter().enumerate().map(move |(i, &v)| (self.tau.at(i / nx), self.xi.at(i % nx), v))
    }

    /// Number of nonzero samples.
    pub fn support_size(&self) -> usize {
        self.values.iter().filter(|v| **v != Complex64::default()).count()
    }
}
