use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{ExponentTuple, FamilyId};
use crate::error::{Error, Result};
use crate::norms::{correlate, Axis, Flavor, NormIndex, Spectrum2D, PRODUCT_FACTOR};

/// Width of every `O(1)` strip: `|λ ± η| ≤ 1/2`.
pub const STRIP_THICKNESS: f64 = 1.0;
/// Frequency lattice step; a quarter of the strip thickness.
pub const DEFAULT_STEP: f64 = 0.25;

const MEMBERSHIP_SLACK: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Self {
        Self { lo, hi }
    }

    pub fn contains(&self, x: f64) -> bool {
        x >= self.lo - MEMBERSHIP_SLACK && x <= self.hi + MEMBERSHIP_SLACK
    }

    pub fn length(&self) -> f64 {
        self.hi - self.lo
    }

    /// `{η − ξ : η ∈ self, ξ ∈ other}`.
    pub fn minus(&self, other: &Interval) -> Interval {
        Interval::new(self.lo - other.hi, self.hi - other.lo)
    }

    pub fn is_subset_of(&self, other: &Interval) -> bool {
        self.lo >= other.lo && self.hi <= other.hi
    }

    pub fn sample<R: Rng>(&self, rng: &mut R) -> f64 {
        rng.gen_range(self.lo..=self.hi)
    }
}

/// Which characteristic line the strip hugs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LineKind {
    /// `λ + η = O(1)`
    Plus,
    /// `λ − η = O(1)`
    Minus,
}

/// Indicator of `{η ∈ interval, |λ ± η| ≤ thickness/2}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StripSpec {
    pub interval: Interval,
    pub line: LineKind,
    pub thickness: f64,
}

impl StripSpec {
    pub fn new(interval: Interval, line: LineKind, thickness: f64) -> Result<Self> {
        if !(interval.lo < interval.hi) {
            return Err(Error::InvalidParameter(format!("empty strip interval [{}, {}]", interval.lo, interval.hi)));
        }
        if !(thickness > 0.0) {
            return Err(Error::InvalidParameter(format!("strip thickness must be positive, got {thickness}")));
        }
        Ok(Self { interval, line, thickness })
    }

    fn offset(&self, lambda: f64, eta: f64) -> f64 {
        match self.line {
            LineKind::Plus => lambda + eta,
            LineKind::Minus => lambda - eta,
        }
    }

    pub fn contains(&self, lambda: f64, eta: f64) -> bool {
        self.interval.contains(eta) && self.offset(lambda, eta).abs() <= self.thickness / 2.0 + MEMBERSHIP_SLACK
    }

    /// Range of `λ` over the strip.
    pub fn lambda_range(&self) -> Interval {
        let (h, Interval { lo, hi }) = (self.thickness / 2.0, self.interval);
        match self.line {
            LineKind::Plus => Interval::new(-hi - h, -lo + h),
            LineKind::Minus => Interval::new(lo - h, hi + h),
        }
    }

    /// Smallest lattice window holding the strip.
    pub fn window(&self, step: f64) -> (Axis, Axis) {
        let lam = self.lambda_range();
        (Axis::covering(lam.lo, lam.hi, step), Axis::covering(self.interval.lo, self.interval.hi, step))
    }

    /// Samples the indicator on `(tau, xi)`; the window must hold the
    /// whole strip.
    pub fn sample_on(&self, tau: Axis, xi: Axis) -> Result<Spectrum2D> {
        let lam = self.lambda_range();
        for (ax, iv) in [(tau, lam), (xi, self.interval)] {
            if !ax.contains_interval(iv.lo, iv.hi) {
                return Err(Error::SupportOutsideGrid { lo: iv.lo, hi: iv.hi, grid_lo: ax.origin, grid_hi: ax.last() });
            }
        }
        Ok(Spectrum2D::from_fn(tau, xi, |l, e| {
            if self.contains(l, e) {
                Complex64::new(1.0, 0.0)
            } else {
                Complex64::default()
            }
        }))
    }

    /// A uniformly drawn point `(λ, η)` of the strip.
    pub fn sample_point<R: Rng>(&self, rng: &mut R) -> (f64, f64) {
        let eta = self.interval.sample(rng);
        let off = rng.gen_range(-self.thickness / 2.0..=self.thickness / 2.0);
        match self.line {
            LineKind::Plus => (off - eta, eta),
            LineKind::Minus => (off + eta, eta),
        }
    }
}

/// Where the lower-bound argument localises the output frequency.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Restriction {
    /// `τ + ξ = O(1)`, `ξ ∈ C`.
    Cone,
    /// `τ − center = O(1)`, `ξ ∈ C`.
    TauNear { center: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CounterexampleFamily {
    pub id: FamilyId,
    #[serde(rename = "L")]
    pub l: f64,
    pub a: Interval,
    pub b: Interval,
    pub c: Interval,
    pub u_strip: StripSpec,
    pub v_strip: StripSpec,
    pub restriction: Restriction,
}

impl CounterexampleFamily {
    pub fn new(id: FamilyId, l: f64) -> Result<Self> {
        if !(l > 4.0 && l.is_finite()) {
            return Err(Error::InvalidParameter(format!("family scale L must exceed 4, got {l}")));
        }
        let iv = Interval::new;
        let (a, b, c) = match id {
            FamilyId::Cond1Ab => (iv(l - 0.5, l + 0.5), iv(l - 1.0, l + 1.0), iv(-0.5, 0.5)),
            FamilyId::Cond2 => (iv(l / 4.0, l / 2.0), iv(l / 2.0, 1.5 * l), iv(-l, -l / 2.0)),
            FamilyId::Cond3 => (iv(l - 0.5, l + 0.5), iv(-1.0, 1.0), iv(l - 0.5, l + 0.5)),
            FamilyId::Cond1Gamma => (iv(l - 1.0, l + 1.0), iv(l - 2.0, l + 2.0), iv(-1.0, 1.0)),
            FamilyId::Cond4 => (iv(l - 1.0, l + 1.0), iv(2.0 * l - 2.0, 2.0 * l + 2.0), iv(-l - 1.0, -l + 1.0)),
        };
        let (v_line, restriction) = match id {
            FamilyId::Cond1Ab | FamilyId::Cond2 | FamilyId::Cond3 => (LineKind::Plus, Restriction::Cone),
            FamilyId::Cond1Gamma => (LineKind::Minus, Restriction::TauNear { center: -2.0 * l }),
            FamilyId::Cond4 => (LineKind::Minus, Restriction::TauNear { center: -3.0 * l }),
        };
        Ok(Self {
            id,
            l,
            a,
            b,
            c,
            u_strip: StripSpec::new(a, LineKind::Plus, STRIP_THICKNESS)?,
            v_strip: StripSpec::new(b, v_line, STRIP_THICKNESS)?,
            restriction,
        })
    }

    /// `A − C ⊆ B`, checked on the interval endpoints.
    pub fn abc_property_exact(&self) -> bool {
        self.a.minus(&self.c).is_subset_of(&self.b)
    }

    /// How many of `n` random `(η, ξ) ∈ A × C` satisfy `η − ξ ∈ B`.
    pub fn abc_property_sampled<R: Rng>(&self, rng: &mut R, n: usize) -> usize {
        (0..n)
            .filter(|_| {
                let (eta, xi) = (self.a.sample(rng), self.c.sample(rng));
                self.b.contains(eta - xi)
            })
            .count()
    }

    pub fn delta(&self, e: &ExponentTuple) -> f64 {
        self.id.delta(e)
    }

    fn restriction_holds(&self, tau: f64, xi: f64) -> bool {
        self.c.contains(xi)
            && match self.restriction {
                Restriction::Cone => (tau + xi).abs() <= STRIP_THICKNESS + MEMBERSHIP_SLACK,
                Restriction::TauNear { center } => (tau - center).abs() <= 4.0 * STRIP_THICKNESS,
            }
    }
}

/// Indicator spectra of one family on auto-sized lattice windows.
#[derive(Debug, Clone)]
pub struct BuiltFamily {
    pub family: CounterexampleFamily,
    pub u_hat: Spectrum2D,
    pub v_hat: Spectrum2D,
}

pub fn build_family(id: FamilyId, l: f64) -> Result<BuiltFamily> {
    build_family_with_step(id, l, DEFAULT_STEP)
}

/// As [`build_family`] with an explicit lattice step (≤ thickness/4).
pub fn build_family_with_step(id: FamilyId, l: f64, step: f64) -> Result<BuiltFamily> {
    if !(step > 0.0 && step <= STRIP_THICKNESS / 4.0) {
        return Err(Error::InvalidParameter(format!(
            "lattice step {step} must lie in (0, {}]",
            STRIP_THICKNESS / 4.0
        )));
    }
    let family = CounterexampleFamily::new(id, l)?;
    let (ut, ux) = family.u_strip.window(step);
    let (vt, vx) = family.v_strip.window(step);
    Ok(BuiltFamily { family, u_hat: family.u_strip.sample_on(ut, ux)?, v_hat: family.v_strip.sample_on(vt, vx)? })
}

/// One row of a counterexample table.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RatioParts {
    pub family: FamilyId,
    #[serde(rename = "L")]
    pub l: f64,
    pub numerator: f64,
    pub denom_u: f64,
    pub denom_v: f64,
    pub ratio: f64,
}

/// A built family together with the transform of `u v̄`; the expensive
/// correlation is done once and reused for every exponent tuple.
#[derive(Debug, Clone)]
pub struct FamilyRun {
    pub built: BuiltFamily,
    pub product: Spectrum2D,
}

impl FamilyRun {
    pub fn new(id: FamilyId, l: f64) -> Result<Self> {
        Self::from_built(build_family(id, l)?)
    }

    pub fn from_built(built: BuiltFamily) -> Result<Self> {
        let mut product = correlate(&built.u_hat, &built.v_hat.conj_values())?;
        product.values.iter_mut().for_each(|v| *v *= PRODUCT_FACTOR);
        Ok(Self { built, product })
    }

    /// `‖uv̄‖_{H^{−c,−γ}} / (‖u‖_{X+^{a,α}} ‖v‖_{X−^{b,β}})`.
    pub fn ratio(&self, e: &ExponentTuple) -> Result<RatioParts> {
        let numerator = self.product.weighted_norm(NormIndex::new(-e.c, -e.gamma_e, Flavor::H))?;
        let denom_u = self.built.u_hat.weighted_norm(NormIndex::new(e.a, e.alpha_e, Flavor::XPlus))?;
        let denom_v = self.built.v_hat.weighted_norm(NormIndex::new(e.b, e.beta_e, Flavor::XMinus))?;
        let fam = &self.built.family;
        if !(denom_u > 0.0 && denom_v > 0.0) {
            return Err(Error::InvalidExperiment(format!("zero denominator for {} at L = {}", fam.id, fam.l)));
        }
        let ratio = numerator / (denom_u * denom_v);
        if !(ratio > 0.0 && ratio.is_finite()) {
            return Err(Error::InvalidExperiment(format!("ratio {ratio} for {} at L = {}", fam.id, fam.l)));
        }
        Ok(RatioParts { family: fam.id, l: fam.l, numerator, denom_u, denom_v, ratio })
    }
}

/// Ratios for every `(L, tuple)`; outer index follows `ls`.
pub fn scan_families(id: FamilyId, ls: &[f64], tuples: &[ExponentTuple]) -> Result<Vec<Vec<RatioParts>>> {
    ls.iter()
        .map(|&l| {
            let run = FamilyRun::new(id, l)?;
            tuples.iter().map(|e| run.ratio(e)).collect()
        })
        .collect()
}

/// Range of `|λ − τ − (η − ξ)|` over random points of the restricted
/// interaction set: `(λ, η) ∈ supp ũ`, `(λ − τ, η − ξ) ∈ supp ṽ`, and
/// `(τ, ξ)` in the family's restriction. Returns `(accepted, min, max)`.
pub fn sigma_minus_range<R: Rng>(family: &CounterexampleFamily, rng: &mut R, draws: usize) -> (usize, f64, f64) {
    let (mut n, mut lo, mut hi) = (0, f64::INFINITY, 0.0f64);
    for _ in 0..draws {
        let (lam, eta) = family.u_strip.sample_point(rng);
        let (lam2, eta2) = family.v_strip.sample_point(rng);
        let (tau, xi) = (lam - lam2, eta - eta2);
        if !family.restriction_holds(tau, xi) {
            continue;
        }
        let s = (lam - tau - (eta - xi)).abs();
        n += 1;
        lo = lo.min(s);
        hi = hi.max(s);
    }
    (n, lo, hi)
}
