//! Counterexample families for the two-spinor product estimate
//!
//! ```text
//! ‖u v̄‖_{H^{−c,−γ}} ≲ ‖u‖_{X+^{a,α}} ‖v‖_{X−^{b,β}}
//! ```
//!
//! together with log-log slope fits of the ratio and the free-wave
//! product constant.

mod families;
mod wave;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

pub use families::{
    build_family, scan_families, sigma_minus_range, BuiltFamily, CounterexampleFamily, FamilyRun, Interval, LineKind,
    RatioParts, StripSpec, DEFAULT_STEP, STRIP_THICKNESS,
};
pub use wave::{embedding_probe, free_wave_product_ratio, reflect_spectrum, wave_product_constant, ProbeBand};

use crate::error::{Error, Result};

/// `(a, b, c; α, β, γ)`: Sobolev exponents of `u`, `v`, `uv̄` and their
/// hyperbolic counterparts.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct ExponentTuple {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub alpha_e: f64,
    pub beta_e: f64,
    pub gamma_e: f64,
}

impl ExponentTuple {
    pub const ZERO: Self = Self { a: 0.0, b: 0.0, c: 0.0, alpha_e: 0.0, beta_e: 0.0, gamma_e: 0.0 };

    pub fn new(a: f64, b: f64, c: f64, alpha_e: f64, beta_e: f64, gamma_e: f64) -> Self {
        Self { a, b, c, alpha_e, beta_e, gamma_e }
    }

    pub fn to_array(&self) -> [f64; 6] {
        [self.a, self.b, self.c, self.alpha_e, self.beta_e, self.gamma_e]
    }
}

impl FromStr for ExponentTuple {
    type Err = Error;

    /// Six comma-separated reals `a,b,c,alpha,beta,gamma`.
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<f64> = s
            .split(',')
            .map(|p| p.trim().parse::<f64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|e| Error::InvalidParameter(format!("bad exponent list {s:?}: {e}")))?;
        match parts[..] {
            [a, b, c, al, be, ga] => Ok(Self::new(a, b, c, al, be, ga)),
            _ => Err(Error::InvalidParameter(format!("expected 6 exponents, got {}", parts.len()))),
        }
    }
}

impl fmt::Display for ExponentTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c, al, be, ga] = self.to_array();
        write!(f, "{a},{b},{c},{al},{be},{ga}")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FamilyId {
    Cond1Ab,
    Cond2,
    Cond3,
    Cond1Gamma,
    Cond4,
}

impl FamilyId {
    pub const ALL: [FamilyId; 5] =
        [FamilyId::Cond1Ab, FamilyId::Cond2, FamilyId::Cond3, FamilyId::Cond1Gamma, FamilyId::Cond4];

    pub fn name(self) -> &'static str {
        match self {
            FamilyId::Cond1Ab => "cond1_ab",
            FamilyId::Cond2 => "cond2",
            FamilyId::Cond3 => "cond3",
            FamilyId::Cond1Gamma => "cond1_gamma",
            FamilyId::Cond4 => "cond4",
        }
    }

    /// Predicted decay exponent: the ratio behaves like `L^{−δ}`.
    pub fn delta(self, e: &ExponentTuple) -> f64 {
        match self {
            FamilyId::Cond1Ab => e.a + e.b + e.beta_e,
            FamilyId::Cond2 => e.a + e.b + e.c + e.beta_e - 0.5,
            FamilyId::Cond3 => e.a + e.c,
            FamilyId::Cond1Gamma => e.a + e.b + e.gamma_e,
            FamilyId::Cond4 => e.a + e.b + e.c + e.gamma_e,
        }
    }
}

impl fmt::Display for FamilyId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FamilyId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        FamilyId::ALL
            .into_iter()
            .find(|id| id.name() == s)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown family {s:?}")))
    }
}

/// Least-squares line through `(ln x, ln y)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SlopeFit {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
}

pub fn fit_log_slope(xs: &[f64], ys: &[f64]) -> Result<SlopeFit> {
    if xs.len() != ys.len() || xs.len() < 2 {
        return Err(Error::InvalidExperiment(format!("need at least two matched points, got {} and {}", xs.len(), ys.len())));
    }
    if let Some(bad) = xs.iter().chain(ys).find(|v| !(**v > 0.0 && v.is_finite())) {
        return Err(Error::InvalidExperiment(format!("non-positive value {bad} in log-log fit")));
    }
    let lx: Vec<f64> = xs.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|v| v.ln()).collect();
    let n = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxx: f64 = lx.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let syy: f64 = ly.iter().map(|y| (y - my).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::InvalidExperiment("all abscissae coincide".into()));
    }
    let slope = sxy / sxx;
    let r_squared = if syy == 0.0 { 1.0 } else { sxy * sxy / (sxx * syy) };
    Ok(SlopeFit { slope, intercept: my - slope * mx, r_squared })
}

/// `{64, 128, 256, 512}`.
pub const DEFAULT_LADDER: [f64; 4] = [64.0, 128.0, 256.0, 512.0];

/// Accepts geometric ladders of at least four values, each ≥ 32.
pub fn validate_ladder(ls: &[f64]) -> Result<()> {
    if ls.len() < 4 {
        return Err(Error::InvalidParameter(format!("L ladder needs ≥ 4 values, got {}", ls.len())));
    }
    if let Some(l) = ls.iter().find(|l| !(**l >= 32.0)) {
        return Err(Error::InvalidParameter(format!("L ladder values must be ≥ 32, got {l}")));
    }
    let q = ls[1] / ls[0];
    if q <= 1.0 || ls.windows(2).any(|w| ((w[1] / w[0]) / q - 1.0).abs() > 1e-9) {
        return Err(Error::InvalidParameter(format!("L ladder {ls:?} is not increasing geometric")));
    }
    Ok(())
}

/// Slope of `ln ratio` against `ln L`, with `r²`.
pub fn fit_exponent(id: FamilyId, e: &ExponentTuple, ls: &[f64]) -> Result<(f64, f64)> {
    validate_ladder(ls)?;
    let ratios = scan_families(id, ls, std::slice::from_ref(e))?
        .into_iter()
        .map(|row| row[0].ratio)
        .collect::<Vec<_>>();
    let fit = fit_log_slope(ls, &ratios)?;
    Ok((fit.slope, fit.r_squared))
}
