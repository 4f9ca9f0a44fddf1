//! Hyperbolic weights at a frequency 4-tuple and the algebraic constraint
//! relating them:
//!
//! ```text
//! Γ = |τ| − |ξ|,   Θ+ = λ + η,   Σ− = λ − τ − (η − ξ),
//! min(|η|, |η − ξ|) ≤ 3/2 · max(|Γ|, |Θ+|, |Σ−|).
//! ```

use rand::Rng;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FrequencyPoint {
    pub tau: f64,
    pub xi: f64,
    pub lambda: f64,
    pub eta: f64,
}

impl FrequencyPoint {
    pub fn new(tau: f64, xi: f64, lambda: f64, eta: f64) -> Self {
        Self { tau, xi, lambda, eta }
    }

    /// Largest coordinate magnitude; the roundoff scale of every check.
    pub fn scale(&self) -> f64 {
        [self.tau, self.xi, self.lambda, self.eta]
            .into_iter()
            .map(f64::abs)
            .fold(0.0, f64::max)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WeightTriple {
    pub gamma_w: f64,
    pub theta_plus: f64,
    pub sigma_minus: f64,
}

impl WeightTriple {
    pub fn max_abs(&self) -> f64 {
        self.gamma_w.abs().max(self.theta_plus.abs()).max(self.sigma_minus.abs())
    }

    pub fn sum_abs(&self) -> f64 {
        self.gamma_w.abs() + self.theta_plus.abs() + self.sigma_minus.abs()
    }
}

pub fn weights(p: &FrequencyPoint) -> WeightTriple {
    WeightTriple {
        gamma_w: p.tau.abs() - p.xi.abs(),
        theta_plus: p.lambda + p.eta,
        sigma_minus: p.lambda - p.tau - (p.eta - p.xi),
    }
}

fn min_output_frequency(p: &FrequencyPoint) -> f64 {
    p.eta.abs().min((p.eta - p.xi).abs())
}

/// `3/2 · max(|Γ|,|Θ+|,|Σ−|) − min(|η|,|η−ξ|)`; nonnegative for every input.
pub fn constraint_margin(p: &FrequencyPoint) -> f64 {
    1.5 * weights(p).max_abs() - min_output_frequency(p)
}

/// `|Γ| + |Θ+| + |Σ−| − 2·min(|η|,|η−ξ|)`, the summed form of the bound.
pub fn summed_margin(p: &FrequencyPoint) -> f64 {
    weights(p).sum_abs() - 2.0 * min_output_frequency(p)
}

/// Residuals of the two branch identities
///
/// ```text
/// τ ≥ 0:  Γ =  Θ+ − Σ− − (2η − ξ + |ξ|)
/// τ ≤ 0:  Γ = −Θ+ + Σ− + (2η − ξ − |ξ|)
/// ```
///
/// Returns `(nonneg_branch, nonpos_branch)`; a branch that does not apply
/// to the sign of `τ` reports `None`. At `τ = 0` both apply.
pub fn sign_split_residuals(p: &FrequencyPoint) -> (Option<f64>, Option<f64>) {
    let w = weights(p);
    let ax = p.xi.abs();
    let nonneg = (p.tau >= 0.0)
        .then(|| (w.gamma_w - (w.theta_plus - w.sigma_minus - (2.0 * p.eta - p.xi + ax))).abs());
    let nonpos = (p.tau <= 0.0)
        .then(|| (w.gamma_w - (-w.theta_plus + w.sigma_minus + (2.0 * p.eta - p.xi - ax))).abs());
    (nonneg, nonpos)
}

/// Worst residual over the branches applicable at `p`.
pub fn sign_split_identity_residual(p: &FrequencyPoint) -> f64 {
    let (a, b) = sign_split_residuals(p);
    a.unwrap_or(0.0).max(b.unwrap_or(0.0))
}

/// Points on the manifolds where the inequality is nearly tight:
/// `τ = ±ξ`, `η ∈ {0, ξ}`, `ξ = 0`, `τ = 0`, combined with a random base.
pub fn corner_samples<R: Rng>(rng: &mut R, bound: f64, count: usize) -> Vec<FrequencyPoint> {
    let mut out = Vec::with_capacity(count);
    let draw = |rng: &mut R| rng.gen_range(-bound..=bound);
    for k in 0..count {
        let mut p = FrequencyPoint::new(draw(rng), draw(rng), draw(rng), draw(rng));
        match k % 8 {
            0 => p.tau = p.xi,
            1 => p.tau = -p.xi,
            2 => p.eta = 0.0,
            3 => p.eta = p.xi,
            4 => p.xi = 0.0,
            5 => p.tau = 0.0,
            6 => {
                // Γ = Θ+ = Σ− = 0: the margin is exactly zero here.
                p.tau = p.xi.abs();
                p.eta = (p.xi - p.xi.abs()) / 2.0;
                p.lambda = -p.eta;
            }
            _ => {
                p.tau = p.xi;
                p.eta = if k % 16 == 7 { 0.0 } else { p.xi };
            }
        }
        out.push(p);
    }
    out
}

/// Summary of a sampling sweep over the constraint.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ConstraintSweep {
    pub samples: usize,
    pub min_margin: f64,
    pub max_margin: f64,
    /// `min(margin / (1 + scale))`.
    pub min_scaled_margin: f64,
    pub min_summed_margin_scaled: f64,
    /// `max(residual / (1 + scale))`.
    pub max_scaled_residual: f64,
}

pub fn sweep(points: impl IntoIterator<Item = FrequencyPoint>) -> ConstraintSweep {
    let mut s = ConstraintSweep {
        samples: 0,
        min_margin: f64::INFINITY,
        max_margin: f64::NEG_INFINITY,
        min_scaled_margin: f64::INFINITY,
        min_summed_margin_scaled: f64::INFINITY,
        max_scaled_residual: 0.0,
    };
    for p in points {
        let scale = 1.0 + p.scale();
        let m = constraint_margin(&p);
        s.samples += 1;
        s.min_margin = s.min_margin.min(m);
        s.max_margin = s.max_margin.max(m);
        s.min_scaled_margin = s.min_scaled_margin.min(m / scale);
        s.min_summed_margin_scaled = s.min_summed_margin_scaled.min(summed_margin(&p) / scale);
        s.max_scaled_residual = s.max_scaled_residual.max(sign_split_identity_residual(&p) / scale);
    }
    s
}

/// Uniform samples in `[-bound, bound]⁴` followed by corner-manifold samples.
pub fn sample_points<R: Rng>(rng: &mut R, bound: f64, uniform: usize, corners: usize) -> Vec<FrequencyPoint> {
    let mut pts: Vec<FrequencyPoint> = (0..uniform)
        .map(|_| {
            FrequencyPoint::new(
                rng.gen_range(-bound..=bound),
                rng.gen_range(-bound..=bound),
                rng.gen_range(-bound..=bound),
                rng.gen_range(-bound..=bound),
            )
        })
        .collect();
    pts.extend(corner_samples(rng, bound, corners));
    pts
}
