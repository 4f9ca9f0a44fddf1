//! Well-posedness regions in the `(s, r)` plane and the exponent
//! bookkeeping that produces them.
//!
//! All inequalities are evaluated in plain `f64` with exact comparisons;
//! strict and non-strict bounds are kept exactly as stated, since the
//! difference between e.g. `r < 1 + 2s` and `r ≤ 1 + 2s` is what separates
//! the regions.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::bilinear::{ExponentTuple, FamilyId};

/// Spinor regularity `s`, field regularity `r`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RegionPoint {
    pub s: f64,
    pub r: f64,
}

impl RegionPoint {
    pub fn new(s: f64, r: f64) -> Self {
        Self { s, r }
    }
}

/// Iteration exponents `σ` (spinor), `ρ` (field) and the time-localisation
/// gap `ε`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ParameterChoice {
    pub sigma: f64,
    pub rho: f64,
    pub eps: f64,
}

type Inequality = (&'static str, fn(f64, f64) -> bool);

/// The four defining inequalities of the extended region, in order.
const EXTENDED_REGION: [Inequality; 4] = [
    ("s > -1/4", |s, _| s > -0.25),
    ("r > 0", |_, r| r > 0.0),
    ("|s| ≤ r", |s, r| s.abs() <= r),
    ("r ≤ 1+s", |s, r| r <= 1.0 + s),
];

/// First violated inequality of the extended region, if any.
pub fn extended_region_violation(p: RegionPoint) -> Option<&'static str> {
    EXTENDED_REGION.iter().find(|(_, ok)| !ok(p.s, p.r)).map(|(name, _)| *name)
}

/// `s > −1/4, r > 0, |s| ≤ r ≤ 1 + s`.
pub fn in_extended_region(p: RegionPoint) -> bool {
    extended_region_violation(p).is_none()
}

/// `s > −1/4, r > 0, |s| ≤ r, r < 1 + 2s, r ≤ 1 + s`.
pub fn in_strict_region(p: RegionPoint) -> bool {
    let RegionPoint { s, r } = p;
    s > -0.25 && r > 0.0 && s.abs() <= r && r < 1.0 + 2.0 * s && r <= 1.0 + s
}

/// `−1/4 < s ≤ 0, 2|s| ≤ r, r ≤ 1 + 2s`.
pub fn in_nonpositive_region(p: RegionPoint) -> bool {
    let RegionPoint { s, r } = p;
    -0.25 < s && s <= 0.0 && 2.0 * s.abs() <= r && r <= 1.0 + 2.0 * s
}

/// Constraint keys in display order.
pub const CONSTRAINT_KEYS: [&str; 12] =
    ["r1", "r2", "sigma1", "rho_sigma", "r6", "s2", "s3", "r7", "r3", "r4", "s1", "rho1"];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConstraintReport {
    pub checks: BTreeMap<String, bool>,
}

impl ConstraintReport {
    pub fn passes(&self) -> bool {
        self.checks.values().all(|&v| v)
    }

    pub fn get(&self, key: &str) -> bool {
        self.checks[key]
    }

    pub fn failures(&self) -> Vec<&str> {
        CONSTRAINT_KEYS.iter().copied().filter(|k| !self.checks[*k]).collect()
    }
}

/// Evaluates the twelve constraints that the bilinear estimates impose on
/// `(s, r)` and `(σ, ρ, ε)`.
pub fn check_constraints(p: RegionPoint, c: ParameterChoice) -> ConstraintReport {
    let RegionPoint { s, r } = p;
    let ParameterChoice { sigma, rho, eps } = c;
    let r6 = r <= 1.0 + s;
    let values = [
        r > sigma - 0.5 + eps,
        r >= s.abs(),
        sigma <= 1.0 - eps,
        0.5 < rho && rho <= 1.0 && 0.5 < sigma && sigma <= 1.0,
        r6,
        s >= -0.5 + (rho + eps) / 2.0,
        s >= -1.0 + rho + eps,
        r <= 1.0 + 2.0 * s + 1.0 - rho - eps,
        r < 0.5 + sigma + 2.0 * s,
        // identical to r6
        r6,
        s >= -sigma / 2.0,
        rho <= 1.0 - eps,
    ];
    ConstraintReport {
        checks: CONSTRAINT_KEYS.iter().map(|k| k.to_string()).zip(values).collect(),
    }
}

/// Outcome of [`choose_parameters`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum ParameterSearch {
    Feasible(ParameterChoice),
    Infeasible { reason: String },
}

impl ParameterSearch {
    pub fn choice(&self) -> Option<ParameterChoice> {
        match self {
            ParameterSearch::Feasible(c) => Some(*c),
            ParameterSearch::Infeasible { .. } => None,
        }
    }
}

pub const EPS_START: f64 = 0.125;
/// `2⁻²⁰`.
pub const EPS_FLOOR: f64 = 1.0 / 1_048_576.0;

/// Picks `ρ = 1/2 + ε` and `σ` at the midpoint of
/// `(max(1/2, r − 1/2 − 2s), min(1 − ε, r + 1/2 − ε))`, halving `ε` from
/// 1/8 until every constraint holds. Returns the largest feasible `ε` on
/// that ladder.
pub fn choose_parameters(p: RegionPoint) -> ParameterSearch {
    if let Some(v) = extended_region_violation(p) {
        return ParameterSearch::Infeasible { reason: format!("{v} violated") };
    }
    let mut eps = EPS_START;
    while eps >= EPS_FLOOR {
        let rho = 0.5 + eps;
        let lo = 0.5f64.max(p.r - 0.5 - 2.0 * p.s);
        let hi = (1.0 - eps).min(p.r + 0.5 - eps);
        if lo < hi {
            let choice = ParameterChoice { sigma: 0.5 * (lo + hi), rho, eps };
            if check_constraints(p, choice).passes() {
                return ParameterSearch::Feasible(choice);
            }
        }
        eps *= 0.5;
    }
    ParameterSearch::Infeasible { reason: "no feasible ε ≥ 2^-20 (point too close to the region boundary)".into() }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProductLawOutcome {
    Sufficient,
    FailsAbc1,
    FailsAbc2,
    FailsWeights,
}

/// Classifies `(a, b, c; α, β, γ)` against the product-law hypotheses.
/// Checked in the order: weight hypotheses, `(abc2)`, `(abc1)`.
pub fn product_law_conditions(a: f64, b: f64, c: f64, alpha: f64, beta: f64, gamma: f64) -> ProductLawOutcome {
    if !(alpha >= 0.0 && beta >= 0.0 && gamma >= 0.0 && alpha + beta + gamma > 0.5) {
        ProductLawOutcome::FailsWeights
    } else if !(a + b >= 0.0 && a + c >= 0.0 && b + c >= 0.0) {
        ProductLawOutcome::FailsAbc2
    } else if !(a + b + c > 0.5) {
        ProductLawOutcome::FailsAbc1
    } else {
        ProductLawOutcome::Sufficient
    }
}

/// One necessary condition for the two-spinor estimate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NecessaryCondition {
    pub holds: bool,
    /// `lhs − rhs`; negative exactly when the condition fails.
    pub margin: f64,
    /// Counterexample family whose `δ` equals `margin` for this tuple.
    pub family: FamilyId,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NecessityReport {
    pub cond1: NecessaryCondition,
    pub cond2: NecessaryCondition,
    pub cond3: NecessaryCondition,
    pub cond4: NecessaryCondition,
}

impl NecessityReport {
    pub fn all_hold(&self) -> bool {
        self.conditions().iter().all(|(_, c)| c.holds)
    }

    pub fn conditions(&self) -> [(&'static str, NecessaryCondition); 4] {
        [("Cond1", self.cond1), ("Cond2", self.cond2), ("Cond3", self.cond3), ("Cond4", self.cond4)]
    }
}

/// Evaluates
///
/// ```text
/// (Cond1) a + b + min(α, β, γ) ≥ 0
/// (Cond2) a + b + c + min(α, β) ≥ 1/2
/// (Cond3) min(a, b) + c ≥ 0
/// (Cond4) a + b + c + γ ≥ 0
/// ```
///
/// The families are those whose `δ` matches the margin when the minimum
/// sits on `β` (Cond1, Cond2) or on `a` (Cond3); the mirrored cases need
/// the roles of `u` and `v` exchanged.
pub fn necessary_conditions(e: &ExponentTuple) -> NecessityReport {
    let nc = |margin: f64, family| NecessaryCondition { holds: margin >= 0.0, margin, family };
    let min_hyp = e.alpha_e.min(e.beta_e).min(e.gamma_e);
    let c1 = e.a + e.b + min_hyp;
    let cond1_family = if e.gamma_e < e.alpha_e.min(e.beta_e) { FamilyId::Cond1Gamma } else { FamilyId::Cond1Ab };
    let c2_lhs = e.a + e.b + e.c + e.alpha_e.min(e.beta_e);
    let c3 = e.a.min(e.b) + e.c;
    let c4 = e.a + e.b + e.c + e.gamma_e;
    NecessityReport {
        cond1: nc(c1, cond1_family),
        cond2: nc(c2_lhs - 0.5, FamilyId::Cond2),
        cond3: nc(c3, FamilyId::Cond3),
        cond4: nc(c4, FamilyId::Cond4),
    }
}

/// One cell of the containment sweep.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridCell {
    pub s: f64,
    pub r: f64,
    pub extended: bool,
    pub strict: bool,
    pub nonpositive: bool,
}

/// `n × n` sweep over `s ∈ [s_lo, s_hi]`, `r ∈ (0, r_hi]`.
pub fn region_grid(n: usize, s_lo: f64, s_hi: f64, r_hi: f64) -> Vec<GridCell> {
    let mut out = Vec::with_capacity(n * n);
    for i in 0..n {
        let s = s_lo + (s_hi - s_lo) * i as f64 / (n - 1) as f64;
        for j in 1..=n {
            let r = r_hi * j as f64 / n as f64;
            let p = RegionPoint::new(s, r);
            out.push(GridCell {
                s,
                r,
                extended: in_extended_region(p),
                strict: in_strict_region(p),
                nonpositive: in_nonpositive_region(p),
            });
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ContainmentSummary {
    pub cells: usize,
    /// Cells in a prior region but outside the extended one.
    pub violations: usize,
    /// Cells in the extended region and in neither prior region.
    pub strictly_new: usize,
}

pub fn containment_summary(cells: &[GridCell]) -> ContainmentSummary {
    ContainmentSummary {
        cells: cells.len(),
        violations: cells.iter().filter(|c| (c.strict || c.nonpositive) && !c.extended).count(),
        strictly_new: cells.iter().filter(|c| c.extended && !c.strict && !c.nonpositive).count(),
    }
}

/// Exponent tuples fed to the two-spinor estimate by the first
/// iteration estimate: `(s, s, 1−r; σ, σ, 1−ρ−ε)`.
pub fn field_estimate_tuple(p: RegionPoint, c: ParameterChoice) -> ExponentTuple {
    ExponentTuple::new(p.s, p.s, 1.0 - p.r, c.sigma, c.sigma, 1.0 - c.rho - c.eps)
}

/// And by the dual spinor estimate: `(s, −s, r; σ, 1−σ−ε, ρ)`.
pub fn spinor_estimate_tuple(p: RegionPoint, c: ParameterChoice) -> ExponentTuple {
    ExponentTuple::new(p.s, -p.s, p.r, c.sigma, 1.0 - c.sigma - c.eps, c.rho)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn extended_region_examples() {
        assert!(in_extended_region(RegionPoint::new(0.0, 0.5)));
        assert!(!in_extended_region(RegionPoint::new(-0.25, 0.25)));
        assert!(!in_extended_region(RegionPoint::new(-0.1, 0.95)));
        assert_eq!(extended_region_violation(RegionPoint::new(-0.1, 0.95)), Some("r ≤ 1+s"));
        assert_eq!(extended_region_violation(RegionPoint::new(0.1, 0.0)), Some("r > 0"));
    }

    #[test]
    fn prior_region_examples() {
        assert!(in_strict_region(RegionPoint::new(0.5, 1.2)));
        assert!(!in_strict_region(RegionPoint::new(-0.2, 0.7)));
        assert!(in_nonpositive_region(RegionPoint::new(-0.2, 0.5)));
        // boundary r = 1 + 2s: closed for the nonpositive region, open for the strict one
        let edge = RegionPoint::new(-0.125, 0.75);
        assert!(in_nonpositive_region(edge) && !in_strict_region(edge));
    }

    #[test]
    fn constraint_examples() {
        let p = RegionPoint::new(0.0, 0.5);
        let rep = check_constraints(p, ParameterChoice { sigma: 0.75, rho: 9.0 / 16.0, eps: 1.0 / 16.0 });
        assert!(rep.passes(), "{:?}", rep.failures());
        assert_eq!(rep.checks.len(), 12);

        let rep = check_constraints(p, ParameterChoice { sigma: 1.0, rho: 9.0 / 16.0, eps: 1.0 / 16.0 });
        assert!(!rep.get("sigma1"));

        // s2 fails for every ρ > 1/2, ε > 0 at s = −0.3
        let p = RegionPoint::new(-0.3, 0.3);
        for i in 1..=20 {
            for j in 1..=20 {
                let rho = 0.5 + 0.5 * i as f64 / 20.0;
                let eps = 0.25 * j as f64 / 20.0;
                let rep = check_constraints(p, ParameterChoice { sigma: 0.75, rho, eps });
                assert!(!rep.get("s2"));
            }
        }
    }

    #[test]
    fn choose_parameters_examples() {
        let p = RegionPoint::new(0.0, 0.5);
        let c = choose_parameters(p).choice().expect("feasible");
        assert!(check_constraints(p, c).passes());
        assert_eq!(c.eps, EPS_START);
        assert_eq!(c.rho, 0.5 + c.eps);

        assert_eq!(
            choose_parameters(RegionPoint::new(-0.2, 0.85)),
            ParameterSearch::Infeasible { reason: "r ≤ 1+s violated".into() }
        );
        // needs ε ≤ s + 1/4
        let c = choose_parameters(RegionPoint::new(-0.24, 0.5)).choice().unwrap();
        assert!(c.eps <= 0.01 && c.eps > 0.005);
    }

    #[test]
    fn round_trip_on_random_points() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let mut n = 0;
        while n < 2000 {
            let p = RegionPoint::new(rng.gen_range(-0.3..0.5), rng.gen_range(0.0..1.5));
            let res = choose_parameters(p);
            match (in_extended_region(p), res.choice()) {
                (true, Some(c)) => assert!(check_constraints(p, c).passes(), "{p:?} {c:?}"),
                (true, None) => panic!("in-region point {p:?} reported infeasible: {res:?}"),
                (false, None) => {}
                (false, Some(_)) => panic!("out-of-region point {p:?} reported feasible"),
            }
            n += 1;
        }
    }

    #[test]
    fn r4_equals_r6() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for _ in 0..1000 {
            let p = RegionPoint::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..2.0));
            let c = ParameterChoice { sigma: rng.gen_range(0.0..1.5), rho: rng.gen_range(0.0..1.5), eps: rng.gen_range(0.0..0.5) };
            let rep = check_constraints(p, c);
            assert_eq!(rep.get("r4"), rep.get("r6"));
        }
    }

    #[test]
    fn containment_and_strictness() {
        let cells = region_grid(200, -0.3, 0.5, 1.5);
        let sum = containment_summary(&cells);
        assert_eq!(sum.cells, 40_000);
        assert_eq!(sum.violations, 0);
        assert!(sum.strictly_new > 0);
        // strictly new points live in −1/4 < s ≤ 0, 1+2s < r ≤ 1+s
        assert!(in_extended_region(RegionPoint::new(-0.2, 0.75)));
        assert!(!in_strict_region(RegionPoint::new(-0.2, 0.75)));
        assert!(!in_nonpositive_region(RegionPoint::new(-0.2, 0.75)));
    }

    #[test]
    fn implied_upper_bound() {
        for c in region_grid(200, -0.3, 0.5, 1.5).iter().filter(|c| c.extended) {
            assert!(c.r < 1.5 + 2.0 * c.s);
        }
    }

    #[test]
    fn product_law_examples() {
        assert_eq!(product_law_conditions(1.0, 1.0, 0.0, 0.3, 0.3, 0.3), ProductLawOutcome::Sufficient);
        assert_eq!(product_law_conditions(0.2, 0.2, 0.05, 0.3, 0.3, 0.3), ProductLawOutcome::FailsAbc1);
        assert_eq!(product_law_conditions(1.0, -0.5, -0.6, 0.3, 0.3, 0.3), ProductLawOutcome::FailsAbc2);
        assert_eq!(product_law_conditions(1.0, 1.0, 0.0, 0.1, 0.1, 0.1), ProductLawOutcome::FailsWeights);
        assert_eq!(product_law_conditions(1.0, 1.0, 0.0, -0.1, 1.0, 0.0), ProductLawOutcome::FailsWeights);
        // a + b + c = 1/2 exactly is not enough
        assert_eq!(product_law_conditions(0.25, 0.25, 0.0, 0.3, 0.3, 0.3), ProductLawOutcome::FailsAbc1);
    }

    #[test]
    fn necessary_condition_examples() {
        let r = necessary_conditions(&ExponentTuple::new(1.0, 2.0, -1.0, 0.0, 0.0, 0.0));
        assert!(r.cond3.holds);
        assert_eq!(r.cond3.margin, 0.0);
        let r = necessary_conditions(&ExponentTuple::new(0.0, 0.0, -1.0, 1.0, 1.0, 1.0));
        assert!(!r.cond3.holds);

        // field estimate at s = −0.3, ρ = 0.6, ε = 0.01
        let c = ParameterChoice { sigma: 0.75, rho: 0.6, eps: 0.01 };
        let e = field_estimate_tuple(RegionPoint::new(-0.3, 0.5), c);
        let r = necessary_conditions(&e);
        assert!(!r.cond1.holds);
        // Cond1 ⇔ s ≥ −1/2 + (ρ+ε)/2
        assert_eq!(r.cond1.holds, -0.3 >= -0.5 + (c.rho + c.eps) / 2.0);
        assert_eq!(r.cond1.family, FamilyId::Cond1Gamma);
    }

    #[test]
    fn spinor_estimate_cond3_matches_lower_bound() {
        let c = ParameterChoice { sigma: 0.75, rho: 0.6, eps: 0.01 };
        for cell in region_grid(60, -0.3, 0.5, 1.5) {
            let p = RegionPoint::new(cell.s, cell.r);
            let fails = !necessary_conditions(&spinor_estimate_tuple(p, c)).cond3.holds;
            assert_eq!(fails, p.r < p.s.abs(), "{p:?}");
        }
    }
}
