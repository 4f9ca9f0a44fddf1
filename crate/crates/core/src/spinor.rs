//! Dirac matrices, the constant eigenprojections `P±`, the frequency
//! dependent projections `π±(ξ)` and the null form `⟨βψ, ψ'⟩`.
//!
//! Everything is fixed to the representation
//!
//! ```text
//! α = [0 1; 1 0],   β = [1 0; 0 -1],
//! P± = ½ [1 ±1; ±1 1].
//! ```
//!
//! Inner products on ℂ² are conjugate-linear in the second slot, so
//! `⟨βψ, ψ⟩ = |ψ₁|² − |ψ₂|²` is real.

use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const HALF: Complex64 = Complex64::new(0.5, 0.0);

/// A value in ℂ².
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Spinor {
    pub c1: Complex64,
    pub c2: Complex64,
}

impl Spinor {
    pub const ZERO: Spinor = Spinor { c1: ZERO, c2: ZERO };

    pub const fn new(c1: Complex64, c2: Complex64) -> Self {
        Self { c1, c2 }
    }

    pub fn real(c1: f64, c2: f64) -> Self {
        Self::new(Complex64::new(c1, 0.0), Complex64::new(c2, 0.0))
    }

    /// `⟨self, other⟩ = self₁·conj(other₁) + self₂·conj(other₂)`.
    pub fn inner(&self, other: &Spinor) -> Complex64 {
        self.c1 * other.c1.conj() + self.c2 * other.c2.conj()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.c1.norm_sqr() + self.c2.norm_sqr()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn conj(&self) -> Spinor {
        Spinor::new(self.c1.conj(), self.c2.conj())
    }

    pub fn scale(&self, s: Complex64) -> Spinor {
        Spinor::new(self.c1 * s, self.c2 * s)
    }

    pub fn is_finite(&self) -> bool {
        self.c1.is_finite() && self.c2.is_finite()
    }

    /// Max-abs component distance, used by the identity checks.
    pub fn max_abs_diff(&self, other: &Spinor) -> f64 {
        (self.c1 - other.c1).norm().max((self.c2 - other.c2).norm())
    }
}

impl Add for Spinor {
    type Output = Spinor;
    fn add(self, rhs: Spinor) -> Spinor {
        Spinor::new(self.c1 + rhs.c1, self.c2 + rhs.c2)
    }
}

impl Sub for Spinor {
    type Output = Spinor;
    fn sub(self, rhs: Spinor) -> Spinor {
        Spinor::new(self.c1 - rhs.c1, self.c2 - rhs.c2)
    }
}

impl Neg for Spinor {
    type Output = Spinor;
    fn neg(self) -> Spinor {
        Spinor::new(-self.c1, -self.c2)
    }
}

impl Mul<Spinor> for f64 {
    type Output = Spinor;
    fn mul(self, rhs: Spinor) -> Spinor {
        Spinor::new(rhs.c1 * self, rhs.c2 * self)
    }
}

/// A 2×2 complex matrix, row-major.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mat2(pub [[Complex64; 2]; 2]);

impl Mat2 {
    pub const IDENTITY: Mat2 = Mat2([[ONE, ZERO], [ZERO, ONE]]);

    pub fn apply(&self, psi: &Spinor) -> Spinor {
        let m = &self.0;
        Spinor::new(
            m[0][0] * psi.c1 + m[0][1] * psi.c2,
            m[1][0] * psi.c1 + m[1][1] * psi.c2,
        )
    }

    pub fn mul(&self, rhs: &Mat2) -> Mat2 {
        let (a, b) = (&self.0, &rhs.0);
        let mut out = [[ZERO; 2]; 2];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, v) in row.iter_mut().enumerate() {
                *v = a[i][0] * b[0][j] + a[i][1] * b[1][j];
            }
        }
        Mat2(out)
    }

    pub fn add(&self, rhs: &Mat2) -> Mat2 {
        let mut out = self.0;
        for i in 0..2 {
            for j in 0..2 {
                out[i][j] += rhs.0[i][j];
            }
        }
        Mat2(out)
    }

    pub fn scale(&self, s: Complex64) -> Mat2 {
        let mut out = self.0;
        out.iter_mut().flatten().for_each(|v| *v *= s);
        Mat2(out)
    }

    pub fn adjoint(&self) -> Mat2 {
        let m = &self.0;
        Mat2([
            [m[0][0].conj(), m[1][0].conj()],
            [m[0][1].conj(), m[1][1].conj()],
        ])
    }

    pub fn max_abs_diff(&self, other: &Mat2) -> f64 {
        self.0
            .iter()
            .flatten()
            .zip(other.0.iter().flatten())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

/// The fixed pair (α, β).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiracMatrices {
    pub alpha: Mat2,
    pub beta: Mat2,
}

impl DiracMatrices {
    pub const STANDARD: DiracMatrices = DiracMatrices {
        alpha: Mat2([[ZERO, ONE], [ONE, ZERO]]),
        beta: Mat2([[ONE, ZERO], [ZERO, Complex64::new(-1.0, 0.0)]]),
    };

    /// Largest entrywise defect among hermiticity, `α² = β² = I` and
    /// `αβ + βα = 0`.
    pub fn clifford_defect(&self) -> f64 {
        let (a, b) = (&self.alpha, &self.beta);
        let zero = Mat2([[ZERO; 2]; 2]);
        [
            a.max_abs_diff(&a.adjoint()),
            b.max_abs_diff(&b.adjoint()),
            a.mul(a).max_abs_diff(&Mat2::IDENTITY),
            b.mul(b).max_abs_diff(&Mat2::IDENTITY),
            a.mul(b).add(&b.mul(a)).max_abs_diff(&zero),
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }
}

/// Sign of an eigenprojection.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn as_f64(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }

    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }
}

pub fn alpha(psi: &Spinor) -> Spinor {
    Spinor::new(psi.c2, psi.c1)
}

pub fn beta(psi: &Spinor) -> Spinor {
    Spinor::new(psi.c1, -psi.c2)
}

/// The matrix of `P±`.
pub fn projection_matrix(sign: Sign) -> Mat2 {
    let off = HALF * sign.as_f64();
    Mat2([[HALF, off], [off, HALF]])
}

/// Applies `P±`.
pub fn project(sign: Sign, psi: &Spinor) -> Spinor {
    let s = sign.as_f64();
    let a = (psi.c1 + psi.c2 * s) * 0.5;
    Spinor::new(a, a * s)
}

/// Splits `ψ` into `(P+ψ, P−ψ)`.
pub fn decompose(psi: &Spinor) -> (Spinor, Spinor) {
    (project(Sign::Plus, psi), project(Sign::Minus, psi))
}

/// `⟨βψ, ψ'⟩ = ψ₁·conj(ψ'₁) − ψ₂·conj(ψ'₂)`.
pub fn null_form(psi: &Spinor, psi_prime: &Spinor) -> Complex64 {
    beta(psi).inner(psi_prime)
}

/// Real and imaginary parts of both components uniform in `[−1, 1]`.
pub fn random_spinor<R: Rng>(rng: &mut R) -> Spinor {
    let mut c = || Complex64::new(rng.gen_range(-1.0..=1.0), rng.gen_range(-1.0..=1.0));
    Spinor::new(c(), c())
}

/// `sgn` with `sgn(0) = +1`.
pub fn sgn(xi: f64) -> f64 {
    if xi < 0.0 {
        -1.0
    } else {
        1.0
    }
}

/// Applies `π±(ξ) = ½ [1, ±sgn ξ; ±sgn ξ, 1]`. At `ξ = 0` this is `P±`.
pub fn frequency_projection(xi: f64, sign: Sign, psi: &Spinor) -> Spinor {
    let effective = if sgn(xi) > 0.0 { sign } else { sign.flip() };
    project(effective, psi)
}

/// Result of [`self_test`]: the worst defect of every algebraic identity
/// on the supplied sample.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SpinorReport {
    pub samples: usize,
    pub clifford_defect: f64,
    pub completeness: f64,
    pub idempotency: f64,
    pub orthogonality: f64,
    pub alpha_eigen: f64,
    pub beta_intertwining: f64,
    pub frequency_idempotency: f64,
    pub frequency_symbol: f64,
    /// `max |⟨βP±ψ, P±ψ'⟩| / (‖ψ‖‖ψ'‖)`.
    pub null_form_relative: f64,
    /// `max |Im⟨βψ, ψ⟩|`.
    pub null_form_imag: f64,
}

impl SpinorReport {
    /// Largest defect among the exact matrix identities.
    pub fn identity_defect(&self) -> f64 {
        [
            self.clifford_defect,
            self.completeness,
            self.idempotency,
            self.orthogonality,
            self.alpha_eigen,
            self.beta_intertwining,
            self.frequency_idempotency,
            self.frequency_symbol,
            self.null_form_imag,
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }

    pub fn passes(&self, identity_tol: f64, null_tol: f64) -> bool {
        self.identity_defect() <= identity_tol && self.null_form_relative <= null_tol
    }
}

/// Evaluates every projection identity on the given spinor pairs together
/// with the frequencies used for the `π±(ξ)` checks.
pub fn self_test(pairs: &[(Spinor, Spinor)], freqs: &[f64]) -> SpinorReport {
    let mut r = SpinorReport {
        samples: pairs.len(),
        clifford_defect: DiracMatrices::STANDARD.clifford_defect(),
        completeness: 0.0,
        idempotency: 0.0,
        orthogonality: 0.0,
        alpha_eigen: 0.0,
        beta_intertwining: 0.0,
        frequency_idempotency: 0.0,
        frequency_symbol: 0.0,
        null_form_relative: 0.0,
        null_form_imag: 0.0,
    };
    let upd = |slot: &mut f64, v: f64| *slot = slot.max(v);
    for (k, (psi, psi2)) in pairs.iter().enumerate() {
        let (p, m) = decompose(psi);
        upd(&mut r.completeness, (p + m).max_abs_diff(psi));
        for sign in [Sign::Plus, Sign::Minus] {
            let ps = project(sign, psi);
            upd(&mut r.idempotency, project(sign, &ps).max_abs_diff(&ps));
            upd(&mut r.orthogonality, project(sign.flip(), &ps).norm());
            upd(&mut r.alpha_eigen, alpha(&ps).max_abs_diff(&(sign.as_f64() * ps)));
            upd(
                &mut r.beta_intertwining,
                project(sign, &beta(psi)).max_abs_diff(&beta(&project(sign.flip(), psi))),
            );
            let nf = null_form(&ps, &project(sign, psi2)).norm();
            let scale = psi.norm() * psi2.norm();
            if scale > 0.0 {
                upd(&mut r.null_form_relative, nf / scale);
            }

            let xi = freqs[k % freqs.len().max(1)];
            let pi = frequency_projection(xi, sign, psi);
            upd(&mut r.frequency_idempotency, frequency_projection(xi, sign, &pi).max_abs_diff(&pi));
            if xi != 0.0 {
                let lhs = xi * alpha(&pi);
                let rhs = (sign.as_f64() * xi.abs()) * pi;
                upd(&mut r.frequency_symbol, lhs.max_abs_diff(&rhs) / xi.abs().max(1.0));
            }
        }
        upd(&mut r.null_form_imag, null_form(psi, psi).im.abs());
    }
    r
}
