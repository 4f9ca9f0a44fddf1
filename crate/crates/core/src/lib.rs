//! Numerical toolkit for the one-dimensional Dirac–Klein–Gordon system
//!
//! ```text
//! D_t ψ + α D_x ψ + M ψ = φ β ψ,      −□φ + m² φ = ⟨βψ, ψ⟩
//! ```
//!
//! * [`spinor`]: Dirac matrices, the projections `P±`, `π±(ξ)`, and the null form.
//! * [`weights`]: hyperbolic weights `Γ`, `Θ+`, `Σ−` and their algebraic constraint.
//! * [`norms`]: the space-time transform and `X±^{a,α}`, `H^{a,α}` norms.
//! * [`bilinear`]: counterexample families for the bilinear estimates, slope
//!   fits, and the free-wave product constant.
//! * [`region`]: well-posedness regions and the exponent bookkeeping behind them.
//! * [`solver`]: a charge-conserving split-step spectral solver.

pub mod bilinear;
pub mod error;
pub mod fft;
pub mod norms;
pub mod region;
pub mod solver;
pub mod spinor;
pub mod weights;

pub use error::{Error, Result};
