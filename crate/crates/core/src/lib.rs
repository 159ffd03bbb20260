//! Mean values of exponential sums over the zeros of an exponential sum.
//!
//! For `f(z) = Σ cᵢ·exp(2παᵢz)` with real frequencies `α₁ < … < αₙ` and another
//! exponential sum `g`, the zeros of `f` lie in a vertical strip and the limit
//! of `S(R)/2R` (the sum of `g` over the zeros with `|Im z| < R`, divided by the
//! height) exists. This crate computes that limit two ways:
//!
//! * symbolically, as `(Aₙ − A₁)/2π` where `A₁` and `Aₙ` are constant terms of
//!   formal exponential series built from the lowest and highest terms of `f`
//!   ([`gkformula`]);
//! * numerically, by locating the zeros with the argument principle and
//!   averaging ([`zerofinder`], [`verifier`]).
//!
//! Frequencies are exact rational vectors over a declared real basis, so
//! frequency equality never depends on floating point comparison.
//! The algebraic (Laurent polynomial) special case lives in [`laurent`] and
//! serves as an independent oracle.

pub mod cli;
pub mod error;
pub mod freqcore;
pub mod gkformula;
pub mod laurent;
pub mod verifier;
pub mod zerofinder;

pub use error::{Error, Result};
pub use freqcore::{
    Coefficient, End, ExactCoeff, ExactSum, ExpTerm, ExponentialSum, FloatSum, Frequency,
    FrequencyBasis, GaussianRational, NumericSum, Rational,
};
pub use gkformula::{mean_value, mean_zero_count, MeanValueResult};
pub use laurent::LaurentPolynomial;
pub use verifier::{convergence_report, empirical_mean, ConvergenceReport};
pub use zerofinder::{find_zeros, QuadratureConfig, Rect, Zero, ZeroSet};
