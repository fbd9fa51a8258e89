//! Grand Lebesgue Space (GLS) toolkit.
//!
//! A Grand Lebesgue Space `G(psi)` over a probability space collects the
//! measurable functions `f` with finite norm
//!
//! ```text
//! ||f|| = sup_{p in [1,b)} |f|_p / psi(p)
//! ```
//!
//! where `psi` is a *generating function*: positive, continuous on `[1,b)`
//! and normalized to infimum 1. This crate provides
//!
//! * the named generating-function families and their calculus ([`psi`]),
//! * Young-Fenchel conjugation, moment-to-tail and tail-to-moment
//!   conversions, and the exponential Orlicz function ([`conjugate`]),
//! * empirical moment profiles, GLS norms, tails and decreasing
//!   rearrangements for finite samples ([`empirics`]),
//! * the operator-norm constants `K_lambda[psi,b]` and norm propagation for
//!   operators of type `(lambda, nu)` ([`bounds`]),
//! * seeded simulations of classical maximal operators (Doob maxima,
//!   Dunford-Schwartz ergodic maxima, partial Fourier sums) together with
//!   inequality verification at Monte-Carlo tolerance ([`verifier`]).

pub mod bounds;
pub mod conjugate;
pub mod empirics;
mod error;
pub mod grid;
mod opt;
pub mod psi;
pub mod verifier;

pub use bounds::{BoundReport, ClosedFormK, Method, OperatorTypeSpec, Propagation, Weight};
pub use conjugate::{ConvexGridFunction, TailEnvelope};
pub use empirics::{EmpiricalSample, GlsNorm, MomentProfile, RearrangementPair};
pub use error::{GlsError, Result};
pub use grid::GridSettings;
pub use psi::{FamilyDescriptor, GeneratingFunction, SlowlyVarying};
pub use verifier::{
    ConvergenceConfig, ConvergenceReport, DsProfile, PerPRow, PropagationReport, ScenarioConfig,
    VerificationReport,
};
