//! Relative entropy over discrete and one-dimensional continuous measure
//! spaces, with Haar reference measures on built-in groups.
//!
//! Every measure is a density over a fixed base coordinate measure (counting
//! on finite spaces, Lebesgue on intervals). Entropies are computed in nats:
//!
//! - probability form: `-∫ q log q dν` with `q = dμ/dν`
//! - finite-measure form: `log η(s) - (1/η(s)) ∫ q log q dν`
//! - weight form: `log Z + (∫ φ e^{-φ} dν) / Z` with `Z = ∫ e^{-φ} dν`
//!
//! The [`verifier`] module turns the inequalities relating these quantities
//! into seeded, reproducible numeric checks.

#![forbid(unsafe_code)]

pub mod dsl;
pub mod entropy;
mod error;
pub mod exec;
pub mod groups;
pub mod maxent;
pub mod measure;
pub mod quadrature;
pub mod specfile;
pub mod supnorm;
pub mod verifier;

pub use entropy::{EntropyForm, EntropyValue};
pub use error::{Error, Result};
pub use exec::Exec;
pub use groups::{Group, GroupElement, HaarMeasure};
pub use measure::{Density, Measure, MeasurableSet, Space, WeightFunction};
pub use quadrature::Integrator;
pub use verifier::VerificationReport;

/// Default tolerance for inequality and identity checks.
pub const DEFAULT_TOL: f64 = 1e-8;
