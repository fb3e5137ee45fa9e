//! Decoherence and non-unitary geometric phase of a two-level particle
//! moving at constant velocity parallel to an imperfect mirror.
//!
//! The numerical core is generic over [`Real`] (`f32` or `f64`); the
//! aliases below fix it to double precision, which is what the sweep
//! machinery in [`experiments`] uses.

// `!(a < b)` is used on purpose so that NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod experiments;
pub mod model;
pub mod phase;
pub mod quadrature;
pub mod qubit;
pub mod roots;
pub mod scalar;

pub use error::{Error, Result};
pub use scalar::Real;

pub type ModelParams = model::ModelParams<f64>;
pub type DimensionlessTime = model::DimensionlessTime<f64>;
pub type BlochAngle = qubit::BlochAngle<f64>;
pub type ReducedState = qubit::ReducedState<f64>;
pub type MixedAngles = qubit::MixedAngles<f64>;
pub type PhaseResult = phase::PhaseResult<f64>;
pub type QuadratureSpec = quadrature::QuadratureSpec<f64>;

pub type ModelParams32 = model::ModelParams<f32>;
pub type BlochAngle32 = qubit::BlochAngle<f32>;
pub type QuadratureSpec32 = quadrature::QuadratureSpec<f32>;

/// Version string recorded in dataset metadata.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
