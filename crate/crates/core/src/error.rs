use thiserror::Error;

/// Errors raised by the model, dynamics and phase routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A parameter lies outside its physical domain.
    #[error("{name} {reason} (got {value})")]
    Domain {
        name: &'static str,
        reason: &'static str,
        value: f64,
    },
    /// Initial state at a pole of the Bloch sphere, where the mixed-state
    /// angles are 0/0. Use the unitary phase formula instead.
    #[error("theta = {theta} is a pole of the Bloch sphere; the mixed-state angles are undefined there (use the unitary phase pi(1 + cos theta))")]
    PoleState { theta: f64 },
    /// The two eigenvalues of the reduced state coincide.
    #[error("reduced state is degenerate (theta = {theta}, r = {r})")]
    Degenerate { theta: f64, r: f64 },
    /// Decoherence time requested for a model without coupling to the vacuum.
    #[error("gamma0 = 0: the state never decoheres")]
    NoDecoherence,
    /// Root finder could not bracket or converge.
    #[error("root finder failed: {0}")]
    Root(&'static str),
    /// Adaptive quadrature hit its subdivision limit.
    #[error("quadrature did not converge: best estimate {estimate} with error estimate {error_estimate}")]
    QuadratureNotConverged { estimate: f64, error_estimate: f64 },
    /// Malformed sweep description.
    #[error("invalid sweep: {0}")]
    InvalidSpec(String),
    /// A grid point failed during a fail-fast sweep.
    #[error("sweep point {coordinates} failed: {source}")]
    SweepPoint {
        coordinates: String,
        #[source]
        source: Box<Error>,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
