//! Scalar abstraction shared by every numerical routine in the crate.

use std::fmt::{Debug, Display};

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Floating point type the physics is evaluated in: `f32` or `f64`.
///
/// The associated constants carry precision-dependent defaults so that
/// generic code never hard-codes a double precision tolerance.
pub trait Real:
    Float + FloatConst + FromPrimitive + ToPrimitive + Debug + Display + Send + Sync + 'static
{
    /// Default absolute tolerance for adaptive quadrature.
    const QUADRATURE_TOLERANCE: f64;
    /// Default absolute tolerance on the abscissa for bracketing root finders.
    const ROOT_TOLERANCE: f64;
    /// Slack used when validating Hermiticity, trace and positivity.
    const STATE_TOLERANCE: f64;

    /// Converts an `f64` literal. Every literal used by this crate is
    /// representable (possibly rounded) in both supported types.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable")
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Real for f32 {
    const QUADRATURE_TOLERANCE: f64 = 1e-5;
    const ROOT_TOLERANCE: f64 = 1e-6;
    const STATE_TOLERANCE: f64 = 1e-6;
}

impl Real for f64 {
    const QUADRATURE_TOLERANCE: f64 = 1e-10;
    const ROOT_TOLERANCE: f64 = 1e-12;
    const STATE_TOLERANCE: f64 = 1e-14;
}
