//! Friction model: couplings, influence action and decoherence factor.
//!
//! All quantities are dimensionless. Times are measured in units of the
//! inverse qubit gap, so one period of the isolated evolution is `s = 2π`.

use crate::error::{Error, Result};
use crate::roots;
use crate::scalar::Real;

/// Couplings and dimensionless frequencies of the particle/plate system.
///
/// Construction validates every domain constraint, so the evaluation
/// functions in this module are infallible.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams<T> {
    gamma0: T,
    lambda_tilde: T,
    omega_tilde: T,
    omega0_tilde: Option<T>,
    velocity: T,
}

fn check<T: Real>(ok: bool, name: &'static str, reason: &'static str, value: T) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::Domain {
            name,
            reason,
            value: value.as_f64(),
        })
    }
}

impl<T: Real> ModelParams<T> {
    /// `gamma0` is the vacuum coupling, `lambda_tilde` the plate coupling,
    /// `omega_tilde` the plate frequency times the particle/plate distance and
    /// `velocity` the speed in units of `c`.
    pub fn new(gamma0: T, lambda_tilde: T, omega_tilde: T, velocity: T) -> Result<Self> {
        check(
            gamma0.is_finite() && gamma0 >= T::zero(),
            "gamma0",
            "must be finite and >= 0",
            gamma0,
        )?;
        check(
            lambda_tilde.is_finite() && lambda_tilde >= T::zero(),
            "lambda",
            "must be finite and >= 0",
            lambda_tilde,
        )?;
        check(
            omega_tilde.is_finite() && omega_tilde > T::zero(),
            "omega",
            "must be finite and > 0",
            omega_tilde,
        )?;
        check(
            velocity >= T::zero() && velocity < T::one(),
            "velocity",
            "must satisfy 0 <= v < 1",
            velocity,
        )?;
        Ok(Self {
            gamma0,
            lambda_tilde,
            omega_tilde,
            omega0_tilde: None,
            velocity,
        })
    }

    /// Sets the internal oscillator frequency `ω̃0`, only needed by
    /// [`im_inout_action`].
    pub fn with_omega0(mut self, omega0_tilde: T) -> Result<Self> {
        check(
            omega0_tilde.is_finite() && omega0_tilde > T::zero(),
            "omega0",
            "must be finite and > 0",
            omega0_tilde,
        )?;
        self.omega0_tilde = Some(omega0_tilde);
        Ok(self)
    }

    pub fn with_gamma0(self, gamma0: T) -> Result<Self> {
        self.rebuild(gamma0, self.lambda_tilde, self.omega_tilde, self.velocity)
    }

    pub fn with_lambda(self, lambda_tilde: T) -> Result<Self> {
        self.rebuild(self.gamma0, lambda_tilde, self.omega_tilde, self.velocity)
    }

    pub fn with_omega(self, omega_tilde: T) -> Result<Self> {
        self.rebuild(self.gamma0, self.lambda_tilde, omega_tilde, self.velocity)
    }

    pub fn with_velocity(self, velocity: T) -> Result<Self> {
        self.rebuild(self.gamma0, self.lambda_tilde, self.omega_tilde, velocity)
    }

    fn rebuild(self, gamma0: T, lambda_tilde: T, omega_tilde: T, velocity: T) -> Result<Self> {
        let mut p = Self::new(gamma0, lambda_tilde, omega_tilde, velocity)?;
        p.omega0_tilde = self.omega0_tilde;
        Ok(p)
    }

    pub fn gamma0(&self) -> T {
        self.gamma0
    }

    pub fn lambda_tilde(&self) -> T {
        self.lambda_tilde
    }

    pub fn omega_tilde(&self) -> T {
        self.omega_tilde
    }

    pub fn omega0_tilde(&self) -> Option<T> {
        self.omega0_tilde
    }

    pub fn velocity(&self) -> T {
        self.velocity
    }

    /// Bracket `1 + (2/3)v² + friction` multiplying `γ0 s / 2`.
    pub fn noise_multiplier(&self) -> T {
        let v = self.velocity;
        T::one() + T::lit(2.0 / 3.0) * v * v + friction_factor(self)
    }

    /// Growth rate of the influence action per unit dimensionless time.
    #[inline]
    pub fn dephasing_rate(&self) -> T {
        T::lit(0.5) * self.gamma0 * self.noise_multiplier()
    }
}

/// Dimensionless time `s = Δ·t`, non-negative.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct DimensionlessTime<T>(T);

impl<T: Real> DimensionlessTime<T> {
    pub fn new(s: T) -> Result<Self> {
        check(
            s.is_finite() && s >= T::zero(),
            "time",
            "must be finite and >= 0",
            s,
        )?;
        Ok(Self(s))
    }

    /// `count` isolated periods, `2π·count`.
    pub fn periods(count: T) -> Result<Self> {
        Self::new(T::TAU() * count)
    }

    pub fn one_period() -> Self {
        Self(T::TAU())
    }

    pub fn value(self) -> T {
        self.0
    }
}

/// `exp(-(2Ω̃/v)√(1-v²))`, exactly zero at `v = 0`.
pub(crate) fn plate_suppression<T: Real>(omega_tilde: T, velocity: T) -> T {
    if velocity == T::zero() {
        return T::zero();
    }
    let exponent =
        -(T::lit(2.0) * omega_tilde / velocity) * (T::one() - velocity * velocity).sqrt();
    exponent.exp()
}

/// Plate-mediated friction term `λ̃² v e^{-(2Ω̃/v)√(1-v²)} / (1-v²)`.
pub fn friction_factor<T: Real>(params: &ModelParams<T>) -> T {
    let v = params.velocity;
    let l2 = params.lambda_tilde * params.lambda_tilde;
    if v == T::zero() || l2 == T::zero() {
        return T::zero();
    }
    l2 * v * plate_suppression(params.omega_tilde, v) / (T::one() - v * v)
}

/// Imaginary part of the influence action after time `s`:
/// `(γ0 s / 2)(1 + (2/3)v² + friction)`.
pub fn im_influence_action<T: Real>(params: &ModelParams<T>, s: DimensionlessTime<T>) -> T {
    params.dephasing_rate() * s.0
}

/// Decoherence factor `r(s) = exp(-Im S(s))`.
pub fn decoherence_factor<T: Real>(params: &ModelParams<T>, s: DimensionlessTime<T>) -> T {
    (-im_influence_action(params, s)).exp()
}

/// Time at which the influence action reaches one, found by bracketing.
pub fn decoherence_time<T: Real>(params: &ModelParams<T>) -> Result<DimensionlessTime<T>> {
    if params.gamma0 == T::zero() {
        return Err(Error::NoDecoherence);
    }
    let residual = |s: T| params.dephasing_rate() * s - T::one();
    let s = roots::solve_nonnegative(residual, T::lit(T::ROOT_TOLERANCE))?;
    Ok(DimensionlessTime(s))
}

/// Closed-form inverse of the linear influence action, `2 / (γ0 M)`.
pub fn decoherence_time_analytic<T: Real>(params: &ModelParams<T>) -> Result<DimensionlessTime<T>> {
    if params.gamma0 == T::zero() {
        return Err(Error::NoDecoherence);
    }
    Ok(DimensionlessTime(T::one() / params.dephasing_rate()))
}

/// Imaginary part of the in-out effective action over time of flight `flight`
/// for a harmonic internal degree of freedom of frequency `ω̃0`.
///
/// The dimensional plate coupling is reconstructed as `λ² = λ̃² Ω̃³`.
pub fn im_inout_action<T: Real>(
    params: &ModelParams<T>,
    flight: DimensionlessTime<T>,
) -> Result<T> {
    let omega0 = params.omega0_tilde.ok_or(Error::Domain {
        name: "omega0",
        reason: "must be set for the in-out action",
        value: f64::NAN,
    })?;
    let v = params.velocity;
    if v == T::zero() || params.gamma0 == T::zero() || params.lambda_tilde == T::zero() {
        return Ok(T::zero());
    }
    let omega = params.omega_tilde;
    let sum = omega0 + omega;
    let gap = sum * sum - v * v * omega * omega;
    check(
        gap > T::zero(),
        "velocity",
        "violates (omega0 + omega)^2 > v^2 omega^2",
        v,
    )?;
    let lambda_sq = params.lambda_tilde * params.lambda_tilde * omega * omega * omega;
    let prefactor =
        flight.0 * v * T::PI() * lambda_sq * params.gamma0 / (T::lit(32.0) * omega * omega0);
    Ok(prefactor * (-(T::lit(2.0) / v) * gap.sqrt()).exp() / gap)
}
