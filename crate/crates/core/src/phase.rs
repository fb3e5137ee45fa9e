//! Geometric phase of the dephased qubit.
//!
//! The mixed-state (kinematic) phase of the dominant eigenvector after one
//! period reduces to `Φ = ∫₀^{2π} cos²θ_t(s) ds`. [`gp_exact`] evaluates that
//! integral by quadrature; [`gp_kinematic_oracle`] rebuilds the phase from
//! numerically diagonalised states, a finite-difference connection and a
//! final `arg`, and is used to validate it.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::model::{self, DimensionlessTime, ModelParams};
use crate::quadrature::{self, QuadratureSpec};
use crate::qubit::{self, BlochAngle};
use crate::scalar::Real;

/// Eigenvalue splittings below this are reported as near-degenerate.
pub const NEAR_DEGENERATE_SPLITTING: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseResult<T> {
    /// Unwrapped phase in radians.
    pub phase: T,
    /// `phase / unitary_gp(θ)`.
    pub normalized: T,
    pub quadrature_error_estimate: T,
    /// `ε₊ - ε₋ < 1e-6` at the final time; branch conventions for the
    /// phase are not meaningful there.
    pub near_degenerate: bool,
}

/// Unitary geometric phase `π(1 + cos θ)`.
pub fn unitary_gp<T: Real>(theta: T) -> T {
    T::PI() * (T::one() + theta.cos())
}

/// Dynamical phase `π cos θ`.
pub fn dynamical_phase<T: Real>(theta: T) -> T {
    T::PI() * theta.cos()
}

/// Reduces an angle to `[0, 2π)`.
pub fn wrap_phase<T: Real>(phase: T) -> T {
    let tau = T::TAU();
    let wrapped = phase % tau;
    let wrapped = if wrapped < T::zero() {
        wrapped + tau
    } else {
        wrapped
    };
    if wrapped >= tau {
        T::zero()
    } else {
        wrapped
    }
}

/// Distance between two angles on the circle, in `[0, π]`.
pub fn phase_distance<T: Real>(a: T, b: T) -> T {
    let d = wrap_phase(a - b);
    d.min(T::TAU() - d)
}

/// Validates a phase integration horizon.
fn final_time<T: Real>(s_final: DimensionlessTime<T>) -> Result<T> {
    let s = s_final.value();
    if s > T::zero() {
        Ok(s)
    } else {
        Err(Error::Domain {
            name: "s_final",
            reason: "must be > 0",
            value: s.as_f64(),
        })
    }
}

/// Decoherence factor floored at the smallest positive normal number.
///
/// The exact factor never vanishes at finite time; only its floating point
/// representation does. Flooring keeps the equator, where the angles are
/// independent of `r`, away from the `r = 0` degeneracy and changes nothing
/// elsewhere.
fn positive_factor<T: Real>(rate: T, s: T) -> T {
    (-rate * s).exp().max(T::min_positive_value())
}

/// `cos²θ_t` at time `s`.
fn integrand<T: Real>(rate: T, theta: BlochAngle<T>, s: T) -> Result<T> {
    let r = positive_factor(rate, s);
    let angles = qubit::angles_closed_form(theta, r)?;
    Ok(angles.cos_theta_t * angles.cos_theta_t)
}

/// Geometric phase `∫₀^{s_final} cos²θ_t(s) ds` with `r(s)` the decoherence
/// factor of `params`.
pub fn gp_exact<T: Real>(
    params: &ModelParams<T>,
    theta: BlochAngle<T>,
    s_final: DimensionlessTime<T>,
    quad: &QuadratureSpec<T>,
) -> Result<PhaseResult<T>> {
    let end = final_time(s_final)?;
    let rate = params.dephasing_rate();
    // The integrand is total on the open θ-domain for r > 0; probe once so a
    // degenerate end state surfaces as its own error instead of a NaN sum.
    integrand(rate, theta, end)?;
    let f = |s: T| integrand(rate, theta, s).unwrap_or_else(|_| T::nan());
    let integral = quadrature::integrate(f, T::zero(), end, quad)?;
    let r_end = positive_factor(rate, end);
    let (plus, minus) = qubit::eigenvalues_closed_form(theta, r_end)?;
    Ok(PhaseResult {
        phase: integral.value,
        normalized: integral.value / (T::PI() * (T::one() + theta.cos())),
        quadrature_error_estimate: integral.error_estimate,
        near_degenerate: plus - minus < T::lit(NEAR_DEGENERATE_SPLITTING),
    })
}

/// Kinematic mixed-state phase of the dominant eigenvector,
///
/// `Φ = arg[√(ε₊(τ)ε₊(0)) ⟨Ψ₊(0)|Ψ₊(τ)⟩ exp(-∫⟨Ψ₊|∂_s Ψ₊⟩ ds)]`, in `[0, 2π)`.
///
/// Eigenpairs come from [`qubit::eig_numeric`] applied to the reduced state,
/// the connection from Richardson-extrapolated central differences with step
/// `h = s_final / step_count`, and the integral from the trapezoidal rule on
/// the same grid. Agrees with [`gp_exact`] modulo `2π` when `s_final` is a
/// whole number of periods.
pub fn gp_kinematic_oracle<T: Real>(
    params: &ModelParams<T>,
    theta: BlochAngle<T>,
    s_final: DimensionlessTime<T>,
    step_count: usize,
) -> Result<T> {
    let end = final_time(s_final)?;
    if step_count < 2 {
        return Err(Error::Domain {
            name: "step_count",
            reason: "must be at least 2",
            value: step_count as f64,
        });
    }
    // Eigenvectors on a grid twice as fine as the integration grid.
    let fine = 2 * step_count;
    let fine_step = end / T::from_usize(fine).unwrap();
    let mut vectors = Vec::with_capacity(fine + 1);
    let mut top_values = [T::zero(); 2];
    let rate = params.dephasing_rate();
    for k in 0..=fine {
        let s = if k == fine {
            end
        } else {
            fine_step * T::from_usize(k).unwrap()
        };
        let time = DimensionlessTime::new(s)?;
        let r = positive_factor(rate, s);
        let rho = qubit::density_matrix(theta, time, r)?;
        let eig = qubit::eig_numeric(&rho);
        if eig.values[0] - eig.values[1] <= T::zero() {
            return Err(Error::Degenerate {
                theta: theta.value().as_f64(),
                r: r.as_f64(),
            });
        }
        if k == 0 {
            top_values[0] = eig.values[0];
        }
        if k == fine {
            top_values[1] = eig.values[0];
        }
        vectors.push(eig.vectors[0]);
    }

    let h = fine_step + fine_step;
    let three = T::lit(3.0);
    let four = T::lit(4.0);
    let v = &vectors;
    // Second-order one-sided difference anchored at `a`; `width` is signed.
    let one_sided = |a: usize, near: usize, far: usize, width: T| -> [Complex<T>; 2] {
        let w = T::one() / (width + width);
        [
            ((v[near][0] - v[a][0]) * four - (v[far][0] - v[a][0])) * w,
            ((v[near][1] - v[a][1]) * four - (v[far][1] - v[a][1])) * w,
        ]
    };
    let central = |lo: usize, hi: usize, width: T| -> [Complex<T>; 2] {
        let w = T::one() / (width + width);
        [(v[hi][0] - v[lo][0]) * w, (v[hi][1] - v[lo][1]) * w]
    };
    let richardson = |coarse: [Complex<T>; 2], finer: [Complex<T>; 2]| {
        [
            (finer[0] * four - coarse[0]) / three,
            (finer[1] * four - coarse[1]) / three,
        ]
    };
    let derivative = |j: usize| -> [Complex<T>; 2] {
        if j == 0 {
            richardson(one_sided(0, 2, 4, h), one_sided(0, 1, 2, fine_step))
        } else if j == fine {
            richardson(
                one_sided(fine, fine - 2, fine - 4, -h),
                one_sided(fine, fine - 1, fine - 2, -fine_step),
            )
        } else {
            richardson(central(j - 2, j + 2, h), central(j - 1, j + 1, fine_step))
        }
    };
    let connection = |j: usize| {
        let psi = &vectors[j];
        let d = derivative(j);
        psi[0].conj() * d[0] + psi[1].conj() * d[1]
    };

    let half = T::lit(0.5);
    let mut integral = (connection(0) + connection(fine)) * half;
    for k in 1..step_count {
        integral = integral + connection(2 * k);
    }
    let integral = integral * h;

    let first = &vectors[0];
    let last = &vectors[fine];
    let overlap = first[0].conj() * last[0] + first[1].conj() * last[1];
    let weight = (top_values[0] * top_values[1]).sqrt();
    let total = overlap * weight * (-integral).exp();
    Ok(wrap_phase(total.arg()))
}

/// Perturbative phase after one period, first order in `γ0`:
///
/// `π(1 + cosθ) + (π²/3) γ0 cosθ sin²θ [3 + 2v² + 2vλ̃²(1 - v²) e^{-(2Ω̃/v)√(1-v²)}]`.
///
/// Poles are allowed; the correction vanishes there.
pub fn gp_perturbative<T: Real>(params: &ModelParams<T>, theta: T) -> Result<T> {
    if !theta.is_finite() || theta < T::zero() || theta > T::PI() {
        return Err(Error::Domain {
            name: "theta",
            reason: "must lie in [0, pi]",
            value: theta.as_f64(),
        });
    }
    let v = params.velocity();
    let lambda_sq = params.lambda_tilde() * params.lambda_tilde();
    let two = T::lit(2.0);
    let plate = two
        * v
        * lambda_sq
        * (T::one() - v * v)
        * model::plate_suppression(params.omega_tilde(), v);
    let bracket = T::lit(3.0) + two * v * v + plate;
    let (c, sn) = (theta.cos(), theta.sin());
    let correction = T::PI() * T::PI() / T::lit(3.0) * params.gamma0() * c * sn * sn * bracket;
    Ok(unitary_gp(theta) + correction)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, PI, TAU};

    fn p(gamma0: f64, lambda: f64, omega: f64, v: f64) -> ModelParams<f64> {
        ModelParams::new(gamma0, lambda, omega, v).unwrap()
    }

    fn angle(x: f64) -> BlochAngle<f64> {
        BlochAngle::new(x).unwrap()
    }

    fn period() -> DimensionlessTime<f64> {
        DimensionlessTime::one_period()
    }

    fn exact(params: &ModelParams<f64>, th: f64) -> PhaseResult<f64> {
        gp_exact(params, angle(th), period(), &QuadratureSpec::default()).unwrap()
    }

    #[test]
    fn closed_phases() {
        assert!((unitary_gp(FRAC_PI_2) - PI).abs() < 1e-15);
        assert!((unitary_gp(0.0) - TAU).abs() < 1e-15);
        assert!(unitary_gp(PI).abs() < 1e-15);
        assert!(dynamical_phase(FRAC_PI_2).abs() < 1e-15);
        assert!((dynamical_phase(0.0) - PI).abs() < 1e-15);
        assert!((dynamical_phase(2.0 * PI / 3.0) + FRAC_PI_2).abs() < 1e-15);
    }

    #[test]
    fn wrapping() {
        assert!((wrap_phase(-0.5) - (TAU - 0.5)).abs() < 1e-15);
        assert!((wrap_phase(7.0) - (7.0 - TAU)).abs() < 1e-15);
        assert!(phase_distance(0.01, TAU - 0.01) < 0.0200001);
        assert!((phase_distance(0.0, PI) - PI).abs() < 1e-15);
    }

    #[test]
    fn unitary_limit() {
        for &th in &[0.1, 0.7, 1.3, 2.0, 2.9] {
            let r = exact(&p(0.0, 5.0, 0.03, 0.5), th);
            assert!((r.phase - unitary_gp(th)).abs() < 1e-9);
            assert!((r.normalized - 1.0).abs() < 1e-9);
            assert!(r.quadrature_error_estimate < 1e-9);
        }
    }

    #[test]
    fn equator_invariance() {
        for params in [
            p(0.05, 5.0, 0.03, 0.9),
            p(0.5, 5.0, 0.03, 0.5),
            p(0.05, 1.0, 0.03, 0.1),
        ] {
            let r = exact(&params, FRAC_PI_2);
            assert!((r.phase - PI).abs() < 1e-9);
        }
    }

    #[test]
    fn rejects_empty_horizon() {
        let zero = DimensionlessTime::new(0.0).unwrap();
        assert!(gp_exact(
            &p(0.05, 1.0, 0.03, 0.3),
            angle(1.0),
            zero,
            &QuadratureSpec::default()
        )
        .is_err());
        assert!(gp_kinematic_oracle(&p(0.05, 1.0, 0.03, 0.3), angle(1.0), zero, 100).is_err());
        assert!(gp_kinematic_oracle(&p(0.05, 1.0, 0.03, 0.3), angle(1.0), period(), 1).is_err());
    }

    #[test]
    fn gauss_legendre_cross_check() {
        let params = p(0.05, 1.0, 0.03, 0.3);
        let a = exact(&params, 0.1 * PI);
        let b = gp_exact(
            &params,
            angle(0.1 * PI),
            period(),
            &QuadratureSpec::gauss_legendre(256),
        )
        .unwrap();
        assert!((a.phase - b.phase).abs() < 1e-10);
    }

    #[test]
    fn oracle_unitary_and_equator() {
        let o = gp_kinematic_oracle(&p(0.0, 5.0, 0.03, 0.5), angle(PI / 3.0), period(), 10_000)
            .unwrap();
        assert!(phase_distance(o, 1.5 * PI) < 1e-6);
        let o = gp_kinematic_oracle(&p(0.5, 5.0, 0.03, 0.5), angle(FRAC_PI_2), period(), 10_000)
            .unwrap();
        assert!(phase_distance(o, PI) < 1e-6);
    }

    #[test]
    fn oracle_matches_exact() {
        for (params, th) in [
            (p(0.05, 1.0, 0.03, 0.3), 0.1 * PI),
            (p(0.5, 5.0, 0.03, 0.5), 0.25 * PI),
        ] {
            let e = exact(&params, th);
            let o = gp_kinematic_oracle(&params, angle(th), period(), 20_000).unwrap();
            assert!(phase_distance(e.phase, o) < 1e-6, "{} vs {o}", e.phase);
        }
    }

    #[test]
    fn halving_tolerance_is_self_consistent() {
        let params = p(0.5, 5.0, 0.03, 0.5);
        for &th in &[0.1 * PI, 0.4 * PI, 0.7 * PI] {
            let coarse = exact(&params, th);
            let spec = QuadratureSpec::default().with_tolerance(0.5e-10);
            let fine = gp_exact(&params, angle(th), period(), &spec).unwrap();
            assert!((coarse.phase - fine.phase).abs() <= coarse.quadrature_error_estimate + 1e-15);
        }
    }

    #[test]
    fn accumulates_in_time() {
        let params = p(0.1, 5.0, 0.03, 0.5);
        let mut previous = 0.0;
        for k in 1..=20 {
            let s = DimensionlessTime::new(0.2 * PI * k as f64).unwrap();
            let r = gp_exact(&params, angle(0.1 * PI), s, &QuadratureSpec::default()).unwrap();
            assert!(r.phase > previous);
            previous = r.phase;
        }
    }

    #[test]
    fn near_degenerate_flag() {
        let params = p(0.5, 15.0, 0.03, 0.9);
        let r = exact(&params, FRAC_PI_2);
        assert!(r.near_degenerate);
        assert!(!exact(&p(0.05, 1.0, 0.03, 0.3), 0.3 * PI).near_degenerate);
    }

    #[test]
    fn strong_decoherence_is_finite() {
        // r underflows to zero within the period.
        let params = p(0.5, 15.0, 0.03, 0.95);
        for &th in &[0.05 * PI, 0.3 * PI, 0.7 * PI, 0.95 * PI] {
            let r = exact(&params, th);
            assert!(r.phase.is_finite() && r.phase >= 0.0 && r.phase <= TAU);
        }
    }

    #[test]
    fn perturbative_examples() {
        for &th in &[0.0, 0.3, 1.2, PI] {
            let value = gp_perturbative(&p(0.0, 5.0, 0.03, 0.5), th).unwrap();
            assert!((value - unitary_gp(th)).abs() < 1e-15);
        }
        for params in [p(0.05, 5.0, 0.03, 0.5), p(0.5, 15.0, 0.03, 0.9)] {
            assert!((gp_perturbative(&params, FRAC_PI_2).unwrap() - PI).abs() < 1e-14);
        }
        assert!(gp_perturbative(&p(0.05, 1.0, 0.03, 0.3), -0.1).is_err());
        // v = 0: bracket is exactly 3.
        let th = 0.1 * PI;
        let v0 = gp_perturbative(&p(0.05, 5.0, 0.03, 0.0), th).unwrap();
        let expected = unitary_gp(th) + PI * PI * 0.05 * th.cos() * th.sin().powi(2);
        assert!((v0 - expected).abs() < 1e-15);
        let no_plate = gp_perturbative(&p(0.05, 0.0, 0.03, 0.0), th).unwrap();
        assert_eq!(v0, no_plate);
    }

    /// First-order coefficient of the exact phase in γ0, from a central
    /// difference in γ0. Expanding `cos²θ_t = (1 + cosθ/R)/2` with
    /// `R² = 1 - sin²θ (1 - r²)` and `r² ≈ 1 - γ0 M s` gives
    /// `dΦ/dγ0 = (π²/2) M cosθ sin²θ` at `γ0 = 0`.
    #[test]
    fn exact_phase_first_order_coefficient() {
        for &(l, v, th) in &[
            (1.0, 0.3, 0.1 * PI),
            (5.0, 0.5, 0.3 * PI),
            (0.0, 0.0, 0.7 * PI),
        ] {
            let h = 1e-4;
            let plus = exact(&p(h, l, 0.03, v), th).phase;
            let minus = exact(&p(0.0, l, 0.03, v), th).phase;
            let plus2 = exact(&p(2.0 * h, l, 0.03, v), th).phase;
            // Second-order forward difference at γ0 = 0.
            let slope = (4.0 * plus - 3.0 * minus - plus2) / (2.0 * h);
            let m = p(1.0, l, 0.03, v).noise_multiplier();
            let expected = PI * PI / 2.0 * m * th.cos() * th.sin().powi(2);
            assert!(
                (slope - expected).abs() < 1e-5 * expected.abs().max(1.0),
                "{slope} vs {expected}"
            );
        }
    }

    #[test]
    fn single_precision_phase() {
        let params = ModelParams::<f32>::new(0.05, 1.0, 0.03, 0.3).unwrap();
        let theta = BlochAngle::<f32>::new(0.3).unwrap();
        let r = gp_exact(
            &params,
            theta,
            DimensionlessTime::one_period(),
            &QuadratureSpec::default(),
        )
        .unwrap();
        let reference = exact(&p(0.05, 1.0, 0.03, 0.3), 0.3);
        assert!((r.phase as f64 - reference.phase).abs() < 1e-4);
    }
}
