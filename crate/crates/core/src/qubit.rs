//! Dephased qubit: reduced density matrix, its spectrum and the mixed-state
//! angles of the dominant eigenvector.
//!
//! The reduced state is the pure-dephasing channel applied to the freely
//! precessing state `cos(θ/2)|0⟩ + sin(θ/2) e^{is}|1⟩`: populations are
//! frozen and coherences are multiplied by the decoherence factor `r`.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::model::DimensionlessTime;
use crate::scalar::Real;

/// Polar angle of the initial pure state, strictly between the poles.
///
/// Stored as a fraction of π so that angles such as `0.5π` have exactly
/// representable sines and cosines; in particular the equator has
/// `cos θ = 0` exactly.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct BlochAngle<T> {
    turns: T,
}

impl<T: Real> BlochAngle<T> {
    /// Angle in radians.
    pub fn new(theta: T) -> Result<Self> {
        if !theta.is_finite() {
            return Err(Error::Domain {
                name: "theta",
                reason: "must lie in (0, pi)",
                value: theta.as_f64(),
            });
        }
        Self::from_pi_fraction(theta / T::PI())
    }

    /// `fraction · π`, matching the `θ = 0.1π` style of parameterisation.
    pub fn from_pi_fraction(fraction: T) -> Result<Self> {
        if !fraction.is_finite() || fraction < T::zero() || fraction > T::one() {
            return Err(Error::Domain {
                name: "theta",
                reason: "must lie in (0, pi)",
                value: (fraction * T::PI()).as_f64(),
            });
        }
        if fraction == T::zero() || fraction == T::one() {
            return Err(Error::PoleState {
                theta: (fraction * T::PI()).as_f64(),
            });
        }
        Ok(Self { turns: fraction })
    }

    /// Angle in radians.
    pub fn value(self) -> T {
        self.turns * T::PI()
    }

    pub fn pi_fraction(self) -> T {
        self.turns
    }

    pub fn cos(self) -> T {
        cos_pi(self.turns)
    }

    pub fn sin(self) -> T {
        sin_pi(self.turns)
    }

    /// `(cos(θ/2), sin(θ/2))`.
    pub fn half_angle(self) -> (T, T) {
        let half = T::lit(0.5) * self.turns;
        (cos_pi(half), sin_pi(half))
    }
}

/// `sin(πx)` for `x ∈ [0, 1]`, reflected about `1/2` so the argument stays
/// small and `1 - x` is exact.
fn sin_pi<T: Real>(x: T) -> T {
    let reduced = if x > T::lit(0.5) { T::one() - x } else { x };
    (T::PI() * reduced).sin()
}

/// `cos(πx)` for `x ∈ [0, 1]`: `sin(π(1/2 - x))` near the equator, where
/// `1/2 - x` is exact.
fn cos_pi<T: Real>(x: T) -> T {
    let quarter = T::lit(0.25);
    if x < quarter {
        (T::PI() * x).cos()
    } else if x > T::lit(0.75) {
        -(T::PI() * (T::one() - x)).cos()
    } else {
        (T::PI() * (T::lit(0.5) - x)).sin()
    }
}

/// Sine and cosine of the mixed-state angle `θ_t`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MixedAngles<T> {
    pub sin_theta_t: T,
    pub cos_theta_t: T,
}

/// Hermitian, unit-trace, positive semidefinite 2×2 matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReducedState<T> {
    entries: [[Complex<T>; 2]; 2],
}

/// Eigenvalues (descending) and matching unit eigenvectors of a
/// [`ReducedState`]. Each eigenvector has its first non-negligible
/// component real and positive.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Eigensystem<T> {
    pub values: [T; 2],
    pub vectors: [[Complex<T>; 2]; 2],
}

impl<T: Real> ReducedState<T> {
    /// Validates Hermiticity, unit trace and positivity within
    /// [`Real::STATE_TOLERANCE`].
    pub fn new(entries: [[Complex<T>; 2]; 2]) -> Result<Self> {
        let tol = T::lit(T::STATE_TOLERANCE);
        let invalid = |reason: &'static str, value: T| Error::Domain {
            name: "state",
            reason,
            value: value.as_f64(),
        };
        let hermitian_defect = (entries[0][1] - entries[1][0].conj())
            .norm()
            .max(entries[0][0].im.abs())
            .max(entries[1][1].im.abs());
        if !(hermitian_defect <= tol) {
            return Err(invalid("must be Hermitian", hermitian_defect));
        }
        let trace = entries[0][0].re + entries[1][1].re;
        if !((trace - T::one()).abs() <= tol) {
            return Err(invalid("must have unit trace", trace));
        }
        let state = Self { entries };
        let lowest = eig_numeric(&state).values[1];
        if !(lowest >= -tol) {
            return Err(invalid("must be positive semidefinite", lowest));
        }
        Ok(state)
    }

    pub fn entries(&self) -> &[[Complex<T>; 2]; 2] {
        &self.entries
    }

    pub fn trace(&self) -> T {
        self.entries[0][0].re + self.entries[1][1].re
    }

    /// `tr ρ²`.
    pub fn purity(&self) -> T {
        let [[a, z], [_, d]] = self.entries;
        a.re * a.re + d.re * d.re + T::lit(2.0) * z.norm_sqr()
    }
}

fn check_factor<T: Real>(r: T) -> Result<()> {
    if r.is_finite() && r >= T::zero() && r <= T::one() {
        Ok(())
    } else {
        Err(Error::Domain {
            name: "r",
            reason: "must lie in [0, 1]",
            value: r.as_f64(),
        })
    }
}

/// `ρ(s)` for initial angle `theta` and decoherence factor `r`.
///
/// Diagonal: `cos²(θ/2)`, `sin²(θ/2)`; off-diagonal `ρ₀₁ = (r/2) sinθ e^{-is}`.
pub fn density_matrix<T: Real>(
    theta: BlochAngle<T>,
    s: DimensionlessTime<T>,
    r: T,
) -> Result<ReducedState<T>> {
    check_factor(r)?;
    let half = T::lit(0.5);
    let (c_half, s_half) = theta.half_angle();
    let coherence = Complex::from_polar(half * r * theta.sin(), -s.value());
    let entries = [
        [Complex::new(c_half * c_half, T::zero()), coherence],
        [coherence.conj(), Complex::new(s_half * s_half, T::zero())],
    ];
    ReducedState::new(entries)
}

/// `√(cos²θ + r² sin²θ)`, the eigenvalue splitting `ε₊ - ε₋`.
fn splitting<T: Real>(theta: BlochAngle<T>, r: T) -> T {
    theta.cos().hypot(r * theta.sin())
}

/// `ε± = 1/2 ± (1/2)√(cos²θ + r² sin²θ)`, returned as `(ε₊, ε₋)`.
pub fn eigenvalues_closed_form<T: Real>(theta: BlochAngle<T>, r: T) -> Result<(T, T)> {
    check_factor(r)?;
    let half = T::lit(0.5);
    let root = splitting(theta, r);
    Ok((half + half * root, half - half * root))
}

/// `sin θ_t`, `cos θ_t` of the dominant eigenvector:
///
/// `sin θ_t = 2(ε₊ - cos²(θ/2)) / D`, `cos θ_t = r sinθ / D`,
/// `D = √(r² sin²θ + 4(ε₊ - cos²(θ/2))²)`.
///
/// `2(ε₊ - cos²(θ/2)) = R - cosθ` with `R` the eigenvalue splitting; for
/// `cosθ > 0` it is evaluated as `r² sin²θ / (R + cosθ)` to avoid
/// cancellation, which keeps the angles exact as `r → 0`.
pub fn angles_closed_form<T: Real>(theta: BlochAngle<T>, r: T) -> Result<MixedAngles<T>> {
    check_factor(r)?;
    let c = theta.cos();
    let coherence = r * theta.sin();
    let split = c.hypot(coherence);
    let (sin_theta_t, cos_theta_t) = if c > T::zero() {
        let q = coherence / (split + c);
        let norm = T::one().hypot(q);
        (q / norm, T::one() / norm)
    } else {
        let excess = split - c;
        let norm = coherence.hypot(excess);
        if norm == T::zero() {
            return Err(Error::Degenerate {
                theta: theta.value().as_f64(),
                r: r.as_f64(),
            });
        }
        (excess / norm, coherence / norm)
    };
    Ok(MixedAngles {
        sin_theta_t,
        cos_theta_t,
    })
}

/// Dominant eigenvector `cos θ_t |0⟩ + sin θ_t e^{is} |1⟩`.
pub fn eigenvector_plus<T: Real>(
    theta: BlochAngle<T>,
    s: DimensionlessTime<T>,
    r: T,
) -> Result<[Complex<T>; 2]> {
    let angles = angles_closed_form(theta, r)?;
    Ok([
        Complex::new(angles.cos_theta_t, T::zero()),
        Complex::from_polar(angles.sin_theta_t, s.value()),
    ])
}

fn fix_phase<T: Real>(v: [Complex<T>; 2]) -> [Complex<T>; 2] {
    let norm = (v[0].norm_sqr() + v[1].norm_sqr()).sqrt();
    let pivot = if v[0].norm() > T::epsilon() * norm {
        v[0]
    } else {
        v[1]
    };
    let phase = pivot.conj() / pivot.norm();
    let scale = phase / norm;
    [v[0] * scale, v[1] * scale]
}

/// Direct eigendecomposition of a Hermitian 2×2 matrix from its
/// characteristic polynomial.
pub fn eig_numeric<T: Real>(state: &ReducedState<T>) -> Eigensystem<T> {
    let [[p, z], [_, q]] = state.entries;
    let (a, d) = (p.re, q.re);
    let half = T::lit(0.5);
    let mean = half * (a + d);
    let half_diff = half * (a - d);
    let radius = half_diff.hypot(z.norm());
    let values = [mean + radius, mean - radius];
    let zero = Complex::new(T::zero(), T::zero());
    let one = Complex::new(T::one(), T::zero());
    if radius == T::zero() {
        return Eigensystem {
            values,
            vectors: [[one, zero], [zero, one]],
        };
    }
    // Pick the row of (ρ - λ₊) whose null vector is best conditioned.
    let top = if half_diff >= T::zero() {
        [Complex::new(half_diff + radius, T::zero()), z.conj()]
    } else {
        [z, Complex::new(radius - half_diff, T::zero())]
    };
    let top = fix_phase(top);
    let bottom = fix_phase([-top[1].conj(), top[0].conj()]);
    Eigensystem {
        values,
        vectors: [top, bottom],
    }
}

/// `|⟨a|b⟩|` for unit vectors.
pub fn overlap_modulus<T: Real>(a: &[Complex<T>; 2], b: &[Complex<T>; 2]) -> T {
    (a[0].conj() * b[0] + a[1].conj() * b[1]).norm()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_1_SQRT_2, PI};

    fn angle(x: f64) -> BlochAngle<f64> {
        BlochAngle::new(x).unwrap()
    }

    fn t(s: f64) -> DimensionlessTime<f64> {
        DimensionlessTime::new(s).unwrap()
    }

    #[test]
    fn exact_equator_and_quarter_turns() {
        let equator = angle(PI / 2.0);
        assert_eq!(equator.pi_fraction(), 0.5);
        assert_eq!(equator.cos(), 0.0);
        assert_eq!(equator.sin(), 1.0);
        let a = BlochAngle::from_pi_fraction(0.3).unwrap();
        assert!((a.cos() - (0.3 * PI).cos()).abs() < 1e-15);
        assert!((a.sin() - (0.3 * PI).sin()).abs() < 1e-15);
        let b = BlochAngle::from_pi_fraction(0.9).unwrap();
        assert!((b.cos() - (0.9 * PI).cos()).abs() < 1e-15);
        assert!((b.sin() - (0.9 * PI).sin()).abs() < 1e-15);
        let (c, s) = b.half_angle();
        assert!((c - (0.45 * PI).cos()).abs() < 1e-15 && (s - (0.45 * PI).sin()).abs() < 1e-15);
    }

    #[test]
    fn bloch_angle_domain() {
        assert!(matches!(BlochAngle::new(0.0), Err(Error::PoleState { .. })));
        assert!(matches!(BlochAngle::new(PI), Err(Error::PoleState { .. })));
        assert!(matches!(BlochAngle::new(-0.1), Err(Error::Domain { .. })));
        assert!(BlochAngle::new(4.0).is_err());
        assert!((BlochAngle::from_pi_fraction(0.25).unwrap().value() - PI / 4.0).abs() < 1e-16);
    }

    #[test]
    fn fully_decohered_equator() {
        let rho = density_matrix(angle(PI / 2.0), t(0.0), 0.0).unwrap();
        let e = rho.entries();
        assert!((e[0][0].re - 0.5).abs() < 1e-15 && (e[1][1].re - 0.5).abs() < 1e-15);
        assert!(e[0][1].norm() < 1e-16);
        assert!((rho.purity() - 0.5).abs() < 1e-15);
        let eig = eig_numeric(&rho);
        assert!((eig.values[0] - 0.5).abs() < 1e-15 && (eig.values[1] - 0.5).abs() < 1e-15);
    }

    #[test]
    fn pure_state_at_origin() {
        for &th in &[0.1, 1.0, 2.0, 3.0] {
            let rho = density_matrix(angle(th), t(0.0), 1.0).unwrap();
            assert!((rho.purity() - 1.0).abs() < 1e-14);
            let eig = eig_numeric(&rho);
            assert!((eig.values[0] - 1.0).abs() < 1e-14);
            assert!(eig.values[1].abs() < 1e-14);
            let initial = [
                Complex::new((th / 2.0).cos(), 0.0),
                Complex::new((th / 2.0).sin(), 0.0),
            ];
            assert!((overlap_modulus(&eig.vectors[0], &initial) - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn rejects_bad_factor() {
        assert!(density_matrix(angle(1.0), t(0.0), 1.5).is_err());
        assert!(density_matrix(angle(1.0), t(0.0), -0.1).is_err());
        assert!(eigenvalues_closed_form(angle(1.0), f64::NAN).is_err());
    }

    #[test]
    fn rejects_invalid_state() {
        let z = Complex::new(0.0, 0.0);
        let one = Complex::new(1.0, 0.0);
        assert!(ReducedState::new([[one, z], [z, one]]).is_err());
        let off = Complex::new(0.0, 0.6);
        let half = Complex::new(0.5, 0.0);
        assert!(ReducedState::new([[half, off], [off, half]]).is_err());
        assert!(ReducedState::new([[half, off], [off.conj(), half]]).is_err());
    }

    #[test]
    fn closed_form_eigenvalues() {
        let (p, m) = eigenvalues_closed_form(angle(0.7), 1.0).unwrap();
        assert!((p - 1.0).abs() < 1e-15 && m.abs() < 1e-15);
        let (p, m) = eigenvalues_closed_form(angle(PI / 2.0), 0.0).unwrap();
        assert!((p - 0.5).abs() < 1e-16 && (m - 0.5).abs() < 1e-16);
        let (p, m) = eigenvalues_closed_form(angle(PI / 2.0), 0.5).unwrap();
        assert!((p - 0.75).abs() < 1e-15 && (m - 0.25).abs() < 1e-15);
        let rho = density_matrix(angle(PI / 2.0), t(1.3), 0.5).unwrap();
        let eig = eig_numeric(&rho);
        assert!((eig.values[0] - 0.75).abs() < 1e-15 && (eig.values[1] - 0.25).abs() < 1e-15);
    }

    #[test]
    fn closed_form_matches_numeric_example() {
        let th = angle(PI / 3.0);
        let rho = density_matrix(th, t(PI / 4.0), 0.7).unwrap();
        let eig = eig_numeric(&rho);
        let (p, m) = eigenvalues_closed_form(th, 0.7).unwrap();
        assert!((eig.values[0] - p).abs() < 1e-12 && (eig.values[1] - m).abs() < 1e-12);
        let closed = eigenvector_plus(th, t(PI / 4.0), 0.7).unwrap();
        assert!((overlap_modulus(&closed, &eig.vectors[0]) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn unitary_angles_are_half_theta() {
        for &th in &[0.1, 0.8, 1.5, 2.2, 3.0] {
            let a = angles_closed_form(angle(th), 1.0).unwrap();
            assert!((a.sin_theta_t - (th / 2.0).sin()).abs() < 1e-14);
            assert!((a.cos_theta_t - (th / 2.0).cos()).abs() < 1e-14);
        }
    }

    #[test]
    fn equator_angles() {
        for &r in &[1e-300, 1e-3, 0.2804, 0.9, 1.0] {
            let a = angles_closed_form(angle(PI / 2.0), r).unwrap();
            assert!((a.sin_theta_t - FRAC_1_SQRT_2).abs() < 1e-15);
            assert!((a.cos_theta_t - FRAC_1_SQRT_2).abs() < 1e-15);
        }
        assert!(matches!(
            angles_closed_form(angle(PI / 2.0), 0.0),
            Err(Error::Degenerate { .. })
        ));
    }

    #[test]
    fn strongly_decohered_limits() {
        let north = angles_closed_form(angle(0.3), 0.0).unwrap();
        assert_eq!((north.sin_theta_t, north.cos_theta_t), (0.0, 1.0));
        let south = angles_closed_form(angle(2.8), 0.0).unwrap();
        assert_eq!((south.sin_theta_t, south.cos_theta_t), (1.0, 0.0));
    }

    #[test]
    fn mixed_angles_against_numeric_eigenvector() {
        let th = angle(PI / 3.0);
        let a = angles_closed_form(th, 0.2804).unwrap();
        let rho = density_matrix(th, t(0.0), 0.2804).unwrap();
        let v = eig_numeric(&rho).vectors[0];
        assert!((v[0].re - a.cos_theta_t).abs() < 1e-13);
        assert!((v[1].re - a.sin_theta_t).abs() < 1e-13);
        assert!(v[1].im.abs() < 1e-15);
    }

    #[test]
    fn eigenvector_examples() {
        let v = eigenvector_plus(angle(1.1), t(0.0), 1.0).unwrap();
        assert!((v[0].re - 0.55f64.cos()).abs() < 1e-14 && (v[1].re - 0.55f64.sin()).abs() < 1e-14);
        let v = eigenvector_plus(angle(PI / 2.0), t(PI), 0.5).unwrap();
        assert!((v[0].norm() - FRAC_1_SQRT_2).abs() < 1e-15);
        assert!((v[1].norm() - FRAC_1_SQRT_2).abs() < 1e-15);
        assert!((v[1].re + FRAC_1_SQRT_2).abs() < 1e-15);
    }

    #[test]
    fn numeric_solver_agrees_with_nalgebra() {
        use nalgebra::{Complex as NComplex, Matrix2};
        for &(th, s, r) in &[(0.4, 0.3, 0.9), (2.5, 5.0, 0.1), (1.57, 2.0, 0.01)] {
            let rho = density_matrix(angle(th), t(s), r).unwrap();
            let e = rho.entries();
            let m = Matrix2::new(
                NComplex::new(e[0][0].re, e[0][0].im),
                NComplex::new(e[0][1].re, e[0][1].im),
                NComplex::new(e[1][0].re, e[1][0].im),
                NComplex::new(e[1][1].re, e[1][1].im),
            );
            let mut reference: Vec<f64> = m.symmetric_eigen().eigenvalues.iter().copied().collect();
            reference.sort_by(|a, b| b.partial_cmp(a).unwrap());
            let eig = eig_numeric(&rho);
            assert!((eig.values[0] - reference[0]).abs() < 1e-13);
            assert!((eig.values[1] - reference[1]).abs() < 1e-13);
        }
    }

    #[test]
    fn single_precision_angles() {
        let a = angles_closed_form(BlochAngle::<f32>::new(1.0).unwrap(), 0.5).unwrap();
        let b = angles_closed_form(angle(1.0), 0.5).unwrap();
        assert!((a.cos_theta_t as f64 - b.cos_theta_t).abs() < 1e-6);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn state_invariants(th in 0.01..3.13f64, s in 0.0..20.0f64, r in 0.0..=1.0f64) {
                let rho = density_matrix(angle(th), t(s), r).unwrap();
                prop_assert!((rho.trace() - 1.0).abs() < 1e-14);
                let purity = rho.purity();
                prop_assert!((0.5 - 1e-14..=1.0 + 1e-14).contains(&purity));
                let eig = eig_numeric(&rho);
                prop_assert!((eig.values[0] + eig.values[1] - 1.0).abs() < 1e-14);
                prop_assert!(eig.values[1] >= -1e-14);
            }

            #[test]
            fn angles_normalised(th in 0.01..3.13f64, r in 1e-12..=1.0f64) {
                let a = angles_closed_form(angle(th), r).unwrap();
                prop_assert!((a.sin_theta_t.powi(2) + a.cos_theta_t.powi(2) - 1.0).abs() < 1e-12);
                prop_assert!(a.cos_theta_t >= 0.0);
            }
        }
    }
}
