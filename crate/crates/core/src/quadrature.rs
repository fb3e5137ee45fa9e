//! One-dimensional quadrature on a finite interval.
//!
//! Two independent rules are provided: globally adaptive Simpson with a
//! Richardson-corrected local error estimate, and fixed-order
//! Gauss-Legendre whose error is estimated against the half-order rule.

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Minimum bisection depth before the adaptive rule may accept a panel.
const MIN_DEPTH: u32 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QuadratureMethod {
    AdaptiveSimpson,
    GaussLegendre,
}

impl QuadratureMethod {
    pub fn name(self) -> &'static str {
        match self {
            QuadratureMethod::AdaptiveSimpson => "adaptive-simpson",
            QuadratureMethod::GaussLegendre => "gauss-legendre",
        }
    }
}

/// How an integral is evaluated.
///
/// `max_depth` only affects the adaptive rule and `nodes` only the
/// Gauss-Legendre rule.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec<T> {
    pub method: QuadratureMethod,
    pub tolerance: T,
    pub max_depth: u32,
    pub nodes: usize,
}

impl<T: Real> Default for QuadratureSpec<T> {
    fn default() -> Self {
        Self::adaptive_simpson(T::lit(T::QUADRATURE_TOLERANCE), 40)
    }
}

impl<T: Real> QuadratureSpec<T> {
    pub fn adaptive_simpson(tolerance: T, max_depth: u32) -> Self {
        Self {
            method: QuadratureMethod::AdaptiveSimpson,
            tolerance,
            max_depth,
            nodes: 256,
        }
    }

    pub fn gauss_legendre(nodes: usize) -> Self {
        Self {
            method: QuadratureMethod::GaussLegendre,
            nodes,
            ..Self::default()
        }
    }

    pub fn with_tolerance(mut self, tolerance: T) -> Self {
        self.tolerance = tolerance;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.tolerance > T::zero()) || !self.tolerance.is_finite() {
            return Err(Error::Domain {
                name: "tolerance",
                reason: "must be finite and > 0",
                value: self.tolerance.as_f64(),
            });
        }
        match self.method {
            QuadratureMethod::AdaptiveSimpson if self.max_depth < MIN_DEPTH => Err(Error::Domain {
                name: "max_depth",
                reason: "must be at least 3",
                value: self.max_depth as f64,
            }),
            QuadratureMethod::GaussLegendre if self.nodes < 2 => Err(Error::Domain {
                name: "nodes",
                reason: "must be at least 2",
                value: self.nodes as f64,
            }),
            _ => Ok(()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integral<T> {
    pub value: T,
    pub error_estimate: T,
    pub evaluations: usize,
}

/// Integrates `f` over `[a, b]` with the rule selected by `spec`.
///
/// Returns [`Error::QuadratureNotConverged`] (carrying the best estimate)
/// when the requested tolerance is not met.
pub fn integrate<T, F>(f: F, a: T, b: T, spec: &QuadratureSpec<T>) -> Result<Integral<T>>
where
    T: Real,
    F: Fn(T) -> T,
{
    spec.validate()?;
    let result = match spec.method {
        QuadratureMethod::AdaptiveSimpson => {
            adaptive_simpson(&f, a, b, spec.tolerance, spec.max_depth)
        }
        QuadratureMethod::GaussLegendre => {
            let full = GaussLegendre::new(spec.nodes).integrate(&f, a, b);
            let half = GaussLegendre::new((spec.nodes / 2).max(1)).integrate(&f, a, b);
            Ok(Integral {
                value: full,
                error_estimate: (full - half).abs(),
                evaluations: spec.nodes + spec.nodes / 2,
            })
        }
    }?;
    if !result.value.is_finite() || !(result.error_estimate <= spec.tolerance) {
        return Err(Error::QuadratureNotConverged {
            estimate: result.value.as_f64(),
            error_estimate: result.error_estimate.as_f64(),
        });
    }
    Ok(result)
}

struct Panel<T> {
    a: T,
    b: T,
    fa: T,
    fm: T,
    fb: T,
    whole: T,
    tolerance: T,
    depth: u32,
}

fn simpson<T: Real>(a: T, b: T, fa: T, fm: T, fb: T) -> T {
    (b - a) / T::lit(6.0) * (fa + T::lit(4.0) * fm + fb)
}

/// Adaptive Simpson; a panel is accepted once `|S₂ - S₁| <= 15 ε` and the
/// Richardson-corrected value `S₂ + (S₂ - S₁)/15` is summed.
fn adaptive_simpson<T, F>(f: &F, a: T, b: T, tolerance: T, max_depth: u32) -> Result<Integral<T>>
where
    T: Real,
    F: Fn(T) -> T,
{
    let half = T::lit(0.5);
    let fifteen = T::lit(15.0);
    let m = half * (a + b);
    let (fa, fm, fb) = (f(a), f(m), f(b));
    let mut evaluations = 3;
    let mut stack = vec![Panel {
        a,
        b,
        fa,
        fm,
        fb,
        whole: simpson(a, b, fa, fm, fb),
        tolerance,
        depth: 0,
    }];
    let mut value = T::zero();
    let mut error = T::zero();
    // Kahan compensation for the running sum.
    let mut carry = T::zero();
    let mut exhausted = false;

    while let Some(p) = stack.pop() {
        let m = half * (p.a + p.b);
        let lm = half * (p.a + m);
        let rm = half * (m + p.b);
        let (flm, frm) = (f(lm), f(rm));
        evaluations += 2;
        let left = simpson(p.a, m, p.fa, flm, p.fm);
        let right = simpson(m, p.b, p.fm, frm, p.fb);
        let delta = left + right - p.whole;
        let accept = p.depth >= MIN_DEPTH && delta.abs() <= fifteen * p.tolerance;
        if accept || p.depth >= max_depth {
            exhausted |= !accept;
            let y = left + right + delta / fifteen - carry;
            let t = value + y;
            carry = (t - value) - y;
            value = t;
            error = error + delta.abs() / fifteen;
            continue;
        }
        let tolerance = half * p.tolerance;
        let depth = p.depth + 1;
        stack.push(Panel {
            a: m,
            b: p.b,
            fa: p.fm,
            fm: frm,
            fb: p.fb,
            whole: right,
            tolerance,
            depth,
        });
        stack.push(Panel {
            a: p.a,
            b: m,
            fa: p.fa,
            fm: flm,
            fb: p.fm,
            whole: left,
            tolerance,
            depth,
        });
    }
    if exhausted {
        return Err(Error::QuadratureNotConverged {
            estimate: value.as_f64(),
            error_estimate: error.as_f64(),
        });
    }
    Ok(Integral {
        value,
        error_estimate: error,
        evaluations,
    })
}

/// Gauss-Legendre nodes and weights on `[-1, 1]`.
#[derive(Debug, Clone)]
pub struct GaussLegendre<T> {
    nodes: Vec<T>,
    weights: Vec<T>,
}

impl<T: Real> GaussLegendre<T> {
    /// Builds the `n`-point rule; nodes are the roots of `P_n`, polished by
    /// Newton iteration from the Tricomi initial guess.
    pub fn new(n: usize) -> Self {
        let mut nodes = Vec::with_capacity(n);
        let mut weights = Vec::with_capacity(n);
        let nf = T::from_usize(n).unwrap();
        for i in 0..n {
            let k = T::from_usize(i + 1).unwrap();
            let mut x = (T::PI() * (k - T::lit(0.25)) / (nf + T::lit(0.5))).cos();
            let mut derivative = T::one();
            for _ in 0..100 {
                let (p, dp) = legendre(n, x);
                derivative = dp;
                let step = p / dp;
                x = x - step;
                if step.abs() <= T::epsilon() {
                    let (_, dp) = legendre(n, x);
                    derivative = dp;
                    break;
                }
            }
            nodes.push(x);
            weights.push(T::lit(2.0) / ((T::one() - x * x) * derivative * derivative));
        }
        Self { nodes, weights }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn integrate<F: Fn(T) -> T>(&self, f: &F, a: T, b: T) -> T {
        let half_width = T::lit(0.5) * (b - a);
        let center = T::lit(0.5) * (a + b);
        let sum = self
            .nodes
            .iter()
            .zip(&self.weights)
            .fold(T::zero(), |acc, (&x, &w)| {
                acc + w * f(center + half_width * x)
            });
        half_width * sum
    }
}

/// `(P_n(x), P_n'(x))` by the three-term recurrence.
fn legendre<T: Real>(n: usize, x: T) -> (T, T) {
    let mut p0 = T::one();
    let mut p1 = x;
    if n == 0 {
        return (p0, T::zero());
    }
    for k in 2..=n {
        let kf = T::from_usize(k).unwrap();
        let p2 = ((T::lit(2.0) * kf - T::one()) * x * p1 - (kf - T::one()) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let nf = T::from_usize(n).unwrap();
    (p1, nf * (x * p1 - p0) / (x * x - T::one()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn simpson_polynomials_and_transcendentals() {
        let spec = QuadratureSpec::<f64>::default();
        let r = integrate(|x| x * x * x, 0.0, 2.0, &spec).unwrap();
        assert!((r.value - 4.0).abs() < 1e-14);
        let r = integrate(f64::sin, 0.0, PI, &spec).unwrap();
        assert!((r.value - 2.0).abs() < 1e-10);
        assert!(r.error_estimate < 1e-10);
        let r = integrate(|x: f64| (-x * x).exp(), -5.0, 5.0, &spec).unwrap();
        assert!((r.value - PI.sqrt()).abs() < 1e-10);
    }

    #[test]
    fn simpson_sharp_step() {
        let f = |x: f64| 0.5 * (1.0 + (200.0 * (x - 0.3)).tanh());
        let r = integrate(f, 0.0, 1.0, &QuadratureSpec::default()).unwrap();
        let exact = 0.5 + ((140.0f64).cosh().ln() - (60.0f64).cosh().ln()) / 400.0;
        assert!((r.value - exact).abs() < 1e-10, "{} vs {exact}", r.value);
    }

    #[test]
    fn simpson_reports_non_convergence() {
        let spec = QuadratureSpec::adaptive_simpson(1e-14, 4);
        let err = integrate(|x: f64| (50.0 * x).sin(), 0.0, 10.0, &spec).unwrap_err();
        assert!(matches!(err, Error::QuadratureNotConverged { .. }));
    }

    #[test]
    fn gauss_legendre_rule() {
        let rule = GaussLegendre::<f64>::new(256);
        assert_eq!(rule.len(), 256);
        let total: f64 = rule.weights.iter().sum();
        assert!((total - 2.0).abs() < 1e-13);
        // Exact for degree 2n - 1.
        let small = GaussLegendre::<f64>::new(5);
        let r = small.integrate(&|x: f64| x.powi(9) + x.powi(8), -1.0, 1.0);
        assert!((r - 2.0 / 9.0).abs() < 1e-14);
        let r = integrate(f64::cos, 0.0, 1.0, &QuadratureSpec::gauss_legendre(256)).unwrap();
        assert!((r.value - 1f64.sin()).abs() < 1e-14);
    }

    #[test]
    fn methods_agree() {
        let f = |x: f64| 1.0 / (1.0 + 25.0 * x * x);
        let a = integrate(f, -1.0, 1.0, &QuadratureSpec::default()).unwrap();
        let b = integrate(f, -1.0, 1.0, &QuadratureSpec::gauss_legendre(256)).unwrap();
        let exact = 2.0 * 5f64.atan() / 5.0;
        assert!((a.value - exact).abs() < 1e-10);
        assert!((b.value - exact).abs() < 1e-12);
    }

    #[test]
    fn invalid_spec() {
        let spec = QuadratureSpec::<f64>::default().with_tolerance(0.0);
        assert!(integrate(|x| x, 0.0, 1.0, &spec).is_err());
        let spec = QuadratureSpec::<f64>::gauss_legendre(1);
        assert!(integrate(|x| x, 0.0, 1.0, &spec).is_err());
    }

    #[test]
    fn single_precision() {
        let r = integrate(
            f32::sin,
            0.0,
            std::f32::consts::PI,
            &QuadratureSpec::default(),
        )
        .unwrap();
        assert!((r.value - 2.0).abs() < 1e-4);
    }
}
