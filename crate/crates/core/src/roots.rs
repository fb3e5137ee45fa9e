//! Bracketing root finding on the real line.

use crate::error::{Error, Result};
use crate::scalar::Real;

const MAX_ITERATIONS: usize = 200;
const MAX_EXPANSIONS: usize = 200;

/// Grows `[lo, hi]` geometrically to the right until `f` changes sign.
///
/// `lo` stays fixed; `hi` is doubled. Returns the bracket together with
/// the function values at its ends.
pub fn expand_bracket<T, F>(f: &F, lo: T, hi: T) -> Result<(T, T, T, T)>
where
    T: Real,
    F: Fn(T) -> T,
{
    let f_lo = f(lo);
    let mut hi = hi;
    let mut f_hi = f(hi);
    if f_lo == T::zero() {
        return Ok((lo, lo, f_lo, f_lo));
    }
    for _ in 0..MAX_EXPANSIONS {
        if !f_hi.is_finite() {
            return Err(Error::Root("function is not finite inside the bracket"));
        }
        if f_lo.signum() != f_hi.signum() || f_hi == T::zero() {
            return Ok((lo, hi, f_lo, f_hi));
        }
        hi = hi + hi;
        f_hi = f(hi);
    }
    Err(Error::Root(
        "no sign change found while growing the bracket",
    ))
}

/// Hybrid secant/bisection on a sign-changing bracket.
///
/// Every iterate stays inside the current bracket: a secant step is taken
/// when it lands strictly inside and the previous step shrank the bracket
/// by at least a quarter, otherwise the midpoint is used. Terminates when the
/// bracket width drops below `tolerance`.
pub fn find_root<T, F>(f: &F, lo: T, hi: T, tolerance: T) -> Result<T>
where
    T: Real,
    F: Fn(T) -> T,
{
    let (mut a, mut b, mut fa, mut fb) = (lo, hi, f(lo), f(hi));
    if fa == T::zero() {
        return Ok(a);
    }
    if fb == T::zero() {
        return Ok(b);
    }
    if fa.signum() == fb.signum() {
        return Err(Error::Root("bracket does not straddle a root"));
    }
    let half = T::lit(0.5);
    let mut previous_width = T::lit(2.0) * (b - a).abs();
    for _ in 0..MAX_ITERATIONS {
        let width = (b - a).abs();
        if width <= tolerance {
            break;
        }
        let secant = b - fb * (b - a) / (fb - fa);
        let inside = secant > a.min(b) && secant < a.max(b);
        let shrinking = width <= T::lit(0.75) * previous_width;
        let x = if inside && shrinking {
            secant
        } else {
            a + half * (b - a)
        };
        previous_width = width;
        let fx = f(x);
        if fx == T::zero() {
            return Ok(x);
        }
        if fx.signum() == fa.signum() {
            a = x;
            fa = fx;
        } else {
            b = x;
            fb = fx;
        }
    }
    // Return whichever end has the smaller residual.
    Ok(if fa.abs() < fb.abs() { a } else { b })
}

/// Solves `f(x) = 0` for `x >= 0` starting from the bracket `[0, 1]`.
pub fn solve_nonnegative<T, F>(f: F, tolerance: T) -> Result<T>
where
    T: Real,
    F: Fn(T) -> T,
{
    let (lo, hi, _, _) = expand_bracket(&f, T::zero(), T::one())?;
    if lo == hi {
        return Ok(lo);
    }
    find_root(&f, lo, hi, tolerance)
}
