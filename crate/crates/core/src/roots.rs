//! Bracketing root finder: bisection with safeguarded secant steps.

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Stopping criteria for [`find_root`].
#[derive(Debug, Clone, Copy)]
pub struct RootTolerance<T> {
    /// Accept once `|f(x)|` falls below this.
    pub residual: T,
    /// Accept once the bracket is narrower than this (relative to `|x|`, floored at 1).
    pub width: T,
    pub max_iter: usize,
}

impl<T: Real> Default for RootTolerance<T> {
    fn default() -> Self {
        Self {
            residual: T::tol(1e-13),
            width: T::epsilon() * T::lit(4.0),
            max_iter: 400,
        }
    }
}

/// Finds a root of `f` inside `[lo, hi]`, which must bracket a sign change.
pub fn find_root<T, F>(mut f: F, lo: T, hi: T, tol: RootTolerance<T>) -> Result<T>
where
    T: Real,
    F: FnMut(T) -> T,
{
    let (mut a, mut b) = (lo, hi);
    let (mut fa, mut fb) = (f(a), f(b));
    if fa == T::zero() {
        return Ok(a);
    }
    if fb == T::zero() {
        return Ok(b);
    }
    if fa.signum() == fb.signum() || fa.is_nan() || fb.is_nan() {
        return Err(Error::RootNotBracketed {
            lo: lo.as_f64(),
            hi: hi.as_f64(),
        });
    }

    let two = T::lit(2.0);
    let mut best = if fa.abs() < fb.abs() { a } else { b };
    let mut best_f = fa.abs().min(fb.abs());
    let mut last_width = (b - a).abs();

    for _ in 0..tol.max_iter {
        let width = (b - a).abs();
        let mid = a + (b - a) / two;
        if best_f <= tol.residual || width <= tol.width * best.abs().max(T::one()) {
            return Ok(best);
        }

        // Secant through the bracket ends; fall back to the midpoint when the
        // step leaves the bracket or the previous step did not halve it.
        let secant = b - fb * (b - a) / (fb - fa);
        let inside = secant > a.min(b) && secant < a.max(b);
        let x = if inside && width <= last_width / two * T::lit(1.5) {
            secant
        } else {
            mid
        };
        last_width = width;

        let fx = f(x);
        if fx.is_nan() {
            return Err(Error::RootNotBracketed {
                lo: a.as_f64(),
                hi: b.as_f64(),
            });
        }
        if fx.abs() < best_f {
            best = x;
            best_f = fx.abs();
        }
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
    Ok(best)
}
