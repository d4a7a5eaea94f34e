//! Scalar abstraction shared by every numerical routine in the crate.

use std::fmt::{Debug, Display};

use num_complex::Complex;
use num_traits::{Float, FloatConst};

/// Real floating-point type the engine can run on.
///
/// Implemented for anything that looks like an IEEE float through
/// `num-traits`: `f32`, `f64`, and extended types such as double-double.
pub trait Real: Float + FloatConst + Debug + Display + Send + Sync + 'static {
    /// Lossy conversion from an `f64` literal.
    ///
    /// Goes through `NumCast` rather than `FromPrimitive`, whose default
    /// `from_f64` truncates to an integer for types that do not override it.
    #[inline]
    fn lit(x: f64) -> Self {
        num_traits::cast(x).expect("f64 literal not representable")
    }

    /// Lossy conversion to `f64`, for reporting.
    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    /// A tolerance that is `want` when the type can resolve it and a small
    /// multiple of machine epsilon otherwise.
    #[inline]
    fn tol(want: f64) -> Self {
        let floor = Self::epsilon() * Self::lit(64.0);
        Self::lit(want).max(floor)
    }
}

impl<T> Real for T where T: Float + FloatConst + Debug + Display + Send + Sync + 'static {}

/// Complex scalar over a [`Real`].
pub type Cx<T> = Complex<T>;

#[inline]
pub(crate) fn cx<T: Real>(re: T) -> Cx<T> {
    Complex::new(re, T::zero())
}

/// `(1 - e^{-z}) / z`, continuous through `z = 0`.
pub(crate) fn one_minus_exp_over<T: Real>(z: Cx<T>) -> Cx<T> {
    // Extended types such as double-double can turn signed-zero
    // arithmetic into NaN, so the exact origin is answered directly.
    if z.re == T::zero() && z.im == T::zero() {
        return cx(T::one());
    }
    if z.re.abs() + z.im.abs() < T::lit(1e-3) {
        // 1 - z/2 + z^2/6 - z^3/24 + z^4/120
        let mut term = cx(T::one());
        let mut sum = term;
        for n in 2..8 {
            term = -term * z / T::lit(n as f64);
            sum = sum + term;
        }
        sum
    } else {
        (cx(T::one()) - (-z).exp()) / z
    }
}

/// Relative difference `|a - b| / max(|a|, |b|)`, zero when both vanish.
pub fn rel_diff<T: Real>(a: Cx<T>, b: Cx<T>) -> T {
    let scale = a.norm().max(b.norm());
    if scale == T::zero() {
        T::zero()
    } else {
        (a - b).norm() / scale
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn series_branch_matches_direct() {
        for &z in &[1e-4, -7e-4, 2e-3] {
            let z = Complex::new(z, 0.5 * z);
            let direct = (cx(1.0) - (-z).exp()) / z;
            assert!((one_minus_exp_over(z) - direct).norm() < 1e-12);
        }
        assert_eq!(one_minus_exp_over(cx(0.0f64)), cx(1.0));
    }

    #[test]
    fn tolerance_floors_at_epsilon() {
        assert_eq!(<f64 as Real>::tol(1e-3), 1e-3);
        assert!(<f32 as Real>::tol(1e-12) > 1e-12);
    }
}
