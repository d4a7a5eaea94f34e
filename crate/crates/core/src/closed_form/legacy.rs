//! An older set of closed forms for `alpha_+`, kept for diagnostics only.
//!
//! Below threshold they carry an extra factor of the squared charge. Above
//! threshold their imaginary part of `alpha_+1` is half the correct value
//! and `alpha_+2` differs throughout. [`deviation`] measures the gap.

use num_complex::Complex;

use crate::error::Result;
use crate::scalar::{cx, rel_diff, Cx, Real};
use crate::units::ScaledParams;

use super::{alpha_plus, alpha_plus_outgoing, norm};

/// `alpha_+` from the legacy below-threshold forms, atomic units.
pub fn alpha_plus_legacy_below<T: Real>(s: &ScaledParams<T>, ratio: T) -> Cx<T> {
    let t = alpha_plus(s, cx(s.omega_prime(ratio)));
    t.total() * s.atomic_factor() * s.charge * s.charge
}

/// `alpha_+` from the legacy above-threshold forms, atomic units.
pub fn alpha_plus_legacy_above<T: Real>(s: &ScaledParams<T>, ratio: T) -> Cx<T> {
    let (a, k, g) = (s.a, s.k0, s.g_prime);
    let n = norm(s);
    let w = s.omega_prime(ratio);
    let two = T::lit(2.0);
    let o = (two * w - k * k).sqrt();
    let (o2, k2, a2) = (o * o, k * k, a * a);
    let e2ka = (-two * k * a).exp();
    let (sn, cs) = ((two * a * o).sin(), (two * a * o).cos());
    let l = T::lit;

    let t1 = -k / (l(16.0) * w)
        * (two * a2 * (l(3.0) * k2 + o2) / k2
            + (-l(5.0) * k2 + l(15.0) * o2 + l(5.0) * o2 * o2 / k2 + o2 * o2 * o2 / (k2 * k2))
                / (l(4.0) * w * w));
    let t2 = k * e2ka / l(24.0)
        * (-(l(4.0) * a2 * a * k2 * k + l(16.0) * a2 * k2 + l(3.0)) / (k2 * k2)
            + (l(5.0) * a2 * o2 - a2 * k2 - l(4.0) * a * k - l(3.0)) / (k2 * w)
            - a / (k2 * k * w) * (l(5.0) * k2 + l(3.0) * o2)
            + l(3.0) / (w * w * w) * (k2 - o2));
    let t3 = k / (l(4.0) * w) * (a2 * k * sn / o + two * a * k * cs / w - o * k * sn / (w * w));
    let t4 = k / (l(4.0) * w) * (a2 * k / o + o * k / (w * w));
    let p1 = Complex::new(t1 + t2 + t3, t4) * (two * n * n / (e2ka * w));

    let big_a = -a / k + a * sn / o - a * e2ka / k + cs / w - e2ka / w;
    let big_b = (o - g * sn).powi(2) + g * g;
    let f1 = o * (o - g * sn) * (big_a * big_a - a2 / o2) - two * a * big_a * g;
    let f2 = two * a * big_a * (o - g * sn) + o * g * (big_a * big_a - a2 / o2);
    let p2 = Complex::new(f1, f2) * (g * k2 * n * n / (e2ka * two * w * w * big_b));
    (p1 + p2) * s.atomic_factor() * s.charge * s.charge
}

/// Legacy versus derived `alpha_+` at one frequency.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LegacyDeviation<T> {
    pub omega_over_omega_b: T,
    pub legacy: Cx<T>,
    pub derived: Cx<T>,
    pub relative: T,
}

/// Compares the legacy and derived `alpha_+` at `ratio`.
pub fn deviation<T: Real>(s: &ScaledParams<T>, ratio: T) -> Result<LegacyDeviation<T>> {
    super::check_ratio(ratio)?;
    let w = s.omega_prime(ratio);
    let (legacy, derived) = if ratio < T::one() {
        (
            alpha_plus_legacy_below(s, ratio),
            alpha_plus(s, cx(w)).total(),
        )
    } else {
        (
            alpha_plus_legacy_above(s, ratio),
            alpha_plus_outgoing(s, w).total(),
        )
    };
    let derived = derived * s.atomic_factor();
    Ok(LegacyDeviation {
        omega_over_omega_b: ratio,
        legacy,
        derived,
        relative: rel_diff(legacy, derived),
    })
}
