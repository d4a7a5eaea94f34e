//! Closed-form dynamic polarizability of the symmetric double delta well.
//!
//! The total is `alpha(w) = alpha_+(w) + alpha_+(-w)`, where `alpha_+` is the
//! response through the resolvent at `E0 + w`. Each `alpha_+` splits into
//! the free-resolvent part `alpha_+1` and the well-scattering part
//! `alpha_+2`, which carries the odd-channel kernel `I2` in its denominator.
//! The same expressions hold above threshold with `gamma = -i Omega`.

use num_complex::Complex;

use crate::bound_states::BoundState;
use crate::error::{Error, Result};
use crate::greens::{odd_kernel, POLE_TOLERANCE, THRESHOLD_EXCLUSION};
use crate::roots::{find_root, RootTolerance};
use crate::scalar::{cx, one_minus_exp_over, Cx, Real};
use crate::units::{to_si_volume, ScaledParams, SiPolarizability};

pub mod legacy;

/// Which side of the photoionization threshold a frequency lies on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RegimeTag {
    Below,
    Above,
}

impl RegimeTag {
    pub fn as_str(self) -> &'static str {
        match self {
            RegimeTag::Below => "below",
            RegimeTag::Above => "above",
        }
    }
}

/// How a polarizability value was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    ClosedForm,
    Quadrature,
    Grid,
    BoxSum,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::ClosedForm => "closed_form",
            Method::Quadrature => "quadrature",
            Method::Grid => "grid",
            Method::BoxSum => "box_sum",
        }
    }
}

/// Complex polarizability at one frequency, in atomic units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolarizabilityPoint<T> {
    pub omega_over_omega_b: T,
    pub value: Cx<T>,
    pub regime: RegimeTag,
    pub method: Method,
    /// `|omega - omega_res| / omega_B` when a below-threshold resonance exists.
    pub pole_proximity: Option<T>,
    /// Set when the frequency sits on the resonance; `value` is then NaN.
    pub on_pole: bool,
}

impl<T: Real> PolarizabilityPoint<T> {
    pub fn si(&self) -> SiPolarizability<T> {
        to_si_volume(self.value)
    }
}

/// Momentum-space dipole element `(1/sqrt(2 pi)) int e^{-iqx} (x - <x>) psi(x) dx`.
pub fn dipole_matrix_element<T: Real>(q: T, state: &BoundState<T>) -> Cx<T> {
    let k = state.kappa;
    let xbar = state.mean_position();
    let den = k * k + q * q;
    let two = T::lit(2.0);
    let four = T::lit(4.0);
    let mut sum = cx(T::zero());
    for (xj, c) in state.centers().iter().zip(state.amplitudes()) {
        let phase = Complex::new(T::zero(), -q * *xj).exp();
        let term = Complex::new((*xj - xbar) * two * k / den, -four * k * q / (den * den));
        sum = sum + phase * term * *c;
    }
    sum / (two * T::PI()).sqrt()
}

/// The pieces of `alpha_+` at one (possibly complex) frequency.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BranchTerms<T> {
    /// Free-resolvent part.
    pub alpha_p1: Cx<T>,
    /// Scattering part through the odd channel.
    pub alpha_p2: Cx<T>,
    /// Ground-state normalization `N(k0 a)`.
    pub n_prime: T,
    /// `N(gamma a) = 1 / I2`.
    pub n_gamma: Cx<T>,
    pub i2: Cx<T>,
    /// The combination squared in `alpha_p2`; real below threshold.
    pub b_sum: Cx<T>,
}

impl<T: Real> BranchTerms<T> {
    pub fn total(&self) -> Cx<T> {
        self.alpha_p1 + self.alpha_p2
    }
}

/// `alpha_+` in internal units at frequency `w` with decay constant
/// `gamma`, where `gamma^2 = k0^2 - 2 w`.
pub fn branch_terms<T: Real>(s: &ScaledParams<T>, w: Cx<T>, gamma: Cx<T>) -> BranchTerms<T> {
    let (a, k, g) = (s.a, s.k0, s.g_prime);
    let two = T::lit(2.0);
    let n = norm(s);
    let k2 = k * k;
    let a2 = a * a;
    let g2 = gamma * gamma;
    let e2ka = (-two * k * a).exp();
    let e2ga = (-gamma * (a + a)).exp();
    let ome = one_minus_exp_over(gamma * (a + a));
    let w2 = w * w;

    let t1 = -(w * T::lit(16.0)).inv()
        * k
        * ((g2 * (-two * a2 / k2))
            + T::lit(6.0) * a2
            + (w2 * T::lit(4.0)).inv()
                * (g2 * T::lit(-15.0) + gamma * (T::lit(16.0) * k) - T::lit(5.0) * k2
                    + g2 * g2 * (T::lit(5.0) / k2)
                    - g2 * g2 * g2 / (k2 * k2)));
    let l = T::lit;
    let c0 = cx(-(l(4.0) * a2 * a * k2 * k + l(16.0) * a2 * k2 + l(3.0)) / (k2 * k2));
    let c1 = -(g2 * (l(5.0) * a2) + cx(a2 * k2 + l(4.0) * a * k + l(3.0))) / (w * k2);
    let c2 = -(cx(l(5.0) * k2) - g2 * l(3.0)) * a / (w * k2 * k);
    let c3 = (g2 + cx(k2)) * l(3.0) / (w2 * w);
    let t2 = (c0 + c1 + c2 + c3) * (k * e2ka / l(24.0));
    let t3 = e2ga * k / (w * T::lit(4.0)) * (w.inv() * (two * a * k) - gamma * k / w2);
    // The 1/gamma pieces of t1 and t3 combined, finite at threshold.
    let t13 = ome * (a2 * a * k2) / (w * two);
    let alpha_p1 = (t1 + t2 + t3 + t13) * (two * n * n / (e2ka)) / w;

    let b_sum = ome * (two * a2 * k) - cx(a) - cx(a * e2ka) + (e2ga - e2ka) * k / w;
    let i2 = odd_kernel(s.p, gamma * a);
    let alpha_p2 = b_sum * b_sum * (g * n * n / e2ka) / (w2 * two * i2);
    BranchTerms {
        alpha_p1,
        alpha_p2,
        n_prime: n,
        n_gamma: i2.inv(),
        i2,
        b_sum,
    }
}

fn norm<T: Real>(s: &ScaledParams<T>) -> T {
    let two = T::lit(2.0);
    let u = s.k0a;
    (two * s.k0 / ((two * u).exp() + two * u + T::one())).sqrt()
}

/// `alpha_+` with the principal-branch `gamma`; valid off the real axis and
/// on it below threshold.
pub fn alpha_plus<T: Real>(s: &ScaledParams<T>, w: Cx<T>) -> BranchTerms<T> {
    let gamma = (cx(s.k0 * s.k0) - w * T::lit(2.0)).sqrt();
    branch_terms(s, w, gamma)
}

/// `alpha_+` just above the real axis for real `w > k0^2 / 2`.
pub fn alpha_plus_outgoing<T: Real>(s: &ScaledParams<T>, w: T) -> BranchTerms<T> {
    let omega = (T::lit(2.0) * w - s.k0 * s.k0).sqrt();
    branch_terms(s, cx(w), Complex::new(T::zero(), -omega))
}

/// Number of nodes on the contour used near zero frequency.
const CONTOUR_NODES: usize = 64;

/// Analytic `alpha(z) = alpha_+(z) + alpha_+(-z)` at complex `z` away from the cuts.
fn alpha_analytic<T: Real>(s: &ScaledParams<T>, z: Cx<T>) -> Cx<T> {
    alpha_plus(s, z).total() + alpha_plus(s, -z).total()
}

/// The individual terms cancel like `1/w^4` as `w -> 0`, so near zero the
/// value comes from Cauchy's formula on a circle where they are harmless.
fn alpha_near_zero<T: Real>(s: &ScaledParams<T>, w: T, radius: T) -> T {
    let m = CONTOUR_NODES;
    let mut acc = cx(T::zero());
    for j in 0..m {
        let theta = T::TAU() * (T::lit(j as f64) + T::lit(0.5)) / T::lit(m as f64);
        let z = Complex::from_polar(radius, theta);
        acc = acc + alpha_analytic(s, z) * z / (z - w);
    }
    (acc / T::lit(m as f64)).re
}

/// Distance from zero to the nearest singularity of `alpha` in internal units.
fn analytic_radius<T: Real>(s: &ScaledParams<T>) -> T {
    let wb = s.omega_b();
    match resonance_locate(s) {
        Some(r) => wb * r.min(T::one()),
        None => wb,
    }
}

fn check_ratio<T: Real>(ratio: T) -> Result<()> {
    if !(ratio >= T::zero()) || !ratio.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "frequency ratio must be non-negative, got {ratio}"
        )));
    }
    if (ratio - T::one()).abs() < T::lit(THRESHOLD_EXCLUSION) {
        return Err(Error::ThresholdExcluded {
            omega_over_omega_b: ratio.as_f64(),
        });
    }
    Ok(())
}

/// Total closed-form polarizability at `omega / omega_B = ratio`, either regime.
pub fn alpha<T: Real>(ratio: T, s: &ScaledParams<T>) -> Result<PolarizabilityPoint<T>> {
    check_ratio(ratio)?;
    if ratio < T::one() {
        alpha_below(ratio, s)
    } else {
        alpha_above(ratio, s)
    }
}

/// Below threshold: real, with a pole tag at the odd-state resonance.
pub fn alpha_below<T: Real>(ratio: T, s: &ScaledParams<T>) -> Result<PolarizabilityPoint<T>> {
    check_ratio(ratio)?;
    if ratio > T::one() {
        return Err(Error::WrongRegime {
            routine: "alpha_below",
            omega_over_omega_b: ratio.as_f64(),
        });
    }
    let w = s.omega_prime(ratio);
    let res = resonance_locate(s);
    let radius = analytic_radius(s);
    let plus = alpha_plus(s, cx(w));
    let on_pole = plus.i2.norm() < T::lit(POLE_TOLERANCE);
    let internal = if on_pole {
        T::nan()
    } else if w < radius / T::lit(4.0) {
        alpha_near_zero(s, w, radius / T::lit(2.0))
    } else {
        (plus.total() + alpha_plus(s, cx(-w)).total()).re
    };
    Ok(PolarizabilityPoint {
        omega_over_omega_b: ratio,
        value: cx(internal * s.atomic_factor()),
        regime: RegimeTag::Below,
        method: Method::ClosedForm,
        pole_proximity: res.map(|r| (ratio - r).abs()),
        on_pole,
    })
}

/// Above threshold: the `+w` branch is outgoing, the `-w` branch stays real.
pub fn alpha_above<T: Real>(ratio: T, s: &ScaledParams<T>) -> Result<PolarizabilityPoint<T>> {
    check_ratio(ratio)?;
    if ratio < T::one() {
        return Err(Error::WrongRegime {
            routine: "alpha_above",
            omega_over_omega_b: ratio.as_f64(),
        });
    }
    let w = s.omega_prime(ratio);
    let plus = alpha_plus_outgoing(s, w).total();
    let minus = alpha_plus(s, cx(-w)).total().re;
    Ok(PolarizabilityPoint {
        omega_over_omega_b: ratio,
        value: (plus + minus) * s.atomic_factor(),
        regime: RegimeTag::Above,
        method: Method::ClosedForm,
        pole_proximity: None,
        on_pole: false,
    })
}

/// Static polarizability in internal units.
pub fn alpha_static_internal<T: Real>(s: &ScaledParams<T>) -> T {
    let (a, k, g) = (s.a, s.k0, s.g_prime);
    let n = norm(s);
    let two = T::lit(2.0);
    let e2 = (two * k * a).exp();
    let bracket =
        -(T::lit(3.0) + T::lit(16.0) * a * k) / T::lit(6.0) + g * e2 * e2 / (g + e2 * (k - g));
    a * a * n * n / (k * k * k) * bracket
        + (T::lit(5.0) + T::lit(12.0) * a * a * k * k) / (T::lit(4.0) * k * k * k * k)
}

/// Static polarizability `alpha(0)` as a point, in atomic units.
pub fn alpha_static<T: Real>(s: &ScaledParams<T>) -> PolarizabilityPoint<T> {
    PolarizabilityPoint {
        omega_over_omega_b: T::zero(),
        value: cx(alpha_static_internal(s) * s.atomic_factor()),
        regime: RegimeTag::Below,
        method: Method::ClosedForm,
        pole_proximity: resonance_locate(s),
        on_pole: false,
    }
}

/// Frequency of the below-threshold pole, as a fraction of `omega_B`.
///
/// The pole is the zero of `I2(gamma)` for `0 < gamma < k0`, which exists
/// only when the odd bound state does (`p > 1`).
pub fn resonance_locate<T: Real>(s: &ScaledParams<T>) -> Option<T> {
    if s.p <= T::one() {
        return None;
    }
    let f = |t: T| odd_kernel(s.p, cx(t)).re;
    let t = find_root(f, T::zero(), s.k0a, RootTolerance::default()).ok()?;
    let r = t / s.k0a;
    Some(T::one() - r * r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bound_states::{ground_state, solve_odd_kappa};
    use crate::quadrature::{integrate, integrate_tail, QuadratureSpec};
    use crate::units::{build_scaled, PhysicalParams};

    fn params(p: f64, sep: f64) -> ScaledParams<f64> {
        build_scaled(PhysicalParams::electron(sep), p, false).unwrap()
    }

    // Reference values from 20-digit quadrature of the defining double integrals.
    #[test]
    fn terms_match_high_precision_reference_below() {
        let s = params(0.5, 1.0);
        let t = alpha_plus(&s, cx(s.omega_prime(0.5)));
        assert!((t.alpha_p1.re - 52.191_683_684_856_47).abs() < 1e-9);
        assert!((t.alpha_p2.re - 6.828_282_054_630_084).abs() < 1e-10);
        assert_eq!(t.alpha_p1.im, 0.0);
        let s = params(1.5, 1.0);
        let t = alpha_plus(&s, cx(s.omega_prime(0.3)));
        assert!((t.alpha_p1.re - 2.605_731_727_639_324).abs() < 1e-10);
        assert!((t.alpha_p2.re - 4.142_129_383_309_323).abs() < 1e-10);
        assert!((t.n_gamma * t.i2 - cx(1.0)).norm() < 1e-15);
    }

    #[test]
    fn terms_match_high_precision_reference_above() {
        let s = params(0.5, 1.0);
        let t = alpha_plus_outgoing(&s, s.omega_prime(2.0));
        assert!(
            (t.alpha_p1 - Complex::new(-53.426_528_619_801_53, 53.124_797_728_714_24)).norm()
                < 1e-9
        );
        assert!(
            (t.alpha_p2 - Complex::new(-15.086_017_808_974_53, -6.480_570_976_745_761)).norm()
                < 1e-9
        );
        let s = params(1.5, 1.0);
        let t = alpha_plus_outgoing(&s, s.omega_prime(1.5));
        assert!(
            (t.alpha_p1 - Complex::new(-2.917_874_533_651_776, 7.430_022_763_533_034)).norm()
                < 1e-10
        );
        assert!(
            (t.alpha_p2 - Complex::new(-1.147_263_177_590_314, -7.429_340_729_708_193)).norm()
                < 1e-10
        );
    }

    #[test]
    fn static_value_reference_table() {
        let table = [
            (0.5, 73.169),
            (1.0, 14.639),
            (1.5, 8.1309),
            (2.0, 6.6524),
            (2.5, 6.6061),
            (3.0, 7.3373),
            (4.5, 14.226),
        ];
        for &(p, v) in &table {
            let got = alpha_static_internal(&params(p, 1.0));
            assert!((got / v - 1.0).abs() < 1e-4, "p={p}: {got}");
        }
    }

    #[test]
    fn h2_plus_static_value() {
        let s = params(1.22, 0.74);
        let si = alpha_static(&s).si();
        assert!((si.re_m3 - 4.68e-31).abs() < 0.01e-31, "{}", si.re_m3);
    }

    #[test]
    fn static_limit_of_dynamic_value() {
        for &p in &[0.5, 1.5, 4.5] {
            let s = params(p, 1.0);
            let a0 = alpha_static(&s).value.re;
            let v = alpha_below(1e-6, &s).unwrap().value.re;
            assert!(((v - a0) / a0).abs() < 1e-8, "p={p}: {v} vs {a0}");
            // alpha is even in omega: the approach is quadratic.
            let d1 = alpha_below(1e-3, &s).unwrap().value.re - a0;
            let d2 = alpha_below(2e-3, &s).unwrap().value.re - a0;
            assert!(d1 > 0.0 && (d2 / d1 - 4.0).abs() < 1e-2, "p={p}: {d1} {d2}");
        }
    }

    #[test]
    fn contour_and_direct_agree_where_both_are_accurate() {
        let s = params(0.5, 1.0);
        let w = s.omega_prime(0.3);
        let direct = (alpha_plus(&s, cx(w)).total() + alpha_plus(&s, cx(-w)).total()).re;
        let contour = alpha_near_zero(&s, w, 0.5 * s.omega_b());
        assert!(((direct - contour) / direct).abs() < 1e-12);
        // Two radii agree with each other where the direct sum has lost digits.
        let w = s.omega_prime(0.01);
        let c1 = alpha_near_zero(&s, w, 0.3 * s.omega_b());
        let c2 = alpha_near_zero(&s, w, 0.6 * s.omega_b());
        assert!(((c1 - c2) / c1).abs() < 1e-13);
    }

    #[test]
    fn single_well_limit() {
        // a -> 0 with the total strength 2 g' held fixed.
        let total: f64 = 0.9;
        let a = 1e-7;
        let s = ScaledParams {
            p: total * a,
            a,
            g_prime: total / 2.0,
            k0a: 0.0,
            k0: 0.0,
            mass: 1.0,
            charge: 1.0,
            degenerate_override: false,
        };
        let k0 = crate::bound_states::solve_even_kappa(s.p, a).unwrap();
        let s = ScaledParams {
            k0,
            k0a: k0 * a,
            ..s
        };
        let v = alpha_static_internal(&s);
        let expected = 1.25 / total.powi(4);
        assert!((v / expected - 1.0).abs() < 1e-6);
    }

    #[test]
    fn resonance_positions() {
        let s = params(1.5, 1.0);
        let r = resonance_locate(&s).unwrap();
        assert!((r - 0.7529).abs() < 5e-4);
        let k1 = solve_odd_kappa(1.5, s.a).unwrap().unwrap();
        assert!((r - (1.0 - (k1 / s.k0).powi(2))).abs() < 1e-10);
        assert!(resonance_locate(&params(0.5, 1.0)).is_none());
        // Independent bisection on both parity conditions at p = 2.5.
        let bis = |f: &dyn Fn(f64) -> f64, mut lo: f64, mut hi: f64| {
            for _ in 0..200 {
                let m = 0.5 * (lo + hi);
                if f(m) > 0.0 {
                    hi = m
                } else {
                    lo = m
                }
            }
            0.5 * (lo + hi)
        };
        let u = bis(&|u| u * (1.0 + u.tanh()) - 2.5, 0.1, 2.5);
        let v = bis(&|v| v + v / v.tanh() - 2.5, 0.1, 2.5);
        let expected = 1.0 - (v / u).powi(2);
        assert!((expected - 0.3028).abs() < 1e-4);
        assert!((resonance_locate(&params(2.5, 1.0)).unwrap() - expected).abs() < 1e-10);
    }

    #[test]
    fn pole_changes_sign_and_is_tagged() {
        let s = params(1.5, 1.0);
        let r = resonance_locate(&s).unwrap();
        let lo = alpha_below(r - 1e-3, &s).unwrap().value.re;
        let hi = alpha_below(r + 1e-3, &s).unwrap().value.re;
        assert!(lo.signum() != hi.signum());
        let at = alpha_below(r, &s).unwrap();
        assert!(at.on_pole && at.value.re.is_nan());
        assert!(at.pole_proximity.unwrap() < 1e-12);
    }

    #[test]
    fn regime_checks() {
        let s = params(0.5, 1.0);
        assert!(matches!(
            alpha(1.0 + 1e-7, &s),
            Err(Error::ThresholdExcluded { .. })
        ));
        assert!(matches!(
            alpha_below(1.5, &s),
            Err(Error::WrongRegime { .. })
        ));
        assert!(matches!(
            alpha_above(0.5, &s),
            Err(Error::WrongRegime { .. })
        ));
        assert!(alpha(-0.1, &s).is_err());
        assert_eq!(alpha(0.7, &s).unwrap().value.im, 0.0);
        assert!(alpha(1.7, &s).unwrap().value.im > 0.0);
    }

    #[test]
    fn dipole_element_properties() {
        let s = params(0.5, 1.0);
        let g = ground_state(0.5, s.a).unwrap();
        assert_eq!(dipole_matrix_element(0.0, &g).norm(), 0.0);
        for &q in &[0.1, 0.7, 3.0] {
            let m = dipole_matrix_element(q, &g);
            assert!(m.re.abs() < 1e-16);
            assert_eq!(dipole_matrix_element(-q, &g), -m);
        }
        // q^2 |M| oscillates under a constant envelope at large q.
        let env = (2.0 / std::f64::consts::PI).sqrt()
            * g.norm.unwrap()
            * g.kappa
            * (g.kappa * s.a).exp()
            * s.a;
        let peak = (0..2000)
            .map(|i| 1e4 + i as f64 * std::f64::consts::PI / s.a / 2000.0)
            .map(|q| q * q * dipole_matrix_element(q, &g).norm())
            .fold(0.0, f64::max);
        assert!((peak / env - 1.0).abs() < 1e-3);
    }

    #[test]
    fn dipole_element_matches_quadrature() {
        let s = params(0.5, 1.0);
        let g = ground_state(0.5, s.a).unwrap();
        let q = s.k0;
        let spec = QuadratureSpec {
            rel_tol: 1e-13,
            abs_tol: 1e-16,
            ..QuadratureSpec::default()
        };
        // The integrand is odd in x: 2 i int_0^inf (-sin qx) x psi(x) dx / sqrt(2 pi).
        let f = |x: f64| cx(-(q * x).sin() * x * g.value(x));
        let v = integrate(f, 0.0, s.a, &spec).unwrap().value
            + integrate(f, s.a, 20.0, &spec).unwrap().value
            + integrate_tail(f, 20.0, &spec).unwrap().value;
        let expected = Complex::new(0.0, 2.0 * v.re / (2.0 * std::f64::consts::PI).sqrt());
        let m = dipole_matrix_element(q, &g);
        assert!((m - expected).norm() < 1e-10 * m.norm());
    }
}
