//! Physical parameters, the scaled quantities the engine works in, and the
//! conversion of polarizabilities to SI volumes.
//!
//! Internally everything uses hbar = m = 1 with lengths in Bohr radii. The
//! particle's mass and charge only enter when a polarizability leaves the
//! engine: `alpha_atomic = charge^2 * mass * alpha_internal`.

use num_complex::Complex;

use crate::bound_states::solve_even_kappa;
use crate::error::{Error, Result};
use crate::scalar::{Cx, Real};

/// CODATA Bohr radius in meters, pinned to 8 significant figures.
pub const BOHR_RADIUS_M: f64 = 0.529_177_21e-10;

/// One angstrom expressed in Bohr radii.
pub const ANGSTROM_IN_BOHR: f64 = 1e-10 / BOHR_RADIUS_M;

/// Cubic meters per atomic unit of polarizability volume (`a0^3`).
pub const ATOMIC_VOLUME_M3: f64 = BOHR_RADIUS_M * BOHR_RADIUS_M * BOHR_RADIUS_M;

/// Above this value of `p` the two lowest levels approach degeneracy and the
/// engine refuses to run without an explicit override.
pub const DEGENERATE_P: f64 = 5.0;

/// Particle and potential geometry as a user specifies them.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalParams<T> {
    /// Particle mass over the electron mass.
    pub mass: T,
    /// Particle charge over the elementary charge.
    pub charge: T,
    /// Half the well separation, in angstrom.
    pub half_separation_a: T,
}

impl<T: Real> PhysicalParams<T> {
    /// An electron in a double well whose full separation `2a` is given in angstrom.
    pub fn electron(separation_angstrom: T) -> Self {
        Self {
            mass: T::one(),
            charge: T::one(),
            half_separation_a: separation_angstrom / T::lit(2.0),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.mass > T::zero()) || !self.mass.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "mass must be positive, got {}",
                self.mass
            )));
        }
        if self.charge == T::zero() || !self.charge.is_finite() {
            return Err(Error::InvalidParameter("charge must be non-zero".into()));
        }
        if !(self.half_separation_a > T::zero()) || !self.half_separation_a.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "half separation must be positive, got {}",
                self.half_separation_a
            )));
        }
        Ok(())
    }
}

/// Scaled (internal-unit) description of a symmetric double delta well.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScaledParams<T> {
    /// Dimensionless strength `2 m g a / hbar^2`.
    pub p: T,
    /// Half separation in Bohr radii.
    pub a: T,
    /// Scaled strength `g' = m g / hbar^2`, inverse Bohr.
    pub g_prime: T,
    /// Dimensionless even-state root `k0 a`.
    pub k0a: T,
    /// Even-state decay constant, inverse Bohr.
    pub k0: T,
    pub mass: T,
    pub charge: T,
    /// Set when the degenerate-region guard was overridden.
    pub degenerate_override: bool,
}

impl<T: Real> ScaledParams<T> {
    /// Threshold frequency in internal units, `omega'_B = k0^2 / 2`.
    pub fn omega_b(&self) -> T {
        self.k0 * self.k0 / T::lit(2.0)
    }

    /// Internal frequency `omega' = (m / hbar) omega` for a ratio `omega / omega_B`.
    pub fn omega_prime(&self, omega_over_omega_b: T) -> T {
        omega_over_omega_b * self.omega_b()
    }

    /// Factor taking an internal-unit polarizability to atomic units.
    pub fn atomic_factor(&self) -> T {
        self.charge * self.charge * self.mass
    }

    /// Separation `2a` in angstrom.
    pub fn separation_angstrom(&self) -> T {
        T::lit(2.0) * self.a / T::lit(ANGSTROM_IN_BOHR)
    }
}

/// Builds the scaled parameters for a given strength `p`.
///
/// Refuses `p >= 5` unless `allow_degenerate` is set.
pub fn build_scaled<T: Real>(
    params: PhysicalParams<T>,
    p: T,
    allow_degenerate: bool,
) -> Result<ScaledParams<T>> {
    params.validate()?;
    if !(p > T::zero()) || !p.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "p must be positive, got {p}"
        )));
    }
    if p >= T::lit(DEGENERATE_P) && !allow_degenerate {
        return Err(Error::DegenerateRegion {
            p: p.as_f64(),
            limit: DEGENERATE_P,
        });
    }
    let a = params.half_separation_a * T::lit(ANGSTROM_IN_BOHR);
    let k0 = solve_even_kappa(p, a)?;
    Ok(ScaledParams {
        p,
        a,
        g_prime: p / (T::lit(2.0) * a),
        k0a: k0 * a,
        k0,
        mass: params.mass,
        charge: params.charge,
        degenerate_override: p >= T::lit(DEGENERATE_P),
    })
}

/// Polarizability volume `alpha / (4 pi eps0)` in cubic meters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SiPolarizability<T> {
    pub re_m3: T,
    pub im_m3: T,
    /// False when the input carried a NaN or infinity.
    pub finite: bool,
}

/// Converts an atomic-unit polarizability to cubic meters, componentwise.
pub fn to_si_volume<T: Real>(alpha_atomic: Cx<T>) -> SiPolarizability<T> {
    let f = T::lit(ATOMIC_VOLUME_M3);
    SiPolarizability {
        re_m3: alpha_atomic.re * f,
        im_m3: alpha_atomic.im * f,
        finite: alpha_atomic.re.is_finite() && alpha_atomic.im.is_finite(),
    }
}

/// Real-valued convenience wrapper around [`to_si_volume`].
pub fn to_si_volume_real<T: Real>(alpha_atomic: T) -> T {
    to_si_volume(Complex::new(alpha_atomic, T::zero())).re_m3
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn g_prime_for_one_angstrom() {
        let s = build_scaled(PhysicalParams::electron(1.0_f64), 0.5, false).unwrap();
        // 2a = 1 A -> a = 0.944863 bohr
        assert!((s.a - 0.944_863).abs() < 1e-6);
        assert!((s.g_prime - 0.264_59).abs() < 1e-5);
    }

    #[test]
    fn g_prime_for_h2_plus_geometry() {
        let s = build_scaled(PhysicalParams::electron(0.74_f64), 1.22, false).unwrap();
        assert!((s.a - 0.699_20).abs() < 1e-5);
        assert!((s.g_prime - 0.872_43).abs() < 1e-5);
    }

    #[test]
    fn degenerate_region_refused_without_override() {
        let e = build_scaled(PhysicalParams::electron(1.0_f64), 5.2, false).unwrap_err();
        assert!(matches!(e, Error::DegenerateRegion { .. }));
        assert!(e.to_string().contains("degenerate region"));
        let s = build_scaled(PhysicalParams::electron(1.0_f64), 5.2, true).unwrap();
        assert!(s.degenerate_override);
    }

    #[test]
    fn invalid_inputs_rejected() {
        let mut bad = PhysicalParams::electron(1.0_f64);
        bad.mass = 0.0;
        assert!(build_scaled(bad, 0.5, false).is_err());
        let mut bad = PhysicalParams::electron(1.0_f64);
        bad.charge = 0.0;
        assert!(build_scaled(bad, 0.5, false).is_err());
        assert!(build_scaled(PhysicalParams::electron(-1.0_f64), 0.5, false).is_err());
        assert!(build_scaled(PhysicalParams::electron(1.0_f64), 0.0, false).is_err());
        assert!(build_scaled(PhysicalParams::electron(1.0_f64), f64::NAN, false).is_err());
    }

    #[test]
    fn si_conversion_values() {
        assert_eq!(to_si_volume_real(0.0_f64), 0.0);
        assert!((to_si_volume_real(1.0_f64) / 1.481_847e-31 - 1.0).abs() < 1e-6);
        assert!((to_si_volume_real(3.158_f64) / 4.68e-31 - 1.0).abs() < 1e-3);
        let c = to_si_volume(Complex::new(1.0, -2.0));
        assert_eq!(c.im_m3, -2.0 * ATOMIC_VOLUME_M3);
        assert!(!to_si_volume(Complex::new(f64::NAN, 0.0)).finite);
    }

    proptest! {
        #[test]
        fn si_conversion_is_linear(x in -1e6f64..1e6, y in -1e6f64..1e6) {
            let lhs = to_si_volume_real(x + y);
            let rhs = to_si_volume_real(x) + to_si_volume_real(y);
            let scale = to_si_volume_real(x.abs() + y.abs());
            prop_assert!((lhs - rhs).abs() <= 4.0 * f64::EPSILON * scale);
        }

        #[test]
        fn p_round_trips_exactly(p in 0.01f64..4.99, sep in 0.1f64..5.0) {
            let s = build_scaled(PhysicalParams::electron(sep), p, false).unwrap();
            prop_assert_eq!(s.p, p);
            prop_assert!((2.0 * s.g_prime * s.a - p).abs() <= 4.0 * f64::EPSILON * p);
        }
    }
}
