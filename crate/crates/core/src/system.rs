//! A particle bound in a delta-well potential: the common input of the
//! numerical oracles.

use crate::bound_states::{ground_state, multi_delta_spectrum, BoundState, DeltaPotential};
use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::units::ScaledParams;

#[derive(Debug, Clone)]
pub struct System<T> {
    pub potential: DeltaPotential<T>,
    pub ground: BoundState<T>,
    pub mass: T,
    pub charge: T,
    /// Set when two bound levels nearly coincide.
    pub near_degenerate: bool,
}

impl<T: Real> System<T> {
    /// The symmetric double well described by `s`.
    pub fn symmetric(s: &ScaledParams<T>) -> Result<Self> {
        Ok(Self {
            potential: DeltaPotential::symmetric_double(s.a, s.g_prime)?,
            ground: ground_state(s.p, s.a)?,
            mass: s.mass,
            charge: s.charge,
            near_degenerate: false,
        })
    }

    /// Any attractive well configuration.
    pub fn from_potential(potential: DeltaPotential<T>, mass: T, charge: T) -> Result<Self> {
        if !(mass > T::zero()) || charge == T::zero() {
            return Err(Error::InvalidParameter(
                "mass must be positive and charge non-zero".into(),
            ));
        }
        let spectrum = multi_delta_spectrum(&potential)?;
        Ok(Self {
            ground: spectrum.states[0].clone(),
            near_degenerate: spectrum.near_degenerate,
            potential,
            mass,
            charge,
        })
    }

    pub fn kappa(&self) -> T {
        self.ground.kappa
    }

    pub fn e0(&self) -> T {
        self.ground.energy
    }

    /// Threshold frequency `omega_B = -E0` in internal units.
    pub fn omega_b(&self) -> T {
        -self.ground.energy
    }

    pub fn atomic_factor(&self) -> T {
        self.charge * self.charge * self.mass
    }
}
