//! Static polarizability as a sum over the eigenstates of a boxed grid
//! Hamiltonian: `alpha(0) = 2 sum_{n > 0} |<n|x|0>|^2 / (E_n - E0)`.

use crate::closed_form::{Method, PolarizabilityPoint, RegimeTag};
use crate::error::{Error, Result};
use crate::scalar::{cx, Real};
use crate::system::System;

use super::grid::GridSpec;
use super::richardson;

/// Spectrum of the boxed Hamiltonian with dipole projections on the ground state.
#[derive(Debug, Clone)]
pub struct BoxSpectrum<T> {
    pub energies: Vec<T>,
    /// `<n| x - <x> |0>` for every eigenstate `n`.
    pub dipoles: Vec<T>,
}

/// Partial sums of one box evaluation, internal units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoxSum<T> {
    pub total: T,
    /// Excited bound states (`E_n < 0`).
    pub bound: T,
    /// Box states above threshold.
    pub continuum: T,
    /// Thomas-Reiche-Kuhn sum `sum 2 (E_n - E0) |<n|x|0>|^2`; ideally 1.
    pub oscillator_strength: T,
}

pub fn box_spectrum<T: Real>(system: &System<T>, grid: &GridSpec<T>) -> Result<BoxSpectrum<T>> {
    let ham = grid.hamiltonian(system)?;
    let e0 = ham.eigenvalue(0);
    let v0 = ham.eigenvector(e0);
    let mean = v0
        .iter()
        .enumerate()
        .fold(T::zero(), |s, (i, c)| s + *c * *c * grid.x(i));
    let w: Vec<T> = v0
        .iter()
        .enumerate()
        .map(|(i, c)| (grid.x(i) - mean) * *c)
        .collect();
    let (energies, dipoles) = ham.eigen_projections(&w);
    Ok(BoxSpectrum { energies, dipoles })
}

pub fn box_sum<T: Real>(spectrum: &BoxSpectrum<T>) -> BoxSum<T> {
    let e0 = spectrum.energies[0];
    let two = T::lit(2.0);
    let mut out = BoxSum {
        total: T::zero(),
        bound: T::zero(),
        continuum: T::zero(),
        oscillator_strength: T::zero(),
    };
    for (e, d) in spectrum.energies.iter().zip(&spectrum.dipoles).skip(1) {
        let gap = *e - e0;
        let term = two * *d * *d / gap;
        if *e < T::zero() {
            out.bound = out.bound + term;
        } else {
            out.continuum = out.continuum + term;
        }
        out.oscillator_strength = out.oscillator_strength + two * gap * *d * *d;
    }
    out.total = out.bound + out.continuum;
    out
}

/// Box-sum result with convergence diagnostics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StaticSumResult<T> {
    /// Extrapolated value in atomic units.
    pub point: PolarizabilityPoint<T>,
    /// Extrapolated partial sums, internal units.
    pub parts: BoxSum<T>,
    /// Relative change when the box is doubled, if checked.
    pub box_shift: Option<T>,
}

/// Static polarizability from the boxed sum over states, extrapolated over
/// the spacings `h, h/2, ..., h/2^(levels-1)`.
///
/// With `tolerance` set, the finest level is repeated in a doubled box and
/// a shift beyond it is reported as non-convergence.
pub fn alpha_static_sum<T: Real>(
    system: &System<T>,
    grid: &GridSpec<T>,
    levels: u32,
    tolerance: Option<T>,
) -> Result<StaticSumResult<T>> {
    grid.validate_for(system)?;
    let levels = levels.max(1);
    let sums = (0..levels)
        .map(|l| box_spectrum(system, &grid.refined(l)).map(|s| box_sum(&s)))
        .collect::<Result<Vec<_>>>()?;
    let pick = |f: fn(&BoxSum<T>) -> T| richardson::<T, T>(&sums.iter().map(f).collect::<Vec<_>>());
    let parts = BoxSum {
        total: pick(|s| s.total),
        bound: pick(|s| s.bound),
        continuum: pick(|s| s.continuum),
        oscillator_strength: pick(|s| s.oscillator_strength),
    };
    let box_shift = match tolerance {
        Some(tol) => {
            let finest = grid.refined(levels - 1);
            let big = box_sum(&box_spectrum(system, &finest.doubled_box())?).total;
            let small = sums[sums.len() - 1].total;
            let shift = ((big - small) / small).abs();
            if shift > tol {
                return Err(Error::NonConvergence {
                    what: "box sum under box doubling",
                    change: shift.as_f64(),
                    tolerance: tol.as_f64(),
                });
            }
            Some(shift)
        }
        None => None,
    };
    Ok(StaticSumResult {
        point: PolarizabilityPoint {
            omega_over_omega_b: T::zero(),
            value: cx(parts.total * system.atomic_factor()),
            regime: RegimeTag::Below,
            method: Method::BoxSum,
            pole_proximity: None,
            on_pole: false,
        },
        parts,
        box_shift,
    })
}
