//! Free resolvent, kernel integrals of the double well, and the Dyson
//! coefficients for one, two, or many wells.
//!
//! In position space the free resolvent at energy `E = -gamma^2 / 2` is
//! `G0(x, y) = -exp(-gamma |x - y|) / gamma`. Above threshold the outgoing
//! prescription puts `gamma = -i Omega` with `Omega = sqrt(2E) > 0`.

use num_complex::Complex;

use crate::bound_states::{ground_state, multi_delta_spectrum, DeltaPotential};
use crate::error::{Error, Result};
use crate::linalg::{CMatrix, Lu};
use crate::scalar::{cx, Cx, Real};

/// Relative half-width of the excluded neighbourhood of the threshold.
pub const THRESHOLD_EXCLUSION: f64 = 1e-6;

/// Frequency regime of one resolvent branch.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Regime<T> {
    /// Negative total energy, `gamma = sqrt(-2E) > 0`.
    Below { gamma: T },
    /// Positive total energy, `Omega = sqrt(2E) > 0`.
    Above { omega: T },
}

impl<T: Real> Regime<T> {
    /// Classifies `e_total`. Energies within [`THRESHOLD_EXCLUSION`] of zero,
    /// relative to `scale`, are refused.
    pub fn from_energy(e_total: T, scale: T) -> Result<Self> {
        let two = T::lit(2.0);
        if e_total.abs() < T::lit(THRESHOLD_EXCLUSION) * scale.abs() || e_total == T::zero() {
            return Err(Error::ThresholdExcluded {
                omega_over_omega_b: (T::one() + e_total / scale.abs()).as_f64(),
            });
        }
        Ok(if e_total < T::zero() {
            Regime::Below {
                gamma: (-two * e_total).sqrt(),
            }
        } else {
            Regime::Above {
                omega: (two * e_total).sqrt(),
            }
        })
    }

    /// `gamma` below threshold and its continuation `-i Omega` above.
    pub fn decay(&self) -> Cx<T> {
        match *self {
            Regime::Below { gamma } => cx(gamma),
            Regime::Above { omega } => Complex::new(T::zero(), -omega),
        }
    }

    pub fn is_above(&self) -> bool {
        matches!(self, Regime::Above { .. })
    }

    pub fn energy(&self) -> T {
        let two = T::lit(2.0);
        match *self {
            Regime::Below { gamma } => -gamma * gamma / two,
            Regime::Above { omega } => omega * omega / two,
        }
    }
}

/// Which resolvent, `G(E0 + omega)` or `G(E0 - omega)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    Plus,
    Minus,
}

impl Branch {
    pub fn sign<T: Real>(self) -> T {
        match self {
            Branch::Plus => T::one(),
            Branch::Minus => -T::one(),
        }
    }
}

/// Diagonal momentum element `1 / (E - k^2 / 2)` of the free resolvent.
pub fn free_resolvent_diag<T: Real>(e_total: T, k: T) -> Result<Cx<T>> {
    let den = e_total - k * k / T::lit(2.0);
    if den.abs() < T::lit(1e-14) * T::one().max(e_total.abs()) {
        return Err(Error::OnPole { k: k.as_f64() });
    }
    Ok(cx(den.recip()))
}

/// Position-space free resolvent `G0(r)` at separation `r`.
pub fn green0<T: Real>(regime: &Regime<T>, r: T) -> Cx<T> {
    let g = regime.decay();
    -(-g * r.abs()).exp() / g
}

/// The four kernel integrals of the symmetric double well.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelIntegrals<T> {
    pub i: Cx<T>,
    pub i1: Cx<T>,
    pub i2: Cx<T>,
    pub i3: Cx<T>,
}

/// Closed-form kernel integrals for wells of strength `g_prime` at `+-a`.
pub fn kernel_integrals<T: Real>(regime: &Regime<T>, g_prime: T, a: T) -> KernelIntegrals<T> {
    let gam = regime.decay();
    let one = cx(T::one());
    let r = cx(g_prime) / gam;
    let e = (-gam * (a + a)).exp();
    KernelIntegrals {
        i: one - r,
        i1: one - r * (one + e),
        i2: one - r * (one - e),
        i3: -r * e,
    }
}

/// `I2` written as `1 - p (1 - e^{-2 gamma a}) / (2 gamma a)`, stable as `gamma a -> 0`.
pub fn odd_kernel<T: Real>(p: T, gamma_a: Cx<T>) -> Cx<T> {
    let z = gamma_a * T::lit(2.0);
    cx(T::one()) - crate::scalar::one_minus_exp_over(z) * p
}

/// Below this modulus a kernel denominator is treated as a pole.
pub const POLE_TOLERANCE: f64 = 1e-6;

/// Dyson coefficients `A_l(k)`: the full resolvent applied to `e^{ikx}` and
/// evaluated at each well.
#[derive(Debug, Clone, PartialEq)]
pub struct DysonCoefficients<T> {
    pub values: Vec<Cx<T>>,
    pub branch: Branch,
    pub k: T,
    /// Set when a kernel denominator is within [`POLE_TOLERANCE`] of zero.
    pub pole: bool,
    /// 1-norm condition estimate of the well-space system.
    pub condition: T,
}

fn branch_regime<T: Real>(e0: T, branch: Branch, omega: T) -> Result<Regime<T>> {
    if omega < T::zero() {
        return Err(Error::InvalidParameter("omega must be non-negative".into()));
    }
    Regime::from_energy(e0 + branch.sign::<T>() * omega, e0)
}

/// Single well of strength `g_prime` at the origin.
pub fn coeff_single<T: Real>(
    g_prime: T,
    branch: Branch,
    k: T,
    omega: T,
) -> Result<DysonCoefficients<T>> {
    let e0 = -g_prime * g_prime / T::lit(2.0);
    let regime = branch_regime(e0, branch, omega)?;
    let g0k = free_resolvent_diag(regime.energy(), k)?;
    let i = cx(T::one()) - cx(g_prime) / regime.decay();
    Ok(DysonCoefficients {
        values: vec![g0k / i],
        branch,
        k,
        pole: i.norm() < T::lit(POLE_TOLERANCE),
        condition: T::one(),
    })
}

/// Symmetric double well with strength `g_prime` at `-a` and `+a`.
/// Values are ordered `[A1 (at -a), A2 (at +a)]`.
pub fn coeff_double<T: Real>(
    g_prime: T,
    a: T,
    branch: Branch,
    k: T,
    omega: T,
) -> Result<DysonCoefficients<T>> {
    let p = T::lit(2.0) * g_prime * a;
    let e0 = ground_state(p, a)?.energy;
    let regime = branch_regime(e0, branch, omega)?;
    let g0k = free_resolvent_diag(regime.energy(), k)?;
    let ki = kernel_integrals(&regime, g_prime, a);
    let even = g0k * (k * a).cos() / ki.i1;
    let odd = Complex::new(T::zero(), (k * a).sin()) * g0k / ki.i2;
    let tol = T::lit(POLE_TOLERANCE);
    let (n1, n2) = (ki.i1.norm(), ki.i2.norm());
    let lo = n1.min(n2);
    Ok(DysonCoefficients {
        values: vec![even - odd, even + odd],
        branch,
        k,
        pole: lo < tol,
        condition: (n1.max(n2) / lo).max(T::one()),
    })
}

/// The well-space matrix `M_lj = delta_lj + g_j G0(x_l - x_j)`.
pub fn dyson_matrix<T: Real>(potential: &DeltaPotential<T>, regime: &Regime<T>) -> CMatrix<T> {
    let w = potential.wells();
    CMatrix::from_fn(w.len(), |l, j| {
        let delta = if l == j { T::one() } else { T::zero() };
        cx(delta) + green0(regime, w[l].position - w[j].position) * w[j].strength
    })
}

/// Arbitrary wells: solves `M A = G0(k) e^{i k x_l}`.
pub fn coeff_multi<T: Real>(
    potential: &DeltaPotential<T>,
    branch: Branch,
    k: T,
    omega: T,
) -> Result<DysonCoefficients<T>> {
    let e0 = multi_delta_spectrum(potential)?.ground().energy;
    coeff_multi_at(potential, e0, branch, k, omega)
}

/// As [`coeff_multi`] with a known ground-state energy.
pub fn coeff_multi_at<T: Real>(
    potential: &DeltaPotential<T>,
    e0: T,
    branch: Branch,
    k: T,
    omega: T,
) -> Result<DysonCoefficients<T>> {
    let regime = branch_regime(e0, branch, omega)?;
    let g0k = free_resolvent_diag(regime.energy(), k)?;
    let m = dyson_matrix(potential, &regime);
    let lu = Lu::new(&m)?;
    let rhs: Vec<Cx<T>> = potential
        .wells()
        .iter()
        .map(|w| g0k * Complex::new(T::zero(), k * w.position).exp())
        .collect();
    let condition = lu.condition;
    Ok(DysonCoefficients {
        values: lu.solve(&rhs),
        branch,
        k,
        pole: condition.recip() < T::lit(POLE_TOLERANCE),
        condition,
    })
}
