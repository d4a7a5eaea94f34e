//! Polarizability from momentum-space integrals of the resolvent.
//!
//! With `d = (x - <x>) psi0` and `M(q) = <q|d>`, each resolvent branch
//! contributes `<d|G|d> = D - sum_jl g_j f_j (M^-1)_jl f_l` where
//! `D = int |M(q)|^2 G0(q) dq` and `f_j = (2 pi)^{-1/2} int e^{iqx_j} G0(q) M(q) dq`.
//! Above threshold the pole of `G0(q)` at `q = Omega` is split into a
//! principal value and a residue.

use num_complex::Complex;

use crate::closed_form::{dipole_matrix_element, Method, PolarizabilityPoint, RegimeTag};
use crate::error::{Error, Result};
use crate::greens::{dyson_matrix, green0, Regime, THRESHOLD_EXCLUSION};
use crate::linalg::{CMatrix, Lu};
use crate::quadrature::{
    integrate_outgoing_pole, integrate_pieces, integrate_tail, uniform_breaks, Estimate,
};
use crate::scalar::{cx, Cx, Real};
use crate::system::System;

pub use crate::quadrature::QuadratureSpec;

/// Folded integrals `D` and `f_j` for one branch.
struct BranchIntegrals<T> {
    d: Cx<T>,
    f: Vec<Cx<T>>,
}

fn breakpoints<T: Real>(system: &System<T>, regime: &Regime<T>) -> (Vec<T>, T) {
    let span = system.potential.positions().iter().fold(T::zero(), |m, x| {
        m.max((*x - system.ground.mean_position()).abs())
    });
    let k = system.kappa();
    let pole = match *regime {
        Regime::Above { omega } => omega,
        Regime::Below { .. } => T::zero(),
    };
    let mut step = k;
    if span > T::zero() {
        step = step.min(T::PI() / span);
    }
    let reach = T::lit(400.0)
        * k.max(pole).max(if span > T::zero() {
            span.recip()
        } else {
            T::zero()
        });
    (uniform_breaks(step, reach), reach)
}

fn branch_integrals<T: Real>(
    system: &System<T>,
    regime: &Regime<T>,
    spec: &QuadratureSpec<T>,
) -> Result<BranchIntegrals<T>> {
    let (breaks, reach) = breakpoints(system, regime);
    let two = T::lit(2.0);
    let inv_root = (two * T::PI()).sqrt().recip();
    let ground = &system.ground;
    let positions = system.potential.positions();

    // Numerators after folding q with -q; M(-q) = conj M(q).
    let numerator_d = |q: T| cx(two * dipole_matrix_element(q, ground).norm_sqr());
    let numerator_f = |q: T, x: T| {
        let m = dipole_matrix_element(q, ground);
        cx(two * inv_root * (Complex::new(T::zero(), q * x).exp() * m).re)
    };

    let run = |num: &dyn Fn(T) -> Cx<T>| -> Result<Estimate<T>> {
        match *regime {
            Regime::Below { gamma } => {
                let g2 = gamma * gamma;
                let f = |q: T| num(q) * (-two / (q * q + g2));
                Ok(integrate_pieces(f, &breaks, spec)? + integrate_tail(f, reach, spec)?)
            }
            Regime::Above { omega } => {
                // -2 / (q^2 - Omega^2 - i0) = h(q) / (q - Omega - i0)
                let h = |q: T| num(q) * (-two / (q + omega));
                integrate_outgoing_pole(h, omega, &breaks, spec)
            }
        }
    };

    let d = run(&numerator_d)?.value;
    let f = positions
        .iter()
        .map(|&x| run(&|q| numerator_f(q, x)).map(|e| e.value))
        .collect::<Result<Vec<_>>>()?;
    Ok(BranchIntegrals { d, f })
}

/// `<d|G(E)|d>` for one branch. With `deflate` the bound-state pole of the
/// resolvent at `E = E0` is projected out of the well-space system.
fn branch_response<T: Real>(
    system: &System<T>,
    regime: &Regime<T>,
    spec: &QuadratureSpec<T>,
    deflate: bool,
) -> Result<Cx<T>> {
    let ints = branch_integrals(system, regime, spec)?;
    let wells = system.potential.wells();
    let n = wells.len();
    let coupling = if deflate {
        // Symmetric form diag(1/g) + G0 plus the outer product of its null vector.
        let c: Vec<T> = wells
            .iter()
            .map(|w| w.strength * system.ground.value(w.position))
            .collect();
        let cn = c.iter().fold(T::zero(), |s, x| s + *x * *x).sqrt();
        let b = CMatrix::from_fn(n, |l, j| {
            let diag = if l == j {
                cx(wells[l].strength.recip())
            } else {
                cx(T::zero())
            };
            diag + green0(regime, wells[l].position - wells[j].position)
                + cx(c[l] * c[j] / (cn * cn))
        });
        let sol = Lu::new(&b)?.solve(&ints.f);
        (0..n).fold(cx(T::zero()), |s, j| s + ints.f[j] * sol[j])
    } else {
        let m = dyson_matrix(&system.potential, regime);
        let sol = Lu::new(&m)?.solve(&ints.f);
        (0..n).fold(cx(T::zero()), |s, j| {
            s + ints.f[j] * sol[j] * wells[j].strength
        })
    };
    Ok(ints.d - coupling)
}

/// Polarizability at `omega / omega_B = ratio` from momentum-space quadrature.
pub fn alpha_momentum_quadrature<T: Real>(
    ratio: T,
    system: &System<T>,
    spec: &QuadratureSpec<T>,
) -> Result<PolarizabilityPoint<T>> {
    spec.validate()?;
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
    let e0 = system.e0();
    let omega = ratio * system.omega_b();
    let internal = if ratio == T::zero() {
        let regime = Regime::Below {
            gamma: system.kappa(),
        };
        -branch_response(system, &regime, spec, true)? * T::lit(2.0)
    } else {
        let plus = Regime::from_energy(e0 + omega, e0)?;
        let minus = Regime::from_energy(e0 - omega, e0)?;
        -(branch_response(system, &plus, spec, false)?
            + branch_response(system, &minus, spec, false)?)
    };
    let regime = if ratio > T::one() {
        RegimeTag::Above
    } else {
        RegimeTag::Below
    };
    let value = internal * system.atomic_factor();
    Ok(PolarizabilityPoint {
        omega_over_omega_b: ratio,
        value,
        regime,
        method: Method::Quadrature,
        pole_proximity: None,
        on_pole: !value.re.is_finite(),
    })
}
