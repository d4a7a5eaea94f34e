use std::f64::consts::PI;

use deltapol::bound_states::{ground_state, solve_odd_kappa};
use deltapol::closed_form::resonance_locate;
use deltapol::greens::{
    coeff_double, coeff_multi, coeff_multi_at, coeff_single, green0, kernel_integrals, odd_kernel,
    Branch, Regime,
};
use deltapol::linalg::{CMatrix, Lu};
use deltapol::quadrature::{
    integrate, integrate_pieces, integrate_tail, uniform_breaks, QuadratureSpec,
};
use deltapol::units::{build_scaled, PhysicalParams};
use deltapol::{Complex64, DeltaPotential, Error, Well};

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

fn spec() -> QuadratureSpec<f64> {
    QuadratureSpec {
        rel_tol: 1e-12,
        abs_tol: 1e-15,
        max_subdivisions: 20_000,
    }
}

/// `int_L^inf -2 cos(qr) / (pi q^2) dq`, two terms of the asymptotic series.
fn oscillating_tail(r: f64, l: f64) -> f64 {
    -2.0 / PI * (-(r * l).sin() / (r * l * l) + 2.0 * (r * l).cos() / (r * r * l * l * l))
}

/// `int dq/(2 pi) e^{iqr} / (E - q^2/2)` below threshold, `E = -gamma^2/2`.
fn g0_momentum_below(gamma: f64, r: f64) -> f64 {
    let f = |q: f64| c(-2.0 * (q * r).cos() / (q * q + gamma * gamma) / PI);
    if r == 0.0 {
        let head = integrate(f, 0.0, gamma, &spec()).unwrap().value;
        let tail = integrate_tail(f, gamma, &spec()).unwrap().value;
        return (head + tail).re;
    }
    let breaks = uniform_breaks(PI / r, (2000.0 / r).max(200.0 * gamma));
    let head = integrate_pieces(f, &breaks, &spec()).unwrap().value;
    head.re + oscillating_tail(r, *breaks.last().unwrap())
}

/// Same integral above threshold, `E = Omega^2/2 + i0`, for `r > 0`.
/// Principal value by subtraction near the pole, an explicit asymptotic tail.
fn g0_momentum_above(omega: f64, r: f64) -> Complex64 {
    let s = spec();
    // integrand on q > 0 is h(q) / (q - Omega)
    let h = |q: f64| c(-2.0 * (q * r).cos() / (q + omega) / PI);
    let h0 = h(omega);
    let sub = |q: f64| (h(q) - h0) / (q - omega);
    let near = integrate(sub, 0.0, omega, &s).unwrap().value
        + integrate(sub, omega, 2.0 * omega, &s).unwrap().value;
    let cut = 2000.0 / r;
    let mut breaks = vec![2.0 * omega];
    breaks.extend(
        uniform_breaks(PI / r, cut)
            .into_iter()
            .filter(|&b| b > 2.0 * omega),
    );
    let far = integrate_pieces(|q| h(q) / (q - omega), &breaks, &s)
        .unwrap()
        .value;
    // the PV of 1/(q - Omega) over [0, 2 Omega] vanishes, so h0 needs no correction
    let tail = oscillating_tail(r, *breaks.last().unwrap());
    let residue = Complex64::new(0.0, PI) * h0;
    near + far + c(tail) + residue
}

#[test]
fn position_resolvent_matches_momentum_integral_below_threshold() {
    for &(gamma, r) in &[(0.8, 0.0), (0.8, 1.3), (2.5, 0.4), (0.3, 4.0)] {
        let regime = Regime::Below { gamma };
        let want = g0_momentum_below(gamma, r);
        let got = green0(&regime, r);
        assert!(
            (got.re - want).abs() < 1e-9 * want.abs(),
            "gamma={gamma} r={r}: {got} vs {want}"
        );
        assert_eq!(got.im, 0.0);
    }
}

#[test]
fn position_resolvent_matches_momentum_integral_above_threshold() {
    for &(omega, r) in &[(0.7, 1.0), (1.6, 0.6), (0.4, 2.2)] {
        let regime = Regime::Above { omega };
        let want = g0_momentum_above(omega, r);
        let got = green0(&regime, r);
        assert!(
            (got - want).norm() < 1e-8 * want.norm(),
            "omega={omega} r={r}: {got} vs {want}"
        );
        // outgoing wave: -i e^{i Omega r} / Omega
        let outgoing = Complex64::new(0.0, -1.0) * Complex64::new(0.0, omega * r).exp() / omega;
        assert!((got - outgoing).norm() < 1e-14);
    }
}

#[test]
fn kernel_integrals_match_quadrature() {
    let (g, a) = (0.9, 0.7);
    for regime in [Regime::Below { gamma: 1.1 }, Regime::Above { omega: 0.8 }] {
        let ki = kernel_integrals(&regime, g, a);
        let (diag, off) = match regime {
            Regime::Below { gamma } => (
                c(g0_momentum_below(gamma, 0.0)),
                c(g0_momentum_below(gamma, 2.0 * a)),
            ),
            Regime::Above { omega } => (
                // r = 0 above threshold: only the residue and a real PV of zero
                Complex64::new(0.0, -1.0 / omega),
                g0_momentum_above(omega, 2.0 * a),
            ),
        };
        let i = c(1.0) + diag * g;
        let i3 = off * g;
        assert!((ki.i - i).norm() < 1e-9, "{regime:?}");
        assert!((ki.i3 - i3).norm() < 1e-8, "{regime:?}");
        assert!((ki.i1 - (i + i3)).norm() < 1e-8);
        assert!((ki.i2 - (i - i3)).norm() < 1e-8);
    }
}

#[test]
fn odd_kernel_is_a_stable_rewrite_of_i2() {
    for &(p, a) in &[(0.5, 0.9), (1.5, 0.9), (3.0, 2.0)] {
        let g = p / (2.0 * a);
        for regime in [Regime::Below { gamma: 0.6 }, Regime::Above { omega: 1.2 }] {
            let direct = kernel_integrals(&regime, g, a).i2;
            let stable = odd_kernel(p, regime.decay() * a);
            assert!((direct - stable).norm() < 1e-13);
        }
        // gamma a -> 0 limit is 1 - p
        let tiny = odd_kernel(p, Complex64::new(1e-9, 0.0));
        assert!((tiny - c(1.0 - p)).norm() < 1e-8);
    }
}

#[test]
fn double_well_coefficients_agree_with_matrix_solve() {
    let (p, a) = (1.5_f64, 0.944_863_f64);
    let g = p / (2.0 * a);
    let pot = DeltaPotential::symmetric_double(a, g).unwrap();
    let e0 = ground_state(p, a).unwrap().energy;
    for &(branch, omega) in &[
        (Branch::Minus, 0.3),
        (Branch::Plus, 0.2),
        (Branch::Plus, 1.7),
    ] {
        let w = omega * -e0;
        for &k in &[0.0, 0.4, 1.9] {
            let closed = coeff_double(g, a, branch, k, w).unwrap();
            let lu = coeff_multi_at(&pot, e0, branch, k, w).unwrap();
            for (x, y) in closed.values.iter().zip(&lu.values) {
                assert!(
                    (x - y).norm() < 1e-12 * x.norm().max(1e-3),
                    "k={k} {branch:?}"
                );
            }
        }
    }
}

#[test]
fn single_well_coefficient_matches_one_site_solve() {
    let g = 1.3;
    let pot = DeltaPotential::single(g).unwrap();
    for &(branch, omega) in &[
        (Branch::Minus, 0.4),
        (Branch::Plus, 0.4),
        (Branch::Plus, 2.0),
    ] {
        let a = coeff_single(g, branch, 0.7, omega).unwrap();
        let b = coeff_multi(&pot, branch, 0.7, omega).unwrap();
        assert!((a.values[0] - b.values[0]).norm() < 1e-12);
    }
}

#[test]
fn three_well_coefficients_match_quadrature_built_matrix() {
    let wells = vec![
        Well {
            position: -1.1_f64,
            strength: 0.8,
        },
        Well {
            position: 0.3,
            strength: 1.2,
        },
        Well {
            position: 1.6,
            strength: 0.5,
        },
    ];
    let pot = DeltaPotential::new(wells.clone()).unwrap();
    let e0 = deltapol::bound_states::multi_delta_spectrum(&pot)
        .unwrap()
        .ground()
        .energy;
    let omega = 0.35 * -e0;
    let k = 0.9;
    let got = coeff_multi_at(&pot, e0, Branch::Minus, k, omega).unwrap();

    let e: f64 = e0 - omega;
    let gamma = (-2.0 * e).sqrt();
    let m = CMatrix::from_fn(3, |l, j| {
        let r = (wells[l].position - wells[j].position).abs();
        let delta = if l == j { 1.0 } else { 0.0 };
        c(delta + wells[j].strength * g0_momentum_below(gamma, r))
    });
    let g0k = 1.0 / (e - k * k / 2.0);
    let rhs: Vec<Complex64> = wells
        .iter()
        .map(|w| Complex64::new(0.0, k * w.position).exp() * g0k)
        .collect();
    let want = Lu::new(&m).unwrap().solve(&rhs);
    for (x, y) in got.values.iter().zip(&want) {
        assert!((x - y).norm() < 1e-6 * y.norm(), "{x} vs {y}");
    }
}

#[test]
fn three_well_coefficients_match_born_series_far_above_threshold() {
    let pot = DeltaPotential::new(vec![
        Well {
            position: -0.5,
            strength: 0.3,
        },
        Well {
            position: 0.2,
            strength: 0.4,
        },
        Well {
            position: 1.0,
            strength: 0.2,
        },
    ])
    .unwrap();
    let e0 = deltapol::bound_states::multi_delta_spectrum(&pot)
        .unwrap()
        .ground()
        .energy;
    let omega = 30.0 * -e0;
    let k = 0.6;
    let got = coeff_multi_at(&pot, e0, Branch::Plus, k, omega).unwrap();
    let regime = Regime::from_energy(e0 + omega, e0).unwrap();
    let g0k = 1.0 / (regime.energy() - k * k / 2.0);
    let w = pot.wells();
    let source: Vec<Complex64> = w
        .iter()
        .map(|x| Complex64::new(0.0, k * x.position).exp() * g0k)
        .collect();
    // A = s - g G0 A, iterated
    let mut a = source.clone();
    for _ in 0..200 {
        a = (0..3)
            .map(|l| {
                let mut v = source[l];
                for j in 0..3 {
                    v -= green0(&regime, w[l].position - w[j].position) * w[j].strength * a[j];
                }
                v
            })
            .collect();
    }
    for (x, y) in got.values.iter().zip(&a) {
        assert!((x - y).norm() < 1e-12 * y.norm());
    }
}

#[test]
fn odd_kernel_zero_sits_at_the_odd_excitation_energy() {
    for &p in &[1.2, 1.5, 2.5, 4.0] {
        let s = build_scaled(PhysicalParams::electron(1.0_f64), p, false).unwrap();
        let k1 = solve_odd_kappa(p, s.a).unwrap().unwrap();
        let gap = (s.k0 * s.k0 - k1 * k1) / 2.0;
        let r = resonance_locate(&s).unwrap();
        assert!((r * s.omega_b() - gap).abs() < 1e-8 * gap, "p={p}");
    }
    let s = build_scaled(PhysicalParams::electron(1.0_f64), 0.8, false).unwrap();
    assert!(resonance_locate(&s).is_none());
}

#[test]
fn odd_coefficient_grows_like_inverse_distance_to_the_pole() {
    let s = build_scaled(PhysicalParams::electron(1.0_f64), 1.5, false).unwrap();
    let res = resonance_locate(&s).unwrap() * s.omega_b();
    let k = 0.8;
    let mut prev = None;
    for &d in &[1e-2, 1e-3, 1e-4] {
        let w = res * (1.0 - d);
        let a = coeff_double(s.g_prime, s.a, Branch::Plus, k, w).unwrap();
        let odd = (a.values[1] - a.values[0]) / 2.0;
        if let Some(p) = prev {
            let growth: f64 = odd.norm() / p;
            assert!((growth - 10.0).abs() < 0.2, "growth {growth}");
        }
        prev = Some(odd.norm());
        assert!(!a.pole);
    }
    let at = coeff_double(s.g_prime, s.a, Branch::Plus, k, res * (1.0 - 1e-9)).unwrap();
    assert!(at.pole);
}

#[test]
fn conjugation_and_mirror_symmetry() {
    let (p, a) = (1.5_f64, 0.944_863_f64);
    let g = p / (2.0 * a);
    let e0 = ground_state(p, a).unwrap().energy;
    for &k in &[0.3, 1.1] {
        // below threshold the resolvent is real
        let w = 0.4 * -e0;
        let plus = coeff_double(g, a, Branch::Plus, k, w).unwrap();
        let minus = coeff_double(g, a, Branch::Plus, -k, w).unwrap();
        assert!((plus.values[0].conj() - minus.values[0]).norm() < 1e-14);
        // mirror: A1(k) = A2(-k) in either regime
        for w in [0.4 * -e0, 2.5 * -e0] {
            let plus = coeff_double(g, a, Branch::Plus, k, w).unwrap();
            let minus = coeff_double(g, a, Branch::Plus, -k, w).unwrap();
            assert!((plus.values[0] - minus.values[1]).norm() < 1e-14);
        }
    }
}

#[test]
fn threshold_and_on_shell_are_refused() {
    let (p, a) = (1.5_f64, 0.944_863_f64);
    let g = p / (2.0 * a);
    let e0 = ground_state(p, a).unwrap().energy;
    let e = coeff_double(g, a, Branch::Plus, 0.5, -e0).unwrap_err();
    assert!(matches!(e, Error::ThresholdExcluded { .. }));
    // on shell: k^2/2 = E0 + omega
    let omega: f64 = 2.0 * -e0;
    let k = (2.0 * (e0 + omega)).sqrt();
    let e = coeff_double(g, a, Branch::Plus, k, omega).unwrap_err();
    assert!(matches!(e, Error::OnPole { .. }));
    assert!(coeff_single(g, Branch::Plus, 0.5, -1.0).is_err());
}
