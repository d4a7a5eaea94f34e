//! Bound states of one, two, or many attractive delta wells.
//!
//! Every bound state of a delta-well potential is a superposition of
//! free-particle decaying exponentials centered on the wells,
//! `psi(x) = sum_j c_j exp(-kappa |x - x_j|)`, which is how [`BoundState`]
//! stores it.

use crate::error::{Error, Result};
use crate::linalg::{negative_inertia, CMatrix, Lu};
use crate::roots::{find_root, RootTolerance};
use crate::scalar::{cx, Real};

/// One attractive delta well, `-strength * delta(x - position)` in scaled units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Well<T> {
    pub position: T,
    /// Scaled strength `g'`, inverse length.
    pub strength: T,
}

/// Ordered collection of attractive delta wells.
#[derive(Debug, Clone, PartialEq)]
pub struct DeltaPotential<T> {
    wells: Vec<Well<T>>,
}

impl<T: Real> DeltaPotential<T> {
    /// Validates ordering and attractiveness.
    pub fn new(wells: Vec<Well<T>>) -> Result<Self> {
        if wells.is_empty() {
            return Err(Error::InvalidParameter(
                "potential needs at least one well".into(),
            ));
        }
        for w in &wells {
            if !(w.strength > T::zero()) || !w.strength.is_finite() || !w.position.is_finite() {
                return Err(Error::InvalidParameter(format!(
                    "well at {} has non-attractive strength {}",
                    w.position, w.strength
                )));
            }
        }
        if wells.windows(2).any(|p| !(p[1].position > p[0].position)) {
            return Err(Error::InvalidParameter(
                "well positions must be strictly increasing".into(),
            ));
        }
        Ok(Self { wells })
    }

    pub fn single(strength: T) -> Result<Self> {
        Self::new(vec![Well {
            position: T::zero(),
            strength,
        }])
    }

    /// Equal wells at `-a` and `+a`.
    pub fn symmetric_double(a: T, strength: T) -> Result<Self> {
        Self::new(vec![
            Well {
                position: -a,
                strength,
            },
            Well {
                position: a,
                strength,
            },
        ])
    }

    pub fn wells(&self) -> &[Well<T>] {
        &self.wells
    }

    pub fn len(&self) -> usize {
        self.wells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.wells.is_empty()
    }

    pub fn positions(&self) -> Vec<T> {
        self.wells.iter().map(|w| w.position).collect()
    }

    pub fn total_strength(&self) -> T {
        self.wells.iter().fold(T::zero(), |s, w| s + w.strength)
    }

    /// True when the potential is its own mirror image about the origin.
    pub fn is_mirror_symmetric(&self) -> bool {
        let n = self.wells.len();
        let tol = T::tol(1e-12);
        (0..n).all(|i| {
            let (l, r) = (self.wells[i], self.wells[n - 1 - i]);
            (l.position + r.position).abs() <= tol * (T::one() + r.position.abs())
                && (l.strength - r.strength).abs() <= tol * r.strength
        })
    }

    /// The matrix `K(kappa)` with `K_lj = (g_j / kappa) exp(-kappa |x_l - x_j|)`.
    fn birman_schwinger(&self, kappa: T) -> Vec<Vec<T>> {
        let n = self.wells.len();
        (0..n)
            .map(|l| {
                (0..n)
                    .map(|j| {
                        let d = (self.wells[l].position - self.wells[j].position).abs();
                        self.wells[j].strength / kappa * (-kappa * d).exp()
                    })
                    .collect()
            })
            .collect()
    }

    /// `det(1 - K(kappa))`; vanishes exactly at bound-state decay constants.
    pub fn bound_state_determinant(&self, kappa: T) -> T {
        let k = self.birman_schwinger(kappa);
        let n = k.len();
        let m = CMatrix::from_fn(n, |i, j| {
            cx(if i == j { T::one() } else { T::zero() } - k[i][j])
        });
        Lu::new(&m)
            .map(|lu| lu.determinant().re)
            .unwrap_or(T::zero())
    }

    /// Number of bound states with decay constant above `kappa`.
    fn count_deeper_than(&self, kappa: T) -> usize {
        // kappa (1 - K) symmetrized with sqrt(g): kappa - sqrt(g_l g_j) e^{-kappa |x_l - x_j|}.
        // Its entries stay O(g) as kappa -> 0, so Sylvester inertia is reliable.
        let n = self.wells.len();
        let mut k = kappa;
        for attempt in 0..4 {
            // A marginal state (exactly on kappa) counts as shallower.
            let lift = if attempt == 3 {
                T::epsilon() * T::lit(4.0) * self.total_strength()
            } else {
                T::zero()
            };
            let sym: Vec<Vec<T>> = (0..n)
                .map(|l| {
                    (0..n)
                        .map(|j| {
                            let (wl, wj) = (self.wells[l], self.wells[j]);
                            let d = (wl.position - wj.position).abs();
                            let c = (wl.strength * wj.strength).sqrt() * (-k * d).exp();
                            if l == j {
                                k - c + lift
                            } else {
                                -c
                            }
                        })
                        .collect()
                })
                .collect();
            if let Some(count) = negative_inertia(&sym) {
                return count;
            }
            // Exactly on a root: step off it.
            k = k * (T::one() + T::lit(1e-10));
        }
        0
    }
}

/// Parity of a bound state under `x -> -x`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parity {
    Even,
    Odd,
    /// Asymmetric or many-well states, where parity is not tracked.
    None,
}

/// A normalized bound state.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundState<T> {
    pub parity: Parity,
    /// Decay constant, inverse length.
    pub kappa: T,
    /// `-kappa^2 / 2` in internal units.
    pub energy: T,
    /// `N(k0 a)` of the symmetric-double-well ground state.
    pub norm: Option<T>,
    centers: Vec<T>,
    amplitudes: Vec<T>,
}

impl<T: Real> BoundState<T> {
    fn from_superposition(parity: Parity, kappa: T, centers: Vec<T>, amplitudes: Vec<T>) -> Self {
        let mut s = Self {
            parity,
            kappa,
            energy: -kappa * kappa / T::lit(2.0),
            norm: None,
            centers,
            amplitudes,
        };
        let n2 = s.norm_squared();
        let scale = n2.sqrt().recip();
        s.amplitudes.iter_mut().for_each(|c| *c = *c * scale);
        s
    }

    /// Well positions the state is built on.
    pub fn centers(&self) -> &[T] {
        &self.centers
    }

    /// Superposition coefficients `c_j`.
    pub fn amplitudes(&self) -> &[T] {
        &self.amplitudes
    }

    fn norm_squared(&self) -> T {
        let k = self.kappa;
        let mut s = T::zero();
        for (xl, cl) in self.centers.iter().zip(&self.amplitudes) {
            for (xj, cj) in self.centers.iter().zip(&self.amplitudes) {
                let d = (*xl - *xj).abs();
                s = s + *cl * *cj * (d + k.recip()) * (-k * d).exp();
            }
        }
        s
    }

    pub fn value(&self, x: T) -> T {
        self.centers
            .iter()
            .zip(&self.amplitudes)
            .fold(T::zero(), |s, (xj, c)| {
                s + *c * (-self.kappa * (x - *xj).abs()).exp()
            })
    }

    /// One-sided derivative; `from_right` selects `x+` at a well.
    pub fn derivative(&self, x: T, from_right: bool) -> T {
        self.centers
            .iter()
            .zip(&self.amplitudes)
            .fold(T::zero(), |s, (xj, c)| {
                let d = x - *xj;
                let sign = if d > T::zero() || (d == T::zero() && from_right) {
                    -T::one()
                } else {
                    T::one()
                };
                s + *c * sign * self.kappa * (-self.kappa * d.abs()).exp()
            })
    }

    /// Expectation value of the position.
    pub fn mean_position(&self) -> T {
        let k = self.kappa;
        let two = T::lit(2.0);
        let mut s = T::zero();
        for (xl, cl) in self.centers.iter().zip(&self.amplitudes) {
            for (xj, cj) in self.centers.iter().zip(&self.amplitudes) {
                let d = (*xl - *xj).abs();
                s = s + *cl * *cj * (*xl + *xj) / two * (d + k.recip()) * (-k * d).exp();
            }
        }
        s
    }
}

fn even_residual<T: Real>(u: T, p: T) -> T {
    u * (T::one() + u.tanh()) - p
}

fn odd_residual<T: Real>(v: T, p: T) -> T {
    v + v / v.tanh() - p
}

fn root_tolerance<T: Real>() -> RootTolerance<T> {
    RootTolerance {
        residual: T::tol(1e-13),
        ..RootTolerance::default()
    }
}

/// Even-state decay constant `k0`: the root of `u (1 + tanh u) = p`, `u = k0 a`.
pub fn solve_even_kappa<T: Real>(p: T, a: T) -> Result<T> {
    if !(p > T::zero()) || !(a > T::zero()) {
        return Err(Error::InvalidParameter(format!(
            "need p > 0 and a > 0, got p={p}, a={a}"
        )));
    }
    let half = p / T::lit(2.0);
    let u = find_root(|u| even_residual(u, p), half, p, root_tolerance())?;
    Ok(u / a)
}

/// Odd-state decay constant `k1`: the root of `v (1 + coth v) = p`, present
/// only for `p > 1`.
pub fn solve_odd_kappa<T: Real>(p: T, a: T) -> Result<Option<T>> {
    if !(p > T::zero()) || !(a > T::zero()) {
        return Err(Error::InvalidParameter(format!(
            "need p > 0 and a > 0, got p={p}, a={a}"
        )));
    }
    if p <= T::one() {
        return Ok(None);
    }
    // v coth v <= 1 + v^2/3 for v <= 1, so this lower end is below the root.
    let lo = ((p - T::one()) / T::lit(2.0)).min(T::one());
    let hi = p / T::lit(2.0);
    let v = find_root(|v| odd_residual(v, p), lo, hi, root_tolerance())?;
    Ok(Some(v / a))
}

/// Even ground state of the symmetric double well with wells at `+-a`.
pub fn ground_state<T: Real>(p: T, a: T) -> Result<BoundState<T>> {
    let k = solve_even_kappa(p, a)?;
    let two = T::lit(2.0);
    let norm = (two * k / ((two * k * a).exp() + two * k * a + T::one())).sqrt();
    // Inside the wells psi = N cosh(kx) = c (e^{-k|x+a|} + e^{-k|x-a|}) with c = N e^{ka} / 2.
    let c = norm * (k * a).exp() / two;
    Ok(BoundState {
        parity: Parity::Even,
        kappa: k,
        energy: -k * k / two,
        norm: Some(norm),
        centers: vec![-a, a],
        amplitudes: vec![c, c],
    })
}

/// Odd excited state of the symmetric double well, when it exists.
pub fn odd_state<T: Real>(p: T, a: T) -> Result<Option<BoundState<T>>> {
    Ok(solve_odd_kappa(p, a)?.map(|k| {
        BoundState::from_superposition(Parity::Odd, k, vec![-a, a], vec![-T::one(), T::one()])
    }))
}

/// Bound-state spectrum of a general delta-well potential.
#[derive(Debug, Clone)]
pub struct Spectrum<T> {
    /// Sorted by decreasing `kappa`, ground state first.
    pub states: Vec<BoundState<T>>,
    /// Set when two decay constants agree within `1e-3` relative.
    pub near_degenerate: bool,
}

impl<T: Real> Spectrum<T> {
    pub fn ground(&self) -> &BoundState<T> {
        &self.states[0]
    }
}

/// Finds every bound state of `potential` with `kappa` above a tiny floor.
///
/// Roots of `det(1 - K(kappa)) = 0` are bracketed by the eigenvalue count of
/// the symmetrized kernel and refined by bisection on that count, then
/// polished on the determinant.
pub fn multi_delta_spectrum<T: Real>(potential: &DeltaPotential<T>) -> Result<Spectrum<T>> {
    let upper = potential.total_strength() * T::lit(1.000_001);
    let lower = upper * T::lit(1e-12);
    let n_total = potential.count_deeper_than(lower);
    if n_total == 0 || potential.count_deeper_than(upper) != 0 {
        return Err(Error::NoBoundState);
    }

    let mut kappas = Vec::with_capacity(n_total);
    let mut stack = vec![(lower, upper, n_total, 0usize)];
    let two = T::lit(2.0);
    while let Some((lo, hi, n_lo, n_hi)) = stack.pop() {
        let roots = n_lo - n_hi;
        if roots == 0 {
            continue;
        }
        if roots > 1 && (hi - lo) > T::epsilon() * T::lit(16.0) * hi {
            let mid = lo + (hi - lo) / two;
            let n_mid = potential.count_deeper_than(mid);
            stack.push((lo, mid, n_lo, n_mid));
            stack.push((mid, hi, n_mid, n_hi));
            continue;
        }
        if roots > 1 {
            // Unresolvable cluster: report the repeated root.
            kappas.extend(std::iter::repeat_n(lo + (hi - lo) / two, roots));
            continue;
        }
        // Exactly one root: bisect on the count, then polish on the determinant.
        let (mut a, mut b) = (lo, hi);
        for _ in 0..60 {
            let mid = a + (b - a) / two;
            if potential.count_deeper_than(mid) >= n_lo {
                a = mid;
            } else {
                b = mid;
            }
            if b - a < T::tol(1e-6) * b {
                break;
            }
        }
        let det = |k: T| potential.bound_state_determinant(k);
        let root = find_root(
            det,
            a,
            b,
            RootTolerance {
                residual: T::zero(),
                ..RootTolerance::default()
            },
        )
        .unwrap_or(a + (b - a) / two);
        kappas.push(root);
    }
    kappas.sort_by(|x, y| y.partial_cmp(x).unwrap());

    let near_degenerate = kappas
        .windows(2)
        .any(|w| (w[0] - w[1]).abs() < T::lit(1e-3) * w[0]);

    let centers = potential.positions();
    let states = kappas
        .into_iter()
        .map(|k| {
            let amps = null_vector(potential, k);
            BoundState::from_superposition(Parity::None, k, centers.clone(), amps)
        })
        .collect();
    Ok(Spectrum {
        states,
        near_degenerate,
    })
}

/// Well amplitudes of the bound state at `kappa`: the null vector of
/// `1 - K(kappa)`, found by inverse iteration on the symmetrized kernel.
fn null_vector<T: Real>(potential: &DeltaPotential<T>, kappa: T) -> Vec<T> {
    let n = potential.len();
    if n == 1 {
        return vec![T::one()];
    }
    let k = potential.birman_schwinger(kappa);
    let shift = T::tol(1e-10);
    let m = CMatrix::from_fn(n, |i, j| {
        cx(if i == j { T::one() + shift } else { T::zero() } - k[i][j])
    });
    let lu = match Lu::new(&m) {
        Ok(lu) => lu,
        Err(_) => return vec![T::one(); n],
    };
    let mut v: Vec<_> = (0..n)
        .map(|i| cx(T::one() + T::lit(i as f64) * T::lit(0.1)))
        .collect();
    for _ in 0..3 {
        v = lu.solve(&v);
        let norm = v.iter().fold(T::zero(), |s, z| s + z.norm_sqr()).sqrt();
        v.iter_mut().for_each(|z| *z = *z / norm);
    }
    // Right null vector of 1 - K in the g-weighted sense: psi amplitudes are g_j * A_j.
    // K_lj = g_j G_lj so (1 - K) v = 0 gives v_l = sum_j G_lj g_j v_j, which is
    // psi(x_l) when psi = sum_j g_j v_j e^{-kappa|x - x_j|} / kappa.
    let mut amps: Vec<T> = potential
        .wells()
        .iter()
        .zip(&v)
        .map(|(w, z)| w.strength * z.re / kappa)
        .collect();
    let big = amps
        .iter()
        .copied()
        .fold(T::zero(), |m, x| if x.abs() > m.abs() { x } else { m });
    if big < T::zero() {
        amps.iter_mut().for_each(|x| *x = -*x);
    }
    amps
}

#[cfg(test)]
mod tests {
    use super::*;

    // Independent plain bisection used to freeze expected roots.
    fn bisect(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if (f(mid) > 0.0) == (f(hi) > 0.0) {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        0.5 * (lo + hi)
    }

    #[test]
    fn even_root_matches_bisection_oracle() {
        for &(p, expected) in &[(0.5_f64, 0.36945), (1.5, 0.8793)] {
            let oracle = bisect(|u| u * (1.0 + u.tanh()) - p, 0.0, 2.0);
            assert!((oracle - expected).abs() < 1e-4);
            let u = solve_even_kappa::<f64>(p, 1.0).unwrap();
            assert!((u - oracle).abs() < 1e-12);
            assert!(even_residual(u, p).abs() < 1e-12);
        }
    }

    #[test]
    fn small_p_even_root_tends_to_p() {
        let u = solve_even_kappa::<f64>(1e-3, 1.0).unwrap();
        assert!((u - 9.99e-4).abs() < 1e-6);
    }

    #[test]
    fn odd_root_exists_only_above_one() {
        assert_eq!(solve_odd_kappa::<f64>(0.5, 1.0).unwrap(), None);
        assert_eq!(solve_odd_kappa::<f64>(1.0, 1.0).unwrap(), None);
        let v = solve_odd_kappa::<f64>(1.0 + 1e-6, 1.0).unwrap().unwrap();
        assert!(v < 1e-5);
        let v = solve_odd_kappa::<f64>(1.5, 1.0).unwrap().unwrap();
        assert!((v - 0.437_109).abs() < 1e-6);
        assert!(odd_residual(v, 1.5).abs() < 1e-12);
        let u = solve_even_kappa::<f64>(1.5, 1.0).unwrap();
        assert!(((v / u).powi(2) - 0.2471).abs() < 5e-4);
    }

    #[test]
    fn ground_state_is_normalized_and_continuous() {
        let a = 0.5 * crate::units::ANGSTROM_IN_BOHR;
        let s = ground_state::<f64>(0.5, a).unwrap();
        let n = s.norm.unwrap();
        let k = s.kappa;
        // Piecewise closed form of the normalization integral.
        let inside = n * n * (a + (2.0 * k * a).sinh() / (2.0 * k));
        let outside = n * n * (k * a).cosh().powi(2) / k;
        assert!((inside + outside - 1.0).abs() < 1e-12);
        assert!((s.value(a) - n * (k * a).cosh()).abs() < 1e-14);
        assert!((s.value(0.3 * a) - n * (0.3 * k * a).cosh()).abs() < 1e-14);
        assert!((s.value(2.0 * a) - n * (k * a).cosh() * (-k * a).exp()).abs() < 1e-14);
        assert_eq!(s.energy, -k * k / 2.0);
    }

    #[test]
    fn ground_state_norm_tends_to_single_well() {
        let total: f64 = 0.8;
        let a = 1e-7;
        let p = total * a; // 2 g a with 2 g = total
        let s = ground_state::<f64>(p, a).unwrap();
        assert!((s.norm.unwrap() - s.kappa.sqrt()).abs() < 1e-6);
        assert!((s.kappa - total).abs() < 1e-6);
    }

    #[test]
    fn derivative_jump_matches_strength() {
        let a: f64 = 0.7;
        let p = 1.5;
        let g = p / (2.0 * a);
        let s = ground_state::<f64>(p, a).unwrap();
        for &x in &[-a, a] {
            let jump = s.derivative(x, true) - s.derivative(x, false);
            assert!((jump + 2.0 * g * s.value(x)).abs() < 1e-10 * s.value(x).abs());
        }
        let o = odd_state::<f64>(p, a).unwrap().unwrap();
        let jump = o.derivative(a, true) - o.derivative(a, false);
        assert!((jump + 2.0 * g * o.value(a)).abs() < 1e-10 * o.value(a).abs());
    }

    #[test]
    fn single_well_spectrum_is_exact() {
        let pot = DeltaPotential::<f64>::single(0.7).unwrap();
        let spec = multi_delta_spectrum(&pot).unwrap();
        assert_eq!(spec.states.len(), 1);
        assert!((spec.ground().kappa - 0.7).abs() < 1e-13);
    }

    #[test]
    fn double_well_spectrum_matches_parity_solvers() {
        let a: f64 = 0.9;
        for &p in &[0.5, 1.5, 3.0, 4.5] {
            let pot = DeltaPotential::symmetric_double(a, p / (2.0 * a)).unwrap();
            let spec = multi_delta_spectrum(&pot).unwrap();
            let k0 = solve_even_kappa::<f64>(p, a).unwrap();
            assert!((spec.states[0].kappa - k0).abs() < 1e-10 * k0);
            match solve_odd_kappa::<f64>(p, a).unwrap() {
                Some(k1) => {
                    assert_eq!(spec.states.len(), 2);
                    assert!((spec.states[1].kappa - k1).abs() < 1e-10 * k1);
                }
                None => assert_eq!(spec.states.len(), 1),
            }
            let g = ground_state::<f64>(p, a).unwrap();
            for &x in &[-2.0, -0.3, 0.0, 0.9, 1.7] {
                assert!((spec.ground().value(x) - g.value(x)).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn multi_well_states_satisfy_jump_conditions() {
        let pot = DeltaPotential::new(vec![
            Well {
                position: -1.5_f64,
                strength: 0.8,
            },
            Well {
                position: 0.2,
                strength: 0.5,
            },
            Well {
                position: 1.1,
                strength: 1.1,
            },
        ])
        .unwrap();
        let spec = multi_delta_spectrum(&pot).unwrap();
        for s in &spec.states {
            assert!(s.kappa > 0.0);
            for w in pot.wells() {
                let jump = s.derivative(w.position, true) - s.derivative(w.position, false);
                let target = -2.0 * w.strength * s.value(w.position);
                assert!((jump - target).abs() < 1e-8 * target.abs().max(1e-3));
            }
        }
    }

    #[test]
    fn mean_position_vanishes_for_symmetric_state() {
        let g = ground_state::<f64>(1.2, 0.8).unwrap();
        assert!(g.mean_position().abs() < 1e-14_f64);
    }
}
