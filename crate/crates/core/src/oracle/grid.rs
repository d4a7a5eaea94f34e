//! Finite-difference solution of `(E0 +- omega - H) psi = d` on a grid.
//!
//! Wells sit on nodes with strength `g / h`. The box edges carry the exact
//! discrete exterior solution: decaying below threshold and outgoing above.
//! Results at `h` and `h / 2` (and `h / 4` for the order check) are
//! combined by Richardson extrapolation.

use num_complex::Complex;

use crate::closed_form::{Method, PolarizabilityPoint, RegimeTag};
use crate::error::{Error, Result};
use crate::greens::THRESHOLD_EXCLUSION;
use crate::linalg::{solve_tridiagonal, SymTridiagonal};
use crate::scalar::{cx, rel_diff, Cx, Real};
use crate::system::System;

use super::richardson;

/// Uniform grid `x_i = origin + i * spacing`, `i = 0..points`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec<T> {
    pub box_half_length: T,
    pub points: usize,
    pub spacing: T,
    pub origin: T,
}

impl<T: Real> GridSpec<T> {
    /// Largest spacing allowed for `system`: `min(1 / (10 kappa), a / 20)`
    /// with `a` half the smallest well separation.
    pub fn max_spacing(system: &System<T>) -> T {
        let mut h = (T::lit(10.0) * system.kappa()).recip();
        let pos = system.potential.positions();
        for w in pos.windows(2) {
            h = h.min((w[1] - w[0]) / T::lit(40.0));
        }
        h
    }

    /// Node-aligned grid with half-length `box_factor / kappa` (at least 30)
    /// and the largest admissible spacing divided by `2^refine`.
    pub fn for_system(system: &System<T>, box_factor: T, refine: u32) -> Result<Self> {
        if box_factor < T::lit(30.0) {
            return Err(Error::InvalidParameter(
                "box half-length must be at least 30 / kappa".into(),
            ));
        }
        let hmax = Self::max_spacing(system);
        let pos = system.potential.positions();
        let mut h = hmax;
        if pos.len() > 1 {
            let first = pos[1] - pos[0];
            let mut m = (first / hmax).ceil().to_usize().unwrap_or(1).max(1);
            let tol = T::lit(1e-9);
            loop {
                let cand = first / T::lit(m as f64);
                let aligned = pos.iter().all(|x| {
                    let r = (*x - pos[0]) / cand;
                    (r - r.round()).abs() < tol * r.abs().max(T::one())
                });
                if aligned {
                    h = cand;
                    break;
                }
                m += 1;
                if m > 200_000 {
                    return Err(Error::GridAlignment {
                        positions: pos.iter().map(|x| x.as_f64()).collect(),
                        max_spacing: hmax.as_f64(),
                    });
                }
            }
        }
        h = h / T::lit(2f64.powi(refine as i32));
        let half = box_factor / system.kappa();
        let mid = (pos[0] + pos[pos.len() - 1]) / T::lit(2.0);
        // Nodes at pos[0] + j h, symmetric about the midpoint when it is itself a node or half-node.
        let left = ((half + pos[0] - mid) / h).ceil().to_usize().unwrap_or(0);
        let right = ((half + mid - pos[0]) / h).ceil().to_usize().unwrap_or(0);
        let spec = Self {
            box_half_length: half,
            points: left + right + 1,
            spacing: h,
            origin: pos[0] - T::lit(left as f64) * h,
        };
        spec.validate_for(system)?;
        Ok(spec)
    }

    /// Same grid with the spacing halved `times` times.
    pub fn refined(&self, times: u32) -> Self {
        let f = 1usize << times;
        Self {
            box_half_length: self.box_half_length,
            points: (self.points - 1) * f + 1,
            spacing: self.spacing / T::lit(f as f64),
            origin: self.origin,
        }
    }

    /// Same spacing, box twice as long on both sides.
    pub fn doubled_box(&self) -> Self {
        let extra = self.points / 2 + 1;
        Self {
            box_half_length: self.box_half_length * T::lit(2.0),
            points: self.points + 2 * extra,
            spacing: self.spacing,
            origin: self.origin - T::lit(extra as f64) * self.spacing,
        }
    }

    pub fn x(&self, i: usize) -> T {
        self.origin + T::lit(i as f64) * self.spacing
    }

    /// Checks the spacing and box-size invariants and well alignment.
    pub fn validate_for(&self, system: &System<T>) -> Result<()> {
        let slack = T::one() + T::lit(1e-9);
        if self.spacing > Self::max_spacing(system) * slack || !(self.spacing > T::zero()) {
            return Err(Error::InvalidParameter(format!(
                "grid spacing {} exceeds the limit {}",
                self.spacing,
                Self::max_spacing(system)
            )));
        }
        if self.box_half_length * system.kappa() < T::lit(30.0) / slack {
            return Err(Error::InvalidParameter(
                "box half-length below 30 / kappa".into(),
            ));
        }
        self.well_nodes(system).map(|_| ())
    }

    fn well_nodes(&self, system: &System<T>) -> Result<Vec<usize>> {
        system
            .potential
            .positions()
            .iter()
            .map(|&x| {
                let r = (x - self.origin) / self.spacing;
                let i = r.round();
                if (r - i).abs() > T::lit(1e-6)
                    || i < T::one()
                    || i >= T::lit((self.points - 1) as f64)
                {
                    Err(Error::GridAlignment {
                        positions: system
                            .potential
                            .positions()
                            .iter()
                            .map(|x| x.as_f64())
                            .collect(),
                        max_spacing: self.spacing.as_f64(),
                    })
                } else {
                    Ok(i.to_usize().unwrap())
                }
            })
            .collect()
    }

    /// Node potential `V_i` (wells only).
    pub fn potential(&self, system: &System<T>) -> Result<Vec<T>> {
        let mut v = vec![T::zero(); self.points];
        for (i, w) in self
            .well_nodes(system)?
            .into_iter()
            .zip(system.potential.wells())
        {
            v[i] = v[i] - w.strength / self.spacing;
        }
        Ok(v)
    }

    /// Dirichlet-box Hamiltonian `-1/2 D2 + V`.
    pub fn hamiltonian(&self, system: &System<T>) -> Result<SymTridiagonal<T>> {
        let h2 = self.spacing * self.spacing;
        let v = self.potential(system)?;
        Ok(SymTridiagonal {
            diag: v.iter().map(|&vi| h2.recip() + vi).collect(),
            off: vec![-(T::lit(2.0) * h2).recip(); self.points - 1],
        })
    }
}

/// Bound-state energies of the boxed grid Hamiltonian, lowest first.
pub fn grid_bound_energies<T: Real>(system: &System<T>, grid: &GridSpec<T>) -> Result<Vec<T>> {
    let h = grid.hamiltonian(system)?;
    let n = h.count_below(T::zero());
    Ok((0..n).map(|i| h.eigenvalue(i)).collect())
}

/// Ground state on the grid: energy, node values (unit continuum norm) and `<x>`.
pub struct GridGround<T> {
    pub energy: T,
    pub psi: Vec<T>,
    pub mean_x: T,
}

pub fn grid_ground<T: Real>(system: &System<T>, grid: &GridSpec<T>) -> Result<GridGround<T>> {
    let ham = grid.hamiltonian(system)?;
    let energy = ham.eigenvalue(0);
    let v = ham.eigenvector(energy);
    let mean_x = v
        .iter()
        .enumerate()
        .fold(T::zero(), |s, (i, c)| s + *c * *c * grid.x(i));
    let scale = grid.spacing.sqrt().recip();
    Ok(GridGround {
        energy,
        psi: v.into_iter().map(|c| c * scale).collect(),
        mean_x,
    })
}

/// Closure of the box edges.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Boundary<T> {
    /// Exact discrete exterior solution (decaying or outgoing).
    Transparent,
    /// Dirichlet edges behind a quadratic complex absorbing potential of the
    /// given width (added outside the box) and peak strength.
    AbsorbingRamp { width: T, strength: T },
}

/// Exterior ratio `psi_{i+1} / psi_i` of the free discrete equation at energy `e`.
fn exterior_ratio<T: Real>(e: T, h: T) -> Result<Cx<T>> {
    let c = T::one() - h * h * e;
    if c >= T::one() {
        Ok(cx(c - (c * c - T::one()).sqrt()))
    } else if c > -T::one() {
        Ok(Complex::new(c, (T::one() - c * c).sqrt()))
    } else {
        Err(Error::InvalidParameter(
            "energy beyond the grid band edge; refine the grid".into(),
        ))
    }
}

/// `<d|G(e)|d>` on one grid, where `d = (x - <x>) psi0`.
fn branch_response<T: Real>(
    grid: &GridSpec<T>,
    v: &[Cx<T>],
    d: &[T],
    e: T,
    boundary: &Boundary<T>,
    null_vector: Option<&[T]>,
) -> Result<Cx<T>> {
    let h = grid.spacing;
    let n = v.len();
    let t = (T::lit(2.0) * h * h).recip();
    let mut diag: Vec<Cx<T>> = v.iter().map(|vi| cx(e - h.powi(-2)) - *vi).collect();
    let mut sub = vec![cx(t); n - 1];
    let mut sup = vec![cx(t); n - 1];
    let mut rhs: Vec<Cx<T>> = d.iter().map(|&x| cx(x)).collect();
    if let Boundary::Transparent = boundary {
        let lam = exterior_ratio(e, h)?;
        diag[0] = diag[0] + lam * t;
        diag[n - 1] = diag[n - 1] + lam * t;
    }
    if let Some(v0) = null_vector {
        // Pin the node where the null vector peaks; the operator is singular there.
        let m = (0..n).fold(0, |b, i| if v0[i].abs() > v0[b].abs() { i } else { b });
        diag[m] = cx(T::one());
        if m > 0 {
            sub[m - 1] = cx(T::zero());
        }
        if m + 1 < n {
            sup[m] = cx(T::zero());
        }
        rhs[m] = cx(T::zero());
    }
    let mut psi = solve_tridiagonal(&sub, &diag, &sup, &rhs);
    if let Some(v0) = null_vector {
        let overlap = (0..n).fold(cx(T::zero()), |s, i| s + psi[i] * v0[i]) * h;
        for i in 0..n {
            psi[i] = psi[i] - overlap * v0[i];
        }
    }
    Ok((0..n).fold(cx(T::zero()), |s, i| s + psi[i] * d[i]) * h)
}

/// Internal-unit polarizability on a single grid.
pub fn solve_on_grid<T: Real>(
    ratio: T,
    system: &System<T>,
    grid: &GridSpec<T>,
    boundary: &Boundary<T>,
) -> Result<Cx<T>> {
    let ground = grid_ground(system, grid)?;
    let omega = ratio * system.omega_b();
    let (grid, pad) = match *boundary {
        Boundary::Transparent => (*grid, 0),
        Boundary::AbsorbingRamp { width, .. } => {
            let pad = (width / grid.spacing).ceil().to_usize().unwrap_or(0);
            (
                GridSpec {
                    points: grid.points + 2 * pad,
                    origin: grid.origin - T::lit(pad as f64) * grid.spacing,
                    ..*grid
                },
                pad,
            )
        }
    };
    let real_v = grid.potential(system)?;
    let mut v: Vec<Cx<T>> = real_v.iter().map(|&x| cx(x)).collect();
    if let Boundary::AbsorbingRamp { width, strength } = *boundary {
        for i in 0..pad {
            let s = T::lit((pad - i) as f64) * grid.spacing / width;
            let absorb = Complex::new(T::zero(), -strength * s * s);
            v[i] = v[i] + absorb;
            let j = grid.points - 1 - i;
            v[j] = v[j] + absorb;
        }
    }
    let mut d = vec![T::zero(); grid.points];
    let mut psi0 = vec![T::zero(); grid.points];
    for (i, p) in ground.psi.iter().enumerate() {
        d[pad + i] = (grid.x(pad + i) - ground.mean_x) * *p;
        psi0[pad + i] = *p;
    }
    let total = if ratio == T::zero() {
        branch_response(&grid, &v, &d, ground.energy, boundary, Some(&psi0))? * T::lit(2.0)
    } else {
        branch_response(&grid, &v, &d, ground.energy + omega, boundary, None)?
            + branch_response(&grid, &v, &d, ground.energy - omega, boundary, None)?
    };
    Ok(-total)
}

/// Options for [`alpha_grid_inhomogeneous`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridOptions<T> {
    pub boundary: Boundary<T>,
    /// Also solve at `h / 4` and report the observed convergence order.
    pub order_check: bool,
    /// Repeat the finest solve in a doubled box and report the shift.
    pub box_check: bool,
    /// Relative shift under box doubling above which a warning is raised.
    pub tolerance: T,
}

impl<T: Real> Default for GridOptions<T> {
    fn default() -> Self {
        Self {
            boundary: Boundary::Transparent,
            order_check: false,
            box_check: false,
            tolerance: T::lit(1e-4),
        }
    }
}

/// Grid result with its convergence diagnostics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridResult<T> {
    pub point: PolarizabilityPoint<T>,
    /// Atomic-unit values at `h`, `h/2`, and `h/4` when computed.
    pub levels: [Option<Cx<T>>; 3],
    pub observed_order: Option<T>,
    pub box_shift: Option<T>,
    pub reflection_warning: bool,
}

/// Polarizability at `omega / omega_B = ratio` from the finite-difference
/// inhomogeneous equation, extrapolated in the spacing.
pub fn alpha_grid_inhomogeneous<T: Real>(
    ratio: T,
    system: &System<T>,
    grid: &GridSpec<T>,
    options: &GridOptions<T>,
) -> Result<GridResult<T>> {
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
    grid.validate_for(system)?;
    let nlev: u32 = if options.order_check { 3 } else { 2 };
    let vals = (0..nlev)
        .map(|l| solve_on_grid(ratio, system, &grid.refined(l), &options.boundary))
        .collect::<Result<Vec<_>>>()?;
    let value = richardson::<T, Cx<T>>(&vals);
    let observed_order = (nlev == 3).then(|| {
        let r = (vals[0] - vals[1]).norm() / (vals[1] - vals[2]).norm();
        r.ln() / T::LN_2()
    });
    let box_shift = if options.box_check {
        let finest = grid.refined(nlev - 1);
        let big = solve_on_grid(ratio, system, &finest.doubled_box(), &options.boundary)?;
        Some(rel_diff(big, vals[vals.len() - 1]))
    } else {
        None
    };
    let f = system.atomic_factor();
    let mut levels = [None; 3];
    for (i, v) in vals.iter().enumerate() {
        levels[i] = Some(*v * f);
    }
    Ok(GridResult {
        point: PolarizabilityPoint {
            omega_over_omega_b: ratio,
            value: value * f,
            regime: if ratio > T::one() {
                RegimeTag::Above
            } else {
                RegimeTag::Below
            },
            method: Method::Grid,
            pole_proximity: None,
            on_pole: !value.re.is_finite(),
        },
        levels,
        observed_order,
        reflection_warning: box_shift.is_some_and(|s| s > options.tolerance),
        box_shift,
    })
}
