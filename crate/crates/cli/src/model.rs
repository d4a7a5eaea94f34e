//! Builds the physical system from a run configuration and evaluates it.

use deltapol::bound_states::{multi_delta_spectrum, solve_odd_kappa};
use deltapol::closed_form::{alpha, alpha_static, resonance_locate};
use deltapol::oracle::grid::alpha_grid_inhomogeneous;
use deltapol::oracle::quadrature::alpha_momentum_quadrature;
use deltapol::oracle::static_sum::alpha_static_sum;
use deltapol::units::{build_scaled, PhysicalParams, ANGSTROM_IN_BOHR};
use deltapol::{
    DeltaPotential, GridOptions, GridSpec, Method, Point64, QuadratureSpec, Scaled64, State64,
    System64, Well,
};
use rayon::prelude::*;

use crate::config::{MethodChoice, RunConfig, Units};
use crate::error::CliError;

/// Box half-length for the grid oracles, in ground-state decay lengths.
pub const GRID_BOX_FACTOR: f64 = 40.0;
/// Richardson levels and box-doubling tolerance of the static sum.
pub const BOX_SUM_LEVELS: u32 = 2;
pub const BOX_SUM_TOLERANCE: f64 = 1e-4;

pub struct Model {
    pub system: System64,
    /// Present for the symmetric double well.
    pub scaled: Option<Scaled64>,
    grid: Option<GridSpec<f64>>,
    quadrature: QuadratureSpec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub omega_over_omega_b: f64,
    pub re_alpha: f64,
    pub im_alpha: f64,
    pub regime: &'static str,
    pub method: &'static str,
    pub pole_proximity: Option<f64>,
}

/// Rows computed before the first failure, and that failure if any.
pub struct Sweep {
    pub rows: Vec<SweepRow>,
    pub failure: Option<CliError>,
    pub excluded: usize,
}

fn degenerate_guard(system: &System64, allow: bool) -> Result<(), CliError> {
    if system.near_degenerate && !allow {
        return Err(CliError::Degenerate(
            "the two lowest levels are nearly degenerate; pass --allow-degenerate to proceed"
                .into(),
        ));
    }
    Ok(())
}

pub fn scaled_for(config: &RunConfig, p: f64) -> Result<Scaled64, CliError> {
    let phys = PhysicalParams {
        mass: config.mass,
        charge: config.charge,
        half_separation_a: config.separation_angstrom / 2.0,
    };
    Ok(build_scaled(phys, p, config.allow_degenerate)?)
}

impl Model {
    pub fn build(config: &RunConfig) -> Result<Self, CliError> {
        let (system, scaled) = match &config.wells {
            Some(wells) => {
                let wells = wells
                    .iter()
                    .map(|&(x, g)| Well {
                        position: x * ANGSTROM_IN_BOHR,
                        strength: g,
                    })
                    .collect();
                let pot = DeltaPotential::new(wells)?;
                let system = System64::from_potential(pot, config.mass, config.charge)?;
                degenerate_guard(&system, config.allow_degenerate)?;
                (system, None)
            }
            None => {
                let s = scaled_for(config, config.p)?;
                (System64::symmetric(&s)?, Some(s))
            }
        };
        Ok(Self {
            system,
            scaled,
            grid: None,
            quadrature: QuadratureSpec::default(),
        })
    }

    fn with_grid(mut self) -> Result<Self, CliError> {
        self.grid = Some(GridSpec::for_system(&self.system, GRID_BOX_FACTOR, 0)?);
        Ok(self)
    }

    /// Methods a choice expands to for this system.
    pub fn methods(&self, choice: MethodChoice) -> Result<Vec<Method>, CliError> {
        match choice {
            MethodChoice::ClosedForm if self.scaled.is_none() => {
                Err(deltapol::Error::ClosedFormUnavailable.into())
            }
            MethodChoice::ClosedForm => Ok(vec![Method::ClosedForm]),
            MethodChoice::Quadrature => Ok(vec![Method::Quadrature]),
            MethodChoice::Grid => Ok(vec![Method::Grid]),
            MethodChoice::All if self.scaled.is_none() => {
                Ok(vec![Method::Quadrature, Method::Grid])
            }
            MethodChoice::All => Ok(vec![Method::ClosedForm, Method::Quadrature, Method::Grid]),
        }
    }

    /// Excitation frequencies over `omega_B` of the levels a dipole can reach
    /// below threshold.
    pub fn resonances(&self) -> Result<Vec<f64>, CliError> {
        if let Some(s) = &self.scaled {
            return Ok(resonance_locate(s).into_iter().collect());
        }
        let spectrum = multi_delta_spectrum(&self.system.potential)?;
        let e0 = spectrum.ground().energy;
        Ok(spectrum.states[1..]
            .iter()
            .map(|st| (st.energy - e0) / -e0)
            .collect())
    }

    pub fn evaluate(&self, method: Method, ratio: f64) -> Result<Point64, CliError> {
        let point = match method {
            Method::ClosedForm => {
                let s = self
                    .scaled
                    .as_ref()
                    .ok_or(deltapol::Error::ClosedFormUnavailable)?;
                alpha(ratio, s)?
            }
            Method::Quadrature => alpha_momentum_quadrature(ratio, &self.system, &self.quadrature)?,
            Method::Grid => {
                let grid = self.grid.as_ref().expect("grid prepared before sweeping");
                alpha_grid_inhomogeneous(ratio, &self.system, grid, &GridOptions::default())?.point
            }
            _ => unreachable!("sweeps only use closed form, quadrature and grid"),
        };
        Ok(point)
    }
}

pub fn frequencies(config: &RunConfig, resonances: &[f64]) -> (Vec<f64>, usize) {
    let n = config.points;
    let (lo, hi) = (config.omega_min, config.omega_max);
    let all: Vec<f64> = (0..n)
        .map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
        .collect();
    let kept: Vec<f64> = all
        .iter()
        .copied()
        .filter(|r| (r - 1.0).abs() >= config.threshold_exclusion)
        .filter(|r| {
            resonances
                .iter()
                .all(|x| (r - x).abs() >= config.resonance_exclusion)
        })
        .collect();
    let excluded = all.len() - kept.len();
    (kept, excluded)
}

fn scale(units: Units, v: f64) -> f64 {
    match units {
        Units::Si => v * deltapol::units::ATOMIC_VOLUME_M3,
        Units::Atomic => v,
    }
}

fn row(point: &Point64, units: Units, resonances: &[f64]) -> SweepRow {
    let r = point.omega_over_omega_b;
    let pole_proximity = point.pole_proximity.or_else(|| {
        (r < 1.0)
            .then(|| {
                resonances
                    .iter()
                    .map(|x| (r - x).abs())
                    .fold(f64::INFINITY, f64::min)
            })
            .filter(|d| d.is_finite())
    });
    SweepRow {
        omega_over_omega_b: r,
        re_alpha: scale(units, point.value.re),
        im_alpha: scale(units, point.value.im),
        regime: point.regime.as_str(),
        method: point.method.as_str(),
        pole_proximity,
    }
}

pub fn sweep(config: &RunConfig) -> Result<Sweep, CliError> {
    let mut model = Model::build(config)?;
    let methods = model.methods(config.method)?;
    if methods.contains(&Method::Grid) {
        model = model.with_grid()?;
    }
    let resonances = model.resonances()?;
    let (freqs, excluded) = frequencies(config, &resonances);
    let tasks: Vec<(f64, Method)> = freqs
        .iter()
        .flat_map(|&r| methods.iter().map(move |&m| (r, m)))
        .collect();
    // Collecting an indexed parallel iterator keeps the input order.
    let results: Vec<Result<SweepRow, CliError>> = tasks
        .par_iter()
        .map(|&(r, m)| {
            model
                .evaluate(m, r)
                .map(|p| row(&p, config.units, &resonances))
        })
        .collect();
    let mut rows = Vec::with_capacity(results.len());
    let mut failure = None;
    for res in results {
        match res {
            Ok(row) => rows.push(row),
            Err(e) => {
                failure = Some(e);
                break;
            }
        }
    }
    Ok(Sweep {
        rows,
        failure,
        excluded,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct StaticRow {
    pub p: f64,
    pub closed_form: f64,
    pub box_sum: Option<f64>,
}

pub fn static_row(config: &RunConfig, p: f64, with_box: bool) -> Result<StaticRow, CliError> {
    let s = scaled_for(config, p)?;
    let closed_form = scale(config.units, alpha_static(&s).value.re);
    let box_sum = if with_box {
        let sys = System64::symmetric(&s)?;
        let grid = GridSpec::for_system(&sys, GRID_BOX_FACTOR, 0)?;
        let r = alpha_static_sum(&sys, &grid, BOX_SUM_LEVELS, Some(BOX_SUM_TOLERANCE))?;
        Some(scale(config.units, r.point.value.re))
    } else {
        None
    };
    Ok(StaticRow {
        p,
        closed_form,
        box_sum,
    })
}

pub struct StaticTable {
    pub rows: Vec<StaticRow>,
    pub failure: Option<CliError>,
}

pub fn static_table(config: &RunConfig, p_list: &[f64], with_box: bool) -> StaticTable {
    let results: Vec<Result<StaticRow, CliError>> = p_list
        .par_iter()
        .map(|&p| static_row(config, p, with_box))
        .collect();
    let mut rows = Vec::new();
    for res in results {
        match res {
            Ok(r) => rows.push(r),
            Err(e) => {
                return StaticTable {
                    rows,
                    failure: Some(e),
                }
            }
        }
    }
    StaticTable {
        rows,
        failure: None,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResonanceReport {
    pub p: f64,
    pub separation_angstrom: f64,
    /// `None` when the odd level is unbound (`p <= 1`).
    pub detail: Option<ResonanceDetail>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResonanceDetail {
    pub omega_res_over_omega_b: f64,
    pub omega_1_over_omega_b: f64,
    pub k0a: f64,
    pub k1a: f64,
    /// Relative mismatch between the pole and the level gap `E1 - E0`.
    pub duality_residual: f64,
}

pub fn resonance(config: &RunConfig) -> Result<ResonanceReport, CliError> {
    if config.wells.is_some() {
        return Err(CliError::Config(
            "resonance reports the symmetric double well; use bound-states for explicit wells"
                .into(),
        ));
    }
    let s = scaled_for(config, config.p)?;
    let detail = match (resonance_locate(&s), solve_odd_kappa(s.p, s.a)?) {
        (Some(res), Some(k1)) => {
            let wb = s.omega_b();
            let gap = (s.k0 * s.k0 - k1 * k1) / 2.0;
            Some(ResonanceDetail {
                omega_res_over_omega_b: res,
                omega_1_over_omega_b: k1 * k1 / 2.0 / wb,
                k0a: s.k0a,
                k1a: k1 * s.a,
                duality_residual: ((res * wb - gap) / gap).abs(),
            })
        }
        _ => None,
    };
    Ok(ResonanceReport {
        p: s.p,
        separation_angstrom: config.separation_angstrom,
        detail,
    })
}

pub fn bound_states(config: &RunConfig) -> Result<(Vec<State64>, f64), CliError> {
    let model = Model::build(config)?;
    let spectrum = multi_delta_spectrum(&model.system.potential)?;
    let mut states = spectrum.states;
    if let Some(s) = &model.scaled {
        // The symmetric well's states carry parity; take it from the dedicated solvers.
        states[0] = model.system.ground.clone();
        if let (Some(odd), Some(slot)) = (
            deltapol::bound_states::odd_state(s.p, s.a)?,
            states.get_mut(1),
        ) {
            *slot = odd;
        }
    }
    Ok((states, model.system.mass))
}
