//! CSV and JSON rendering. Output is a pure function of its inputs so that
//! repeated runs are byte-identical.

use deltapol::{Parity, State64};
use serde_json::{json, Value};

use crate::config::{Format, RunConfig, Units};
use crate::model::{
    ResonanceReport, StaticRow, SweepRow, BOX_SUM_LEVELS, BOX_SUM_TOLERANCE, GRID_BOX_FACTOR,
};

pub const SWEEP_HEADER: &str = "omega_over_omegaB,re_alpha,im_alpha,regime,method,pole_proximity";
pub const STATIC_HEADER: &str = "p,alpha_static_closed_form,alpha_static_box_sum";
pub const BOUND_HEADER: &str = "index,parity,kappa_per_bohr,energy_hartree";

pub fn units_label(units: Units) -> &'static str {
    match units {
        Units::Si => "alpha/(4 pi eps0) in m^3",
        Units::Atomic => "alpha in atomic units (a0^3)",
    }
}

/// Folds -0 into 0 so that equal values print identically.
fn unsigned_zero(v: f64) -> f64 {
    if v == 0.0 {
        0.0
    } else {
        v
    }
}

fn num(v: f64) -> String {
    format!("{:e}", unsigned_zero(v))
}

fn opt(v: Option<f64>) -> String {
    v.map(num).unwrap_or_default()
}

fn parameters(config: &RunConfig) -> Value {
    let geometry = match &config.wells {
        Some(w) => json!({
            "wells": w.iter().map(|(x, g)| json!({"position_angstrom": x, "strength_per_bohr": g})).collect::<Vec<_>>(),
        }),
        None => json!({"p": config.p, "separation_angstrom": config.separation_angstrom}),
    };
    json!({
        "mass": config.mass,
        "charge": config.charge,
        "potential": geometry,
        "allow_degenerate": config.allow_degenerate,
    })
}

fn tolerances(config: &RunConfig) -> Value {
    json!({
        "threshold_exclusion": config.threshold_exclusion,
        "resonance_exclusion": config.resonance_exclusion,
        "grid_box_factor": GRID_BOX_FACTOR,
        "box_sum_levels": BOX_SUM_LEVELS,
        "box_sum_tolerance": BOX_SUM_TOLERANCE,
    })
}

fn document(
    config: &RunConfig,
    command: &str,
    extra: Value,
    rows: Vec<Value>,
    failure: Option<&str>,
) -> String {
    let mut metadata = json!({
        "command": command,
        "version": env!("CARGO_PKG_VERSION"),
        "parameters": parameters(config),
        "tolerances": tolerances(config),
        "units": units_label(config.units),
        "method": config.method.as_str(),
        "complete": failure.is_none(),
    });
    if let Some(msg) = failure {
        metadata["error"] = json!(msg);
    }
    if let (Value::Object(m), Value::Object(e)) = (&mut metadata, extra) {
        m.extend(e);
    }
    let mut s = serde_json::to_string_pretty(&json!({"metadata": metadata, "rows": rows}))
        .expect("JSON values always serialize");
    s.push('\n');
    s
}

fn csv(comment: &str, header: &str, lines: Vec<String>, failure: Option<&str>) -> String {
    let mut out = format!("# {comment}\n{header}\n");
    for l in lines {
        out.push_str(&l);
        out.push('\n');
    }
    if let Some(msg) = failure {
        out.push_str(&format!("# incomplete: {msg}\n"));
    }
    out
}

pub fn render_sweep(
    config: &RunConfig,
    rows: &[SweepRow],
    excluded: usize,
    failure: Option<&str>,
) -> String {
    match config.format {
        Format::Csv => csv(
            &format!(
                "units: {}; frequency in units of omega_B",
                units_label(config.units)
            ),
            SWEEP_HEADER,
            rows.iter()
                .map(|r| {
                    format!(
                        "{},{},{},{},{},{}",
                        r.omega_over_omega_b,
                        num(r.re_alpha),
                        num(r.im_alpha),
                        r.regime,
                        r.method,
                        opt(r.pole_proximity)
                    )
                })
                .collect(),
            failure,
        ),
        Format::Json => document(
            config,
            "sweep",
            json!({
                "sweep": {
                    "omega_min": config.omega_min,
                    "omega_max": config.omega_max,
                    "points": config.points,
                    "excluded_points": excluded,
                }
            }),
            rows.iter()
                .map(|r| {
                    json!({
                        "omega_over_omegaB": r.omega_over_omega_b,
                        "re_alpha": unsigned_zero(r.re_alpha),
                        "im_alpha": unsigned_zero(r.im_alpha),
                        "regime": r.regime,
                        "method": r.method,
                        "pole_proximity": r.pole_proximity,
                    })
                })
                .collect(),
            failure,
        ),
    }
}

pub fn render_static(config: &RunConfig, rows: &[StaticRow], failure: Option<&str>) -> String {
    match config.format {
        Format::Csv => csv(
            &format!("units: {} at zero frequency", units_label(config.units)),
            STATIC_HEADER,
            rows.iter()
                .map(|r| format!("{},{},{}", r.p, num(r.closed_form), opt(r.box_sum)))
                .collect(),
            failure,
        ),
        Format::Json => document(
            config,
            "static-table",
            json!({}),
            rows.iter()
                .map(|r| {
                    json!({
                        "p": r.p,
                        "alpha_static_closed_form": r.closed_form,
                        "alpha_static_box_sum": r.box_sum,
                    })
                })
                .collect(),
            failure,
        ),
    }
}

pub fn render_resonance(config: &RunConfig, report: &ResonanceReport) -> String {
    match config.format {
        Format::Csv => {
            let mut out = format!(
                "p = {}\nseparation_angstrom = {}\n",
                report.p, report.separation_angstrom
            );
            match &report.detail {
                Some(d) => {
                    out.push_str(&format!(
                        "omega_res_over_omegaB = {:.6}\nomega_1_over_omegaB = {:.6}\nk0a = {:.6}\nk1a = {:.6}\n\
                         duality_residual = {:.2e}\n",
                        d.omega_res_over_omega_b, d.omega_1_over_omega_b, d.k0a, d.k1a, d.duality_residual
                    ));
                }
                None => {
                    out.push_str("no second bound state: the odd level is unbound for p <= 1\n")
                }
            }
            out
        }
        Format::Json => {
            let detail = report.detail.as_ref().map(|d| {
                json!({
                    "omega_res_over_omegaB": d.omega_res_over_omega_b,
                    "omega_1_over_omegaB": d.omega_1_over_omega_b,
                    "k0a": d.k0a,
                    "k1a": d.k1a,
                    "duality_residual": d.duality_residual,
                })
            });
            document(
                config,
                "resonance",
                json!({"resonance": detail}),
                Vec::new(),
                None,
            )
        }
    }
}

fn parity(p: Parity) -> &'static str {
    match p {
        Parity::Even => "even",
        Parity::Odd => "odd",
        Parity::None => "none",
    }
}

pub fn render_bound_states(config: &RunConfig, states: &[State64], mass: f64) -> String {
    // Internal units have m = 1; hartree energies divide by the mass ratio.
    let energy = |s: &State64| s.energy / mass;
    match config.format {
        Format::Csv => csv(
            "kappa in inverse bohr, energy in hartree",
            BOUND_HEADER,
            states
                .iter()
                .enumerate()
                .map(|(i, s)| {
                    format!(
                        "{i},{},{},{}",
                        parity(s.parity),
                        num(s.kappa),
                        num(energy(s))
                    )
                })
                .collect(),
            None,
        ),
        Format::Json => document(
            config,
            "bound-states",
            json!({}),
            states
                .iter()
                .enumerate()
                .map(|(i, s)| {
                    json!({
                        "index": i,
                        "parity": parity(s.parity),
                        "kappa_per_bohr": s.kappa,
                        "energy_hartree": energy(s),
                    })
                })
                .collect(),
            None,
        ),
    }
}
