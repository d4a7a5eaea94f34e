//! `deltapol`: polarizability sweeps, static tables, resonance reports and
//! bound-state listings for delta-well systems.
//!
//! Exit codes: 0 success, 2 configuration error, 3 degenerate region,
//! 4 numerical non-convergence (partial results are still written).

mod config;
mod error;
mod model;
mod output;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use config::{number_list, well_list, Figure, Format, MethodChoice, RunConfig, Units};
use error::CliError;

#[derive(Parser)]
#[command(
    name = "deltapol",
    version,
    about = "Dynamic polarizability of a particle in delta wells"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Complex alpha over a frequency range.
    Sweep(Common),
    /// Static alpha(0) for a list of p, from the closed form and the box sum.
    StaticTable(StaticArgs),
    /// Below-threshold resonance of the symmetric double well.
    Resonance(Common),
    /// Bound levels of the configured potential.
    BoundStates(Common),
}

#[derive(Args)]
struct Common {
    /// Configuration file of `section.key = value` lines.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Preset: 1a, 1b, 2a, 2b (sweeps) or 3 (static table).
    #[arg(long)]
    figure: Option<String>,
    #[arg(long)]
    p: Option<f64>,
    /// Full well separation 2a in angstrom.
    #[arg(long)]
    separation_angstrom: Option<f64>,
    /// Explicit wells as `x:g,...` with x in angstrom and g' in inverse bohr.
    #[arg(long, allow_hyphen_values = true)]
    wells: Option<String>,
    /// Particle mass over the electron mass.
    #[arg(long)]
    mass: Option<f64>,
    /// Particle charge over the elementary charge.
    #[arg(long, allow_hyphen_values = true)]
    charge: Option<f64>,
    /// closed_form, quadrature, grid or all.
    #[arg(long)]
    method: Option<String>,
    #[arg(long)]
    points: Option<usize>,
    #[arg(long)]
    omega_min: Option<f64>,
    #[arg(long)]
    omega_max: Option<f64>,
    /// csv or json.
    #[arg(long)]
    format: Option<String>,
    /// Report alpha/(4 pi eps0) in m^3 (default).
    #[arg(long, conflicts_with = "atomic")]
    si: bool,
    /// Report alpha in atomic units.
    #[arg(long)]
    atomic: bool,
    /// Run even where the two lowest levels nearly coincide (p >= 5).
    #[arg(long)]
    allow_degenerate: bool,
    /// Write to this file instead of standard output.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct StaticArgs {
    #[command(flatten)]
    common: Common,
    /// Comma-separated values of p.
    #[arg(long)]
    p_list: Option<String>,
}

fn resolve(args: &Common, expect_static: bool) -> Result<RunConfig, CliError> {
    let mut c = RunConfig::default();
    if let Some(f) = &args.figure {
        let figure = Figure::parse(f)?;
        if figure.is_static() != expect_static {
            return Err(CliError::Config(format!(
                "figure {f} belongs to the {} command",
                if figure.is_static() {
                    "static-table"
                } else {
                    "sweep"
                }
            )));
        }
        c.apply_figure(figure);
    }
    if let Some(path) = &args.config {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        c.apply_text(&text)?;
    }
    if let Some(v) = args.p {
        c.p = v;
    }
    if let Some(v) = args.separation_angstrom {
        c.separation_angstrom = v;
    }
    if let Some(v) = &args.wells {
        c.wells = Some(well_list("--wells", v)?);
    }
    if let Some(v) = args.mass {
        c.mass = v;
    }
    if let Some(v) = args.charge {
        c.charge = v;
    }
    if let Some(v) = &args.method {
        c.method = MethodChoice::parse(v)?;
        c.method_explicit = true;
    }
    if let Some(v) = args.points {
        c.points = v;
    }
    if let Some(v) = args.omega_min {
        c.omega_min = v;
    }
    if let Some(v) = args.omega_max {
        c.omega_max = v;
    }
    if let Some(v) = &args.format {
        c.format = Format::parse(v)?;
    }
    if args.si {
        c.units = Units::Si;
    }
    if args.atomic {
        c.units = Units::Atomic;
    }
    if args.allow_degenerate {
        c.allow_degenerate = true;
    }
    if let Some(v) = &args.output {
        c.output_path = Some(v.clone());
    }
    c.validate()?;
    Ok(c)
}

fn emit(config: &RunConfig, text: &str) -> Result<(), CliError> {
    match &config.output_path {
        Some(path) => std::fs::write(path, text)?,
        None => std::io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(())
}

/// Writes whatever was computed, then reports the failure if there was one.
fn finish(config: &RunConfig, text: String, failure: Option<CliError>) -> Result<(), CliError> {
    emit(config, &text)?;
    failure.map_or(Ok(()), Err)
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Sweep(args) => {
            let config = resolve(&args, false)?;
            let sweep = model::sweep(&config)?;
            let msg = sweep.failure.as_ref().map(|e| e.to_string());
            let text = output::render_sweep(&config, &sweep.rows, sweep.excluded, msg.as_deref());
            finish(&config, text, sweep.failure)
        }
        Command::StaticTable(args) => {
            let mut config = resolve(&args.common, true)?;
            if let Some(v) = &args.p_list {
                config.p_list = Some(number_list("--p-list", v)?);
            }
            if config.wells.is_some() {
                return Err(CliError::Config(
                    "static-table scans p for the symmetric double well".into(),
                ));
            }
            let p_list = config.p_list.clone().unwrap_or_else(|| vec![config.p]);
            if p_list.is_empty() {
                return Err(CliError::Config("p list is empty".into()));
            }
            if let Some(bad) = p_list.iter().find(|p| !(**p > 0.0 && p.is_finite())) {
                return Err(CliError::Config(format!("p must be positive, got {bad}")));
            }
            // The box sum column is on unless the closed form alone was asked for.
            let with_box = !(config.method_explicit && config.method == MethodChoice::ClosedForm);
            let table = model::static_table(&config, &p_list, with_box);
            let msg = table.failure.as_ref().map(|e| e.to_string());
            let text = output::render_static(&config, &table.rows, msg.as_deref());
            finish(&config, text, table.failure)
        }
        Command::Resonance(args) => {
            let config = resolve(&args, false)?;
            let report = model::resonance(&config)?;
            emit(&config, &output::render_resonance(&config, &report))
        }
        Command::BoundStates(args) => {
            let config = resolve(&args, false)?;
            let (states, mass) = model::bound_states(&config)?;
            emit(
                &config,
                &output::render_bound_states(&config, &states, mass),
            )
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("deltapol: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
