//! Run configuration. Files are flat `key = value` lines with dotted
//! sections (`particle.*`, `potential.*`, `sweep.*`, `output.*`); `#` starts
//! a comment. Precedence, lowest first: defaults, `--figure` preset, file,
//! explicit flags.

use std::path::PathBuf;

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MethodChoice {
    ClosedForm,
    Quadrature,
    Grid,
    All,
}

impl MethodChoice {
    pub fn parse(s: &str) -> Result<Self, CliError> {
        match s {
            "closed_form" | "closed-form" => Ok(Self::ClosedForm),
            "quadrature" => Ok(Self::Quadrature),
            "grid" => Ok(Self::Grid),
            "all" => Ok(Self::All),
            other => Err(CliError::Config(format!(
                "unknown method {other:?}; expected closed_form, quadrature, grid or all"
            ))),
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Self::ClosedForm => "closed_form",
            Self::Quadrature => "quadrature",
            Self::Grid => "grid",
            Self::All => "all",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    pub fn parse(s: &str) -> Result<Self, CliError> {
        match s {
            "csv" => Ok(Self::Csv),
            "json" => Ok(Self::Json),
            other => Err(CliError::Config(format!(
                "unknown format {other:?}; expected csv or json"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Units {
    Si,
    Atomic,
}

impl Units {
    pub fn parse(s: &str) -> Result<Self, CliError> {
        match s {
            "si" => Ok(Self::Si),
            "atomic" => Ok(Self::Atomic),
            other => Err(CliError::Config(format!(
                "unknown units {other:?}; expected si or atomic"
            ))),
        }
    }
}

/// Preset parameter sets for the published curves.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Figure {
    WeakBelow,
    WeakAbove,
    StrongBelow,
    StrongAbove,
    StaticTable,
}

impl Figure {
    pub fn parse(s: &str) -> Result<Self, CliError> {
        match s {
            "1a" => Ok(Self::WeakBelow),
            "1b" => Ok(Self::WeakAbove),
            "2a" => Ok(Self::StrongBelow),
            "2b" => Ok(Self::StrongAbove),
            "3" => Ok(Self::StaticTable),
            other => Err(CliError::Config(format!(
                "unknown figure {other:?}; expected 1a, 1b, 2a, 2b or 3"
            ))),
        }
    }

    pub fn is_static(self) -> bool {
        self == Self::StaticTable
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    /// Particle mass over the electron mass.
    pub mass: f64,
    /// Particle charge over the elementary charge.
    pub charge: f64,
    pub p: f64,
    /// Full well separation `2a`, angstrom.
    pub separation_angstrom: f64,
    /// Explicit wells `(position in angstrom, strength g' in inverse bohr)`;
    /// replaces `p` and the separation when set.
    pub wells: Option<Vec<(f64, f64)>>,
    pub allow_degenerate: bool,
    pub omega_min: f64,
    pub omega_max: f64,
    pub points: usize,
    /// Half-width, in units of `omega_B`, of the skipped zone around threshold.
    pub threshold_exclusion: f64,
    /// Half-width of the skipped zone around the below-threshold resonance.
    pub resonance_exclusion: f64,
    pub p_list: Option<Vec<f64>>,
    pub method: MethodChoice,
    /// Whether the method came from a file or flag rather than the default.
    pub method_explicit: bool,
    pub output_path: Option<PathBuf>,
    pub format: Format,
    pub units: Units,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            mass: 1.0,
            charge: 1.0,
            p: 1.5,
            separation_angstrom: 1.0,
            wells: None,
            allow_degenerate: false,
            omega_min: 0.0,
            omega_max: 0.98,
            points: 50,
            threshold_exclusion: 1e-6,
            resonance_exclusion: 1e-6,
            p_list: None,
            method: MethodChoice::ClosedForm,
            method_explicit: false,
            output_path: None,
            format: Format::Csv,
            units: Units::Si,
        }
    }
}

fn number(key: &str, value: &str) -> Result<f64, CliError> {
    value
        .parse::<f64>()
        .map_err(|_| CliError::Config(format!("{key}: expected a number, got {value:?}")))
}

fn boolean(key: &str, value: &str) -> Result<bool, CliError> {
    match value {
        "true" | "yes" | "1" => Ok(true),
        "false" | "no" | "0" => Ok(false),
        _ => Err(CliError::Config(format!(
            "{key}: expected true or false, got {value:?}"
        ))),
    }
}

/// Comma-separated numbers. An empty string is an empty list.
pub fn number_list(key: &str, value: &str) -> Result<Vec<f64>, CliError> {
    value
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| number(key, s))
        .collect()
}

/// `x:g` pairs separated by commas.
pub fn well_list(key: &str, value: &str) -> Result<Vec<(f64, f64)>, CliError> {
    let wells = value
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|pair| {
            let (x, g) = pair.split_once(':').ok_or_else(|| {
                CliError::Config(format!("{key}: expected position:strength, got {pair:?}"))
            })?;
            Ok((number(key, x.trim())?, number(key, g.trim())?))
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    if wells.is_empty() {
        return Err(CliError::Config(format!("{key}: no wells given")));
    }
    Ok(wells)
}

impl RunConfig {
    pub fn apply_figure(&mut self, figure: Figure) {
        self.separation_angstrom = 1.0;
        self.wells = None;
        match figure {
            Figure::WeakBelow | Figure::StrongBelow => {
                self.omega_min = 0.01;
                self.omega_max = 0.98;
                self.points = 98;
            }
            Figure::WeakAbove | Figure::StrongAbove => {
                self.omega_min = 1.02;
                self.omega_max = 4.0;
                self.points = 150;
            }
            Figure::StaticTable => {
                self.p_list = Some((1..=19).map(|i| 0.25 * i as f64).collect());
            }
        }
        match figure {
            Figure::WeakBelow | Figure::WeakAbove => self.p = 0.5,
            Figure::StrongBelow | Figure::StrongAbove => self.p = 1.5,
            Figure::StaticTable => {}
        }
    }

    /// Applies one `key = value` setting.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), CliError> {
        match key {
            "particle.mass" => self.mass = number(key, value)?,
            "particle.charge" => self.charge = number(key, value)?,
            "potential.p" => self.p = number(key, value)?,
            "potential.separation_angstrom" => self.separation_angstrom = number(key, value)?,
            "potential.wells" => self.wells = Some(well_list(key, value)?),
            "potential.allow_degenerate" => self.allow_degenerate = boolean(key, value)?,
            "sweep.omega_min" => self.omega_min = number(key, value)?,
            "sweep.omega_max" => self.omega_max = number(key, value)?,
            "sweep.points" => {
                self.points = value.parse().map_err(|_| {
                    CliError::Config(format!("{key}: expected a count, got {value:?}"))
                })?
            }
            "sweep.threshold_exclusion" => self.threshold_exclusion = number(key, value)?,
            "sweep.resonance_exclusion" => self.resonance_exclusion = number(key, value)?,
            "sweep.method" => {
                self.method = MethodChoice::parse(value)?;
                self.method_explicit = true;
            }
            "sweep.p_list" => self.p_list = Some(number_list(key, value)?),
            "output.path" => self.output_path = Some(PathBuf::from(value)),
            "output.format" => self.format = Format::parse(value)?,
            "output.units" => self.units = Units::parse(value)?,
            other => {
                return Err(CliError::Config(format!(
                    "unknown configuration key {other:?}"
                )))
            }
        }
        Ok(())
    }

    /// Applies every setting in a configuration file's text.
    pub fn apply_text(&mut self, text: &str) -> Result<(), CliError> {
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| CliError::Config(format!("line {}: expected key = value", n + 1)))?;
            self.set(key.trim(), value.trim())
                .map_err(|e| CliError::Config(format!("line {}: {}", n + 1, e.message())))?;
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<(), CliError> {
        let bad = |m: String| Err(CliError::Config(m));
        if !(self.mass > 0.0 && self.mass.is_finite()) {
            return bad(format!("particle.mass must be positive, got {}", self.mass));
        }
        if self.charge == 0.0 || !self.charge.is_finite() {
            return bad("particle.charge must be non-zero".into());
        }
        if self.wells.is_none() {
            if !(self.p > 0.0 && self.p.is_finite()) {
                return bad(format!("potential.p must be positive, got {}", self.p));
            }
            if !(self.separation_angstrom > 0.0 && self.separation_angstrom.is_finite()) {
                return bad(format!(
                    "potential.separation_angstrom must be positive, got {}",
                    self.separation_angstrom
                ));
            }
        }
        if !(self.omega_min >= 0.0 && self.omega_min.is_finite()) {
            return bad(format!(
                "sweep.omega_min must be non-negative, got {}",
                self.omega_min
            ));
        }
        if !(self.omega_max > self.omega_min && self.omega_max.is_finite()) {
            return bad(format!(
                "sweep.omega_max ({}) must exceed sweep.omega_min ({})",
                self.omega_max, self.omega_min
            ));
        }
        if self.points < 2 {
            return bad(format!(
                "sweep.points must be at least 2, got {}",
                self.points
            ));
        }
        for (name, w) in [
            ("sweep.threshold_exclusion", self.threshold_exclusion),
            ("sweep.resonance_exclusion", self.resonance_exclusion),
        ] {
            if !(w >= 1e-6 && w.is_finite()) {
                return bad(format!("{name} must be at least 1e-6, got {w}"));
            }
        }
        Ok(())
    }
}
