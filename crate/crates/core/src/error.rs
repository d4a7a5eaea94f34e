use thiserror::Error;

/// Failures reported by the polarizability engine.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("degenerate region: p = {p} >= {limit}; pass an explicit override to proceed")]
    DegenerateRegion { p: f64, limit: f64 },

    #[error(
        "frequency {omega_over_omega_b} lies inside the threshold exclusion zone around omega_B"
    )]
    ThresholdExcluded { omega_over_omega_b: f64 },

    #[error("frequency {omega_over_omega_b} outside the domain of {routine}")]
    WrongRegime {
        routine: &'static str,
        omega_over_omega_b: f64,
    },

    #[error("free resolvent evaluated on its pole (k = {k})")]
    OnPole { k: f64 },

    #[error("root not bracketed on [{lo}, {hi}]")]
    RootNotBracketed { lo: f64, hi: f64 },

    #[error("no bound state found for the potential")]
    NoBoundState,

    #[error("singular linear system (condition estimate {condition:e})")]
    Singular { condition: f64 },

    #[error("quadrature did not converge: worst subinterval [{lo}, {hi}] with error {error:e}")]
    QuadratureNonConvergence { lo: f64, hi: f64, error: f64 },

    #[error("{what} did not converge: change {change:e} exceeds tolerance {tolerance:e}")]
    NonConvergence {
        what: &'static str,
        change: f64,
        tolerance: f64,
    },

    #[error("wells at {positions:?} cannot be aligned on a grid of spacing <= {max_spacing}")]
    GridAlignment {
        positions: Vec<f64>,
        max_spacing: f64,
    },

    #[error("closed forms are only available for the symmetric double well")]
    ClosedFormUnavailable,
}

pub type Result<T> = std::result::Result<T, Error>;
