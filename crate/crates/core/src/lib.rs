//! Dynamic electric polarizability of a particle bound by attractive delta
//! wells.
//!
//! The symmetric double well has closed forms ([`closed_form`]). Any well
//! configuration can be evaluated through the numerical oracles in
//! [`oracle`], which share only the bound-state solver with each other.
//!
//! Every routine is generic over the scalar type; the `*64` aliases below
//! fix it to `f64`.
//!
//! ```
//! use deltapol::units::{build_scaled, PhysicalParams};
//! use deltapol::closed_form::{alpha, resonance_locate};
//!
//! let s = build_scaled(PhysicalParams::electron(1.0_f64), 1.5, false).unwrap();
//! let r = resonance_locate(&s).unwrap();
//! assert!((r - 0.7529).abs() < 5e-4);
//! let point = alpha(0.5, &s).unwrap();
//! assert_eq!(point.value.im, 0.0);
//! ```

// `!(x > 0)` is the NaN-rejecting form used throughout for validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bound_states;
pub mod closed_form;
pub mod error;
pub mod greens;
pub mod linalg;
pub mod oracle;
// Node and weight tables keep their full digits.
#[allow(clippy::excessive_precision)]
pub mod quadrature;
pub mod roots;
pub mod scalar;
pub mod system;
pub mod units;

pub use bound_states::{BoundState, DeltaPotential, Parity, Spectrum, Well};
pub use closed_form::{BranchTerms, Method, PolarizabilityPoint, RegimeTag};
pub use error::{Error, Result};
pub use greens::{Branch, DysonCoefficients, KernelIntegrals, Regime};
pub use oracle::grid::{Boundary, GridOptions, GridSpec};
pub use quadrature::QuadratureSpec;
pub use scalar::{Cx, Real};
pub use system::System;
pub use units::{PhysicalParams, ScaledParams, SiPolarizability};

pub type Complex64 = num_complex::Complex<f64>;
pub type Potential64 = DeltaPotential<f64>;
pub type State64 = BoundState<f64>;
pub type Physical64 = PhysicalParams<f64>;
pub type Scaled64 = ScaledParams<f64>;
pub type Point64 = PolarizabilityPoint<f64>;
pub type Kernel64 = KernelIntegrals<f64>;
pub type Dyson64 = DysonCoefficients<f64>;
pub type Grid64 = GridSpec<f64>;
pub type System64 = System<f64>;
