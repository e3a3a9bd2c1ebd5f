//! Fractional-order eight-compartment Ebola transmission model.
//!
//! * [`model`]: parameters, state, force of infection, right-hand sides.
//! * [`integrators`]: adaptive RKF45 and fractional Adams–Bashforth–Moulton.
//! * [`analysis`]: equilibria, reproduction number, stability, sensitivity,
//!   Mittag-Leffler function.
//! * [`control`]: forward–backward sweep for the four-control problem and
//!   fixed intervention strategies.
//! * [`scenario`]: JSON scenario configuration and the artifact writers
//!   behind the command-line tool.

// `!(x > 0.0)` is the NaN-rejecting form used throughout validation
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod control;
pub mod error;
pub mod integrators;
pub mod model;
pub mod scenario;

pub use error::{Error, FailureKind, Result};
