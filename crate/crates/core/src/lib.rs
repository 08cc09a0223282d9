//! Third-order finite-volume reconstruction in the two-slope domain.
//!
//! Every reconstruction here is a function `H(delta_minus, delta_plus)` of
//! the two one-sided differences around a cell: the face value to the right
//! of cell `i` is `u_i + H(delta_minus, delta_plus) / 2`. Slope limiters,
//! their smoothness-switched combinations and three-point WENO all fit this
//! form, which lets them share one solver.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod diagnostics;
pub mod error;
pub mod experiments;
pub mod grid;
pub mod limiters;
pub mod physics;
pub mod quadrature;
pub mod reconstruction;
pub mod solver;
pub mod weno3;

pub use error::{Error, Result, StateVariable};
pub use experiments::{preset, run, InitialCondition, RunConfig, SchemeSpec};
pub use grid::{CellField, Grid1D};
pub use limiters::{LimiterKind, SlopePair, SmoothnessContext, SwitchMode};
pub use physics::{FluxKind, FluxOptions, Model, WaveSpeedSource};
pub use reconstruction::{interface_values, InterfacePair, LimiterScheme};
pub use solver::{BoundaryCondition, RunOutput, TimestepMode};
pub use weno3::{EpsilonPolicy, WenoParams, WenoVariant};
