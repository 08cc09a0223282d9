use std::fmt;

use thiserror::Error;

/// Primitive Euler variable named in positivity diagnostics.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StateVariable {
    Density,
    Pressure,
}

impl fmt::Display for StateVariable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StateVariable::Density => f.write_str("density"),
            StateVariable::Pressure => f.write_str("pressure"),
        }
    }
}

#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("non-finite slope pair ({0}, {1})")]
    NonFiniteSlopes(f64, f64),

    #[error("degenerate smoothness context: {0}")]
    DegenerateContext(&'static str),

    #[error("undefined at the origin of the slope plane")]
    UndefinedAtOrigin,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("nonpositive {variable} ({value}) in cell {cell}")]
    Positivity {
        cell: usize,
        variable: StateVariable,
        value: f64,
    },

    /// Positivity failure with the time-stepping context attached by the run loop.
    #[error(
        "run aborted at step {step} (t = {time}): nonpositive {variable} ({value}) in cell {cell}"
    )]
    PositivityAbort {
        step: usize,
        time: f64,
        cell: usize,
        variable: StateVariable,
        value: f64,
    },

    #[error("nonphysical state: {variable} = {value}")]
    NonphysicalState { variable: StateVariable, value: f64 },

    #[error("field needs at least {needed} ghost layers, has {found}")]
    InsufficientGhostLayers { needed: usize, found: usize },

    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    #[error("degenerate time step: maximum wave speed is zero")]
    DegenerateTimestep,

    #[error("unknown scheme `{0}`")]
    UnknownScheme(String),

    #[error("unknown preset `{0}`")]
    UnknownPreset(String),

    #[error("config error: {0}")]
    Config(String),

    #[error("reference solution: {0}")]
    Reference(String),

    #[error("io: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
