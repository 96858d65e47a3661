use thiserror::Error;

use crate::potential::Parity;

/// Errors raised by the special functions, the matching equations and the solvers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{function}: pole at argument {arg}")]
    Pole { function: &'static str, arg: f64 },

    #[error("{function}: parameter {name} = {value} is forbidden")]
    ParameterPole {
        function: &'static str,
        name: &'static str,
        value: f64,
    },

    #[error("{function}: argument {arg} outside the domain ({reason})")]
    Domain {
        function: &'static str,
        arg: f64,
        reason: &'static str,
    },

    #[error("{function}: series did not converge within {terms} terms")]
    NonConvergence { function: &'static str, terms: usize },

    #[error("{function}: |z| = {magnitude} exceeds the overflow guard {guard}")]
    Overflow {
        function: &'static str,
        magnitude: f64,
        guard: f64,
    },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("no sign change for ({parity}, n = {n}) in offset window [{lo}, {hi}] around {anchor}")]
    NoSignChange {
        parity: Parity,
        n: u32,
        anchor: u32,
        lo: f64,
        hi: f64,
    },

    #[error("root refinement exceeded {max_iter} iterations (bracket width {width:e})")]
    MaxIterations { max_iter: usize, width: f64 },

    #[error("quadrature did not reach tolerance after {subdivisions} subdivisions (error estimate {estimate:e})")]
    Quadrature { subdivisions: usize, estimate: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
