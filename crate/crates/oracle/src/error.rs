use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OracleError {
    #[error("invalid argument: {0}")]
    Domain(String),

    #[error("reference series did not converge within {0} terms")]
    NonConvergence(usize),

    #[error("invalid finite-difference configuration: {0}")]
    InvalidConfig(String),

    #[error("eigenvalue iteration did not converge for state {index}")]
    EigenIteration { index: usize },
}

pub type Result<T> = std::result::Result<T, OracleError>;
