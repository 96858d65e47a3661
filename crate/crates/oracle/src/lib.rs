//! Independent checks for `coulomb1d`: a finite-difference discretisation of
//! the Schrödinger problem and an extended-precision series for Tricomi U.
//! Neither path calls the special functions of the main crate.

pub mod certify;
pub mod error;
pub mod fd;
pub mod useries;

pub use error::{OracleError, Result};
pub use fd::{fd_eigen, fd_energies_extrapolated, FdConfig, FdEigenpair, ParityBc};
pub use useries::u_series_reference;
