//! Bound states of the one-dimensional hydrogen atom with the Coulomb
//! singularity cut off by a constant core of half-width δ.
//!
//! Lengths are in units of the Bohr radius and energies in units of the
//! Rydberg magnitude, so E = -1/β² and integer β gives the hydrogen levels.

pub mod asymptotics;
pub mod eigensolver;
pub mod error;
pub mod potential;
pub mod quadrature;
pub mod roots;
pub mod specfun;
pub mod wavefunction;

pub use error::{Error, Result};
pub use eigensolver::{spectrum, EigenState, SolverConfig};
pub use potential::{BetaPoint, Parity, PotentialParams};
