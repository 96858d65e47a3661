//! Real-argument special functions: Gamma, digamma, the confluent
//! hypergeometric functions of Kummer and Tricomi, and associated Laguerre
//! polynomials.
//!
//! Everything here is a pure function of its arguments. Parameters that may
//! sit extremely close to a non-positive integer are carried as a
//! [`SplitParam`] so that the distance to the integer keeps full precision.

mod confluent;
mod gamma;
pub mod identities;
mod laguerre;

pub use confluent::{kummer_m, tricomi_u, tricomi_u_split};
pub use gamma::{cospi, digamma, digamma_split, gamma, ln_gamma, rgamma, rgamma_split, sinpi};
pub use identities::{identity_suites, IdentityCheck};
pub use laguerre::{laguerre, laguerre_derivative};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Euler–Mascheroni constant γ.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// Truncation controls shared by the series evaluations.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeriesControl {
    pub max_terms: usize,
    /// A series stops once the latest term is below `rel_tol` times the running sum.
    pub rel_tol: f64,
    /// Evaluation aborts when |z| exceeds this magnitude.
    pub overflow_guard: f64,
}

impl SeriesControl {
    pub fn new(max_terms: usize, rel_tol: f64, overflow_guard: f64) -> Result<Self> {
        if max_terms < 50 {
            return Err(Error::InvalidConfig(format!(
                "max_terms must be at least 50, got {max_terms}"
            )));
        }
        if !(rel_tol > 0.0 && rel_tol < 1e-6) {
            return Err(Error::InvalidConfig(format!(
                "rel_tol must lie in (0, 1e-6), got {rel_tol}"
            )));
        }
        if !(overflow_guard > 0.0) {
            return Err(Error::InvalidConfig(format!(
                "overflow_guard must be positive, got {overflow_guard}"
            )));
        }
        Ok(Self {
            max_terms,
            rel_tol,
            overflow_guard,
        })
    }
}

impl Default for SeriesControl {
    fn default() -> Self {
        Self {
            max_terms: 500,
            rel_tol: 1e-15,
            overflow_guard: 700.0,
        }
    }
}

/// A real number written as `center + offset` with `center` integral and
/// `|offset| <= 0.5`.
///
/// Near a pole of Γ or Ψ the offset is the quantity that matters, and
/// storing it separately keeps its relative precision even when it is far
/// below the spacing of doubles around `center`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SplitParam {
    center: i64,
    offset: f64,
}

impl SplitParam {
    pub fn new(value: f64) -> Self {
        let center = value.round();
        Self {
            center: center as i64,
            offset: value - center,
        }
    }

    /// Builds `center + offset`, renormalising when `|offset| > 0.5`.
    pub fn from_parts(center: i64, offset: f64) -> Self {
        if offset.abs() <= 0.5 {
            Self { center, offset }
        } else {
            let shift = offset.round();
            Self {
                center: center + shift as i64,
                offset: offset - shift,
            }
        }
    }

    pub fn center(&self) -> i64 {
        self.center
    }

    pub fn offset(&self) -> f64 {
        self.offset
    }

    pub fn value(&self) -> f64 {
        self.center as f64 + self.offset
    }

    /// `self + k` for integer `k`, exact in the offset.
    pub fn shift(&self, k: i64) -> Self {
        Self {
            center: self.center + k,
            offset: self.offset,
        }
    }

    /// `k - self` for integer `k`.
    pub fn reflect(&self, k: i64) -> Self {
        Self {
            center: k - self.center,
            offset: -self.offset,
        }
    }

    /// True when the value is exactly a non-positive integer.
    pub fn is_nonpositive_integer(&self) -> bool {
        self.offset == 0.0 && self.center <= 0
    }
}

/// Rising factorial (a)_k = a (a+1) ... (a+k-1), with (a)_0 = 1.
pub fn pochhammer(a: f64, k: u32) -> f64 {
    (0..k).fold(1.0, |acc, j| acc * (a + j as f64))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn euler_gamma_digits() {
        assert!((EULER_GAMMA - 0.577_215_664_901_532_9).abs() < 1e-16);
        // Harmonic-sum definition with its Euler-Maclaurin corrections.
        let n = 1000u32;
        let h: f64 = (1..=n).rev().map(|k| 1.0 / k as f64).sum();
        let nf = n as f64;
        let n2 = nf * nf;
        let estimate = h - nf.ln() - 1.0 / (2.0 * nf) + 1.0 / (12.0 * n2) - 1.0 / (120.0 * n2 * n2);
        assert!((estimate - EULER_GAMMA).abs() < 1e-14);
    }

    #[test]
    fn series_control_validation() {
        assert!(SeriesControl::new(49, 1e-15, 700.0).is_err());
        assert!(SeriesControl::new(50, 1e-6, 700.0).is_err());
        assert!(SeriesControl::new(50, 0.0, 700.0).is_err());
        assert!(SeriesControl::new(50, 1e-12, 0.0).is_err());
        assert!(SeriesControl::new(50, 1e-12, 10.0).is_ok());
    }

    #[test]
    fn pochhammer_examples() {
        assert_eq!(pochhammer(0.3, 0), 1.0);
        assert_eq!(pochhammer(3.0, 2), 12.0);
        assert_eq!(pochhammer(-2.0, 3), 0.0);
        assert_eq!(pochhammer(1.0, 5), 120.0);
    }

    #[test]
    fn split_param_keeps_tiny_offsets() {
        let p = SplitParam::from_parts(-3, 1e-20);
        assert_eq!(p.center(), -3);
        assert_eq!(p.offset(), 1e-20);
        assert_eq!(p.shift(3).offset(), 1e-20);
        assert_eq!(p.reflect(1).center(), 4);
        assert_eq!(p.reflect(1).offset(), -1e-20);
        let q = SplitParam::from_parts(2, 0.75);
        assert_eq!(q.center(), 3);
        assert_eq!(q.offset(), -0.25);
        let r = SplitParam::new(-4.5);
        assert_eq!(r.value(), -4.5);
        assert!(SplitParam::new(-2.0).is_nonpositive_integer());
        assert!(!SplitParam::new(2.0).is_nonpositive_integer());
    }
}
