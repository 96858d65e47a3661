//! Adaptive integration on finite panels: tanh-sinh rules from the
//! `quadrature` crate, with panels bisected until each meets its share of
//! the error budget.

use quadrature::double_exponential;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureConfig {
    pub abs_tol: f64,
    pub rel_tol: f64,
    /// Semi-infinite integrals stop once the integrand falls below this
    /// fraction of its largest sampled value.
    pub y_max_factor: f64,
    pub max_subdivisions: usize,
}

impl QuadratureConfig {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("abs_tol", self.abs_tol), ("rel_tol", self.rel_tol)] {
            if !(v > 0.0 && v < 1e-6) {
                return Err(Error::InvalidConfig(format!("{name} must lie in (0, 1e-6), got {v}")));
            }
        }
        if !(self.y_max_factor > 0.0 && self.y_max_factor < 1.0) {
            return Err(Error::InvalidConfig(format!(
                "y_max_factor must lie in (0, 1), got {}",
                self.y_max_factor
            )));
        }
        if self.max_subdivisions == 0 {
            return Err(Error::InvalidConfig("max_subdivisions must be positive".into()));
        }
        Ok(())
    }
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self {
            abs_tol: 1e-12,
            rel_tol: 1e-10,
            y_max_factor: 1e-18,
            max_subdivisions: 4000,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integral {
    pub value: f64,
    pub error: f64,
    pub subdivisions: usize,
}

/// ∫_a^b f over one panel, bisecting where the rule's error estimate exceeds
/// max(abs_tol·w, rel_tol·|piece|), w being the piece's share of [a, b].
pub fn integrate<F>(f: F, a: f64, b: f64, cfg: &QuadratureConfig) -> Result<Integral>
where
    F: Fn(f64) -> f64,
{
    integrate_panels(f, &[a, b], cfg)
}

/// Sum of [`integrate`] over consecutive breakpoints, sharing one
/// subdivision budget.
pub fn integrate_panels<F>(f: F, breaks: &[f64], cfg: &QuadratureConfig) -> Result<Integral>
where
    F: Fn(f64) -> f64,
{
    cfg.validate()?;
    let mut total = Integral {
        value: 0.0,
        error: 0.0,
        subdivisions: 0,
    };
    for w in breaks.windows(2) {
        let span = w[1] - w[0];
        if span == 0.0 {
            continue;
        }
        let mut stack = vec![(w[0], w[1])];
        while let Some((lo, hi)) = stack.pop() {
            let share = (hi - lo) / span;
            let out = double_exponential::integrate(&f, lo, hi, cfg.abs_tol * share);
            let allowed = (cfg.abs_tol * share).max(cfg.rel_tol * out.integral.abs());
            if out.error_estimate <= allowed || !out.integral.is_finite() {
                total.value += out.integral;
                total.error += out.error_estimate;
                continue;
            }
            total.subdivisions += 1;
            if total.subdivisions > cfg.max_subdivisions {
                return Err(Error::Quadrature {
                    subdivisions: cfg.max_subdivisions,
                    estimate: out.error_estimate,
                });
            }
            let mid = 0.5 * (lo + hi);
            stack.push((mid, hi));
            stack.push((lo, mid));
        }
    }
    if !total.value.is_finite() {
        return Err(Error::Quadrature {
            subdivisions: total.subdivisions,
            estimate: f64::INFINITY,
        });
    }
    Ok(total)
}
