//! The dimensionless model: a₀ = 1 and |E₀| = 1, so that E = -1/β²,
//! V₀ = 2/δ and V(x) = -2/|x| outside the core.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::specfun::{tricomi_u_split, SeriesControl, SplitParam};

/// Smallest |cos| or |sin| accepted when forming tan or cot.
const TRIG_FLOOR: f64 = 1e-300;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

impl fmt::Display for Parity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Parity::Even => "even",
            Parity::Odd => "odd",
        })
    }
}

impl std::str::FromStr for Parity {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "even" => Ok(Parity::Even),
            "odd" => Ok(Parity::Odd),
            other => Err(Error::InvalidConfig(format!("unknown parity '{other}'"))),
        }
    }
}

/// The cutoff δ of the constant core, 0 < δ ≤ 1.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PotentialParams {
    delta: f64,
}

impl PotentialParams {
    pub fn new(delta: f64) -> Result<Self> {
        if !(delta > 0.0 && delta <= 1.0) {
            return Err(Error::InvalidConfig(format!(
                "delta must lie in (0, 1], got {delta}"
            )));
        }
        Ok(Self { delta })
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    /// Depth of the core, V₀ = 2/δ.
    pub fn core_depth(&self) -> f64 {
        2.0 / self.delta
    }

    /// Smallest admissible β: below it the core wave vector is imaginary.
    pub fn beta_threshold(&self) -> f64 {
        (0.5 * self.delta).sqrt()
    }

    /// x = 1/ln(1/δ), the natural small parameter of the quantum defects.
    pub fn log_parameter(&self) -> f64 {
        1.0 / (1.0 / self.delta).ln()
    }
}

/// β = anchor + offset, with the offset (the quantum defect when the anchor
/// is the state label) stored separately so that defects far below the
/// spacing of doubles near the anchor survive.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BetaPoint {
    anchor: u32,
    offset: f64,
}

impl BetaPoint {
    pub fn new(beta: f64) -> Self {
        let anchor = beta.round().max(0.0);
        Self {
            anchor: anchor as u32,
            offset: beta - anchor,
        }
    }

    pub fn from_parts(anchor: u32, offset: f64) -> Self {
        Self { anchor, offset }
    }

    pub fn anchor(&self) -> u32 {
        self.anchor
    }

    pub fn offset(&self) -> f64 {
        self.offset
    }

    pub fn beta(&self) -> f64 {
        self.anchor as f64 + self.offset
    }

    pub fn energy(&self) -> f64 {
        let b = self.beta();
        -1.0 / (b * b)
    }

    /// First Tricomi parameter 1 - β in split form.
    pub fn tricomi_a(&self) -> SplitParam {
        SplitParam::from_parts(1 - self.anchor as i64, -self.offset)
    }

    /// Matching-point argument 2δ/β.
    pub fn seam_argument(&self, p: &PotentialParams) -> f64 {
        2.0 * p.delta / self.beta()
    }
}

/// V(x): -2/δ inside the core, -2/|x| outside.
pub fn potential(x: f64, p: &PotentialParams) -> f64 {
    let r = x.abs();
    if r <= p.delta {
        -p.core_depth()
    } else {
        -2.0 / r
    }
}

/// Core wave vector q = sqrt(2/δ - 1/β²).
pub fn wave_vector_q(beta: &BetaPoint, p: &PotentialParams) -> Result<f64> {
    let b = beta.beta();
    if !(b > 0.0) {
        return Err(Error::Domain {
            function: "wave_vector_q",
            arg: b,
            reason: "beta must be positive",
        });
    }
    let radicand = p.core_depth() - 1.0 / (b * b);
    if !(radicand > 0.0) {
        return Err(Error::Domain {
            function: "wave_vector_q",
            arg: b,
            reason: "energy below the core depth",
        });
    }
    Ok(radicand.sqrt())
}

/// ψ'/ψ at x = δ⁻ for the core solution cos(qx) or sin(qx).
pub fn logderiv_inner(parity: Parity, beta: &BetaPoint, p: &PotentialParams) -> Result<f64> {
    let q = wave_vector_q(beta, p)?;
    let (s, c) = (q * p.delta).sin_cos();
    match parity {
        Parity::Even => {
            if c.abs() < TRIG_FLOOR {
                return Err(Error::Pole {
                    function: "logderiv_inner",
                    arg: beta.beta(),
                });
            }
            Ok(-q * s / c)
        }
        Parity::Odd => {
            if s.abs() < TRIG_FLOOR {
                return Err(Error::Pole {
                    function: "logderiv_inner",
                    arg: beta.beta(),
                });
            }
            Ok(q * c / s)
        }
    }
}

/// The outer solution ζ e^{-ζ/2} U(1-β, 2, ζ), ζ = 2x/β, described at the seam
/// by `value` = ζU(1-β,2,ζ) and `slope` = d/dζ[ζU(1-β,2,ζ)] = β U(1-β,1,ζ).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OuterSeam {
    pub value: f64,
    pub slope: f64,
    /// U(1-β, 2, 2δ/β), the amplitude factor of the outer solution.
    pub u2: f64,
}

pub fn outer_seam(beta: &BetaPoint, p: &PotentialParams, ctrl: SeriesControl) -> Result<OuterSeam> {
    outer_profile(beta, p.delta, ctrl)
}

/// The same quantities at an arbitrary x > 0, ζ = 2x/β.
pub fn outer_profile(beta: &BetaPoint, x: f64, ctrl: SeriesControl) -> Result<OuterSeam> {
    let a = beta.tricomi_a();
    let z = 2.0 * x / beta.beta();
    let u1 = tricomi_u_split(a, 1.0, z, ctrl)?;
    let u2 = tricomi_u_split(a, 2.0, z, ctrl)?;
    Ok(OuterSeam {
        value: z * u2,
        slope: beta.beta() * u1,
        u2,
    })
}

/// ψ'/ψ at x = δ⁺ for the decaying outer solution:
/// -(1/β)[1 - (β²/δ) U(1-β,1,2δ/β)/U(1-β,2,2δ/β)].
pub fn logderiv_outer(beta: &BetaPoint, p: &PotentialParams) -> Result<f64> {
    logderiv_outer_with(beta, p, SeriesControl::default())
}

pub fn logderiv_outer_with(beta: &BetaPoint, p: &PotentialParams, ctrl: SeriesControl) -> Result<f64> {
    let seam = outer_seam(beta, p, ctrl)?;
    Ok((2.0 * seam.slope - seam.value) / (beta.beta() * seam.value))
}

/// Same log-derivative taken straight from differentiating
/// y e^{-y} U(1-β, 2, 2y) at y = δ/β, which brings in U(2-β, 3, ·) instead of
/// U(1-β, 1, ·).
pub fn logderiv_outer_direct(beta: &BetaPoint, p: &PotentialParams, ctrl: SeriesControl) -> Result<f64> {
    let a = beta.tricomi_a();
    let b = beta.beta();
    let z = beta.seam_argument(p);
    let u2 = tricomi_u_split(a, 2.0, z, ctrl)?;
    let u3 = tricomi_u_split(a.shift(1), 3.0, z, ctrl)?;
    Ok((b / p.delta - 1.0 - 2.0 * a.value() * u3 / u2) / b)
}

/// Outer minus inner log-derivative at the seam; zero exactly at the
/// eigenvalues of the given parity.
pub fn eigen_residual(parity: Parity, beta: &BetaPoint, p: &PotentialParams) -> Result<f64> {
    eigen_residual_with(parity, beta, p, SeriesControl::default())
}

pub fn eigen_residual_with(
    parity: Parity,
    beta: &BetaPoint,
    p: &PotentialParams,
    ctrl: SeriesControl,
) -> Result<f64> {
    let inner = logderiv_inner(parity, beta, p)?;
    let outer = logderiv_outer_with(beta, p, ctrl)?;
    Ok(outer - inner)
}

/// Wronskian form of the matching condition,
/// βqV sin(qδ) - (V - 2D) cos(qδ) (even) or -βqV cos(qδ) - (V - 2D) sin(qδ)
/// (odd), with V and D the seam value and slope. It equals the residual
/// times βV cos(qδ) (resp. βV sin(qδ)), so it shares the roots but has no
/// poles, neither from tan/cot nor from zeros of U(1-β, 2, 2δ/β).
pub fn matching_function(
    parity: Parity,
    beta: &BetaPoint,
    p: &PotentialParams,
    ctrl: SeriesControl,
) -> Result<f64> {
    let q = wave_vector_q(beta, p)?;
    let seam = outer_seam(beta, p, ctrl)?;
    let (s, c) = (q * p.delta).sin_cos();
    let bqv = beta.beta() * q * seam.value;
    let mixed = seam.value - 2.0 * seam.slope;
    Ok(match parity {
        Parity::Even => bqv * s - mixed * c,
        Parity::Odd => -bqv * c - mixed * s,
    })
}
