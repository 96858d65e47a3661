//! Small-δ predictions for the quantum defects ρ_n = β - n, written in
//! terms of x = 1/ln(1/δ).

use serde::{Deserialize, Serialize};
use std::f64::consts::LN_2;

use crate::error::{Error, Result};
use crate::potential::{BetaPoint, Parity, PotentialParams};
use crate::roots::brent;
use crate::specfun::{digamma, digamma_split, EULER_GAMMA};

/// Limit of c_n as n -> ∞: 2γ - 1 + ln 2.
pub const DEFECT_LIMIT: f64 = 2.0 * EULER_GAMMA - 1.0 + LN_2;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DefectConstants {
    pub n: u32,
    pub c_n: f64,
}

/// c_0 = γ + 2 ln 2 - 1 and, for n >= 1,
/// c_n = γ - 1 - 1/(2n) + ln 2 + (H_n - ln n).
pub fn defect_constant(n: u32) -> DefectConstants {
    let c_n = if n == 0 {
        EULER_GAMMA + 2.0 * LN_2 - 1.0
    } else {
        let nf = n as f64;
        // H_n = Ψ(n+1) + γ
        let harmonic_excess = harmonic(n) - nf.ln();
        EULER_GAMMA - 1.0 - 0.5 / nf + LN_2 + harmonic_excess
    };
    DefectConstants { n, c_n }
}

fn harmonic(n: u32) -> f64 {
    if n <= 64 {
        (1..=n).rev().map(|k| 1.0 / k as f64).sum()
    } else {
        digamma(n as f64 + 1.0).unwrap_or(f64::NAN) + EULER_GAMMA
    }
}

/// ρ₀ = (x/2)[1 + x(c₀ - ln x)] and ρ_n = x(1 + c_n x) for n >= 1.
pub fn rho_even(n: u32, delta: f64) -> f64 {
    let x = log_parameter(delta);
    let c = defect_constant(n).c_n;
    if n == 0 {
        0.5 * x * (1.0 + x * (c - x.ln()))
    } else {
        x * (1.0 + c * x)
    }
}

/// Leading-order defects: ρ₀ ≈ x/2 and ρ_n ≈ x.
pub fn rho_even_crude(n: u32, delta: f64) -> f64 {
    let x = log_parameter(delta);
    if n == 0 {
        0.5 * x
    } else {
        x
    }
}

/// Older estimate 1/ρ_n = 1/x - (ln 2 - ln n), n >= 1, kept for comparison.
pub fn rho_even_legacy(n: u32, delta: f64) -> f64 {
    let x = log_parameter(delta);
    1.0 / (1.0 / x - (LN_2 - (n.max(1) as f64).ln()))
}

/// Odd defect (2/3)δ², the same for every n >= 1.
pub fn rho_odd(_n: u32, delta: f64) -> f64 {
    2.0 / 3.0 * delta * delta
}

/// Older odd estimate 2δ², lacking the factor 1/3; kept for comparison.
pub fn rho_odd_legacy(_n: u32, delta: f64) -> f64 {
    2.0 * delta * delta
}

/// x = 1/ln(1/δ); zero at δ = 0.
pub fn log_parameter(delta: f64) -> f64 {
    if delta == 0.0 {
        0.0
    } else {
        1.0 / (1.0 / delta).ln()
    }
}

/// E_n -> -1/n² as δ -> 0.
pub fn limiting_energy(n: u32) -> f64 {
    let nf = n as f64;
    -1.0 / (nf * nf)
}

/// Left minus right side of the small-δ even equation
/// 2 = 1/β + 2[2γ + ln(2δ/β) + Ψ(1-β)].
pub fn rege_residual(beta: &BetaPoint, p: &PotentialParams) -> Result<f64> {
    let b = beta.beta();
    let psi = digamma_split(beta.tricomi_a())?;
    Ok(2.0 - 1.0 / b - 2.0 * (2.0 * EULER_GAMMA + (2.0 * p.delta() / b).ln() + psi))
}

/// Root of [`rege_residual`] in (n, n + 1/2), or in (0, 1/2) for n = 0.
/// The digamma pole at integer β guarantees the sign change for n >= 1.
pub fn solve_rege(n: u32, p: &PotentialParams, beta_tol: f64, max_iter: usize) -> Result<BetaPoint> {
    let lo = if n == 0 { 1e-10 } else { 1e-12 };
    let hi = 0.5;
    let f = |rho: f64| rege_residual(&BetaPoint::from_parts(n, rho), p);
    let (f_lo, f_hi) = (f(lo)?, f(hi)?);
    if f_lo.signum() == f_hi.signum() {
        return Err(Error::NoSignChange {
            parity: Parity::Even,
            n,
            anchor: n,
            lo,
            hi,
        });
    }
    let root = brent(f, lo, hi, f_lo, f_hi, |rho| beta_tol * rho.abs().min(1.0), max_iter)?;
    Ok(BetaPoint::from_parts(n, root.x))
}

/// Second-order small-δ expansion of the odd equation, cleared of its
/// denominator: L·D - N where the equation reads L = N/D with
/// L = -1 + 2δ/3 - δ/β,
/// N = [ℓ + Ψ(1-β) - 2Ψ(1)] + (1-β)(2δ/β)[ℓ + Ψ(2-β) - 2Ψ(2)],
/// D = 1/(2δ) - [ℓ + Ψ(1-β) - Ψ(1) - Ψ(2)] + (β-1)(δ/β)[ℓ + Ψ(2-β) - Ψ(2) - Ψ(3)],
/// and ℓ = ln(2δ/β).
pub fn odd_series_residual(beta: &BetaPoint, p: &PotentialParams) -> Result<f64> {
    let (lhs, num, den) = odd_series_parts(beta, p)?;
    Ok(lhs * den - num)
}

/// Left side, numerator and denominator of the odd series condition L = N/D.
fn odd_series_parts(beta: &BetaPoint, p: &PotentialParams) -> Result<(f64, f64, f64)> {
    let b = beta.beta();
    let delta = p.delta();
    let ell = (2.0 * delta / b).ln();
    let a = beta.tricomi_a();
    let psi_a = digamma_split(a)?;
    let psi_a1 = digamma_split(a.shift(1))?;
    let psi1 = -EULER_GAMMA;
    let psi2 = 1.0 - EULER_GAMMA;
    let psi3 = 1.5 - EULER_GAMMA;
    let lhs = -1.0 + 2.0 * delta / 3.0 - delta / b;
    let one_minus_beta = a.value();
    let num = (ell + psi_a - 2.0 * psi1) + one_minus_beta * (2.0 * delta / b) * (ell + psi_a1 - 2.0 * psi2);
    let den = 0.5 / delta - (ell + psi_a - psi1 - psi2) - one_minus_beta * (delta / b) * (ell + psi_a1 - psi2 - psi3);
    Ok((lhs, num, den))
}

/// One row of a deviation table.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DeviationEntry {
    pub parity: Parity,
    pub n: u32,
    pub beta_exact: f64,
    pub rho_exact: f64,
    pub rho_predicted: f64,
    pub rho_crude: f64,
    pub abs_err: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DeviationReport {
    pub delta: f64,
    pub x: f64,
    pub entries: Vec<DeviationEntry>,
}

impl DeviationReport {
    /// Compares solved defects, given as (parity, n, β split as n + ρ),
    /// with the asymptotic predictions.
    pub fn from_states<I>(p: &PotentialParams, states: I) -> Self
    where
        I: IntoIterator<Item = (Parity, BetaPoint)>,
    {
        let delta = p.delta();
        let entries = states
            .into_iter()
            .map(|(parity, beta)| {
                let n = beta.anchor();
                let rho_exact = beta.offset();
                let (rho_predicted, rho_crude) = match parity {
                    Parity::Even => (rho_even(n, delta), rho_even_crude(n, delta)),
                    Parity::Odd => (rho_odd(n, delta), rho_odd(n, delta)),
                };
                DeviationEntry {
                    parity,
                    n,
                    beta_exact: beta.beta(),
                    rho_exact,
                    rho_predicted,
                    rho_crude,
                    abs_err: (rho_exact - rho_predicted).abs(),
                }
            })
            .collect();
        Self {
            delta,
            x: p.log_parameter(),
            entries,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn params(delta: f64) -> PotentialParams {
        PotentialParams::new(delta).unwrap()
    }

    #[test]
    fn defect_constant_values() {
        assert!((defect_constant(1).c_n - 0.7704).abs() < 5e-5);
        assert!((defect_constant(2).c_n - 0.8272).abs() < 5e-5);
        assert!((defect_constant(1_000_000).c_n - DEFECT_LIMIT).abs() < 1e-6);
        assert!((DEFECT_LIMIT - 0.8476).abs() < 5e-5);
        assert_relative_eq!(defect_constant(0).c_n, 0.963_510_026_021_423_5, max_relative = 1e-14);
    }

    #[test]
    fn defect_constant_matches_direct_sum() {
        for n in [1u32, 5, 63, 64, 65, 200, 5000] {
            let h: f64 = (1..=n).rev().map(|k| 1.0 / k as f64).sum();
            let nf = n as f64;
            let direct = EULER_GAMMA - 1.0 - 0.5 / nf + LN_2 + h - nf.ln();
            assert_relative_eq!(defect_constant(n).c_n, direct, max_relative = 1e-13);
        }
    }

    #[test]
    fn rho_even_examples() {
        let x = log_parameter(1e-7);
        assert_relative_eq!(x, 0.062_042_068_843_321_69, max_relative = 1e-12);
        assert!((rho_even(1, 1e-7) - 0.0650).abs() < 1e-4);
        assert!((rho_even(0, 1e-7) - 0.0382).abs() < 1e-4);
        assert!(rho_even(3, 1e-300) < 3e-3);
        assert_eq!(rho_even_crude(0, 1e-7), 0.5 * x);
        assert_eq!(rho_even_crude(4, 1e-7), x);
    }

    #[test]
    fn rho_odd_examples() {
        assert_relative_eq!(rho_odd(1, 0.01), 6.6667e-5, max_relative = 1e-4);
        assert_eq!(rho_odd(5, 0.01), rho_odd(1, 0.01));
        assert_eq!(rho_odd(1, 0.0), 0.0);
        assert_eq!(rho_odd_legacy(1, 0.01), 3.0 * rho_odd(1, 0.01));
    }

    #[test]
    fn legacy_even_is_first_order_equivalent() {
        // Both forms share the leading behaviour ρ_n ≈ x.
        for n in 1..=3 {
            let d = 1e-30;
            let x = log_parameter(d);
            assert!((rho_even_legacy(n, d) / x - 1.0).abs() < 0.05);
            assert!((rho_even(n, d) / x - 1.0).abs() < 0.05);
        }
    }

    #[test]
    fn limiting_energies() {
        assert_eq!(limiting_energy(1), -1.0);
        assert_eq!(limiting_energy(2), -0.25);
        assert!(limiting_energy(100_000) < 0.0 && limiting_energy(100_000) > -1e-9);
    }

    #[test]
    fn rege_roots_track_defect_formula() {
        let p = params(1e-6);
        for n in 1..=3 {
            let beta = solve_rege(n, &p, 1e-13, 200).unwrap();
            let x = p.log_parameter();
            let predicted = rho_even(n, 1e-6);
            // Agreement to the next order, O(x³).
            assert!((beta.offset() - predicted).abs() < 4.0 * x.powi(3), "n = {n}");
        }
    }

    #[test]
    fn rege_diverges_negative_just_above_integers() {
        let p = params(1e-3);
        for n in 1..=3 {
            let near = rege_residual(&BetaPoint::from_parts(n, 1e-10), &p).unwrap();
            let nearer = rege_residual(&BetaPoint::from_parts(n, 1e-12), &p).unwrap();
            assert!(near < -1e9 && nearer < near);
        }
        assert!(rege_residual(&BetaPoint::from_parts(2, 0.0), &p).is_err());
    }

    #[test]
    fn odd_series_root_near_two_thirds_delta_squared() {
        let delta = 1e-3;
        let p = params(delta);
        let rho = rho_odd(1, delta);
        let f = |r: f64| odd_series_residual(&BetaPoint::from_parts(1, r), &p).unwrap();
        let root = brent(|r| Ok(f(r)), 0.2 * rho, 5.0 * rho, f(0.2 * rho), f(5.0 * rho), |r| 1e-12 * r, 200).unwrap();
        assert!((root.x / rho - 1.0).abs() < 0.01, "{}", root.x / rho);
    }

    #[test]
    fn odd_series_finite_at_half() {
        let r = odd_series_residual(&BetaPoint::new(0.5), &params(1e-3)).unwrap();
        assert!(r.is_finite());
    }

    #[test]
    fn odd_series_has_no_root_towards_zero() {
        // Only meaningful while the seam argument 2δ/β stays small (β >= 10δ).
        // The cleared form flips sign where D passes through zero; the
        // uncleared L - N/D stays negative, so that flip is a pole, not a root.
        for &delta in &[1e-6, 1e-4, 1e-2] {
            let p = params(delta);
            let lo = 10.0 * delta;
            for i in 0..=200 {
                let b = lo * (0.45 / lo).powf(i as f64 / 200.0);
                let (lhs, num, den) = odd_series_parts(&BetaPoint::new(b), &p).unwrap();
                assert!(lhs - num / den < 0.0, "delta = {delta}, beta = {b}");
            }
        }
    }

    proptest! {
        #[test]
        fn defect_constants_increase_towards_limit(n in 1u32..2000) {
            let c = defect_constant(n).c_n;
            let next = defect_constant(n + 1).c_n;
            prop_assert!(next > c);
            prop_assert!(c < DEFECT_LIMIT);
            // c_∞ - c_n = O(1/n)
            prop_assert!((DEFECT_LIMIT - c) * n as f64 <= 0.5);
        }
    }
}
