//! Deterministic residual sweeps over the functional identities of Γ, Ψ, U
//! and the Laguerre polynomials. Sample points come from a Weyl sequence, so
//! repeated runs visit the same arguments.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::{digamma, gamma, laguerre, laguerre_derivative, sinpi, tricomi_u, SeriesControl};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IdentityCheck {
    pub name: String,
    pub samples: usize,
    /// Largest scaled residual seen; infinite when an evaluation failed.
    pub worst: f64,
    pub tolerance: f64,
}

impl IdentityCheck {
    pub fn passed(&self) -> bool {
        self.worst <= self.tolerance
    }
}

const GOLDEN: f64 = 0.618_033_988_749_894_9;

/// k-th point of an equidistributed sequence in (lo, hi).
fn weyl(k: usize, lo: f64, hi: f64) -> f64 {
    let t = ((k as f64 + 0.5) * GOLDEN).fract();
    lo + (hi - lo) * t
}

fn sweep<F>(name: &str, samples: usize, tolerance: f64, mut residual: F) -> IdentityCheck
where
    F: FnMut(usize) -> Option<f64>,
{
    let worst = (0..samples)
        .map(|k| match residual(k) {
            Some(r) if r.is_finite() => r,
            _ => f64::INFINITY,
        })
        .fold(0.0, f64::max);
    IdentityCheck {
        name: name.to_string(),
        samples,
        worst,
        tolerance,
    }
}

fn rel(lhs: f64, rhs: f64, scale: f64) -> f64 {
    (lhs - rhs).abs() / scale.max(f64::MIN_POSITIVE)
}

/// Every suite at `samples` points each, with its acceptance tolerance.
pub fn identity_suites(samples: usize) -> Vec<IdentityCheck> {
    let ctrl = SeriesControl::default();
    let u = |a: f64, b: f64, z: f64| tricomi_u(a, b, z, ctrl).ok();
    vec![
        sweep("gamma_recurrence", samples, 1e-12, |k| {
            let z = weyl(k, 0.05, 30.0);
            let rhs = z * gamma(z).ok()?;
            Some(rel(gamma(z + 1.0).ok()?, rhs, rhs.abs()))
        }),
        sweep("gamma_reflection", samples, 1e-12, |k| {
            let z = weyl(k, 0.001, 0.999);
            Some((gamma(1.0 - z).ok()? * gamma(z).ok()? * sinpi(z) / PI - 1.0).abs())
        }),
        sweep("gamma_duplication", samples, 1e-11, |k| {
            let z = weyl(k, 0.1, 20.0);
            let lhs = PI.sqrt() * gamma(2.0 * z).ok()?;
            let rhs = 2f64.powf(2.0 * z - 1.0) * gamma(z).ok()? * gamma(z + 0.5).ok()?;
            Some(rel(lhs, rhs, lhs.abs()))
        }),
        sweep("digamma_recurrence", samples, 1e-12, |k| {
            let mut z = weyl(k, -6.0, 30.0);
            if (z - z.round()).abs() < 1e-3 {
                z += 0.01;
            }
            let lhs = digamma(z + 1.0).ok()?;
            Some(rel(lhs, digamma(z).ok()? + 1.0 / z, 1.0 + lhs.abs()))
        }),
        sweep("digamma_reflection", samples, 1e-12, |k| {
            let z = weyl(k, 0.001, 0.999);
            let lhs = digamma(1.0 - z).ok()? - digamma(z).ok()?;
            let rhs = PI / (PI * z).tan();
            Some(rel(lhs, rhs, 1.0 + rhs.abs()))
        }),
        sweep("tricomi_contiguous_a", samples, 1e-10, |k| {
            // U(a,b,z) - a U(a+1,b,z) = U(a,b-1,z)
            let (a, b, z) = tricomi_point(k);
            let (u0, u1, ub) = (u(a, b, z)?, u(a + 1.0, b, z)?, u(a, b - 1.0, z)?);
            let scale = u0.abs().max((a * u1).abs()).max(ub.abs());
            Some(rel(u0 - a * u1, ub, scale))
        }),
        sweep("tricomi_contiguous_b", samples, 1e-10, |k| {
            // (b-a-1) U(a,b-1,z) + (1-b-z) U(a,b,z) + z U(a,b+1,z) = 0
            let (a, b, z) = tricomi_point(k);
            let t1 = (b - a - 1.0) * u(a, b - 1.0, z)?;
            let t2 = (1.0 - b - z) * u(a, b, z)?;
            let t3 = z * u(a, b + 1.0, z)?;
            Some((t1 + t2 + t3).abs() / t1.abs().max(t2.abs()).max(t3.abs()))
        }),
        sweep("tricomi_laguerre_reduction", samples, 1e-10, |k| {
            // U(-n, α+1, x) = (-1)^n n! L_n^(α)(x)
            let n = (k % 9) as u32;
            let alpha = (k / 9 % 3) as f64;
            let x = weyl(k, 0.1, 20.0);
            let factorial: f64 = (1..=n).map(f64::from).product();
            let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
            let expected = sign * factorial * laguerre(n, alpha, x);
            let got = u(-(n as f64), alpha + 1.0, x)?;
            Some(rel(got, expected, expected.abs().max(factorial)))
        }),
        sweep("laguerre_lowering", samples, 1e-12, |k| {
            // L_n^(α-1) = L_n^(α) - L_{n-1}^(α)
            let n = 1 + (k % 20) as u32;
            let (alpha, x) = (weyl(k, 0.0, 4.0), weyl(k + 7919, 0.0, 30.0));
            let (ln, lm) = (laguerre(n, alpha, x), laguerre(n - 1, alpha, x));
            Some(rel(laguerre(n, alpha - 1.0, x), ln - lm, ln.abs().max(lm.abs()).max(1.0)))
        }),
        sweep("laguerre_derivative", samples, 1e-11, |k| {
            // x L_n^(α)' = n L_n^(α) - (n+α) L_{n-1}^(α)
            let n = 1 + (k % 20) as u32;
            let (alpha, x) = (weyl(k, 0.0, 4.0), weyl(k + 7919, 0.1, 30.0));
            let nf = n as f64;
            let a = nf * laguerre(n, alpha, x);
            let b = (nf + alpha) * laguerre(n - 1, alpha, x);
            Some(rel(x * laguerre_derivative(n, alpha, x), a - b, a.abs().max(b.abs()).max(1.0)))
        }),
    ]
}

fn tricomi_point(k: usize) -> (f64, f64, f64) {
    let a = weyl(k, -5.0, 5.0);
    let b = 1.0 + (k % 3) as f64;
    let z = weyl(k + 104_729, (1e-4f64).ln(), (50f64).ln()).exp();
    (a, b, z)
}
