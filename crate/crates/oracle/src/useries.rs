//! Tricomi U for integer b summed from its logarithmic series in MPFR
//! arithmetic, with the working precision grown to cover the cancellation.

use rug::float::Constant;
use rug::ops::Pow;
use rug::Float;

use crate::error::{OracleError, Result};

/// Maximum number of series terms before giving up.
const MAX_TERMS: usize = 20_000;

/// U(center + offset, n + 1, z) to about `digits` significant digits.
///
/// The first parameter is passed as an integer plus a floating offset so
/// that points within 1e-300 of a non-positive integer are representable.
/// Integer values of a at which 1/Γ(a) or 1/Γ(a - n) vanish are nudged by
/// 10^-(digits + 10): U is continuous in a and the nudge is far below the
/// target accuracy.
pub fn u_series_reference(center: i64, offset: f64, b: u32, z: f64, digits: u32) -> Result<f64> {
    if !(z > 0.0) || !z.is_finite() {
        return Err(OracleError::Domain(format!("z must be positive, got {z}")));
    }
    if b == 0 {
        return Err(OracleError::Domain("b must be a positive integer".into()));
    }
    let n = (b - 1) as u64;
    let n_signed = n as i64;
    // Terms grow like e^z before cancelling; ~z/ln(10) digits are lost.
    let guard_digits = digits as f64 + z / std::f64::consts::LN_10 + 40.0;
    let prec = (guard_digits * 3.33).ceil() as u32 + 64;

    let mut a = Float::with_val(prec, center) + Float::with_val(prec, offset);
    if offset == 0.0 && center <= n_signed {
        let nudge = Float::with_val(prec, 10).pow(-((digits + 10) as i32));
        a += nudge;
    }
    let zf = Float::with_val(prec, z);
    let lnz = zf.clone().ln();

    // 1/Γ(a - n) and 1/Γ(a)
    let a_minus_n = Float::with_val(prec, &a - n);
    let rg_shift = Float::with_val(prec, 1) / a_minus_n.gamma();
    let rg_a = Float::with_val(prec, 1) / a.clone().gamma();

    let mut n_fact = Float::with_val(prec, 1);
    for j in 2..=n {
        n_fact *= j;
    }

    // Σ_k (a)_k z^k / ((n+1)_k k!) [ln z + Ψ(a+k) - Ψ(1+k) - Ψ(n+k+1)]
    let euler = Float::with_val(prec, Constant::Euler);
    let mut psi_ak = a.clone().digamma();
    let mut psi_1k = Float::with_val(prec, -&euler);
    let mut psi_nk = Float::with_val(prec, -&euler);
    for j in 1..=n {
        psi_nk += Float::with_val(prec, 1) / j;
    }
    let mut t = Float::with_val(prec, 1);
    let mut sum = Float::with_val(prec, 0);
    let threshold = Float::with_val(prec, 10).pow(-((digits + 8) as i32));
    let mut converged = false;
    for k in 0..MAX_TERMS as u64 {
        let bracket = Float::with_val(prec, &lnz + &psi_ak) - &psi_1k - &psi_nk;
        let term = Float::with_val(prec, &t * &bracket);
        sum += &term;
        if t.is_zero() {
            converged = true;
            break;
        }
        if (k as f64) > z && term.clone().abs() < Float::with_val(prec, &threshold * sum.clone().abs()) {
            converged = true;
            break;
        }
        let ak = Float::with_val(prec, &a + k);
        psi_ak += Float::with_val(prec, 1) / &ak;
        t *= ak;
        t *= &zf;
        t /= (n + 1 + k) * (k + 1);
        psi_1k += Float::with_val(prec, 1) / (k + 1);
        psi_nk += Float::with_val(prec, 1) / (n + k + 1);
    }
    if !converged {
        return Err(OracleError::NonConvergence(MAX_TERMS));
    }
    let sign: i32 = if n % 2 == 0 { -1 } else { 1 };
    let mut total = sum * rg_shift / &n_fact * sign;

    // Finite part: (1/Γ(a)) Σ_{k=1}^{n} (k-1)! (1-a+k)_{n-k} / (n-k)! z^{-k}
    let mut finite = Float::with_val(prec, 0);
    for k in 1..=n {
        let mut c = Float::with_val(prec, 1);
        for j in 2..k {
            c *= j;
        }
        for j in 0..(n - k) {
            let factor = Float::with_val(prec, 1 + k + j) - &a;
            c *= factor;
        }
        for j in 2..=(n - k) {
            c /= j;
        }
        let zk = Float::with_val(prec, zf.clone().pow(-(k as i32)));
        finite += c * zk;
    }
    total += finite * rg_a;
    Ok(total.to_f64())
}
