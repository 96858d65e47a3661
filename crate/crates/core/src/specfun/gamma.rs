use std::f64::consts::PI;

use super::SplitParam;
use crate::error::{Error, Result};

// Lanczos approximation, g = 7, nine coefficients.
const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEFFS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

const SQRT_2PI: f64 = 2.506_628_274_631_000_7;

fn is_nonpositive_integer(x: f64) -> bool {
    x <= 0.0 && x == x.floor()
}

/// sin(πx), exact zero at the integers.
pub fn sinpi(x: f64) -> f64 {
    if !x.is_finite() {
        return f64::NAN;
    }
    // x - 2 round(x/2) is exact and lands in [-1, 1].
    let r = x - 2.0 * (0.5 * x).round();
    let (sign, r) = if r < 0.0 { (-1.0, -r) } else { (1.0, r) };
    let r = if r > 0.5 { 1.0 - r } else { r };
    sign * (PI * r).sin()
}

/// cos(πx), exact zero at the half-integers.
pub fn cospi(x: f64) -> f64 {
    if !x.is_finite() {
        return f64::NAN;
    }
    let r = (x - 2.0 * (0.5 * x).round()).abs();
    if r < 0.25 {
        (PI * r).cos()
    } else if r <= 0.75 {
        (PI * (0.5 - r)).sin()
    } else {
        -(PI * (1.0 - r)).cos()
    }
}

fn parity_sign(k: i64) -> f64 {
    if k.rem_euclid(2) == 0 {
        1.0
    } else {
        -1.0
    }
}

fn sinpi_split(p: SplitParam) -> f64 {
    parity_sign(p.center()) * sinpi(p.offset())
}

fn cospi_split(p: SplitParam) -> f64 {
    parity_sign(p.center()) * cospi(p.offset())
}

fn lanczos_series(xm: f64) -> f64 {
    LANCZOS_COEFFS[1..]
        .iter()
        .enumerate()
        .fold(LANCZOS_COEFFS[0], |acc, (i, c)| acc + c / (xm + (i + 1) as f64))
}

/// Γ(x) for x >= 0.5.
pub(super) fn gamma_lanczos(x: f64) -> f64 {
    let xm = x - 1.0;
    let t = xm + LANCZOS_G + 0.5;
    // t^(xm + 1/2) split in two halves to postpone overflow.
    let half = t.powf(0.5 * (xm + 0.5));
    SQRT_2PI * half * (half * (-t).exp()) * lanczos_series(xm)
}

/// Gamma function for real arguments.
pub fn gamma(x: f64) -> Result<f64> {
    if is_nonpositive_integer(x) {
        return Err(Error::Pole {
            function: "gamma",
            arg: x,
        });
    }
    if x == x.floor() && x <= 171.0 {
        let n = x as u32;
        return Ok((1..n).fold(1.0, |acc, k| acc * k as f64));
    }
    if x < 0.5 {
        Ok(PI / (sinpi(x) * gamma_lanczos(1.0 - x)))
    } else {
        Ok(gamma_lanczos(x))
    }
}

/// ln|Γ(x)|.
pub fn ln_gamma(x: f64) -> Result<f64> {
    if is_nonpositive_integer(x) {
        return Err(Error::Pole {
            function: "ln_gamma",
            arg: x,
        });
    }
    if x < 0.5 {
        return Ok((PI / sinpi(x).abs()).ln() - ln_gamma(1.0 - x)?);
    }
    let xm = x - 1.0;
    let t = xm + LANCZOS_G + 0.5;
    Ok(0.5 * (2.0 * PI).ln() + (xm + 0.5) * t.ln() - t + lanczos_series(xm).ln())
}

/// 1/Γ(x), an entire function: zero at the non-positive integers.
pub fn rgamma(x: f64) -> f64 {
    if is_nonpositive_integer(x) {
        return 0.0;
    }
    if x < 0.5 {
        sinpi(x) * gamma_lanczos(1.0 - x) / PI
    } else if x > 171.0 {
        (-ln_gamma(x).unwrap_or(f64::INFINITY)).exp()
    } else {
        1.0 / gamma(x).unwrap_or(f64::INFINITY)
    }
}

/// 1/Γ evaluated from the split form, accurate close to the poles of Γ.
pub fn rgamma_split(p: SplitParam) -> f64 {
    if p.value() >= 0.5 {
        rgamma(p.value())
    } else {
        sinpi_split(p) * gamma_lanczos(p.reflect(1).value()) / PI
    }
}

/// Γ(1 - a + n) (-1)^(n + center(a)) cos(π offset(a)).
///
/// This is the finite limit of π cot(π(a+k)) / Γ(a-n) for every k, which is
/// what survives of the digamma pole once multiplied by the vanishing 1/Γ.
pub(crate) fn reflected_pole_residue(a: SplitParam, n: i64) -> f64 {
    let g = gamma_lanczos(a.reflect(1 + n).value());
    parity_sign(n + a.center()) * cospi(a.offset()) * g
}

/// Digamma function Ψ(x) = Γ'(x)/Γ(x).
pub fn digamma(x: f64) -> Result<f64> {
    if is_nonpositive_integer(x) {
        return Err(Error::Pole {
            function: "digamma",
            arg: x,
        });
    }
    if x < 0.5 {
        return Ok(digamma_shifted(1.0 - x) - PI * cospi(x) / sinpi(x));
    }
    Ok(digamma_shifted(x))
}

/// Digamma from the split form; the cotangent term uses only the offset.
pub fn digamma_split(p: SplitParam) -> Result<f64> {
    if p.is_nonpositive_integer() {
        return Err(Error::Pole {
            function: "digamma",
            arg: p.value(),
        });
    }
    if p.value() >= 0.5 {
        return Ok(digamma_shifted(p.value()));
    }
    let cot = cospi_split(p) / sinpi_split(p);
    Ok(digamma_shifted(p.reflect(1).value()) - PI * cot)
}

/// Ψ(x) for x >= 0.5: upward recurrence, then the asymptotic expansion.
pub(super) fn digamma_shifted(mut x: f64) -> f64 {
    let mut acc = 0.0;
    while x < 10.0 {
        acc -= 1.0 / x;
        x += 1.0;
    }
    let inv2 = 1.0 / (x * x);
    // Bernoulli terms B_2k / (2k x^2k), k = 1..7
    let tail = inv2
        * (1.0 / 12.0
            - inv2
                * (1.0 / 120.0
                    - inv2
                        * (1.0 / 252.0
                            - inv2
                                * (1.0 / 240.0
                                    - inv2
                                        * (1.0 / 132.0
                                            - inv2 * (691.0 / 32760.0 - inv2 / 12.0))))));
    acc + x.ln() - 0.5 / x - tail
}
