use super::gamma::{digamma_shifted, gamma_lanczos, reflected_pole_residue};
use super::{rgamma, rgamma_split, SeriesControl, SplitParam, EULER_GAMMA};
use crate::error::{Error, Result};

// Below Z_SERIES the logarithmic (or reflection) series is summed directly.
// Up to Z_SERIES_MAX the logarithmic series is still used when its terms
// cancel by less than SERIES_CANCELLATION; otherwise U is carried inward
// from the asymptotic region by Taylor steps.
const Z_SERIES: f64 = 0.5;
const Z_SERIES_MAX: f64 = 20.0;
const SERIES_CANCELLATION: f64 = 30.0;
// First point tried for the asymptotic expansion; grown by 1.5x until the
// smallest term is negligible.
const Z_ASYMPTOTIC: f64 = 30.0;
const Z_ASYMPTOTIC_MAX: f64 = 1e5;
const ASYMPTOTIC_TOL: f64 = 1e-17;
const TAYLOR_TOL: f64 = 1e-17;
const TAYLOR_MAX_TERMS: usize = 400;
const STEP_FRACTION: f64 = 0.25;

fn is_integer(x: f64) -> bool {
    x == x.floor()
}

/// `p + s`, exact in the offset whenever `s` is an integer.
fn shift_real(p: SplitParam, s: f64) -> SplitParam {
    if is_integer(s) && s.abs() < 1e15 {
        p.shift(s as i64)
    } else {
        SplitParam::new(p.value() + s)
    }
}

fn factorial(n: i64) -> f64 {
    (2..=n).fold(1.0, |acc, k| acc * k as f64)
}

/// Kummer's function M(a, b, z) = Σ (a)_k z^k / ((b)_k k!).
///
/// Negative z is mapped through M(a, b, z) = e^z M(b - a, b, -z) unless the
/// series is a terminating polynomial.
pub fn kummer_m(a: f64, b: f64, z: f64, ctrl: SeriesControl) -> Result<f64> {
    if b <= 0.0 && is_integer(b) {
        return Err(Error::ParameterPole {
            function: "kummer_m",
            name: "b",
            value: b,
        });
    }
    if !z.is_finite() || z.abs() > ctrl.overflow_guard {
        return Err(Error::Overflow {
            function: "kummer_m",
            magnitude: z.abs(),
            guard: ctrl.overflow_guard,
        });
    }
    let polynomial = a <= 0.0 && is_integer(a);
    if z < 0.0 && !polynomial {
        return Ok(z.exp() * kummer_series(b - a, b, -z, &ctrl)?);
    }
    kummer_series(a, b, z, &ctrl)
}

fn kummer_series(a: f64, b: f64, z: f64, ctrl: &SeriesControl) -> Result<f64> {
    let mut term = 1.0;
    let mut sum = 1.0;
    let mut quiet = 0;
    for k in 0..ctrl.max_terms {
        let kf = k as f64;
        term *= (a + kf) * z / ((b + kf) * (kf + 1.0));
        sum += term;
        if term == 0.0 {
            return Ok(sum);
        }
        if term.abs() <= ctrl.rel_tol * sum.abs() {
            quiet += 1;
            if quiet == 2 {
                return Ok(sum);
            }
        } else {
            quiet = 0;
        }
    }
    Err(Error::NonConvergence {
        function: "kummer_m",
        terms: ctrl.max_terms,
    })
}

/// Tricomi's confluent hypergeometric function U(a, b, z) for z > 0.
pub fn tricomi_u(a: f64, b: f64, z: f64, ctrl: SeriesControl) -> Result<f64> {
    tricomi_u_split(SplitParam::new(a), b, z, ctrl)
}

/// U(a, b, z) with `a` in split form, so that a = -m + ε keeps every digit
/// of ε however small it is.
pub fn tricomi_u_split(a: SplitParam, b: f64, z: f64, ctrl: SeriesControl) -> Result<f64> {
    if !(z > 0.0) {
        return Err(Error::Domain {
            function: "tricomi_u",
            arg: z,
            reason: "z must be positive",
        });
    }
    if !z.is_finite() || z > ctrl.overflow_guard {
        return Err(Error::Overflow {
            function: "tricomi_u",
            magnitude: z,
            guard: ctrl.overflow_guard,
        });
    }
    if a.value() == 0.0 {
        return Ok(1.0);
    }
    // Kummer transformation: U(a, b, z) = z^(1-b) U(a-b+1, 2-b, z).
    if b < 1.0 && is_integer(b) {
        let inner = tricomi_u_split(shift_real(a, 1.0 - b), 2.0 - b, z, ctrl)?;
        return Ok(z.powf(1.0 - b) * inner);
    }
    if a.is_nonpositive_integer() {
        return Ok(u_polynomial(-a.center(), b, z));
    }
    if is_integer(b) {
        if z <= Z_SERIES_MAX {
            let (u, magnitude) = u_log_series(a, b as i64 - 1, z, &ctrl)?;
            if z <= Z_SERIES || magnitude <= SERIES_CANCELLATION * u.abs() {
                return Ok(u);
            }
        }
        return u_inward(a, b, z);
    }
    if z > Z_SERIES {
        return u_inward(a, b, z);
    }
    u_reflection(a, b, z, &ctrl)
}

/// U(-m, b, z) = (-1)^m Σ_k C(m, k) (b + k)_(m - k) (-z)^k.
fn u_polynomial(m: i64, b: f64, z: f64) -> f64 {
    let mut sum = 0.0;
    let mut binom = 1.0;
    for k in 0..=m {
        let rising: f64 = (k..m).fold(1.0, |acc, j| acc * (b + j as f64));
        sum += binom * rising * (-z).powi(k as i32);
        binom *= (m - k) as f64 / (k + 1) as f64;
    }
    if m % 2 == 0 {
        sum
    } else {
        -sum
    }
}

/// Logarithmic series for b = n + 1 with n >= 0. Returns the value and the
/// sum of the magnitudes of its terms, whose ratio measures the cancellation.
///
/// The product 1/Γ(a-n) Ψ(a+k) is formed through the reflection formula
/// whenever a + k < 1/2, so that the vanishing prefactor and the diverging
/// digamma never meet as separate floating-point numbers.
fn u_log_series(a: SplitParam, n: i64, z: f64, ctrl: &SeriesControl) -> Result<(f64, f64)> {
    let g_shifted = rgamma_split(a.shift(-n));
    let lnz = z.ln();

    let mut finite = 0.0;
    let mut magnitude = 0.0;
    let g_a = rgamma_split(a);
    if n >= 1 && g_a != 0.0 {
        for k in 1..=n {
            let rising: f64 = (0..n - k).fold(1.0, |acc, j| acc * a.reflect(1 + k + j).value());
            let term = factorial(k - 1) * rising / factorial(n - k) * z.powi(-(k as i32));
            finite += term;
            magnitude += term.abs();
        }
        finite *= g_a;
        magnitude *= g_a.abs();
    }

    let prefactor = if n % 2 == 0 { -1.0 } else { 1.0 } / factorial(n);
    let mut residue = None;
    let mut t = 1.0;
    let mut psi_k1 = -EULER_GAMMA;
    let mut psi_kn = digamma_shifted((n + 1) as f64);
    let mut sum = 0.0;
    let mut quiet = 0;
    for k in 0..ctrl.max_terms as i64 {
        let ak = a.shift(k);
        let pole_part = if ak.value() >= 0.5 {
            g_shifted * digamma_shifted(ak.value())
        } else {
            let r = *residue.get_or_insert_with(|| reflected_pole_residue(a, n));
            g_shifted * digamma_shifted(ak.reflect(1).value()) - r
        };
        let term = t * (g_shifted * (lnz - psi_k1 - psi_kn) + pole_part);
        sum += term;
        magnitude += (prefactor * term).abs();
        let total = prefactor * sum + finite;
        if t == 0.0 {
            return Ok((total, magnitude));
        }
        if term.abs() * prefactor.abs() <= ctrl.rel_tol * total.abs() {
            quiet += 1;
            if quiet == 2 {
                return Ok((total, magnitude));
            }
        } else {
            quiet = 0;
        }
        t *= ak.value() * z / (((n + 1 + k) * (k + 1)) as f64);
        psi_k1 += 1.0 / (k + 1) as f64;
        psi_kn += 1.0 / (n + k + 1) as f64;
    }
    Err(Error::NonConvergence {
        function: "tricomi_u",
        terms: ctrl.max_terms,
    })
}

/// Non-integer b: U = Γ(1-b)/Γ(a-b+1) M(a,b,z) + Γ(b-1)/Γ(a) z^(1-b) M(a-b+1, 2-b, z).
fn u_reflection(a: SplitParam, b: f64, z: f64, ctrl: &SeriesControl) -> Result<f64> {
    let a1 = shift_real(a, 1.0 - b);
    let g1 = gamma_any(1.0 - b) * rgamma_split(a1);
    let g2 = gamma_any(b - 1.0) * rgamma_split(a);
    let mut u = 0.0;
    if g1 != 0.0 {
        u += g1 * kummer_m(a.value(), b, z, *ctrl)?;
    }
    if g2 != 0.0 {
        u += g2 * z.powf(1.0 - b) * kummer_m(a1.value(), 2.0 - b, z, *ctrl)?;
    }
    Ok(u)
}

fn gamma_any(x: f64) -> f64 {
    if x >= 0.5 {
        gamma_lanczos(x)
    } else {
        1.0 / rgamma(x)
    }
}

/// Asymptotic expansion z^(-a) Σ (a)_k (a-b+1)_k / k! (-z)^(-k), or `None`
/// when the smallest term is not negligible at this z.
fn u_asymptotic(a: SplitParam, b: f64, z: f64) -> Option<f64> {
    let a1 = shift_real(a, 1.0 - b);
    let mut term = 1.0f64;
    let mut sum = 1.0f64;
    for k in 0..200i64 {
        let next = -term * a.shift(k).value() * a1.shift(k).value() / ((k + 1) as f64 * z);
        if next == 0.0 {
            sum += next;
            break;
        }
        if next.abs() > term.abs() && k > 0 {
            return None;
        }
        sum += next;
        term = next;
        if term.abs() <= ASYMPTOTIC_TOL * sum.abs() {
            break;
        }
    }
    Some((-a.value() * z.ln()).exp() * sum)
}

/// Integrates Kummer's equation z w'' + (b - z) w' - a w = 0 inward from a
/// point where the asymptotic expansion is accurate. U is the solution that
/// grows towards small z, so the inward direction is stable.
fn u_inward(a: SplitParam, b: f64, z: f64) -> Result<f64> {
    let mut z0 = z.max(Z_ASYMPTOTIC);
    let (mut w, mut dw) = loop {
        if let Some(u) = u_asymptotic(a, b, z0) {
            if let Some(u1) = u_asymptotic(a.shift(1), b + 1.0, z0) {
                break (u, -a.value() * u1);
            }
        }
        z0 *= 1.5;
        if z0 > Z_ASYMPTOTIC_MAX {
            return Err(Error::NonConvergence {
                function: "tricomi_u",
                terms: 200,
            });
        }
    };
    while z0 > z {
        let h = (z - z0).max(-STEP_FRACTION * z0);
        let (nw, ndw) = taylor_step(a, b, z0, w, dw, h)?;
        w = nw;
        dw = ndw;
        z0 = if h == z - z0 { z } else { z0 + h };
    }
    Ok(w)
}

fn taylor_step(a: SplitParam, b: f64, z0: f64, w: f64, dw: f64, h: f64) -> Result<(f64, f64)> {
    let mut c0 = w;
    let mut c1 = dw;
    let mut sum_w = w + dw * h;
    let mut sum_dw = dw;
    let mut hk = h; // h^(k+1)
    let mut quiet = 0;
    for k in 0..TAYLOR_MAX_TERMS {
        let kf = k as f64;
        let c2 = (-(kf + 1.0) * (kf + b - z0) * c1 + a.shift(k as i64).value() * c0)
            / (z0 * (kf + 1.0) * (kf + 2.0));
        let dterm = (kf + 2.0) * c2 * hk;
        hk *= h;
        let wterm = c2 * hk;
        sum_w += wterm;
        sum_dw += dterm;
        if wterm.abs() <= TAYLOR_TOL * sum_w.abs() && dterm.abs() <= TAYLOR_TOL * sum_dw.abs() {
            quiet += 1;
            if quiet == 2 {
                return Ok((sum_w, sum_dw));
            }
        } else {
            quiet = 0;
        }
        c0 = c1;
        c1 = c2;
    }
    Err(Error::NonConvergence {
        function: "tricomi_u",
        terms: TAYLOR_MAX_TERMS,
    })
}
