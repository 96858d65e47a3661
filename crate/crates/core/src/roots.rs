//! Bracketed scalar root finding: Brent's combination of bisection, secant
//! and inverse quadratic steps. Every iterate stays inside the bracket.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Root {
    pub x: f64,
    pub fx: f64,
    pub iterations: usize,
    /// Width of the final bracket.
    pub width: f64,
}

/// Finds a root of `f` in `[lo, hi]`, where `f_lo` and `f_hi` have opposite
/// signs (or one is zero). Stops once the bracket is narrower than
/// `tol(x)` at the current best estimate `x`.
pub fn brent<F, T>(
    mut f: F,
    lo: f64,
    hi: f64,
    f_lo: f64,
    f_hi: f64,
    tol: T,
    max_iter: usize,
) -> Result<Root>
where
    F: FnMut(f64) -> Result<f64>,
    T: Fn(f64) -> f64,
{
    if f_lo == 0.0 {
        return Ok(Root { x: lo, fx: 0.0, iterations: 0, width: 0.0 });
    }
    if f_hi == 0.0 {
        return Ok(Root { x: hi, fx: 0.0, iterations: 0, width: 0.0 });
    }
    if f_lo.signum() == f_hi.signum() {
        return Err(Error::InvalidConfig(format!(
            "bracket [{lo}, {hi}] has no sign change ({f_lo}, {f_hi})"
        )));
    }

    // b is the best estimate, c the opposite end of the bracket, a the previous b.
    let (mut a, mut fa) = (lo, f_lo);
    let (mut b, mut fb) = (hi, f_hi);
    let (mut c, mut fc) = (a, fa);
    let mut d = b - a;
    let mut e = d;

    for iter in 0..max_iter {
        if fb.signum() == fc.signum() {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if fc.abs() < fb.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        let width = (c - b).abs();
        let tol_here = tol(b).max(2.0 * f64::EPSILON * b.abs()).max(f64::MIN_POSITIVE);
        if fb == 0.0 || width <= tol_here {
            return Ok(Root { x: b, fx: fb, iterations: iter, width });
        }
        let half = 0.5 * (c - b);
        let step_floor = 0.5 * tol_here;

        if e.abs() >= step_floor && fa.abs() > fb.abs() {
            // Interpolation: secant when only two distinct points exist,
            // inverse quadratic otherwise.
            let s = fb / fa;
            let (mut p, mut q) = if a == c {
                (2.0 * half * s, 1.0 - s)
            } else {
                let qa = fa / fc;
                let r = fb / fc;
                (
                    s * (2.0 * half * qa * (qa - r) - (b - a) * (r - 1.0)),
                    (qa - 1.0) * (r - 1.0) * (s - 1.0),
                )
            };
            if p > 0.0 {
                q = -q;
            } else {
                p = -p;
            }
            let min1 = 3.0 * half * q - (step_floor * q).abs();
            let min2 = (e * q).abs();
            if 2.0 * p < min1.min(min2) {
                e = d;
                d = p / q;
            } else {
                d = half;
                e = d;
            }
        } else {
            d = half;
            e = d;
        }
        a = b;
        fa = fb;
        b += if d.abs() > step_floor { d } else { step_floor.copysign(half) };
        fb = f(b)?;
    }
    Err(Error::MaxIterations {
        max_iter,
        width: (c - b).abs(),
    })
}
