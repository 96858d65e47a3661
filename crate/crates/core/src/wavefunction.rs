//! Normalized eigenfunctions, their δ → 0 limiting forms, and symmetric
//! sampling grids.
//!
//! A solved state is a·cos(qx) (even) or a·sin(qx) (odd) inside the core and
//! b·(|x|/β) e^{-|x|/β} U(1-β, 2, 2|x|/β) outside, reflected with the parity.
//! Signs are fixed so that ψ > 0 just to the right of the origin; the
//! limiting forms follow the same convention.

use std::cell::RefCell;

use serde::{Deserialize, Serialize};

use crate::eigensolver::{raw_amplitudes, EigenState};
use crate::error::{Error, Result};
use crate::potential::{outer_profile, wave_vector_q, BetaPoint, Parity, PotentialParams};
use crate::specfun::{laguerre, SeriesControl};

pub use crate::quadrature::QuadratureConfig;
use crate::quadrature::integrate_panels;

/// Residual a state must reach before its amplitudes are matched.
pub const MATCHING_RESIDUAL: f64 = 1e-10;
/// Panels per octave on the geometric part of the outer mesh.
const OCTAVE_PANELS: usize = 2;
/// Outer panels are at most this many decay lengths wide.
const DECAY_PANEL: f64 = 0.5;
/// The outer mesh ends no earlier than this many decay lengths out.
const MIN_DECAY_LENGTHS: f64 = 4.0;
/// and gives up this many decay lengths out.
const MAX_DECAY_LENGTHS: f64 = 2000.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Region {
    Inner,
    Outer,
}

/// Continuity amplitudes of a solved state, before normalization.
pub fn match_amplitudes(state: &EigenState, p: &PotentialParams) -> Result<(f64, f64)> {
    if !(state.residual < MATCHING_RESIDUAL) {
        return Err(Error::InvalidConfig(format!(
            "({}, {}) has residual {:e}, above {MATCHING_RESIDUAL:e}",
            state.parity, state.n, state.residual
        )));
    }
    raw_amplitudes(state.parity, &state.beta, p, SeriesControl::default())
}

/// w(x) = (x/β) e^{-x/β} U(1-β, 2, 2x/β) and its derivative, x > 0. Past the
/// overflow guard of U, where w is below 1e-150, the leading asymptotic
/// term U ≈ ζ^{β-1} is used.
fn outer_shape(beta: &BetaPoint, x: f64, series: SeriesControl) -> Result<(f64, f64)> {
    let b = beta.beta();
    let zeta = 2.0 * x / b;
    let decay = (-0.5 * zeta).exp();
    if zeta > series.overflow_guard {
        let w = 0.5 * zeta.powf(b) * decay;
        return Ok((w, w * (1.0 / x - 1.0 / b)));
    }
    let prof = outer_profile(beta, x, series)?;
    let w = 0.5 * prof.value * decay;
    let dw = (prof.slope - 0.5 * prof.value) * decay / b;
    Ok((w, dw))
}

/// ∫_0^δ cos²(qx) or sin²(qx) dx.
fn inner_square_integral(parity: Parity, q: f64, delta: f64) -> f64 {
    let cross = (2.0 * q * delta).sin() / (4.0 * q);
    match parity {
        Parity::Even => 0.5 * delta + cross,
        Parity::Odd => 0.5 * delta - cross,
    }
}

/// Runs `integrate_panels` on a fallible integrand, surfacing the first
/// evaluation error instead of a quadrature failure.
fn integrate_fallible<F>(f: F, breaks: &[f64], cfg: &QuadratureConfig) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    let failure: RefCell<Option<Error>> = RefCell::new(None);
    let wrapped = |x: f64| match f(x) {
        Ok(v) => v,
        Err(e) => {
            failure.borrow_mut().get_or_insert(e);
            f64::NAN
        }
    };
    let out = integrate_panels(wrapped, breaks, cfg);
    if let Some(e) = failure.into_inner() {
        return Err(e);
    }
    Ok(out?.value)
}

/// Breakpoints from `start` growing geometrically to the decay length
/// `scale`, then in steps of `DECAY_PANEL·scale` until `done` reports that
/// the integrand has died away.
fn outer_mesh<D>(start: f64, scale: f64, mut done: D) -> Result<Vec<f64>>
where
    D: FnMut(f64) -> Result<bool>,
{
    let mut breaks = vec![start];
    let ratio = 2f64.powf(1.0 / OCTAVE_PANELS as f64);
    let mut x = start;
    while x * ratio < scale {
        x *= ratio;
        breaks.push(x);
    }
    let step = DECAY_PANEL * scale;
    loop {
        x += step;
        breaks.push(x);
        if x >= start + MIN_DECAY_LENGTHS * scale && done(x)? {
            return Ok(breaks);
        }
        if x > start + MAX_DECAY_LENGTHS * scale {
            return Err(Error::Quadrature {
                subdivisions: breaks.len(),
                estimate: f64::INFINITY,
            });
        }
    }
}

/// A solved state with amplitudes scaled to unit norm.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Wavefunction {
    pub state: EigenState,
    pub params: PotentialParams,
    pub q: f64,
    pub a_inner: f64,
    pub b_outer: f64,
    /// ∫|ψ|² over |x| ≤ δ and over |x| ≥ δ; they sum to one.
    pub norm_inner: f64,
    pub norm_outer: f64,
    /// Outer integration ran over y = x/δ ∈ [1, y_max].
    pub y_max: f64,
    series: SeriesControl,
}

/// Matches and normalizes a solved state. The outer integral is taken over
/// y = x/δ on the ratio w(δy)/w(δ), anchored at the seam.
pub fn normalize(state: &EigenState, p: &PotentialParams, cfg: &QuadratureConfig) -> Result<Wavefunction> {
    cfg.validate()?;
    let series = SeriesControl::default();
    let (a, b) = match_amplitudes(state, p)?;
    let delta = p.delta();
    let beta = state.beta;
    let q = wave_vector_q(&beta, p)?;

    let inner = a * a * inner_square_integral(state.parity, q, delta);

    let (w_seam, _) = outer_shape(&beta, delta, series)?;
    let anchor = if w_seam != 0.0 && w_seam.is_finite() { w_seam } else { 1.0 };
    let ratio_sq = |y: f64| -> Result<f64> {
        let (w, _) = outer_shape(&beta, delta * y, series)?;
        let r = w / anchor;
        Ok(r * r)
    };
    // Decay length of ψ² in y is β/(2δ).
    let scale = beta.beta() / (2.0 * delta);
    let mut peak = ratio_sq(1.0)?;
    let mesh = outer_mesh(1.0, scale.max(1.0), |y| {
        let v = ratio_sq(y)?;
        let mid = ratio_sq(y - 0.5 * DECAY_PANEL * scale.max(1.0))?;
        peak = peak.max(v).max(mid);
        Ok(v < cfg.y_max_factor * peak)
    })?;
    let j = integrate_fallible(ratio_sq, &mesh, cfg)?;
    let outer = delta * (b * anchor).powi(2) * j;

    let total = 2.0 * (inner + outer);
    if !(total > 0.0 && total.is_finite()) {
        return Err(Error::Quadrature {
            subdivisions: 0,
            estimate: total,
        });
    }
    let scale_amp = total.sqrt().recip();
    Ok(Wavefunction {
        state: *state,
        params: *p,
        q,
        a_inner: a * scale_amp,
        b_outer: b * scale_amp,
        norm_inner: 2.0 * inner / total,
        norm_outer: 2.0 * outer / total,
        y_max: *mesh.last().unwrap_or(&1.0),
        series,
    })
}

/// ψ and ψ' on each side of the seam x = δ.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeamValues {
    pub psi_inner: f64,
    pub psi_outer: f64,
    pub dpsi_inner: f64,
    pub dpsi_outer: f64,
}

impl Wavefunction {
    pub fn parity(&self) -> Parity {
        self.state.parity
    }

    pub fn region(&self, x: f64) -> Region {
        if x.abs() <= self.params.delta() {
            Region::Inner
        } else {
            Region::Outer
        }
    }

    fn inner_at(&self, r: f64) -> (f64, f64) {
        let (s, c) = (self.q * r).sin_cos();
        match self.state.parity {
            Parity::Even => (self.a_inner * c, -self.a_inner * self.q * s),
            Parity::Odd => (self.a_inner * s, self.a_inner * self.q * c),
        }
    }

    fn outer_at(&self, r: f64) -> Result<(f64, f64)> {
        let (w, dw) = outer_shape(&self.state.beta, r, self.series)?;
        Ok((self.b_outer * w, self.b_outer * dw))
    }

    /// ψ(|x|) and dψ/d|x| for the piece containing |x|.
    fn half_line(&self, r: f64) -> Result<(f64, f64)> {
        if r <= self.params.delta() {
            Ok(self.inner_at(r))
        } else {
            self.outer_at(r)
        }
    }

    pub fn eval(&self, x: f64) -> Result<f64> {
        let (psi, _) = self.half_line(x.abs())?;
        Ok(match (self.state.parity, x < 0.0) {
            (Parity::Odd, true) => -psi,
            _ => psi,
        })
    }

    pub fn derivative(&self, x: f64) -> Result<f64> {
        let (_, d) = self.half_line(x.abs())?;
        Ok(match (self.state.parity, x < 0.0) {
            (Parity::Even, true) => -d,
            _ => d,
        })
    }

    pub fn seam(&self) -> Result<SeamValues> {
        let delta = self.params.delta();
        let (psi_inner, dpsi_inner) = self.inner_at(delta);
        let (psi_outer, dpsi_outer) = self.outer_at(delta)?;
        Ok(SeamValues {
            psi_inner,
            psi_outer,
            dpsi_inner,
            dpsi_outer,
        })
    }

    /// Length over which |ψ| decays by e far out.
    pub fn decay_length(&self) -> f64 {
        self.state.beta_value()
    }
}

/// ⟨ψ_a|ψ_b⟩ over the whole line. States of opposite parity are orthogonal
/// by symmetry and return zero.
pub fn overlap(a: &Wavefunction, b: &Wavefunction, cfg: &QuadratureConfig) -> Result<f64> {
    if a.parity() != b.parity() {
        return Ok(0.0);
    }
    let delta = a.params.delta().max(b.params.delta());
    let core = a.params.delta().min(b.params.delta());
    let product = |x: f64| -> Result<f64> { Ok(a.eval(x)? * b.eval(x)?) };
    let scale = a.decay_length().max(b.decay_length());
    let mut breaks = vec![0.0, core];
    if delta > core {
        breaks.push(delta);
    }
    let tail = outer_mesh(delta, scale, |x| {
        let v = product(x)?.abs();
        Ok(v < cfg.y_max_factor * 1e-3)
    })?;
    breaks.extend_from_slice(&tail[1..]);
    Ok(2.0 * integrate_fallible(product, &breaks, cfg)?)
}

/// The δ → 0 odd states, (2/n³)^{1/2} (x/n) e^{-|x|/n} L_{n-1}^{(1)}(2|x|/n),
/// odd in x. The customary factor (-1)^{n-1} is dropped so that the state is
/// positive just right of the origin.
pub fn limiting_odd(n: u32, x: f64) -> f64 {
    let nf = n.max(1) as f64;
    let r = x.abs();
    let value = (2.0 / (nf * nf * nf)).sqrt() * (r / nf) * (-r / nf).exp() * laguerre(n.max(1) - 1, 1.0, 2.0 * r / nf);
    if x < 0.0 {
        -value
    } else {
        value
    }
}

/// The δ → 0 even states: limiting_odd(n, |x|) for n >= 1, and for n = 0 the
/// unit-norm spike β^{-1/2} e^{-|x|/β} at the supplied β (the limit itself is
/// a delta function).
pub fn limiting_even(n: u32, x: f64, beta_for_n0: Option<f64>) -> Result<f64> {
    if n >= 1 {
        return Ok(limiting_odd(n, x.abs()));
    }
    match beta_for_n0 {
        Some(b) if b > 0.0 && b.is_finite() => Ok((-x.abs() / b).exp() / b.sqrt()),
        _ => Err(Error::InvalidConfig(
            "the limiting ground state needs a finite positive beta".into(),
        )),
    }
}

/// |⟨β^{-1/2} e^{-|x|/β} | φ⟩| for a test function φ.
pub fn ground_limit_overlap<F>(beta: f64, phi: F, cfg: &QuadratureConfig) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    cfg.validate()?;
    limiting_even(0, 0.0, Some(beta))?;
    let x_max = beta * (-cfg.y_max_factor.ln());
    let mut breaks = vec![0.0];
    let mut x = beta / 64.0;
    while x < x_max {
        breaks.push(x);
        x *= 2.0;
    }
    breaks.push(x_max);
    let integrand = |x: f64| (-x / beta).exp() / beta.sqrt() * (phi(x) + phi(-x));
    Ok(integrate_panels(integrand, &breaks, cfg)?.value.abs())
}

/// What to sample.
#[derive(Debug, Clone, Copy)]
pub enum Profile<'a> {
    Solved(&'a Wavefunction),
    LimitingOdd(u32),
    LimitingEven { n: u32, beta: Option<f64> },
}

impl Profile<'_> {
    fn parity(&self) -> Parity {
        match self {
            Profile::Solved(w) => w.parity(),
            Profile::LimitingOdd(_) => Parity::Odd,
            Profile::LimitingEven { .. } => Parity::Even,
        }
    }

    fn at(&self, x: f64) -> Result<(f64, Region)> {
        match self {
            Profile::Solved(w) => Ok((w.eval(x)?, w.region(x))),
            Profile::LimitingOdd(n) => Ok((limiting_odd(*n, x), Region::Outer)),
            Profile::LimitingEven { n, beta } => Ok((limiting_even(*n, x, *beta)?, Region::Outer)),
        }
    }

    fn decay_length(&self) -> f64 {
        match self {
            Profile::Solved(w) => w.decay_length(),
            Profile::LimitingOdd(n) => *n as f64,
            Profile::LimitingEven { n: 0, beta } => beta.unwrap_or(1.0),
            Profile::LimitingEven { n, .. } => *n as f64,
        }
    }
}

/// ψ sampled on a symmetric grid that contains the origin.
#[derive(Debug, Clone, PartialEq)]
pub struct WaveGrid {
    pub xs: Vec<f64>,
    pub psis: Vec<f64>,
    pub region_tags: Vec<Region>,
    pub state: Option<EigenState>,
    pub parity: Parity,
    /// Far-field decay length, used for the tail beyond the grid.
    pub decay_length: f64,
}

impl WaveGrid {
    /// Trapezoid rule on the grid plus the exponential tails beyond ±xmax.
    pub fn norm(&self) -> f64 {
        let body: f64 = self
            .xs
            .windows(2)
            .zip(self.psis.windows(2))
            .map(|(x, p)| 0.5 * (x[1] - x[0]) * (p[0] * p[0] + p[1] * p[1]))
            .sum();
        let edge = self.psis.last().copied().unwrap_or(0.0);
        body + edge * edge * self.decay_length
    }
}

/// Samples `npoints` (odd, at least 3) equally spaced points on
/// [-xmax, xmax]. Only x >= 0 is evaluated; the rest is mirrored, so parity
/// holds exactly.
pub fn sample(profile: &Profile, xmax: f64, npoints: usize) -> Result<WaveGrid> {
    if npoints < 3 || npoints % 2 == 0 {
        return Err(Error::InvalidConfig(format!(
            "npoints must be odd and at least 3, got {npoints}"
        )));
    }
    let floor = match profile {
        Profile::Solved(w) => w.params.delta(),
        _ => 0.0,
    };
    if !(xmax > floor && xmax.is_finite()) {
        return Err(Error::InvalidConfig(format!("xmax must exceed {floor}, got {xmax}")));
    }
    let half = npoints / 2;
    let mut xs = vec![0.0; npoints];
    let mut psis = vec![0.0; npoints];
    let mut region_tags = vec![Region::Inner; npoints];
    let odd = profile.parity() == Parity::Odd;
    for k in 0..=half {
        let x = xmax * k as f64 / half as f64;
        let (psi, region) = profile.at(x)?;
        let (right, left) = (half + k, half - k);
        xs[right] = x;
        psis[right] = psi;
        region_tags[right] = region;
        xs[left] = -x;
        psis[left] = if odd { -psi } else { psi };
        region_tags[left] = region;
    }
    xs[half] = 0.0;
    if odd {
        psis[half] = 0.0;
    }
    Ok(WaveGrid {
        xs,
        psis,
        region_tags,
        state: match profile {
            Profile::Solved(w) => Some(w.state),
            _ => None,
        },
        parity: profile.parity(),
        decay_length: profile.decay_length(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eigensolver::{solve_state, spectrum, SolverConfig};
    use crate::quadrature::integrate;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn params(delta: f64) -> PotentialParams {
        PotentialParams::new(delta).unwrap()
    }

    fn solved(parity: Parity, n: u32, delta: f64) -> Wavefunction {
        let p = params(delta);
        let s = solve_state(parity, n, &p, &SolverConfig::new(6)).unwrap();
        normalize(&s, &p, &QuadratureConfig::default()).unwrap()
    }

    /// ∫|ψ|² by composite Simpson in x on a graded mesh, independent of the
    /// tanh-sinh route used by `normalize`.
    fn simpson_norm(w: &Wavefunction) -> f64 {
        let delta = w.params.delta();
        let beta = w.state.beta_value();
        let simpson = |a: f64, b: f64, m: usize| -> f64 {
            let h = (b - a) / (2 * m) as f64;
            let f = |x: f64| w.eval(x).unwrap().powi(2);
            let mut acc = f(a) + f(b);
            for i in 1..2 * m {
                acc += if i % 2 == 1 { 4.0 } else { 2.0 } * f(a + i as f64 * h);
            }
            acc * h / 3.0
        };
        let mut total = simpson(0.0, delta, 200);
        let mut lo = delta;
        while lo < beta {
            let hi = (lo * 2.0).min(beta);
            total += simpson(lo, hi, 200);
            lo = hi;
        }
        let far = 60.0 * beta * (w.state.n.max(1) as f64);
        total += simpson(beta, far, 4000);
        2.0 * total
    }

    #[test]
    fn residual_precondition() {
        let p = params(1e-3);
        let mut s = solve_state(Parity::Even, 1, &p, &SolverConfig::default()).unwrap();
        s.residual = 1e-6;
        assert!(match_amplitudes(&s, &p).is_err());
    }

    #[test]
    fn ground_state_inner_amplitude_positive() {
        let p = params(1e-4);
        let s = solve_state(Parity::Even, 0, &p, &SolverConfig::default()).unwrap();
        let (a, _) = match_amplitudes(&s, &p).unwrap();
        assert!(a > 0.0);
    }

    #[test]
    fn normalization_matches_independent_rule() {
        for (parity, n, delta) in [(Parity::Odd, 2, 1e-3), (Parity::Even, 0, 1e-3), (Parity::Even, 1, 0.1), (Parity::Odd, 1, 1.0)] {
            let w = solved(parity, n, delta);
            assert_relative_eq!(w.norm_inner + w.norm_outer, 1.0, max_relative = 1e-14);
            let direct = simpson_norm(&w);
            assert!((direct - 1.0).abs() < 1e-9, "{parity} {n} δ={delta}: {direct}");
        }
    }

    #[test]
    fn inner_integral_closed_form_matches_quadrature() {
        let cfg = QuadratureConfig::default();
        for parity in [Parity::Even, Parity::Odd] {
            for (q, delta) in [(14.0, 0.01), (3.7, 0.5), (1.2, 1.0)] {
                let f = |x: f64| match parity {
                    Parity::Even => (q * x).cos().powi(2),
                    Parity::Odd => (q * x).sin().powi(2),
                };
                let num = integrate(f, 0.0, delta, &cfg).unwrap().value;
                assert_relative_eq!(inner_square_integral(parity, q, delta), num, max_relative = 1e-12);
            }
        }
    }

    #[test]
    fn grid_origin_is_positive_zero() {
        let g = sample(&Profile::LimitingOdd(2), 5.0, 11).unwrap();
        assert!(g.xs[5] == 0.0 && g.xs[5].is_sign_positive());
        assert!(g.psis[5].is_sign_positive());
    }

    #[test]
    fn seam_continuity() {
        let p = params(1e-3);
        let cfg = QuadratureConfig::default();
        for s in spectrum(&p, &SolverConfig::new(3)).unwrap() {
            let w = normalize(&s, &p, &cfg).unwrap();
            let seam = w.seam().unwrap();
            let grid = sample(&Profile::Solved(&w), 40.0, 4001).unwrap();
            let max_psi = grid.psis.iter().fold(0.0f64, |m, v| m.max(v.abs()));
            assert!((seam.psi_inner - seam.psi_outer).abs() / max_psi < 1e-12);
            let max_dpsi = grid.xs.iter().fold(seam.dpsi_inner.abs(), |m, &x| m.max(w.derivative(x).unwrap().abs()));
            assert!((seam.dpsi_inner - seam.dpsi_outer).abs() / max_dpsi < 1e-8, "{:?}", seam);
        }
    }

    #[test]
    fn symmetry_and_origin() {
        let odd = solved(Parity::Odd, 2, 1e-3);
        assert_eq!(odd.eval(0.0).unwrap(), 0.0);
        let even = solved(Parity::Even, 1, 1e-3);
        assert_eq!(even.derivative(0.0).unwrap(), 0.0);
        for x in [1e-4, 0.3, 2.5, 11.0] {
            assert_eq!(odd.eval(-x).unwrap(), -odd.eval(x).unwrap());
            assert_eq!(even.eval(-x).unwrap(), even.eval(x).unwrap());
        }
        // ψ > 0 just right of the origin
        assert!(odd.eval(1e-4).unwrap() > 0.0 && even.eval(1e-4).unwrap() > 0.0);
    }

    #[test]
    fn exponential_decay_rate() {
        let w = solved(Parity::Even, 1, 1e-2);
        let beta = w.state.beta_value();
        let (x1, x2) = (60.0, 70.0);
        let rate = -(w.eval(x2).unwrap() / w.eval(x1).unwrap()).ln() / (x2 - x1);
        // ψ ~ x^β e^{-x/β}(1 + O(1/x)) far out
        let expected = 1.0 / beta - beta * (x2 / x1).ln() / (x2 - x1);
        assert!((rate - expected).abs() < 1e-3 * expected, "{rate} vs {expected}");
    }

    #[test]
    fn distinct_states_are_orthogonal() {
        let p = params(1e-3);
        let cfg = QuadratureConfig::default();
        let waves: Vec<_> = spectrum(&p, &SolverConfig::new(3))
            .unwrap()
            .iter()
            .map(|s| normalize(s, &p, &cfg).unwrap())
            .collect();
        for (i, a) in waves.iter().enumerate() {
            for b in &waves[i + 1..] {
                let o = overlap(a, b, &cfg).unwrap();
                assert!(o.abs() < 1e-6, "({}, {}) vs ({}, {}): {o}", a.parity(), a.state.n, b.parity(), b.state.n);
            }
            assert_relative_eq!(overlap(a, a, &cfg).unwrap(), 1.0, max_relative = 1e-9);
        }
    }

    #[test]
    fn node_count_matches_label() {
        let p = params(1e-3);
        let cfg = QuadratureConfig::default();
        for n in 1..=4 {
            let s = solve_state(Parity::Odd, n, &p, &SolverConfig::new(4)).unwrap();
            let w = normalize(&s, &p, &cfg).unwrap();
            let grid = sample(&Profile::Solved(&w), 40.0 * n as f64, 8001).unwrap();
            let limit = sample(&Profile::LimitingOdd(n), 40.0 * n as f64, 8001).unwrap();
            let nodes = |g: &WaveGrid| {
                let right = &g.psis[g.psis.len() / 2 + 1..];
                right
                    .windows(2)
                    .filter(|v| v[0].signum() != v[1].signum() && v[0].abs().max(v[1].abs()) > 1e-12)
                    .count()
            };
            assert_eq!(nodes(&grid), n as usize - 1, "n={n}");
            assert_eq!(nodes(&limit), n as usize - 1, "n={n}");
        }
    }

    #[test]
    fn limiting_examples() {
        assert_relative_eq!(limiting_odd(1, 1.0), 2f64.sqrt() * (-1f64).exp(), max_relative = 1e-15);
        assert!(limiting_odd(2, 2.0).abs() < 1e-15);
        assert!(limiting_odd(2, 1.9) > 0.0 && limiting_odd(2, 2.1) < 0.0);
        assert_eq!(limiting_odd(3, -0.7), -limiting_odd(3, 0.7));
        assert_eq!(limiting_even(2, -0.7, None).unwrap(), limiting_odd(2, 0.7));
        assert!(limiting_even(0, 0.1, None).is_err());
    }

    #[test]
    fn limiting_forms_are_normalized() {
        let cfg = QuadratureConfig::default();
        for n in 1..=6u32 {
            let far = 80.0 * n as f64;
            let breaks: Vec<f64> = (0..=64).map(|k| far * k as f64 / 64.0).collect();
            let norm = 2.0 * integrate_panels(|x| limiting_odd(n, x).powi(2), &breaks, &cfg).unwrap().value;
            assert_relative_eq!(norm, 1.0, max_relative = 1e-10);
        }
        for beta in [1.0, 0.1, 1e-3] {
            let breaks: Vec<f64> = (0..=64).map(|k| 50.0 * beta * k as f64 / 64.0).collect();
            let f = |x| limiting_even(0, x, Some(beta)).unwrap().powi(2);
            assert_relative_eq!(2.0 * integrate_panels(f, &breaks, &cfg).unwrap().value, 1.0, max_relative = 1e-10);
        }
    }

    #[test]
    fn limiting_even_has_cusp_but_solved_state_does_not() {
        let h = 1e-6;
        for n in 1..=3 {
            let right = (limiting_even(n, h, None).unwrap() - limiting_even(n, 0.0, None).unwrap()) / h;
            let left = (limiting_even(n, 0.0, None).unwrap() - limiting_even(n, -h, None).unwrap()) / h;
            assert!((right - left).abs() > 0.1, "n={n}");
        }
        let b = 0.05;
        let right = (limiting_even(0, h, Some(b)).unwrap() - limiting_even(0, 0.0, Some(b)).unwrap()) / h;
        assert!(right < -1.0);
        let w = solved(Parity::Even, 1, 1e-3);
        assert_eq!(w.derivative(0.0).unwrap(), 0.0);
        assert_eq!(w.derivative(-0.0).unwrap(), 0.0);
    }

    #[test]
    fn ground_limit_concentrates() {
        // ∫_{|x|>ε} ψ₀² = e^{-2ε/β}
        let eps = 0.1;
        let outside = |b: f64| (-2.0 * eps / b).exp();
        assert!(outside(1e-2) < 1e-8 && outside(1e-3) < outside(1e-2));
        let cfg = QuadratureConfig::default();
        let breaks: Vec<f64> = (0..=32).map(|k| eps + 2.0 * k as f64 / 32.0).collect();
        let b = 0.05;
        let tail = 2.0 * integrate_panels(|x| limiting_even(0, x, Some(b)).unwrap().powi(2), &breaks, &cfg).unwrap().value;
        assert_relative_eq!(tail, outside(b), max_relative = 1e-8);
    }

    #[test]
    fn sample_validation_and_symmetry() {
        let w = solved(Parity::Odd, 1, 1e-3);
        assert!(sample(&Profile::Solved(&w), 10.0, 4).is_err());
        assert!(sample(&Profile::Solved(&w), 1e-4, 5).is_err());
        let g = sample(&Profile::Solved(&w), 10.0, 11).unwrap();
        assert_eq!(g.xs[5], 0.0);
        assert_eq!(g.psis[5], 0.0);
        for k in 0..5 {
            assert_eq!(g.xs[k], -g.xs[10 - k]);
            assert_eq!(g.psis[k], -g.psis[10 - k]);
        }
        assert_eq!(g.region_tags[5], Region::Inner);
        assert_eq!(g.region_tags[0], Region::Outer);
    }

    #[test]
    fn grid_norm_close_to_one() {
        let w = solved(Parity::Odd, 2, 1e-3);
        let g = sample(&Profile::Solved(&w), 60.0, 20_001).unwrap();
        assert!((g.norm() - 1.0).abs() < 1e-6, "{}", g.norm());
    }

    #[test]
    fn odd_states_match_limit() {
        for n in 1..=2 {
            let w = solved(Parity::Odd, n, 1e-3);
            let grid = sample(&Profile::Solved(&w), 20.0, 2001).unwrap();
            let sup = grid
                .xs
                .iter()
                .zip(&grid.psis)
                .map(|(&x, &p)| (p - limiting_odd(n, x)).abs())
                .fold(0.0, f64::max);
            assert!(sup < 1e-3, "n={n}: {sup}");
        }
    }

    fn gaussian(x: f64) -> f64 {
        std::f64::consts::PI.powf(-0.25) * (-0.5 * x * x).exp()
    }

    #[test]
    fn ground_overlap_closed_form() {
        // 2 π^{-1/4} β^{-1/2} ∫_0^∞ e^{-x/β - x²/2} dx
        //   = 2 π^{-1/4} β^{-1/2} √(π/2) e^{1/(2β²)} erfc(1/(√2 β)),
        // checked against the large-argument expansion at small β.
        let cfg = QuadratureConfig::default();
        for beta in [1e-2, 1e-3] {
            let o = ground_limit_overlap(beta, gaussian, &cfg).unwrap();
            let t = beta * beta;
            let series = 2.0 * std::f64::consts::PI.powf(-0.25) * beta.sqrt() * (1.0 - t + 3.0 * t * t - 15.0 * t * t * t);
            assert_relative_eq!(o, series, max_relative = 1e-9);
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]
        #[test]
        fn ground_overlap_scales_as_sqrt_beta(log_beta in -4.0f64..-2.0) {
            // The overlap falls like √β: about √10 per decade.
            let cfg = QuadratureConfig::default();
            let beta = 10f64.powf(log_beta);
            let a = ground_limit_overlap(beta, gaussian, &cfg).unwrap();
            let b = ground_limit_overlap(beta / 10.0, gaussian, &cfg).unwrap();
            prop_assert!((a / b / 10f64.sqrt() - 1.0).abs() < 1e-3);
        }

        #[test]
        fn solved_states_are_normalized(log_delta in -6.0f64..-0.5, n in 0u32..=3, odd in any::<bool>()) {
            let parity = if odd && n > 0 { Parity::Odd } else { Parity::Even };
            let w = solved(parity, n, 10f64.powf(log_delta));
            let seam = w.seam().unwrap();
            prop_assert!((seam.psi_inner - seam.psi_outer).abs() <= 1e-12 * seam.psi_inner.abs().max(seam.psi_outer.abs()).max(1e-300));
            prop_assert!((w.norm_inner + w.norm_outer - 1.0).abs() < 1e-13);
        }
    }
}
