//! Bound states by bracketing and refining roots of the matching condition.
//!
//! Each state is searched in offset space: β = n + ρ with the anchor n held
//! exactly, so odd defects of order δ² are resolved even when they lie far
//! below the spacing of doubles near n. Roots are found on the pole-free
//! Wronskian form of the matching condition, which vanishes exactly where
//! the outer and inner log-derivatives agree.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::asymptotics::{rege_residual, rho_even, rho_odd, solve_rege};
use crate::error::{Error, Result};
use crate::potential::{
    logderiv_inner, logderiv_outer_with, matching_function, outer_seam, wave_vector_q, BetaPoint, Parity,
    PotentialParams,
};
use crate::roots::brent;
use crate::specfun::SeriesControl;

/// Upper end of the extended search, as an offset from the anchor. Every
/// state of either parity has 0 < ρ < 1 for δ ≤ 1.
const OFFSET_CEILING: f64 = 1.0 - 1e-6;
/// Subintervals of the fallback scans.
const WINDOW_SCAN: usize = 16;
const EXTENDED_SCAN: usize = 48;
/// Growth factor of the guess-centred bracket.
const EXPANSION: f64 = 4.0;
/// Residual accepted for a zero-width bracket.
const DEGENERATE_RESIDUAL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    /// Tolerance on β; the refinement stops on beta_tol·min(1, ρ) in the
    /// offset, which is never looser.
    pub beta_tol: f64,
    pub max_iter: usize,
    pub n_max: u32,
    /// Width of the first search window above each integer.
    pub bracket_pad: f64,
    /// Even states at δ below this are taken from the small-δ equation.
    pub rege_switch: f64,
    pub series: SeriesControl,
}

impl SolverConfig {
    pub fn new(n_max: u32) -> Self {
        Self {
            n_max,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.beta_tol > 0.0 && self.beta_tol.is_finite()) {
            return Err(Error::InvalidConfig(format!("beta_tol must be positive, got {}", self.beta_tol)));
        }
        if self.max_iter == 0 {
            return Err(Error::InvalidConfig("max_iter must be positive".into()));
        }
        if self.n_max == 0 {
            return Err(Error::InvalidConfig("n_max must be positive".into()));
        }
        // windows around consecutive integers must not overlap
        if !(self.bracket_pad > 0.0 && self.bracket_pad < 0.5) {
            return Err(Error::InvalidConfig(format!(
                "bracket_pad must lie in (0, 0.5), got {}",
                self.bracket_pad
            )));
        }
        if !(self.rege_switch >= 0.0) {
            return Err(Error::InvalidConfig(format!(
                "rege_switch must be non-negative, got {}",
                self.rege_switch
            )));
        }
        Ok(())
    }
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            beta_tol: 1e-12,
            max_iter: 200,
            n_max: 3,
            bracket_pad: 0.4,
            rege_switch: 1e-8,
            series: SeriesControl::default(),
        }
    }
}

/// Which equation produced β.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SolveMethod {
    /// The full matching condition.
    Exact,
    /// The small-δ even equation 2 = 1/β + 2[2γ + ln(2δ/β) + Ψ(1-β)].
    Asymptotic,
}

/// A converged bound state. The coefficient of the growing outer solution is
/// zero for every bound state and is not stored.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EigenState {
    pub parity: Parity,
    pub n: u32,
    pub beta: BetaPoint,
    pub energy: f64,
    /// |L_out - L_in| / max(1, |L_in|) with L the seam log-derivatives; for
    /// asymptotic states, |residual| of the equation actually solved.
    pub residual: f64,
    /// Core amplitude: cos(qx) for even states, sin(qx) for odd ones.
    pub a_inner: f64,
    /// Amplitude of (x/β) e^{-x/β} U(1-β, 2, 2x/β).
    pub b_outer: f64,
    pub method: SolveMethod,
}

impl EigenState {
    pub fn beta_value(&self) -> f64 {
        self.beta.beta()
    }

    /// ρ = β - n.
    pub fn rho(&self) -> f64 {
        if self.n == self.beta.anchor() {
            self.beta.offset()
        } else {
            self.beta.beta() - self.n as f64
        }
    }
}

/// A sign change of the matching function in offsets [lo, hi] from `anchor`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bracket {
    pub parity: Parity,
    pub n: u32,
    pub anchor: u32,
    pub lo: f64,
    pub hi: f64,
    pub f_lo: f64,
    pub f_hi: f64,
}

impl Bracket {
    pub fn beta_lo(&self) -> f64 {
        self.anchor as f64 + self.lo
    }

    pub fn beta_hi(&self) -> f64 {
        self.anchor as f64 + self.hi
    }

    pub fn contains(&self, beta: f64) -> bool {
        beta >= self.beta_lo() && beta <= self.beta_hi()
    }
}

fn check_label(parity: Parity, n: u32) -> Result<()> {
    if n == 0 && parity == Parity::Odd {
        return Err(Error::InvalidConfig("odd states start at n = 1".into()));
    }
    Ok(())
}

/// Lowest admissible offset for the ground state: just above the point where
/// the core wave vector vanishes.
fn ground_floor(p: &PotentialParams) -> f64 {
    p.beta_threshold() * (1.0 + 1e-12)
}

/// Locates a sign change for state (parity, n). The search starts from the
/// asymptotic defect guess and grows geometrically inside the first window
/// ([n, n + pad], or [√(δ/2), 1/2] for the ground state), falls back to a
/// scan of that window, and finally scans up to n + 1.
pub fn bracket(parity: Parity, n: u32, p: &PotentialParams, cfg: &SolverConfig) -> Result<Bracket> {
    cfg.validate()?;
    check_label(parity, n)?;
    let delta = p.delta();
    let f = |rho: f64| matching_function(parity, &BetaPoint::from_parts(n, rho), p, cfg.series);
    let make = |lo, hi, f_lo, f_hi| Bracket {
        parity,
        n,
        anchor: n,
        lo,
        hi,
        f_lo,
        f_hi,
    };

    let (w_lo, w_hi, guess) = if n == 0 {
        (ground_floor(p), 0.5, rho_even(0, delta))
    } else {
        let guess = match parity {
            Parity::Even => rho_even(n, delta),
            Parity::Odd => rho_odd(n, delta),
        };
        (0.0, cfg.bracket_pad, guess)
    };

    if w_lo < w_hi {
        let f_wlo = f(w_lo)?;
        let f_whi = f(w_hi)?;
        let centre = if guess.is_finite() && guess > w_lo && guess < w_hi {
            guess
        } else {
            0.5 * (w_lo + w_hi)
        };
        let mut half = (0.25 * (centre - w_lo).abs()).max(f64::MIN_POSITIVE);
        loop {
            let lo = (centre - half).max(w_lo);
            let hi = (centre + half).min(w_hi);
            let f_lo = if lo == w_lo { f_wlo } else { f(lo)? };
            let f_hi = if hi == w_hi { f_whi } else { f(hi)? };
            if f_lo.signum() != f_hi.signum() || f_lo == 0.0 || f_hi == 0.0 {
                return Ok(make(lo, hi, f_lo, f_hi));
            }
            if lo == w_lo && hi == w_hi {
                break;
            }
            half *= EXPANSION;
        }
        if let Some((lo, hi, f_lo, f_hi)) = scan(&f, w_lo, w_hi, WINDOW_SCAN)? {
            return Ok(make(lo, hi, f_lo, f_hi));
        }
    }

    let ext_lo = w_hi.max(w_lo);
    if let Some((lo, hi, f_lo, f_hi)) = scan(&f, ext_lo, OFFSET_CEILING, EXTENDED_SCAN)? {
        return Ok(make(lo, hi, f_lo, f_hi));
    }
    Err(Error::NoSignChange {
        parity,
        n,
        anchor: n,
        lo: w_lo,
        hi: OFFSET_CEILING,
    })
}

type Sample = (f64, f64, f64, f64);

fn scan<F>(f: &F, lo: f64, hi: f64, pieces: usize) -> Result<Option<Sample>>
where
    F: Fn(f64) -> Result<f64>,
{
    let step = (hi - lo) / pieces as f64;
    let mut x0 = lo;
    let mut f0 = f(lo)?;
    for i in 1..=pieces {
        let x1 = if i == pieces { hi } else { lo + step * i as f64 };
        let f1 = f(x1)?;
        if f0.signum() != f1.signum() || f0 == 0.0 || f1 == 0.0 {
            return Ok(Some((x0, x1, f0, f1)));
        }
        x0 = x1;
        f0 = f1;
    }
    Ok(None)
}

/// Refines a bracket with Brent's method (bisection safeguarded, never
/// leaving the bracket) and builds the state with unnormalized amplitudes.
pub fn refine(br: &Bracket, p: &PotentialParams, cfg: &SolverConfig) -> Result<EigenState> {
    cfg.validate()?;
    let (parity, anchor) = (br.parity, br.anchor);
    let f = |rho: f64| matching_function(parity, &BetaPoint::from_parts(anchor, rho), p, cfg.series);
    if br.lo == br.hi {
        let state = build_state(parity, br.n, BetaPoint::from_parts(anchor, br.lo), p, cfg, SolveMethod::Exact)?;
        if state.residual < DEGENERATE_RESIDUAL {
            return Ok(state);
        }
        return Err(Error::NoSignChange {
            parity,
            n: br.n,
            anchor,
            lo: br.lo,
            hi: br.hi,
        });
    }
    let root = brent(f, br.lo, br.hi, br.f_lo, br.f_hi, |rho| cfg.beta_tol * rho.abs().min(1.0), cfg.max_iter)?;
    build_state(parity, br.n, BetaPoint::from_parts(anchor, root.x), p, cfg, SolveMethod::Exact)
}

/// Solves one state, taking even states below the switch from the small-δ
/// equation.
pub fn solve_state(parity: Parity, n: u32, p: &PotentialParams, cfg: &SolverConfig) -> Result<EigenState> {
    cfg.validate()?;
    check_label(parity, n)?;
    if parity == Parity::Even && p.delta() < cfg.rege_switch {
        let beta = solve_rege(n, p, cfg.beta_tol, cfg.max_iter)?;
        return build_state(parity, n, beta, p, cfg, SolveMethod::Asymptotic);
    }
    let br = bracket(parity, n, p, cfg)?;
    refine(&br, p, cfg)
}

/// (Even, 0) followed by (Even, n) and (Odd, n) for n = 1..=n_max,
/// restricted to one parity when given.
pub fn state_labels(n_max: u32, only: Option<Parity>) -> Vec<(Parity, u32)> {
    let mut labels = Vec::with_capacity(2 * n_max as usize + 1);
    if only != Some(Parity::Odd) {
        labels.push((Parity::Even, 0));
    }
    for n in 1..=n_max {
        for parity in [Parity::Even, Parity::Odd] {
            if only.map_or(true, |o| o == parity) {
                labels.push((parity, n));
            }
        }
    }
    labels
}

/// Solves the given states in parallel and returns them by increasing energy.
pub fn solve_states(labels: &[(Parity, u32)], p: &PotentialParams, cfg: &SolverConfig) -> Result<Vec<EigenState>> {
    cfg.validate()?;
    let mut states = labels
        .par_iter()
        .map(|&(parity, n)| solve_state(parity, n, p, cfg))
        .collect::<Result<Vec<_>>>()?;
    states.sort_by(|a, b| a.energy.total_cmp(&b.energy));
    Ok(states)
}

/// All states up to `cfg.n_max`, by increasing energy.
pub fn spectrum(p: &PotentialParams, cfg: &SolverConfig) -> Result<Vec<EigenState>> {
    solve_states(&state_labels(cfg.n_max, None), p, cfg)
}

fn build_state(
    parity: Parity,
    n: u32,
    beta: BetaPoint,
    p: &PotentialParams,
    cfg: &SolverConfig,
    method: SolveMethod,
) -> Result<EigenState> {
    let residual = match method {
        SolveMethod::Exact => relative_residual(parity, &beta, p, cfg.series)?,
        SolveMethod::Asymptotic => rege_residual(&beta, p)?.abs(),
    };
    let (a_inner, b_outer) = raw_amplitudes(parity, &beta, p, cfg.series)?;
    Ok(EigenState {
        parity,
        n,
        beta,
        energy: beta.energy(),
        residual,
        a_inner,
        b_outer,
        method,
    })
}

/// |L_out - L_in| / max(1, |L_in|).
pub fn relative_residual(parity: Parity, beta: &BetaPoint, p: &PotentialParams, series: SeriesControl) -> Result<f64> {
    let inner = logderiv_inner(parity, beta, p)?;
    let outer = logderiv_outer_with(beta, p, series)?;
    Ok((outer - inner).abs() / inner.abs().max(1.0))
}

/// Amplitudes making ψ continuous at x = δ:
/// a_inner·trig(qδ) = b_outer·(δ/β) e^{-δ/β} U(1-β, 2, 2δ/β), with trig = cos
/// (even) or sin (odd). The larger side is scaled to one, so a vanishing
/// trig factor moves the scale onto the outer amplitude. Signs make ψ
/// positive just to the right of the origin.
pub fn raw_amplitudes(
    parity: Parity,
    beta: &BetaPoint,
    p: &PotentialParams,
    series: SeriesControl,
) -> Result<(f64, f64)> {
    let q = wave_vector_q(beta, p)?;
    let seam = outer_seam(beta, p, series)?;
    let b = beta.beta();
    let trig = match parity {
        Parity::Even => (q * p.delta()).cos(),
        Parity::Odd => (q * p.delta()).sin(),
    };
    let outer = 0.5 * seam.value * (-p.delta() / b).exp();
    let (a, bo) = if trig.abs() >= outer.abs() {
        (outer / trig, 1.0)
    } else {
        (1.0, trig / outer)
    };
    Ok(if a < 0.0 { (-a, -bo) } else { (a, bo) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::asymptotics::rho_even;
    use proptest::prelude::*;

    fn params(delta: f64) -> PotentialParams {
        PotentialParams::new(delta).unwrap()
    }

    // Reference β from a 30-digit evaluation of the matching condition with
    // an independent confluent hypergeometric implementation.
    const EVEN_1E7: [f64; 3] = [0.039_428_273_861_9, 1.064_303_248_72, 2.064_505_927_04];
    const EVEN_1E1: [f64; 4] = [0.331_529_383_461, 1.370_103_762_47, 2.372_433_565_78, 3.373_046_501_51];
    const ODD_1E1: [f64; 3] = [1.005_640_189_57, 2.005_638_295_77, 3.005_637_963_92];
    const EVEN_UNIT: [f64; 3] = [0.798_933_531_268_6, 1.747_617_213_455_6, 2.741_317_044_558_3];
    const ODD_UNIT: [f64; 3] = [1.192_615_080_048_6, 2.189_965_262_271_5, 3.189_374_594_052_6];

    #[test]
    fn config_validation() {
        assert!(SolverConfig::default().validate().is_ok());
        for pad in [0.0, 0.5, -0.1, f64::NAN] {
            let cfg = SolverConfig { bracket_pad: pad, ..Default::default() };
            assert!(cfg.validate().is_err(), "pad {pad}");
        }
        assert!(SolverConfig { beta_tol: 0.0, ..Default::default() }.validate().is_err());
        assert!(SolverConfig { max_iter: 0, ..Default::default() }.validate().is_err());
        assert!(SolverConfig::new(0).validate().is_err());
    }

    #[test]
    fn odd_ground_label_rejected() {
        assert!(bracket(Parity::Odd, 0, &params(0.1), &SolverConfig::default()).is_err());
    }

    #[test]
    fn bracket_examples() {
        let cfg = SolverConfig::default();
        let br = bracket(Parity::Odd, 1, &params(0.01), &cfg).unwrap();
        assert!(br.lo <= 2.0 / 3.0 * 1e-4 && br.hi >= 2.0 / 3.0 * 1e-4, "{br:?}");

        let br = bracket(Parity::Even, 0, &params(1e-4), &cfg).unwrap();
        assert!(br.beta_lo() > 5e-5f64.sqrt() && br.beta_hi() < 0.5, "{br:?}");

        let br = bracket(Parity::Even, 2, &params(1e-7), &cfg).unwrap();
        assert!(br.contains(EVEN_1E7[2]), "{br:?}");
        assert!(br.f_lo.signum() != br.f_hi.signum());
    }

    #[test]
    fn refine_odd_defect() {
        let p = params(0.01);
        let cfg = SolverConfig::default();
        let s = refine(&bracket(Parity::Odd, 1, &p, &cfg).unwrap(), &p, &cfg).unwrap();
        let predicted = 2.0 / 3.0 * 1e-4;
        assert!((s.rho() / predicted - 1.0).abs() < 0.05, "{}", s.rho());
        assert!(s.residual < 1e-10);
        assert!(s.energy < 0.0);
    }

    #[test]
    fn refine_even_tracks_defect_formula() {
        let p = params(1e-7);
        let s = solve_state(Parity::Even, 1, &p, &SolverConfig::default()).unwrap();
        assert_eq!(s.method, SolveMethod::Exact);
        let predicted = 1.0 + rho_even(1, 1e-7);
        assert!((s.beta_value() / predicted - 1.0).abs() < 1e-2);
        assert!((s.beta_value() - EVEN_1E7[1]).abs() < 1e-10, "{}", s.beta_value());
    }

    #[test]
    fn degenerate_bracket() {
        let p = params(0.01);
        let cfg = SolverConfig::default();
        let s = solve_state(Parity::Odd, 2, &p, &cfg).unwrap();
        let f = matching_function(Parity::Odd, &s.beta, &p, cfg.series).unwrap();
        let at_root = Bracket {
            parity: Parity::Odd,
            n: 2,
            anchor: 2,
            lo: s.beta.offset(),
            hi: s.beta.offset(),
            f_lo: f,
            f_hi: f,
        };
        assert_eq!(refine(&at_root, &p, &cfg).unwrap().beta, s.beta);
        let off_root = Bracket { lo: 0.2, hi: 0.2, ..at_root };
        assert!(refine(&off_root, &p, &cfg).is_err());
    }

    #[test]
    fn matches_reference_values() {
        let cfg = SolverConfig::new(3);
        let cases: [(f64, Parity, &[f64]); 5] = [
            (1e-7, Parity::Even, &EVEN_1E7),
            (0.1, Parity::Even, &EVEN_1E1),
            (0.1, Parity::Odd, &ODD_1E1),
            (1.0, Parity::Even, &EVEN_UNIT),
            (1.0, Parity::Odd, &ODD_UNIT),
        ];
        for (delta, parity, refs) in cases {
            let p = params(delta);
            for (i, &r) in refs.iter().enumerate() {
                let n = if parity == Parity::Even { i as u32 } else { i as u32 + 1 };
                let s = solve_state(parity, n, &p, &cfg).unwrap();
                assert!((s.beta_value() - r).abs() < 1e-10, "δ={delta} {parity} {n}: {}", s.beta_value());
                assert!(s.residual < 1e-10, "δ={delta} {parity} {n}: {}", s.residual);
            }
        }
    }

    #[test]
    fn spectrum_count_and_order() {
        let p = params(1e-3);
        let states = spectrum(&p, &SolverConfig::new(3)).unwrap();
        assert_eq!(states.len(), 7);
        assert!(states.iter().all(|s| s.residual < 1e-10));
        assert!(states.windows(2).all(|w| w[0].energy < w[1].energy));
        // ground, then the odd member of each doublet below the even one
        let labels: Vec<_> = states.iter().map(|s| (s.parity, s.n)).collect();
        assert_eq!(
            labels,
            vec![
                (Parity::Even, 0),
                (Parity::Odd, 1),
                (Parity::Even, 1),
                (Parity::Odd, 2),
                (Parity::Even, 2),
                (Parity::Odd, 3),
                (Parity::Even, 3)
            ]
        );
    }

    #[test]
    fn parity_selection() {
        assert_eq!(state_labels(3, None).len(), 7);
        assert_eq!(state_labels(3, Some(Parity::Even)).len(), 4);
        assert_eq!(state_labels(3, Some(Parity::Odd)), vec![(Parity::Odd, 1), (Parity::Odd, 2), (Parity::Odd, 3)]);
    }

    #[test]
    fn odd_states_hug_integers() {
        let states = solve_states(&state_labels(3, Some(Parity::Odd)), &params(1e-2), &SolverConfig::new(3)).unwrap();
        for s in states {
            assert!(s.rho() > 0.0 && s.rho() < 7e-5, "{}", s.rho());
        }
    }

    #[test]
    fn even_states_approach_integers_as_delta_shrinks() {
        let cfg = SolverConfig::new(3);
        for n in 0..=3 {
            let betas: Vec<f64> = [1e-2, 1e-3, 1e-4, 1e-5, 1e-6, 1e-7]
                .iter()
                .map(|&d| solve_state(Parity::Even, n, &params(d), &cfg).unwrap().beta_value())
                .collect();
            assert!(betas.windows(2).all(|w| w[1] < w[0]), "n={n}: {betas:?}");
        }
    }

    #[test]
    fn bracket_pad_does_not_change_roots() {
        let p = params(1e-3);
        let narrow = SolverConfig { bracket_pad: 0.2, ..SolverConfig::new(3) };
        let wide = SolverConfig::new(3);
        for (a, b) in spectrum(&p, &narrow).unwrap().iter().zip(spectrum(&p, &wide).unwrap()) {
            assert!((a.beta_value() - b.beta_value()).abs() <= wide.beta_tol);
        }
    }

    #[test]
    fn small_delta_switches_to_asymptotic_equation() {
        let p = params(1e-9);
        let cfg = SolverConfig::default();
        let s = solve_state(Parity::Even, 1, &p, &cfg).unwrap();
        assert_eq!(s.method, SolveMethod::Asymptotic);
        assert!(s.residual < 1e-9);
        let odd = solve_state(Parity::Odd, 1, &p, &cfg).unwrap();
        assert_eq!(odd.method, SolveMethod::Exact);
        let forced = SolverConfig { rege_switch: 0.0, ..cfg };
        assert_eq!(solve_state(Parity::Even, 1, &p, &forced).unwrap().method, SolveMethod::Exact);
    }

    #[test]
    fn amplitudes_are_continuous_and_positive() {
        let p = params(1e-3);
        let cfg = SolverConfig::new(3);
        for s in spectrum(&p, &cfg).unwrap() {
            assert!(s.a_inner > 0.0);
            let q = wave_vector_q(&s.beta, &p).unwrap();
            let trig = match s.parity {
                Parity::Even => (q * p.delta()).cos(),
                Parity::Odd => (q * p.delta()).sin(),
            };
            let seam = outer_seam(&s.beta, &p, cfg.series).unwrap();
            let outer = s.b_outer * 0.5 * seam.value * (-p.delta() / s.beta_value()).exp();
            let inner = s.a_inner * trig;
            assert!((inner - outer).abs() <= 1e-14 * inner.abs().max(outer.abs()));
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]
        #[test]
        fn defects_positive_and_below_one(log_delta in -7.0f64..0.0, n in 1u32..=4, odd in any::<bool>()) {
            let p = params(10f64.powf(log_delta));
            let parity = if odd { Parity::Odd } else { Parity::Even };
            let s = solve_state(parity, n, &p, &SolverConfig::new(4)).unwrap();
            prop_assert!(s.rho() > 0.0 && s.rho() < 1.0, "{}", s.rho());
            prop_assert!(s.residual < 1e-10, "{}", s.residual);
        }

        #[test]
        fn doublets_interlace(log_delta in -7.0f64..0.0) {
            let p = params(10f64.powf(log_delta));
            let states = spectrum(&p, &SolverConfig::new(3)).unwrap();
            let e = |parity, n| states.iter().find(|s| s.parity == parity && s.n == n).unwrap().energy;
            for n in 1..=3 {
                prop_assert!(e(Parity::Even, 0) < e(Parity::Odd, n));
                prop_assert!(e(Parity::Odd, n) < e(Parity::Even, n));
                if n < 3 {
                    prop_assert!(e(Parity::Even, n) < e(Parity::Odd, n + 1));
                }
            }
        }
    }
}
