//! Invariant suites behind `coulomb1d verify`.

use serde::Serialize;
use serde_json::json;

use coulomb1d::asymptotics::{rho_even, rho_odd};
use coulomb1d::eigensolver::state_labels;
use coulomb1d::specfun::{identity_suites, tricomi_u_split, SeriesControl, SplitParam};
use coulomb1d::wavefunction::{normalize, overlap, sample, Profile, QuadratureConfig, Wavefunction};
use coulomb1d::{EigenState, Parity, PotentialParams, SolverConfig};
use coulomb1d_oracle::certify::certify_tricomi;
use coulomb1d_oracle::fd::{fd_energies_extrapolated, FdConfig, ParityBc};

use crate::commands::{params, solve_labels};
use crate::output::{write_atomic, RunManifest};
use crate::{CliError, Level, VerifyArgs};

#[derive(Debug, Clone, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    /// Worst measured residual; absent for yes/no checks.
    pub worst: Option<f64>,
    pub tolerance: Option<f64>,
    pub detail: String,
}

#[derive(Debug, Serialize)]
pub struct VerifyReport {
    pub level: &'static str,
    pub tol_override: Option<f64>,
    pub passed: bool,
    pub checks: Vec<CheckResult>,
}

struct Suite {
    tol_override: Option<f64>,
    checks: Vec<CheckResult>,
}

impl Suite {
    fn measured(&mut self, name: &str, worst: f64, tolerance: f64, detail: impl Into<String>) {
        let tolerance = self.tol_override.unwrap_or(tolerance);
        self.checks.push(CheckResult {
            name: name.to_string(),
            passed: worst <= tolerance,
            worst: Some(if worst.is_nan() { f64::INFINITY } else { worst }),
            tolerance: Some(tolerance),
            detail: detail.into(),
        });
    }

    fn condition(&mut self, name: &str, ok: bool, detail: impl Into<String>) {
        self.checks.push(CheckResult {
            name: name.to_string(),
            passed: ok,
            worst: None,
            tolerance: None,
            detail: detail.into(),
        });
    }

    fn failed(&mut self, name: &str, err: impl std::fmt::Display) {
        self.condition(name, false, err.to_string());
    }
}

fn rel_err(got: f64, want: f64) -> f64 {
    ((got - want) / want).abs()
}

fn specfun_identities(suite: &mut Suite) {
    for c in identity_suites(200) {
        let detail = format!("{} samples", c.samples);
        suite.measured(&format!("specfun.{}", c.name), c.worst, c.tolerance, detail);
    }
}

fn spectrum_checks(suite: &mut Suite, p: &PotentialParams) -> Option<Vec<EigenState>> {
    let cfg = SolverConfig::new(3);
    let states = match solve_labels(&state_labels(3, None), p, &cfg) {
        Ok(s) => s,
        Err(e) => {
            suite.failed("spectrum.solve", e);
            return None;
        }
    };
    suite.condition("spectrum.state_count", states.len() == 7, format!("{} states", states.len()));
    let worst = states.iter().map(|s| s.residual).fold(0.0, f64::max);
    suite.measured("spectrum.residual", worst, 1e-10, format!("delta = {}", p.delta()));
    let order: Vec<(Parity, u32)> = states.iter().map(|s| (s.parity, s.n)).collect();
    let expected = [
        (Parity::Even, 0),
        (Parity::Odd, 1),
        (Parity::Even, 1),
        (Parity::Odd, 2),
        (Parity::Even, 2),
        (Parity::Odd, 3),
        (Parity::Even, 3),
    ];
    suite.condition("spectrum.interlacing", order == expected, format!("{order:?}"));
    let worst = states
        .iter()
        .filter(|s| s.parity == Parity::Odd)
        .map(|s| rel_err(s.rho(), rho_odd(s.n, p.delta())))
        .fold(0.0, f64::max);
    suite.measured("spectrum.odd_defect", worst, 0.05, "relative to (2/3) delta^2");
    Some(states)
}

/// |ψ_in - ψ_out| and |ψ'_in - ψ'_out| at the seam, each relative to the
/// largest |ψ| or |ψ'| on a sampling grid.
fn seam_mismatch(w: &Wavefunction) -> coulomb1d::Result<(f64, f64)> {
    let seam = w.seam()?;
    let grid = sample(&Profile::Solved(w), 10.0 * w.decay_length() + 1.0, 2001)?;
    let peak = grid.psis.iter().fold(seam.psi_inner.abs(), |m, v| m.max(v.abs()));
    let mut slope_peak = seam.dpsi_inner.abs();
    for &x in &grid.xs {
        slope_peak = slope_peak.max(w.derivative(x)?.abs());
    }
    Ok((
        (seam.psi_inner - seam.psi_outer).abs() / peak,
        (seam.dpsi_inner - seam.dpsi_outer).abs() / slope_peak,
    ))
}

fn normalization_checks(suite: &mut Suite, states: &[EigenState], p: &PotentialParams) {
    let cfg = QuadratureConfig::default();
    let (mut norm, mut value, mut slope) = (0.0f64, 0.0f64, 0.0f64);
    for s in states {
        let outcome = normalize(s, p, &cfg).and_then(|w| {
            let n = overlap(&w, &w, &cfg)?;
            Ok((n, seam_mismatch(&w)?))
        });
        match outcome {
            Ok((n, (dv, ds))) => {
                norm = norm.max((n - 1.0).abs());
                value = value.max(dv);
                slope = slope.max(ds);
            }
            Err(e) => return suite.failed("wavefunction.normalize", format!("({}, {}): {e}", s.parity, s.n)),
        }
    }
    suite.measured("wavefunction.normalization", norm, 1e-8, "|<psi|psi> - 1|");
    suite.measured("wavefunction.continuity_value", value, 1e-12, "seam jump in psi");
    suite.measured("wavefunction.continuity_slope", slope, 1e-8, "seam jump in psi'");
}

fn oracle_checks(suite: &mut Suite) {
    for (delta, tol) in [(0.1, 1e-4), (0.01, 1e-3)] {
        let name = format!("oracle.finite_difference_delta_{delta}");
        let p = PotentialParams::new(delta).expect("fixed cutoff");
        let cfg = SolverConfig::new(3);
        let mut worst = 0.0f64;
        for (bc, parity, first, count) in [
            (ParityBc::EvenAtOrigin, Parity::Even, 0u32, 4usize),
            (ParityBc::OddAtOrigin, Parity::Odd, 1, 3),
        ] {
            let fd = match fd_energies_extrapolated(&p, &FdConfig::new(3, bc), count) {
                Ok(fd) => fd,
                Err(e) => return suite.failed(&name, e),
            };
            let labels: Vec<(Parity, u32)> = (0..count as u32).map(|k| (parity, first + k)).collect();
            let states = match solve_labels(&labels, &p, &cfg) {
                Ok(s) => s,
                Err(e) => return suite.failed(&name, e),
            };
            for (s, e_fd) in states.iter().zip(&fd.energies) {
                worst = worst.max(rel_err(*e_fd, s.energy));
            }
        }
        suite.measured(&name, worst, tol, "Richardson-extrapolated energies, n <= 3");
    }
}

fn sweep_checks(suite: &mut Suite) {
    let deltas = [1e-2, 1e-3, 1e-4, 1e-5, 1e-6, 1e-7];
    let cfg = SolverConfig::new(3);
    let mut ground = Vec::new();
    let (mut even_worst, mut ground_worst) = (0.0f64, 0.0f64);
    for &delta in &deltas {
        let p = PotentialParams::new(delta).expect("fixed cutoff");
        let states = match solve_labels(&state_labels(3, Some(Parity::Even)), &p, &cfg) {
            Ok(s) => s,
            Err(e) => return suite.failed("sweep.solve", e),
        };
        ground.push((states[0].beta_value(), states[0].energy));
        if delta <= 1e-5 {
            for s in &states {
                let err = rel_err(s.rho(), rho_even(s.n, delta));
                if s.n == 0 {
                    ground_worst = ground_worst.max(err);
                } else {
                    even_worst = even_worst.max(err);
                }
            }
        }
    }
    let monotone = ground.windows(2).all(|w| w[1].0 < w[0].0 && w[1].1 < w[0].1);
    suite.condition("sweep.ground_state_monotone", monotone, format!("(beta, E) = {ground:?}"));
    suite.measured("sweep.even_defects", even_worst, 0.15, "n = 1..3, delta = 1e-5..1e-7");
    suite.measured("sweep.ground_defect", ground_worst, 0.20, "n = 0, delta = 1e-5..1e-7");
}

fn certification_check(suite: &mut Suite) {
    let ctrl = SeriesControl::default();
    let candidate = |c: i64, o: f64, b: u32, z: f64| {
        tricomi_u_split(SplitParam::from_parts(c, o), b as f64, z, ctrl).map_err(|e| e.to_string())
    };
    match certify_tricomi(candidate, 50) {
        Ok(r) if r.failures.is_empty() => suite.measured(
            "specfun.u_certification",
            r.max_rel_err(),
            1e-12,
            format!("{} points against the 30-digit series", r.evaluated),
        ),
        Ok(r) => suite.failed("specfun.u_certification", format!("{} evaluations failed", r.failures.len())),
        Err(e) => suite.failed("specfun.u_certification", e),
    }
}

pub fn run_suites(level: Level, tol_override: Option<f64>) -> VerifyReport {
    let mut suite = Suite {
        tol_override,
        checks: Vec::new(),
    };
    specfun_identities(&mut suite);
    let p = params(1e-3).expect("fixed cutoff");
    if let Some(states) = spectrum_checks(&mut suite, &p) {
        normalization_checks(&mut suite, &states, &p);
    }
    if level == Level::Full {
        oracle_checks(&mut suite);
        sweep_checks(&mut suite);
        certification_check(&mut suite);
    }
    VerifyReport {
        level: match level {
            Level::Quick => "quick",
            Level::Full => "full",
        },
        tol_override,
        passed: suite.checks.iter().all(|c| c.passed),
        checks: suite.checks,
    }
}

pub fn run(args: &VerifyArgs) -> Result<(), CliError> {
    if let Some(t) = args.tol_override {
        if !(t >= 0.0) {
            return Err(CliError::Usage(format!("--tol-override must be non-negative, got {t}")));
        }
    }
    let report = run_suites(args.level, args.tol_override);
    for c in &report.checks {
        eprintln!("{} {}", if c.passed { "PASS" } else { "FAIL" }, c.name);
    }
    let mut text = serde_json::to_string_pretty(&report).expect("report serializes");
    text.push('\n');
    write_atomic(&args.out, &text)?;
    let parameters = json!({
        "level": report.level,
        "tol_override": args.tol_override,
        "out": args.out.display().to_string(),
    });
    RunManifest::new("verify", parameters, &[&args.out]).write(&RunManifest::path_for(&args.out))?;
    if report.passed {
        Ok(())
    } else {
        let failing: Vec<&str> = report.checks.iter().filter(|c| !c.passed).map(|c| c.name.as_str()).collect();
        Err(CliError::VerifyFailed(failing.join(", ")))
    }
}
