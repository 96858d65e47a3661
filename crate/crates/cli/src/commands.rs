use std::path::{Path, PathBuf};

use serde_json::json;

use coulomb1d::asymptotics::DeviationReport;
use coulomb1d::eigensolver::{solve_state, state_labels};
use coulomb1d::wavefunction::{limiting_even, limiting_odd, normalize, sample, Profile, QuadratureConfig};
use coulomb1d::{BetaPoint, EigenState, Parity, PotentialParams, SolverConfig};

use crate::output::{Cell, Format, RunManifest, Table};
use crate::{CliError, DeviationsArgs, ParityChoice, SolverArgs, SpectrumArgs, WavefunctionArgs};

pub const TOL_ENV: &str = "COULOMB1D_TOL";

/// Where the root tolerance came from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TolSource {
    Default,
    Env,
    Flag,
}

impl TolSource {
    fn name(self) -> &'static str {
        match self {
            TolSource::Default => "default",
            TolSource::Env => "env",
            TolSource::Flag => "flag",
        }
    }
}

/// Flag over environment over default.
pub fn resolve_beta_tol(flag: Option<f64>, env: Option<&str>) -> Result<(f64, TolSource), CliError> {
    if let Some(t) = flag {
        return Ok((t, TolSource::Flag));
    }
    match env {
        Some(raw) => raw
            .trim()
            .parse::<f64>()
            .map(|t| (t, TolSource::Env))
            .map_err(|_| CliError::Usage(format!("{TOL_ENV}='{raw}' is not a number"))),
        None => Ok((SolverConfig::default().beta_tol, TolSource::Default)),
    }
}

pub fn solver_config(n_max: u32, args: &SolverArgs) -> Result<(SolverConfig, TolSource), CliError> {
    let env = std::env::var(TOL_ENV).ok();
    let (beta_tol, source) = resolve_beta_tol(args.beta_tol, env.as_deref())?;
    let cfg = SolverConfig {
        beta_tol,
        ..SolverConfig::new(n_max.max(1))
    };
    cfg.validate().map_err(|e| CliError::Usage(e.to_string()))?;
    Ok((cfg, source))
}

pub fn params(delta: f64) -> Result<PotentialParams, CliError> {
    PotentialParams::new(delta).map_err(|e| CliError::Usage(e.to_string()))
}

/// Solves each label in turn; failures name the state.
pub fn solve_labels(
    labels: &[(Parity, u32)],
    p: &PotentialParams,
    cfg: &SolverConfig,
) -> Result<Vec<EigenState>, CliError> {
    let mut states = labels
        .iter()
        .map(|&(parity, n)| {
            solve_state(parity, n, p, cfg).map_err(|e| {
                CliError::Solver(format!("solver failed for ({parity}, n = {n}) at delta = {}: {e}", p.delta()))
            })
        })
        .collect::<Result<Vec<_>, _>>()?;
    states.sort_by(|a, b| a.energy.total_cmp(&b.energy));
    Ok(states)
}

fn parity_filter(choice: ParityChoice) -> Option<Parity> {
    match choice {
        ParityChoice::Even => Some(Parity::Even),
        ParityChoice::Odd => Some(Parity::Odd),
        ParityChoice::Both => None,
    }
}

fn finish(command: &str, table: &Table, format: Format, out: &Path, parameters: serde_json::Value) -> Result<(), CliError> {
    crate::output::write_atomic(out, &table.render(format))?;
    RunManifest::new(command, parameters, &[out]).write(&RunManifest::path_for(out))?;
    Ok(())
}

pub fn spectrum_table(states: &[EigenState], p: &PotentialParams) -> Table {
    let mut table = Table::new(vec!["delta", "parity", "n", "beta", "energy", "rho", "residual", "x"]);
    for s in states {
        table.push(vec![
            p.delta().into(),
            s.parity.to_string().into(),
            s.n.into(),
            s.beta_value().into(),
            s.energy.into(),
            s.rho().into(),
            s.residual.into(),
            p.log_parameter().into(),
        ]);
    }
    table
}

pub fn spectrum(args: &SpectrumArgs) -> Result<(), CliError> {
    let p = params(args.delta)?;
    let (cfg, source) = solver_config(args.nmax, &args.solver)?;
    let states = solve_labels(&state_labels(args.nmax, parity_filter(args.parity)), &p, &cfg)?;
    let out = args
        .out
        .clone()
        .unwrap_or_else(|| PathBuf::from(format!("spectrum.{}", args.format.extension())));
    let parameters = json!({
        "delta": args.delta,
        "nmax": args.nmax,
        "parity": format!("{:?}", args.parity).to_lowercase(),
        "format": args.format,
        "beta_tol": cfg.beta_tol,
        "beta_tol_source": source.name(),
        "out": out.display().to_string(),
    });
    finish("spectrum", &spectrum_table(&states, &p), args.format, &out, parameters)
}

pub fn deviation_table(reports: &[DeviationReport]) -> Table {
    let mut table = Table::new(vec![
        "delta", "x", "parity", "n", "rho_exact", "rho_asym", "rho_crude", "abs_err",
    ]);
    for r in reports {
        for e in &r.entries {
            table.push(vec![
                r.delta.into(),
                r.x.into(),
                e.parity.to_string().into(),
                e.n.into(),
                e.rho_exact.into(),
                e.rho_predicted.into(),
                e.rho_crude.into(),
                e.abs_err.into(),
            ]);
        }
    }
    table
}

pub fn deviation_report(p: &PotentialParams, cfg: &SolverConfig) -> Result<DeviationReport, CliError> {
    let mut states = solve_labels(&state_labels(cfg.n_max, None), p, cfg)?;
    states.sort_by_key(|s| (s.parity, s.n));
    Ok(DeviationReport::from_states(
        p,
        states.iter().map(|s| (s.parity, BetaPoint::from_parts(s.n, s.rho()))),
    ))
}

pub fn deviations(args: &DeviationsArgs) -> Result<(), CliError> {
    if args.deltas.is_empty() {
        return Err(CliError::Usage("--deltas needs at least one value".into()));
    }
    let all_params = args.deltas.iter().map(|&d| params(d)).collect::<Result<Vec<_>, _>>()?;
    let (cfg, source) = solver_config(args.nmax, &args.solver)?;
    let reports = all_params
        .iter()
        .map(|p| deviation_report(p, &cfg))
        .collect::<Result<Vec<_>, _>>()?;
    let parameters = json!({
        "deltas": args.deltas,
        "nmax": args.nmax,
        "format": args.format,
        "beta_tol": cfg.beta_tol,
        "beta_tol_source": source.name(),
        "out": args.out.display().to_string(),
    });
    finish("deviations", &deviation_table(&reports), args.format, &args.out, parameters)
}

pub fn wavefunction_table(
    state: &EigenState,
    p: &PotentialParams,
    xmax: f64,
    points: usize,
    limiting: bool,
) -> Result<Table, CliError> {
    let usage = |e: coulomb1d::Error| CliError::Usage(e.to_string());
    if points < 3 || points % 2 == 0 {
        return Err(CliError::Usage(format!(
            "--points must be odd and at least 3 so the grid contains the origin, got {points}"
        )));
    }
    if !(xmax > p.delta() && xmax.is_finite()) {
        return Err(CliError::Usage(format!("--xmax must exceed delta = {}, got {xmax}", p.delta())));
    }
    let solver = |e: coulomb1d::Error| CliError::Solver(format!("({}, n = {}): {e}", state.parity, state.n));
    let w = normalize(state, p, &QuadratureConfig::default()).map_err(solver)?;
    let grid = sample(&Profile::Solved(&w), xmax, points).map_err(usage)?;
    let mut columns = vec!["x", "psi", "region"];
    if limiting {
        columns.push("psi_limiting");
    }
    let mut table = Table::new(columns);
    for ((&x, &psi), region) in grid.xs.iter().zip(&grid.psis).zip(&grid.region_tags) {
        let tag = serde_json::to_value(region).ok().and_then(|v| v.as_str().map(String::from)).unwrap_or_default();
        let mut row = vec![Cell::from(x), psi.into(), tag.into()];
        if limiting {
            let lim = match state.parity {
                Parity::Odd => limiting_odd(state.n, x),
                Parity::Even => limiting_even(state.n, x, Some(state.beta_value())).map_err(usage)?,
            };
            row.push(lim.into());
        }
        table.push(row);
    }
    Ok(table)
}

pub fn wavefunction(args: &WavefunctionArgs) -> Result<(), CliError> {
    if args.points < 3 || args.points % 2 == 0 {
        return Err(CliError::Usage(format!(
            "--points must be odd and at least 3 so the grid contains the origin, got {}",
            args.points
        )));
    }
    if args.parity == Parity::Odd && args.n == 0 {
        return Err(CliError::Usage("odd states start at n = 1".into()));
    }
    let p = params(args.delta)?;
    let (cfg, source) = solver_config(args.n.max(1), &args.solver)?;
    let state = solve_labels(&[(args.parity, args.n)], &p, &cfg)?[0];
    let table = wavefunction_table(&state, &p, args.xmax, args.points, args.limiting)?;
    let parameters = json!({
        "delta": args.delta,
        "parity": args.parity,
        "n": args.n,
        "xmax": args.xmax,
        "points": args.points,
        "limiting": args.limiting,
        "format": args.format,
        "beta_tol": cfg.beta_tol,
        "beta_tol_source": source.name(),
        "beta": state.beta_value(),
        "out": args.out.display().to_string(),
    });
    finish("wavefunction", &table, args.format, &args.out, parameters)
}
