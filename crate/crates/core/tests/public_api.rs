//! End-to-end use of the library surface: spectrum, defects, wavefunctions.

use coulomb1d::asymptotics::{rho_odd, DeviationReport};
use coulomb1d::wavefunction::{normalize, overlap, sample, Profile, QuadratureConfig};
use coulomb1d::{spectrum, BetaPoint, Parity, PotentialParams, SolverConfig};

#[test]
fn spectrum_to_orthonormal_wavefunctions() {
    let p = PotentialParams::new(0.05).unwrap();
    let states = spectrum(&p, &SolverConfig::new(3)).unwrap();
    assert_eq!(states.len(), 7);
    let cfg = QuadratureConfig::default();
    let waves: Vec<_> = states.iter().map(|s| normalize(s, &p, &cfg).unwrap()).collect();
    for (i, a) in waves.iter().enumerate() {
        for b in &waves[i..] {
            let o = overlap(a, b, &cfg).unwrap();
            let expected = if std::ptr::eq(a, b) { 1.0 } else { 0.0 };
            assert!((o - expected).abs() < 1e-6, "({}, {}) x ({}, {}): {o}", a.state.parity, a.state.n, b.state.parity, b.state.n);
        }
    }
}

#[test]
fn deviation_report_from_solved_states() {
    let p = PotentialParams::new(1e-3).unwrap();
    let states = spectrum(&p, &SolverConfig::new(2)).unwrap();
    let report = DeviationReport::from_states(&p, states.iter().map(|s| (s.parity, BetaPoint::from_parts(s.n, s.rho()))));
    assert_eq!(report.entries.len(), 5);
    assert_eq!(report.x, p.log_parameter());
    for e in report.entries.iter().filter(|e| e.parity == Parity::Odd) {
        assert_eq!(e.rho_predicted, rho_odd(e.n, 1e-3));
        assert!(e.abs_err < 0.05 * e.rho_predicted);
    }
}

#[test]
fn sampled_grid_holds_the_norm() {
    let p = PotentialParams::new(0.01).unwrap();
    let state = coulomb1d::eigensolver::solve_state(Parity::Even, 2, &p, &SolverConfig::new(2)).unwrap();
    let w = normalize(&state, &p, &QuadratureConfig::default()).unwrap();
    let grid = sample(&Profile::Solved(&w), 60.0, 24_001).unwrap();
    assert!((grid.norm() - 1.0).abs() < 1e-4, "{}", grid.norm());
    assert_eq!(grid.state, Some(state));
}
