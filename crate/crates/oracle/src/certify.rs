//! Sweep comparing a candidate Tricomi U for b ∈ {1, 2, 3} with the
//! extended-precision series.

use crate::error::Result;
use crate::useries::u_series_reference;

/// First parameters as (integer part, offset): the grid -4.5..=4.5 in steps
/// of 0.25, and points approaching each of 0, -1, ..., -4 from both sides.
pub fn certification_parameters() -> Vec<(i64, f64)> {
    let mut points: Vec<(i64, f64)> = (0..=36)
        .map(|i| {
            let a = -4.5 + 0.25 * i as f64;
            let center = a.round();
            (center as i64, a - center)
        })
        .collect();
    for m in 0..=4i64 {
        for offset in [1e-13, -1e-13, 1e-8, -1e-8, 6.7e-15, 1e-3, -1e-3] {
            points.push((-m, offset));
        }
    }
    points
}

/// `count` points spaced evenly in log z from 1e-5 to 50.
pub fn certification_arguments(count: usize) -> Vec<f64> {
    let (lo, hi) = (1e-5f64.log10(), 50f64.log10());
    (0..count)
        .map(|i| 10f64.powf(lo + (hi - lo) * i as f64 / (count - 1) as f64))
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct CertificationPoint {
    pub center: i64,
    pub offset: f64,
    pub b: u32,
    pub z: f64,
    pub candidate: f64,
    pub reference: f64,
    pub rel_err: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CertificationReport {
    pub evaluated: usize,
    pub worst: Option<CertificationPoint>,
    /// Points where the candidate returned an error.
    pub failures: Vec<(i64, f64, u32, f64, String)>,
}

impl CertificationReport {
    pub fn max_rel_err(&self) -> f64 {
        self.worst.as_ref().map_or(0.0, |w| w.rel_err)
    }

    pub fn passes(&self, tol: f64) -> bool {
        self.failures.is_empty() && self.max_rel_err() <= tol
    }
}

/// Runs the sweep over [`certification_parameters`], b = 1..=3 and
/// `z_count` log-spaced arguments, with a 30-digit reference.
pub fn certify_tricomi<F>(candidate: F, z_count: usize) -> Result<CertificationReport>
where
    F: Fn(i64, f64, u32, f64) -> std::result::Result<f64, String>,
{
    let mut report = CertificationReport {
        evaluated: 0,
        worst: None,
        failures: Vec::new(),
    };
    let zs = certification_arguments(z_count);
    for (center, offset) in certification_parameters() {
        for b in 1..=3u32 {
            for &z in &zs {
                let reference = u_series_reference(center, offset, b, z, 30)?;
                report.evaluated += 1;
                match candidate(center, offset, b, z) {
                    Ok(value) => {
                        let rel_err = if reference == 0.0 {
                            value.abs()
                        } else {
                            ((value - reference) / reference).abs()
                        };
                        if report.worst.as_ref().map_or(true, |w| rel_err > w.rel_err) || rel_err.is_nan() {
                            report.worst = Some(CertificationPoint {
                                center,
                                offset,
                                b,
                                z,
                                candidate: value,
                                reference,
                                rel_err: if rel_err.is_nan() { f64::INFINITY } else { rel_err },
                            });
                        }
                    }
                    Err(e) => report.failures.push((center, offset, b, z, e)),
                }
            }
        }
    }
    Ok(report)
}
