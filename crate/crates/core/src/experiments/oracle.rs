//! Brute-force equivalence suite: the enumerated Euler characteristic
//! against the sum over all subsets, on small seeded exterior clouds.

use rayon::prelude::*;

use crate::complexes::{points_outside, ComplexRule, RuleKind};
use crate::ec_process::{brute_force_ec, ec_at, BRUTE_FORCE_MAX_POINTS};
use crate::error::{Error, Result};
use crate::geometry::PointSet;
use crate::radial_models::{radius_r_n, sample_cloud, RadialLaw};

/// Multiples of the median pairwise scale at which each cloud is tested.
pub const SCALE_FACTORS: [f64; 5] = [0.0, 0.5, 1.0, 1.5, 3.0];

#[derive(Debug, Clone, PartialEq)]
pub struct Mismatch {
    pub trial: usize,
    pub rule: RuleKind,
    pub t: f64,
    pub enumerated: i64,
    pub brute_force: i64,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct OracleReport {
    pub clouds: usize,
    pub comparisons: usize,
    pub mismatches: Vec<Mismatch>,
}

impl OracleReport {
    pub fn passed(&self) -> bool {
        self.mismatches.is_empty() && self.comparisons > 0
    }
}

/// The exterior of a heavy-tailed cloud (planar for even trials, spatial for
/// odd ones), cut down to at most `max_points` points.
pub fn oracle_cloud(trial: usize, max_points: usize, seed: u64) -> Result<PointSet<f64>> {
    let d = 2 + trial % 2;
    let law = if d == 2 { RadialLaw::example_3_2() } else { RadialLaw::heavy(3, 5.0)? };
    let n = 200;
    let cloud = sample_cloud::<f64>(&law, n, seed.wrapping_add(trial as u64));
    // A large xi pulls R_n inward so the exterior is usually non-empty.
    let r = radius_r_n(&law, n, 4.0)?;
    let exterior = points_outside(&cloud.points, r);
    let keep: Vec<usize> = (0..exterior.len().min(max_points)).collect();
    Ok(exterior.select(&keep))
}

fn median_scale(points: &PointSet<f64>, rule: &ComplexRule<f64>) -> f64 {
    let mut scales = Vec::new();
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            scales.push(rule.pair_scale(points.point(i), points.point(j)));
        }
    }
    if scales.is_empty() {
        return 1.0;
    }
    scales.sort_by(f64::total_cmp);
    scales[scales.len() / 2]
}

/// Runs `trials` clouds against the three built-in rules at five scales each,
/// plus the exact pairwise breakpoints of every cloud for the Rips rules.
pub fn run_oracle(trials: usize, max_points: usize, seed: u64) -> Result<OracleReport> {
    if max_points > BRUTE_FORCE_MAX_POINTS {
        return Err(Error::Config(format!("--max-n is limited to {BRUTE_FORCE_MAX_POINTS} points")));
    }
    let reports: Vec<OracleReport> = (0..trials)
        .into_par_iter()
        .map(|trial| {
            let points = oracle_cloud(trial, max_points, seed)?;
            let mut report = OracleReport { clouds: 1, ..Default::default() };
            for kind in RuleKind::BUILT_IN {
                let rule = ComplexRule::new(kind, 1.0)?;
                let base = median_scale(&points, &rule);
                let mut scales: Vec<f64> = SCALE_FACTORS.iter().map(|f| f * base).collect();
                if rule.is_flag() {
                    scales.extend(crate::ec_process::breakpoints(&points, &rule)?.into_iter().take(8));
                }
                for t in scales {
                    let enumerated = ec_at(&points, &rule, t)?;
                    let brute_force = brute_force_ec(&points, &rule, t)?;
                    report.comparisons += 1;
                    if enumerated != brute_force {
                        report.mismatches.push(Mismatch { trial, rule: kind, t, enumerated, brute_force });
                    }
                }
            }
            Ok(report)
        })
        .collect::<Result<_>>()?;
    Ok(reports.into_iter().fold(OracleReport::default(), |mut acc, r| {
        acc.clouds += r.clouds;
        acc.comparisons += r.comparisons;
        acc.mismatches.extend(r.mismatches);
        acc
    }))
}
