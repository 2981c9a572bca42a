//! Seeded property checks shared by the property suite and the acceptance run.
//! Each returns `Err(description)` on the first violation.
#![allow(dead_code)]

use std::collections::HashSet;

use extreme_ec::complexes::{audit_indicator, list_simplices, ComplexRule, EnumOptions};
use extreme_ec::ec_process::{ec_at, ec_curve, ec_process, uniform_grid, ProcessOptions};
use extreme_ec::experiments::{run_convergence, ExperimentConfig};
use extreme_ec::geometry::PointSet;
use extreme_ec::radial_models::{radius_r_n, sample_cloud, PresetName, RadialLaw};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type Check = Result<(), String>;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Up to `max` points uniform in `[-2, 2]^d`.
pub fn random_cloud(rng: &mut ChaCha8Rng, d: usize, max: usize) -> PointSet<f64> {
    let n = rng.random_range(1..=max);
    let coords: Vec<f64> = (0..n * d).map(|_| rng.random_range(-2.0..2.0)).collect();
    PointSet::from_flat(d, coords).unwrap()
}

pub fn random_rule(rng: &mut ChaCha8Rng) -> ComplexRule<f64> {
    let w = rng.random_range(0.3..1.5);
    match rng.random_range(0..3) {
        0 => ComplexRule::rips_l2(w),
        1 => ComplexRule::rips_linf(w),
        _ => ComplexRule::cech(w),
    }
}

pub fn h_audit(seed: u64) -> Check {
    let mut r = rng(seed);
    let rule = random_rule(&mut r);
    let d = r.random_range(1..=3);
    let report = audit_indicator(&rule, d, 1, seed).map_err(|e| e.to_string())?;
    if report.passed() {
        Ok(())
    } else {
        Err(format!("{} d={d}: {:?}", rule.kind().as_str(), report.failures))
    }
}

fn simplex_set(points: &PointSet<f64>, rule: &ComplexRule<f64>, t: f64) -> HashSet<Vec<usize>> {
    list_simplices(points, rule, t, EnumOptions::default()).unwrap().into_iter().collect()
}

/// Complexes grow with the scale, and the counts on a grid agree with
/// direct enumeration at each grid point.
pub fn nesting(seed: u64) -> Check {
    let mut r = rng(seed);
    let d = r.random_range(2..=3);
    let points = random_cloud(&mut r, d, 14);
    let rule = random_rule(&mut r);
    let grid = uniform_grid(3.0, 0.25).unwrap();
    let curve = ec_curve(&points, &rule, &grid, EnumOptions::default()).map_err(|e| e.to_string())?;
    for row in &curve.per_k {
        if row.windows(2).any(|w| w[0] > w[1]) {
            return Err(format!("counts decrease along the grid: {row:?}"));
        }
    }
    let (s, t) = (r.random_range(0.0..2.0), r.random_range(0.0..1.0));
    let (small, large) = (simplex_set(&points, &rule, s), simplex_set(&points, &rule, s + t));
    if !small.is_subset(&large) {
        return Err(format!("complex at {s} is not contained in the complex at {}", s + t));
    }
    let j = r.random_range(0..grid.len());
    let direct = ec_at(&points, &rule, grid[j]).unwrap();
    if direct != curve.chi[j] {
        return Err(format!("grid value {} differs from direct value {direct} at t = {}", curve.chi[j], grid[j]));
    }
    Ok(())
}

pub fn cech_in_rips(seed: u64) -> Check {
    let mut r = rng(seed);
    let d = r.random_range(2..=3);
    let points = random_cloud(&mut r, d, 14);
    let w = r.random_range(0.3..1.5);
    let t = r.random_range(0.1..3.0);
    let cech = simplex_set(&points, &ComplexRule::cech(w), t);
    let rips = simplex_set(&points, &ComplexRule::rips_l2(w), t);
    if let Some(s) = cech.difference(&rips).next() {
        return Err(format!("Čech simplex {s:?} missing from the Rips complex at t = {t}"));
    }
    Ok(())
}

/// `h_t(X) = h_1(X / t)` on single sets, and the same for the Euler
/// characteristic of whole clouds.
pub fn scaling_identity(seed: u64) -> Check {
    let mut r = rng(seed);
    let rule = random_rule(&mut r);
    let d = r.random_range(2..=3);
    let t = r.random_range(0.1..5.0);
    let points = random_cloud(&mut r, d, 8).scaled(t);
    let shrunk = points.scaled(1.0 / t);
    let all: Vec<&[f64]> = points.iter().collect();
    let all_shrunk: Vec<&[f64]> = shrunk.iter().collect();
    if rule.evaluate(t, &all).unwrap() != rule.evaluate(1.0, &all_shrunk).unwrap() {
        return Err(format!("h_t(X) != h_1(X/t) at t = {t}"));
    }
    let (a, b) = (ec_at(&points, &rule, t).unwrap(), ec_at(&shrunk, &rule, 1.0).unwrap());
    if a != b {
        return Err(format!("chi at t = {t} is {a}, chi of the shrunk cloud at 1 is {b}"));
    }
    Ok(())
}

/// The process and a small convergence run do not depend on the pool size.
pub fn jobs_determinism(seed: u64) -> Check {
    let law = RadialLaw::example_3_2();
    let n = 500 + (seed % 7) as usize * 300;
    let cloud = sample_cloud::<f64>(&law, n, seed);
    let r_n = radius_r_n(&law, n, 1.0).unwrap();
    let rule = if seed.is_multiple_of(2) { ComplexRule::example_rule() } else { ComplexRule::cech(std::f64::consts::FRAC_1_SQRT_2) };
    let grid = uniform_grid(3.0, 0.05).unwrap();
    let run = |jobs: usize| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build()
            .unwrap()
            .install(|| ec_process(&cloud, &rule, r_n, &grid, ProcessOptions { retain_per_k: true, ..Default::default() }).unwrap())
    };
    let (one, many) = (run(1), run(4));
    if one != many {
        return Err(format!("process differs between 1 and 4 threads (n = {n}, seed = {seed})"));
    }
    if seed.is_multiple_of(10) {
        let mut config = ExperimentConfig::preset(PresetName::Example32, vec![200, 2000], vec![seed, seed + 1]);
        config.jobs = Some(1);
        let a = run_convergence(&config).unwrap();
        config.jobs = Some(3);
        let b = run_convergence(&config).unwrap();
        let key = |rows: &[extreme_ec::experiments::ExperimentRow]| -> Vec<(usize, u64, Option<u64>, usize)> {
            rows.iter().map(|r| (r.n, r.seed, r.sup_distance.map(f64::to_bits), r.exterior_count)).collect()
        };
        if key(&a.rows) != key(&b.rows) {
            return Err(format!("convergence rows differ between 1 and 3 jobs (seed = {seed})"));
        }
    }
    Ok(())
}

pub type Property = (&'static str, fn(u64) -> Check);

pub const PROPERTIES: [Property; 5] = [
    ("H1-H4 audits", h_audit),
    ("filtration nesting", nesting),
    ("Čech within Rips", cech_in_rips),
    ("scaling identity", scaling_identity),
    ("determinism under jobs", jobs_determinism),
];

