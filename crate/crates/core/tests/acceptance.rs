//! Acceptance run: one PASS/FAIL line per criterion, non-zero exit if any fails.

mod common;

use std::f64::consts::{FRAC_1_SQRT_2, PI};
use std::time::Instant;

use extreme_ec::complexes::{ComplexRule, RuleKind};
use extreme_ec::ec_process::{brute_force_ec, ec_at, uniform_grid};
use extreme_ec::experiments::oracle::{oracle_cloud, SCALE_FACTORS};
use extreme_ec::experiments::{run_convergence, sup_distance_table, ExperimentConfig};
use extreme_ec::limits::{
    closed_form_example32, h_integral_unit_mc, limit_heavy, series_term, LimitFunction, LimitParams, LimitSettings, McConfig, Method,
};
use extreme_ec::radial_models::PresetName;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn closed_form() -> Outcome {
    let rule = ComplexRule::example_rule();
    let settings = LimitSettings::default();
    let mut worst: f64 = 0.0;
    for t in [0.1, 0.5, 1.0, 2.0, 3.0] {
        let v = limit_heavy(2, 4.0, 1.0, &rule, t, settings).map_err(|e| e.to_string())?;
        worst = worst.max((v.value - closed_form_example32(t)).abs());
    }
    let at_zero = limit_heavy(2, 4.0, 1.0, &rule, 0.0, settings).map_err(|e| e.to_string())?.value;
    let near_zero = limit_heavy(2, 4.0, 1.0, &rule, 1e-12, settings).map_err(|e| e.to_string())?.value;
    let zero_err = (at_zero - PI).abs().max((near_zero - PI).abs());
    let detail = format!("max |series - closed form| = {worst:.2e} (tol 1e-8), |value(0+) - pi| = {zero_err:.2e} (tol 1e-9)");
    if worst <= 1e-8 && zero_err <= 1e-9 {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn oracle() -> Outcome {
    let (mut clouds, mut comparisons, mut max_points) = (0, 0, 0);
    for trial in 0..60 {
        let points = oracle_cloud(trial, 12, 2024).map_err(|e| e.to_string())?;
        max_points = max_points.max(points.len());
        clouds += 1;
        for kind in RuleKind::BUILT_IN {
            let rule = ComplexRule::new(kind, 1.0).unwrap();
            // Five scales spread over the pairwise distances of this cloud.
            let mut far: f64 = 0.0;
            for i in 0..points.len() {
                for j in i + 1..points.len() {
                    far = far.max(rule.pair_scale(points.point(i), points.point(j)));
                }
            }
            for f in SCALE_FACTORS {
                let t = f * far / 3.0;
                comparisons += 1;
                let (a, b) = (ec_at(&points, &rule, t).unwrap(), brute_force_ec(&points, &rule, t).unwrap());
                if a != b {
                    return Err(format!("trial {trial} {} t={t}: enumerated {a}, subsets {b}", kind.as_str()));
                }
            }
        }
    }
    Ok(format!("{clouds} clouds (at most {max_points} points), {comparisons} comparisons, all equal"))
}

fn linf_integral() -> Outcome {
    let rule = ComplexRule::rips_linf(1.0);
    let mut parts = Vec::new();
    let mut ok = true;
    for k in 1..=3 {
        let e = h_integral_unit_mc(&rule, 2, k, McConfig { samples: 1_000_000, seed: 17 }).map_err(|e| e.to_string())?;
        let exact = ((k + 1) * (k + 1)) as f64;
        let z = if e.std_error > 0.0 { (e.value - exact).abs() / e.std_error } else if e.value == exact { 0.0 } else { f64::INFINITY };
        ok &= z <= 3.0;
        parts.push(format!("k={k}: {:.4} +- {:.4} vs {exact} ({z:.2} SE)", e.value, e.std_error));
    }
    let detail = parts.join("; ");
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn medians(preset: PresetName, n_values: Vec<usize>, seeds: Vec<u64>) -> Result<Vec<f64>, String> {
    let result = run_convergence(&ExperimentConfig::preset(preset, n_values, seeds)).map_err(|e| e.to_string())?;
    if let Some(bad) = result.rows.iter().find(|r| r.error.is_some()) {
        return Err(format!("run n={} seed={} failed: {}", bad.n, bad.seed, bad.error.as_ref().unwrap()));
    }
    Ok(sup_distance_table(&result.rows).iter().map(|s| s.median).collect())
}

fn strictly_decreasing(v: &[f64]) -> bool {
    v.windows(2).all(|w| w[1] < w[0])
}

fn heavy_convergence() -> Outcome {
    let m = medians(PresetName::Example32, vec![1_000, 10_000, 100_000], (1..=20).collect())?;
    let calibration = medians(PresetName::Example32, vec![100_000], (101..=105).collect())?[0];
    let band = 3.0 * calibration;
    let detail = format!("medians {:.4} > {:.4} > {:.4}; band 3 x {calibration:.4} = {band:.4}", m[0], m[1], m[2]);
    if strictly_decreasing(&m) && m[2] < band {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn light_convergence() -> Outcome {
    let m = medians(PresetName::Example42, vec![10_000, 100_000, 1_000_000], (1..=20).collect())?;
    let detail = format!("medians {:.4} > {:.4} > {:.4}", m[0], m[1], m[2]);
    if strictly_decreasing(&m) {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn heavy_light_swap() -> Outcome {
    let (alpha, d, t) = (4.0, 2usize, 1.0);
    let heavy = LimitParams::heavy(d, alpha, 1.0).unwrap();
    let light = LimitParams::light(d, f64::INFINITY, 1.0).unwrap();
    let swap = |k: usize| (k + 1) as f64 / (alpha * (k + 1) as f64 - d as f64);
    let mut parts = Vec::new();
    let mut ok = true;

    let linf = ComplexRule::rips_linf(FRAC_1_SQRT_2);
    let mc = McConfig::default();
    for k in 1..=3 {
        let h = series_term(&heavy, &linf, k, t, mc).unwrap().value;
        let l = series_term(&light, &linf, k, t, mc).unwrap().value;
        let rel = (l * swap(k) / h - 1.0).abs();
        ok &= rel < 1e-12;
        parts.push(format!("linf k={k} rel {rel:.1e}"));
    }

    // Light terms from local configurations, heavy terms from the indicator integral.
    let l2 = ComplexRule::rips_l2(FRAC_1_SQRT_2);
    let settings = LimitSettings { method: Method::LocalEc, mc: McConfig { samples: 200_000, seed: 5 }, ..Default::default() };
    let curve = LimitFunction::new(light, l2.clone(), settings).unwrap().curve(&[t]).map_err(|e| e.to_string())?;
    for k in 1..=3 {
        let h = series_term(&heavy, &l2, k, t, McConfig { samples: 1_000_000, seed: 6 }).unwrap();
        let l = curve.per_k[k][0].scaled(swap(k));
        let se = (h.std_error.powi(2) + l.std_error.powi(2)).sqrt();
        let z = (h.value - l.value).abs() / se;
        ok &= z <= 3.0;
        parts.push(format!("l2 k={k} {:.5} vs {:.5} ({z:.2} SE)", l.value, h.value));
    }
    let detail = parts.join("; ");
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn properties() -> Outcome {
    const CASES: u64 = 200;
    let mut parts = Vec::new();
    for (name, check) in common::PROPERTIES {
        for case in 0..CASES {
            check(0xACCE_0000 + case).map_err(|e| format!("{name}, case {case}: {e}"))?;
        }
        parts.push(name.to_string());
    }
    Ok(format!("{CASES} cases each: {}", parts.join(", ")))
}

fn sup_corollary() -> Outcome {
    let grid = uniform_grid(3.0, 0.02).unwrap();
    let f = LimitFunction::new(LimitParams::heavy(2, 4.0, 1.0).unwrap(), ComplexRule::example_rule(), LimitSettings::default()).unwrap();
    let curve = f.curve(&grid).map_err(|e| e.to_string())?;
    let mut parts = Vec::new();
    let mut ok = true;
    for (a, b) in [(0.1, 3.0), (0.5, 2.0)] {
        let sup = curve.sup_functional(a, b).map_err(|e| e.to_string())?;
        let at_a = f.value(a).unwrap().value;
        let err = (sup - at_a).abs();
        ok &= err <= 1e-10;
        parts.push(format!("[{a}, {b}]: sup {sup:.12} vs value(a) {at_a:.12} (diff {err:.1e})"));
    }
    let detail = parts.join("; ");
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn main() {
    let criteria: [Criterion; 8] = [
        ("closed-form agreement", closed_form),
        ("oracle equivalence", oracle),
        ("sup-norm integral identity", linf_integral),
        ("heavy-tail convergence", heavy_convergence),
        ("light-tail convergence", light_convergence),
        ("heavy/light term swap", heavy_light_swap),
        ("property suites", properties),
        ("sup-functional corollary", sup_corollary),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {} {name}: PASS [{secs:.1}s] {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {} {name}: FAIL [{secs:.1}s] {detail}", i + 1);
            }
        }
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
