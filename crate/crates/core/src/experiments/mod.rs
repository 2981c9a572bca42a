//! Convergence studies: sample clouds for several `n` and seeds, compare the
//! scaled Euler characteristic process with the limit curve in sup norm, and
//! write plot-ready tables.

pub mod cli;
pub mod oracle;

use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::complexes::{ComplexRule, RuleSpec};
use crate::ec_process::{ec_process, sup_functional, uniform_grid, ProcessOptions, DEFAULT_STEP, DEFAULT_T_MAX};
use crate::error::{Error, Result};
use crate::limits::{LimitCurve, LimitFunction, LimitParams, LimitSettings};
use crate::radial_models::{radius_r_n, sample_cloud, LawSpec, PresetName, RadialLaw};
use crate::rng::RNG_ALGORITHM;

/// Largest `n` accepted unless the config raises `max_n`.
pub const DEFAULT_MAX_N: usize = 1_000_000;

fn default_xi() -> f64 {
    1.0
}
fn default_t_max() -> f64 {
    DEFAULT_T_MAX
}
fn default_step() -> f64 {
    DEFAULT_STEP
}
fn default_sup_interval() -> [f64; 2] {
    [0.1, 3.0]
}
fn default_max_n() -> usize {
    DEFAULT_MAX_N
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub law: LawSpec,
    #[serde(default = "RuleSpec::example")]
    pub rule: RuleSpec,
    #[serde(default = "default_xi")]
    pub xi: f64,
    pub n_values: Vec<usize>,
    pub seeds: Vec<u64>,
    #[serde(default = "default_t_max")]
    pub t_max: f64,
    #[serde(default = "default_step")]
    pub step: f64,
    #[serde(default = "default_sup_interval")]
    pub sup_interval: [f64; 2],
    #[serde(default)]
    pub limit: LimitSettings,
    #[serde(default)]
    pub out: Option<PathBuf>,
    /// Worker threads; `None` uses every core.
    #[serde(default)]
    pub jobs: Option<usize>,
    #[serde(default = "default_max_n")]
    pub max_n: usize,
}

impl ExperimentConfig {
    /// A preset with the default rule, grid, interval and limit settings.
    pub fn preset(name: PresetName, n_values: Vec<usize>, seeds: Vec<u64>) -> Self {
        ExperimentConfig {
            law: LawSpec::preset(name),
            rule: RuleSpec::example(),
            xi: 1.0,
            n_values,
            seeds,
            t_max: DEFAULT_T_MAX,
            step: DEFAULT_STEP,
            sup_interval: default_sup_interval(),
            limit: LimitSettings::default(),
            out: None,
            jobs: None,
            max_n: DEFAULT_MAX_N,
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_values.is_empty() || self.n_values.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Config("n_values must be non-empty and strictly increasing".into()));
        }
        if self.seeds.is_empty() {
            return Err(Error::Config("seeds must be non-empty".into()));
        }
        let mut seeds = self.seeds.clone();
        seeds.sort_unstable();
        if seeds.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::Config("seeds must be distinct".into()));
        }
        if !(self.t_max > 0.0 && self.t_max.is_finite()) {
            return Err(Error::Config(format!("t_max must be positive (got {})", self.t_max)));
        }
        if !(self.xi > 0.0 && self.xi.is_finite()) {
            return Err(Error::Config(format!("xi must be positive (got {})", self.xi)));
        }
        let [a, b] = self.sup_interval;
        if !(a >= 0.0 && a < b && b <= self.t_max + 1e-12) {
            return Err(Error::Config(format!("sup interval [{a}, {b}] must satisfy 0 <= a < b <= t_max")));
        }
        if self.jobs == Some(0) {
            return Err(Error::Config("jobs must be at least 1".into()));
        }
        if let Some(&n) = self.n_values.iter().find(|&&n| n > self.max_n) {
            return Err(Error::Resource(format!("n = {n} exceeds the budget max_n = {}", self.max_n)));
        }
        uniform_grid(self.t_max, self.step)?;
        Ok(())
    }
}

/// One `(n, seed)` run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentRow {
    pub n: usize,
    pub seed: u64,
    pub r_n: f64,
    pub scale: f64,
    pub exterior_count: usize,
    pub sup_distance: Option<f64>,
    /// Curve file relative to the output directory.
    pub curve: String,
    pub error: Option<String>,
    pub wall_time: f64,
    #[serde(skip)]
    pub chi_scaled: Vec<f64>,
    #[serde(skip)]
    pub process_csv: Vec<u8>,
}

#[derive(Debug, Clone)]
pub struct ExperimentResult {
    pub config: ExperimentConfig,
    pub grid: Vec<f64>,
    pub limit: LimitCurve,
    /// Sorted by `(n, seed)`.
    pub rows: Vec<ExperimentRow>,
    pub caveats: Vec<String>,
}

fn run_row(law: &RadialLaw, rule: &ComplexRule<f64>, config: &ExperimentConfig, grid: &[f64], limit: &LimitCurve, n: usize, seed: u64) -> ExperimentRow {
    let start = Instant::now();
    let mut row = ExperimentRow {
        n,
        seed,
        r_n: f64::NAN,
        scale: f64::NAN,
        exterior_count: 0,
        sup_distance: None,
        curve: format!("curves/run_{n}_{seed}.csv"),
        error: None,
        wall_time: 0.0,
        chi_scaled: Vec::new(),
        process_csv: Vec::new(),
    };
    let outcome = (|| -> Result<()> {
        let r_n = radius_r_n(law, n, config.xi)?;
        row.r_n = r_n;
        let cloud = sample_cloud::<f64>(law, n, seed);
        let process = ec_process(&cloud, rule, r_n, grid, ProcessOptions::default())?;
        row.scale = process.scale;
        row.exterior_count = process.exterior_count;
        row.chi_scaled = process.chi_scaled();
        let diff: Vec<f64> = row.chi_scaled.iter().zip(&limit.value).map(|(x, y)| x - y).collect();
        let [a, b] = config.sup_interval;
        row.sup_distance = Some(sup_functional(grid, &diff, a, b)?);
        process.write_csv(&mut row.process_csv)?;
        Ok(())
    })();
    if let Err(e) = outcome {
        row.error = Some(e.to_string());
    }
    row.wall_time = start.elapsed().as_secs_f64();
    row
}

/// Runs every `(n, seed)` pair on a pool of `config.jobs` threads. Rows do
/// not depend on the thread count; a failing row is kept with its error.
pub fn run_convergence(config: &ExperimentConfig) -> Result<ExperimentResult> {
    config.validate()?;
    let law = config.law.build()?;
    let rule: ComplexRule<f64> = config.rule.build()?;
    let grid = uniform_grid(config.t_max, config.step)?;
    let params = LimitParams::from_law(&law, config.xi)?;
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(jobs) = config.jobs {
        pool = pool.num_threads(jobs);
    }
    let pool = pool.build().map_err(|e| Error::Resource(format!("cannot start worker pool: {e}")))?;
    pool.install(|| {
        let limit = LimitFunction::new(params, rule.clone(), config.limit)?.curve(&grid)?;
        let mut pairs: Vec<(usize, u64)> = config.n_values.iter().flat_map(|&n| config.seeds.iter().map(move |&s| (n, s))).collect();
        pairs.sort_unstable();
        let rows = pairs.par_iter().map(|&(n, seed)| run_row(&law, &rule, config, &grid, &limit, n, seed)).collect();
        Ok(ExperimentResult { config: config.clone(), grid: grid.clone(), limit, rows, caveats: law.theorem_caveats() })
    })
}

/// Nearest-rank quantile: the `ceil(p N)`-th smallest value.
pub fn nearest_rank(sorted: &[f64], p: f64) -> f64 {
    let rank = ((p * sorted.len() as f64).ceil() as usize).clamp(1, sorted.len());
    sorted[rank - 1]
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummaryRow {
    pub n: usize,
    pub median: f64,
    pub q10: f64,
    pub q90: f64,
    pub runs: usize,
    pub errors: usize,
}

/// Median and 10%/90% nearest-rank quantiles of `sup_distance` per `n`,
/// ignoring error rows. An `n` whose rows all failed is omitted.
pub fn sup_distance_table(rows: &[ExperimentRow]) -> Vec<SummaryRow> {
    let mut ns: Vec<usize> = rows.iter().map(|r| r.n).collect();
    ns.sort_unstable();
    ns.dedup();
    ns.into_iter()
        .filter_map(|n| {
            let group: Vec<&ExperimentRow> = rows.iter().filter(|r| r.n == n).collect();
            let mut values: Vec<f64> = group.iter().filter_map(|r| r.sup_distance).collect();
            if values.is_empty() {
                return None;
            }
            values.sort_by(f64::total_cmp);
            Some(SummaryRow {
                n,
                median: nearest_rank(&values, 0.5),
                q10: nearest_rank(&values, 0.1),
                q90: nearest_rank(&values, 0.9),
                runs: group.len(),
                errors: group.len() - values.len(),
            })
        })
        .collect()
}

#[derive(Serialize)]
struct Meta<'a> {
    toolkit: &'static str,
    version: &'static str,
    rng: &'static str,
    config: &'a ExperimentConfig,
    limit_method: crate::limits::Method,
    theorem_caveats: &'a [String],
}

fn opt(x: Option<f64>) -> String {
    x.map_or_else(String::new, |v| v.to_string())
}

/// Writes `meta.json`, `results.csv`, `summary.csv`, `limit.csv`,
/// `timings.csv` and `curves/run_{n}_{seed}.csv` into `dir`. Everything but
/// `timings.csv` is a function of the config alone; the echoed config omits
/// the output directory and thread count.
pub fn write_outputs(result: &ExperimentResult, dir: &Path) -> Result<()> {
    fs::create_dir_all(dir.join("curves"))?;
    // Where and on how many threads a run happened does not affect its results.
    let echo = ExperimentConfig { out: None, jobs: None, ..result.config.clone() };
    let meta = Meta {
        toolkit: env!("CARGO_PKG_NAME"),
        version: env!("CARGO_PKG_VERSION"),
        rng: RNG_ALGORITHM,
        config: &echo,
        limit_method: result.limit.method,
        theorem_caveats: &result.caveats,
    };
    fs::write(dir.join("meta.json"), serde_json::to_string_pretty(&meta)? + "\n")?;

    let mut w = csv::Writer::from_path(dir.join("results.csv"))?;
    w.write_record(["n", "seed", "R_n", "scale", "exterior_count", "sup_distance", "curve", "error"])?;
    for r in &result.rows {
        w.write_record([
            r.n.to_string(),
            r.seed.to_string(),
            r.r_n.to_string(),
            r.scale.to_string(),
            r.exterior_count.to_string(),
            opt(r.sup_distance),
            r.curve.clone(),
            r.error.clone().unwrap_or_default(),
        ])?;
        if !r.process_csv.is_empty() {
            fs::write(dir.join(&r.curve), &r.process_csv)?;
        }
    }
    w.flush()?;

    let mut w = csv::Writer::from_path(dir.join("summary.csv"))?;
    w.write_record(["n", "median", "q10", "q90", "runs", "errors"])?;
    for s in sup_distance_table(&result.rows) {
        w.write_record([s.n.to_string(), s.median.to_string(), s.q10.to_string(), s.q90.to_string(), s.runs.to_string(), s.errors.to_string()])?;
    }
    w.flush()?;

    result.limit.write_csv(fs::File::create(dir.join("limit.csv"))?)?;

    let mut w = csv::Writer::from_path(dir.join("timings.csv"))?;
    w.write_record(["n", "seed", "wall_time"])?;
    for r in &result.rows {
        w.write_record([r.n.to_string(), r.seed.to_string(), r.wall_time.to_string()])?;
    }
    w.flush()?;
    Ok(())
}
