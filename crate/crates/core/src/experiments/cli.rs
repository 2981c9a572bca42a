//! Command-line front end. `run` returns the process exit code: 0 on
//! success, 1 when the oracle suite finds a mismatch, 2 for usage and
//! configuration errors, 3 for resource and precision errors.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use super::{oracle, run_convergence, sup_distance_table, write_outputs, ExperimentConfig};
use crate::complexes::{points_outside, read_points_csv, ComplexRule, RuleKind, RuleSpec};
use crate::ec_process::{breakpoints, ec_process, uniform_grid, ProcessOptions, DEFAULT_STEP, DEFAULT_T_MAX};
use crate::error::{Error, Result};
use crate::limits::{LimitFunction, LimitParams, LimitSettings, McConfig, Method, DEFAULT_EPS};
use crate::radial_models::{radius_r_n, sample_cloud, LawSpec, PresetName};

#[derive(Parser, Debug)]
#[command(name = "extreme-ec", version, about = "Euler characteristic of random geometric complexes beyond a growing radius")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Sample a cloud and write the Euler characteristic process as CSV.
    Simulate(SimulateArgs),
    /// Write the limit curve as CSV.
    Limit(LimitArgs),
    /// Run a convergence study and write its output directory.
    Experiment(ExperimentArgs),
    /// Compare enumeration with the subset oracle on small clouds.
    Oracle(OracleArgs),
    /// List the scales at which a Rips complex on a cloud can change.
    Breakpoints(BreakpointArgs),
}

#[derive(Args, Debug, Clone)]
struct ModelArgs {
    /// example_3_2 or example_4_2.
    #[arg(long)]
    preset: Option<String>,
    /// JSON law description (inline or a path to a file).
    #[arg(long)]
    law: Option<String>,
    #[arg(long)]
    xi: Option<f64>,
    /// rips_l2, rips_linf or cech.
    #[arg(long)]
    rule: Option<String>,
    /// Rule threshold at scale one [default: 1/sqrt(2)].
    #[arg(long)]
    threshold: Option<f64>,
}

impl ModelArgs {
    fn law_spec(&self) -> Result<Option<LawSpec>> {
        match (&self.preset, &self.law) {
            (Some(_), Some(_)) => Err(Error::Config("give either --preset or --law, not both".into())),
            (Some(p), None) => Ok(Some(LawSpec::preset(p.parse::<PresetName>()?))),
            (None, Some(text)) => Ok(Some(LawSpec::from_json(&inline_or_file(text)?)?)),
            (None, None) => Ok(None),
        }
    }

    fn rule_spec(&self, base: RuleSpec) -> Result<RuleSpec> {
        let kind = match &self.rule {
            Some(r) => r.parse::<RuleKind>()?,
            None => base.kind,
        };
        if kind == RuleKind::Custom {
            return Err(Error::Config("custom rules are available from the library only".into()));
        }
        Ok(RuleSpec { kind, unit_threshold: self.threshold.unwrap_or(base.unit_threshold) })
    }
}

fn inline_or_file(text: &str) -> Result<String> {
    if text.trim_start().starts_with('{') {
        Ok(text.to_string())
    } else {
        fs::read_to_string(text).map_err(|e| Error::Config(format!("cannot read {text}: {e}")))
    }
}

#[derive(Args, Debug)]
struct GridArgs {
    #[arg(long = "t-max", default_value_t = DEFAULT_T_MAX)]
    t_max: f64,
    #[arg(long, default_value_t = DEFAULT_STEP)]
    step: f64,
}

#[derive(Args, Debug)]
struct SimulateArgs {
    #[command(flatten)]
    model: ModelArgs,
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[command(flatten)]
    grid: GridArgs,
    /// Also write the simplex counts S_k(t).
    #[arg(long)]
    per_k: bool,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    jobs: Option<usize>,
}

#[derive(Args, Debug)]
struct LimitArgs {
    #[command(flatten)]
    model: ModelArgs,
    #[command(flatten)]
    grid: GridArgs,
    #[arg(long, default_value_t = DEFAULT_EPS)]
    eps: f64,
    #[arg(long = "mc-samples")]
    mc_samples: Option<usize>,
    /// Seed of the Monte Carlo estimators.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// auto, series or local_ec.
    #[arg(long, default_value = "auto")]
    method: String,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    jobs: Option<usize>,
}

#[derive(Args, Debug)]
struct ExperimentArgs {
    /// JSON config file; flags override its fields.
    #[arg(long)]
    config: Option<PathBuf>,
    #[command(flatten)]
    model: ModelArgs,
    /// Sample sizes, e.g. `1000,10000,100000`.
    #[arg(long)]
    n: Option<String>,
    /// Seeds, e.g. `1,2,3` or `1..=20`.
    #[arg(long)]
    seed: Option<String>,
    #[arg(long = "t-max")]
    t_max: Option<f64>,
    #[arg(long)]
    step: Option<f64>,
    #[arg(long)]
    eps: Option<f64>,
    #[arg(long = "mc-samples")]
    mc_samples: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    jobs: Option<usize>,
}

#[derive(Args, Debug)]
struct OracleArgs {
    /// Largest number of exterior points per cloud.
    #[arg(long = "max-n", default_value_t = 12)]
    max_n: usize,
    #[arg(long, default_value_t = 50)]
    trials: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long)]
    jobs: Option<usize>,
}

#[derive(Args, Debug)]
struct BreakpointArgs {
    /// CSV file of points, one per row without header. Otherwise the
    /// exterior of a sampled cloud is used.
    #[arg(long)]
    points: Option<PathBuf>,
    #[command(flatten)]
    model: ModelArgs,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Parses `1,2,3`, `1..=20` or `1..21`.
fn parse_list<T>(text: &str) -> Result<Vec<T>>
where
    T: std::str::FromStr + Copy + TryFrom<u64>,
{
    let bad = || Error::Config(format!("cannot parse list {text:?}"));
    let num = |s: &str| -> Result<u64> { s.trim().replace('_', "").parse::<u64>().map_err(|_| bad()) };
    let mut out = Vec::new();
    for part in text.split(',') {
        let range = part.split_once("..=").map(|(a, b)| (a, b, true)).or_else(|| part.split_once("..").map(|(a, b)| (a, b, false)));
        let (lo, hi) = match range {
            Some((a, b, inclusive)) => {
                let (lo, hi) = (num(a)?, num(b)?);
                (lo, if inclusive { hi } else { hi.checked_sub(1).ok_or_else(bad)? })
            }
            None => {
                let v = num(part).or_else(|_| part.trim().parse::<f64>().ok().filter(|v| v.fract() == 0.0 && *v >= 0.0).map(|v| v as u64).ok_or_else(bad))?;
                (v, v)
            }
        };
        if lo > hi {
            return Err(bad());
        }
        for v in lo..=hi {
            out.push(T::try_from(v).map_err(|_| bad())?);
        }
    }
    Ok(out)
}

fn output(path: &Option<PathBuf>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => {
            if let Some(dir) = p.parent().filter(|d| !d.as_os_str().is_empty()) {
                fs::create_dir_all(dir)?;
            }
            Box::new(io::BufWriter::new(fs::File::create(p)?))
        }
        None => Box::new(io::BufWriter::new(io::stdout().lock())),
    })
}

fn with_jobs<R: Send>(jobs: Option<usize>, f: impl FnOnce() -> Result<R> + Send) -> Result<R> {
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(j) = jobs {
        if j == 0 {
            return Err(Error::Config("--jobs must be at least 1".into()));
        }
        pool = pool.num_threads(j);
    }
    pool.build().map_err(|e| Error::Resource(format!("cannot start worker pool: {e}")))?.install(f)
}

fn simulate(args: SimulateArgs) -> Result<i32> {
    let spec = args.model.law_spec()?.unwrap_or_else(|| LawSpec::preset(PresetName::Example32));
    let law = spec.build()?;
    let rule: ComplexRule<f64> = args.model.rule_spec(RuleSpec::example())?.build()?;
    let grid = uniform_grid(args.grid.t_max, args.grid.step)?;
    let xi = args.model.xi.unwrap_or(1.0);
    let process = with_jobs(args.jobs, || {
        let cloud = sample_cloud::<f64>(&law, args.n, args.seed);
        // With no sample there is no radius to solve for; the process is zero.
        let r_n = if args.n == 0 { f64::INFINITY } else { radius_r_n(&law, args.n, xi)? };
        ec_process(&cloud, &rule, r_n, &grid, ProcessOptions { retain_per_k: args.per_k, ..Default::default() })
    })?;
    let mut out = output(&args.out)?;
    process.write_csv(&mut out)?;
    out.flush()?;
    Ok(0)
}

fn parse_method(text: &str) -> Result<Method> {
    serde_json::from_value(serde_json::Value::String(text.replace('-', "_")))
        .map_err(|_| Error::Config(format!("unknown method {text:?} (expected auto, series or local_ec)")))
}

fn limit(args: LimitArgs) -> Result<i32> {
    let spec = args.model.law_spec()?.unwrap_or_else(|| LawSpec::preset(PresetName::Example32));
    let law = spec.build()?;
    let rule: ComplexRule<f64> = args.model.rule_spec(RuleSpec::example())?.build()?;
    let grid = uniform_grid(args.grid.t_max, args.grid.step)?;
    let mut settings = LimitSettings { eps: args.eps, method: parse_method(&args.method)?, ..Default::default() };
    settings.mc = McConfig { samples: args.mc_samples.unwrap_or(settings.mc.samples), seed: args.seed };
    let function = LimitFunction::new(LimitParams::from_law(&law, args.model.xi.unwrap_or(1.0))?, rule, settings)?;
    let curve = with_jobs(args.jobs, || function.curve(&grid))?;
    let mut out = output(&args.out)?;
    curve.write_csv(&mut out)?;
    out.flush()?;
    Ok(0)
}

fn experiment(args: ExperimentArgs) -> Result<i32> {
    let mut config = match &args.config {
        Some(path) => ExperimentConfig::from_json(&fs::read_to_string(path).map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?)?,
        None => {
            let n = args.n.as_deref().ok_or_else(|| Error::Config("experiment needs --config or --n".into()))?;
            ExperimentConfig::preset(PresetName::Example32, parse_list(n)?, vec![1])
        }
    };
    if let Some(spec) = args.model.law_spec()? {
        config.law = spec;
    }
    config.rule = args.model.rule_spec(config.rule)?;
    if let Some(xi) = args.model.xi {
        config.xi = xi;
    }
    if let Some(n) = &args.n {
        config.n_values = parse_list(n)?;
    }
    if let Some(s) = &args.seed {
        config.seeds = parse_list(s)?;
    }
    if let Some(t) = args.t_max {
        config.t_max = t;
        config.sup_interval[1] = config.sup_interval[1].min(t);
    }
    if let Some(s) = args.step {
        config.step = s;
    }
    if let Some(e) = args.eps {
        config.limit.eps = e;
    }
    if let Some(m) = args.mc_samples {
        config.limit.mc.samples = m;
    }
    if args.out.is_some() {
        config.out = args.out.clone();
    }
    if args.jobs.is_some() {
        config.jobs = args.jobs;
    }
    let dir = config.out.clone().ok_or_else(|| Error::Config("experiment needs an output directory (--out)".into()))?;
    let result = run_convergence(&config)?;
    write_outputs(&result, &dir)?;
    let mut stdout = io::stdout().lock();
    writeln!(stdout, "n,median,q10,q90,runs,errors")?;
    for s in sup_distance_table(&result.rows) {
        writeln!(stdout, "{},{},{},{},{},{}", s.n, s.median, s.q10, s.q90, s.runs, s.errors)?;
    }
    for caveat in &result.caveats {
        eprintln!("warning: {caveat}");
    }
    Ok(0)
}

fn run_oracle(args: OracleArgs) -> Result<i32> {
    let report = with_jobs(args.jobs, || oracle::run_oracle(args.trials, args.max_n, args.seed))?;
    for m in &report.mismatches {
        println!("mismatch: trial {} rule {} t {}: enumerated {} vs subsets {}", m.trial, m.rule.as_str(), m.t, m.enumerated, m.brute_force);
    }
    let verdict = if report.passed() { "pass" } else { "fail" };
    println!("oracle: {} clouds, {} comparisons, {} mismatches: {verdict}", report.clouds, report.comparisons, report.mismatches.len());
    Ok(if report.passed() { 0 } else { 1 })
}

fn list_breakpoints(args: BreakpointArgs) -> Result<i32> {
    let rule: ComplexRule<f64> = args.model.rule_spec(RuleSpec::example())?.build()?;
    let points = match (&args.points, args.n) {
        (Some(path), None) => read_points(path)?,
        (None, Some(n)) => {
            let law = args.model.law_spec()?.unwrap_or_else(|| LawSpec::preset(PresetName::Example32)).build()?;
            let cloud = sample_cloud::<f64>(&law, n, args.seed);
            let r_n = if n == 0 { f64::INFINITY } else { radius_r_n(&law, n, args.model.xi.unwrap_or(1.0))? };
            points_outside(&cloud.points, r_n)
        }
        _ => return Err(Error::Config("breakpoints needs exactly one of --points or --n".into())),
    };
    let mut out = output(&args.out)?;
    writeln!(out, "t")?;
    for t in breakpoints(&points, &rule)? {
        writeln!(out, "{t}")?;
    }
    out.flush()?;
    Ok(0)
}

fn read_points(path: &Path) -> Result<crate::geometry::PointSet<f64>> {
    let file = fs::File::open(path).map_err(|e| Error::Config(format!("cannot open {}: {e}", path.display())))?;
    read_points_csv(file)
}

/// Parses `argv` (including the program name) and runs the subcommand.
pub fn run<I, S>(argv: I) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let outcome = match cli.command {
        Command::Simulate(a) => simulate(a),
        Command::Limit(a) => limit(a),
        Command::Experiment(a) => experiment(a),
        Command::Oracle(a) => run_oracle(a),
        Command::Breakpoints(a) => list_breakpoints(a),
    };
    match outcome {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
