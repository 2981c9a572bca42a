//! The Euler characteristic process `t -> chi_n(t)` of the complex on the
//! exterior points, evaluated on a grid of scales.
//!
//! One enumeration at the largest grid scale yields every simplex together
//! with the first grid scale at which it is present; prefix sums then give
//! `S_k(t)` and `chi(t)` on the whole grid. The sample path is
//! right-continuous and piecewise constant, changing only at breakpoints.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::complexes::{self, filtration_histogram, ComplexRule, EnumOptions, RuleKind, RuleSpec};
use crate::error::{Error, Result};
use crate::geometry::PointSet;
use crate::radial_models::{scaling_denominator, LawSpec, PointCloud};
use crate::scalar::Scalar;

/// Default grid: `t = 0.02 j`, `j = 0..=150`.
pub const DEFAULT_T_MAX: f64 = 3.0;
pub const DEFAULT_STEP: f64 = 0.02;

/// `t_j = j * step` for `j = 0..=round(t_max / step)`.
pub fn uniform_grid(t_max: f64, step: f64) -> Result<Vec<f64>> {
    if !(t_max > 0.0 && t_max.is_finite() && step > 0.0 && step.is_finite()) {
        return Err(Error::Config(format!("grid needs t_max > 0 and step > 0 (got {t_max}, {step})")));
    }
    let count = (t_max / step).round() as usize;
    Ok((0..=count).map(|j| j as f64 * step).collect())
}

pub fn default_grid() -> Vec<f64> {
    uniform_grid(DEFAULT_T_MAX, DEFAULT_STEP).expect("default grid is valid")
}

fn check_grid<T: Scalar>(grid: &[T]) -> Result<()> {
    if grid.is_empty() {
        return Err(Error::Domain("empty scale grid".into()));
    }
    if !(grid[0] >= T::zero()) {
        return Err(Error::Domain("scale grid must be non-negative".into()));
    }
    if grid.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(Error::Domain("scale grid must be strictly increasing".into()));
    }
    Ok(())
}

/// Euler characteristic of the complex on `points` at scale `t`.
pub fn ec_at<T: Scalar>(points: &PointSet<T>, rule: &ComplexRule<T>, t: T) -> Result<i64> {
    Ok(ec_curve(points, rule, &[t], EnumOptions::default())?.chi[0])
}

/// Euler characteristic and per-dimension counts on a grid.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EcCurve {
    pub chi: Vec<i64>,
    /// `per_k[k][j] = S_k(grid[j])`.
    pub per_k: Vec<Vec<u64>>,
    pub truncated: bool,
}

pub fn ec_curve<T: Scalar>(points: &PointSet<T>, rule: &ComplexRule<T>, grid: &[T], opts: EnumOptions) -> Result<EcCurve> {
    check_grid(grid)?;
    let hist = filtration_histogram(points, rule, grid, opts)?;
    let per_k = hist.cumulative();
    let chi = (0..grid.len())
        .map(|j| per_k.iter().enumerate().map(|(k, row)| if k % 2 == 0 { row[j] as i64 } else { -(row[j] as i64) }).sum())
        .collect();
    Ok(EcCurve { chi, per_k, truncated: hist.truncated })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct ProcessOptions {
    /// Keep the per-dimension counts `S_k(t)`.
    pub retain_per_k: bool,
    pub enumeration: EnumOptions,
}

/// Sample path of `chi_n` on a grid with the theorem's scaling attached.
#[derive(Debug, Clone, PartialEq)]
pub struct EcProcess<T> {
    pub t_grid: Vec<T>,
    pub chi: Vec<i64>,
    pub per_k: Option<Vec<Vec<u64>>>,
    pub n: usize,
    pub seed: u64,
    pub r_n: f64,
    /// Denominator of the scaled process.
    pub scale: f64,
    pub exterior_count: usize,
    pub truncated: bool,
    pub law: Option<LawSpec>,
    pub rule: Option<RuleSpec>,
}

/// Builds the process for the points of `cloud` outside `B(0, r_n)`.
pub fn ec_process<T: Scalar>(
    cloud: &PointCloud<T>,
    rule: &ComplexRule<T>,
    r_n: f64,
    t_grid: &[T],
    opts: ProcessOptions,
) -> Result<EcProcess<T>> {
    check_grid(t_grid)?;
    let exterior = complexes::points_outside(&cloud.points, r_n);
    let curve = ec_curve(&exterior, rule, t_grid, opts.enumeration)?;
    Ok(EcProcess {
        t_grid: t_grid.to_vec(),
        chi: curve.chi,
        per_k: opts.retain_per_k.then_some(curve.per_k),
        n: cloud.n,
        seed: cloud.seed,
        r_n,
        scale: scaling_denominator(&cloud.law, r_n),
        exterior_count: exterior.len(),
        truncated: curve.truncated,
        law: cloud.law.spec(),
        rule: rule.spec(),
    })
}

impl<T: Scalar> EcProcess<T> {
    pub fn chi_scaled(&self) -> Vec<f64> {
        self.chi.iter().map(|&c| c as f64 / self.scale).collect()
    }

    /// `sup |chi(t)|` over the grid points in `[a, b]`. Exact when the grid
    /// contains every breakpoint in `[a, b]`.
    pub fn sup_functional(&self, a: f64, b: f64) -> Result<f64> {
        let grid: Vec<f64> = self.t_grid.iter().map(|t| t.as_f64()).collect();
        let values: Vec<f64> = self.chi.iter().map(|&c| c as f64).collect();
        sup_functional(&grid, &values, a, b)
    }

    /// `t,chi,chi_scaled[,S0,S1,...]` with `'\n'` line endings.
    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        let mut header = String::from("t,chi,chi_scaled");
        if let Some(per_k) = &self.per_k {
            for k in 0..per_k.len() {
                header.push_str(&format!(",S{k}"));
            }
        }
        writeln!(out, "{header}")?;
        let scaled = self.chi_scaled();
        for (j, t) in self.t_grid.iter().enumerate() {
            let mut line = format!("{},{},{}", t, self.chi[j], scaled[j]);
            if let Some(per_k) = &self.per_k {
                for row in per_k {
                    line.push_str(&format!(",{}", row[j]));
                }
            }
            writeln!(out, "{line}")?;
        }
        Ok(())
    }

    pub fn meta(&self) -> ProcessMeta {
        ProcessMeta {
            n: self.n,
            seed: self.seed,
            r_n: self.r_n,
            scale: self.scale,
            exterior_count: self.exterior_count,
            truncated: self.truncated,
            law: self.law.clone(),
            rule: self.rule,
        }
    }
}

/// Sidecar metadata written next to a process CSV.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProcessMeta {
    pub n: usize,
    pub seed: u64,
    pub r_n: f64,
    pub scale: f64,
    pub exterior_count: usize,
    pub truncated: bool,
    pub law: Option<LawSpec>,
    pub rule: Option<RuleSpec>,
}

/// `max |values[j]|` over grid points in `[a, b]`.
pub fn sup_functional(grid: &[f64], values: &[f64], a: f64, b: f64) -> Result<f64> {
    if !(a >= 0.0 && a < b) {
        return Err(Error::Domain(format!("sup interval needs 0 <= a < b (got [{a}, {b}])")));
    }
    let (Some(&first), Some(&last)) = (grid.first(), grid.last()) else {
        return Err(Error::Domain("empty grid".into()));
    };
    // Small slack so that a grid generated as j * step still covers [a, b].
    let slack = 1e-9 * (1.0 + b.abs());
    if a < first - slack || b > last + slack {
        return Err(Error::Domain(format!("[{a}, {b}] is not covered by the grid [{first}, {last}]")));
    }
    grid.iter()
        .zip(values)
        .filter(|(&t, _)| t >= a - slack && t <= b + slack)
        .map(|(_, v)| v.abs())
        .fold(None, |acc: Option<f64>, v| Some(acc.map_or(v, |m| m.max(v))))
        .ok_or_else(|| Error::Domain(format!("no grid point lies in [{a}, {b}]")))
}

/// Sorted distinct scales at which a Rips complex on `points` can change:
/// every pairwise distance divided by the unit threshold.
pub fn breakpoints<T: Scalar>(points: &PointSet<T>, rule: &ComplexRule<T>) -> Result<Vec<T>> {
    if !rule.is_flag() {
        return Err(Error::Unsupported(format!(
            "exact breakpoints are available for Rips rules only, not {}",
            rule.kind().as_str()
        )));
    }
    let mut out = Vec::with_capacity(points.len() * points.len().saturating_sub(1) / 2);
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            out.push(rule.pair_scale(points.point(i), points.point(j)));
        }
    }
    out.sort_by(|a, b| a.partial_cmp(b).expect("finite distances"));
    out.dedup();
    Ok(out)
}

/// Largest point count accepted by [`brute_force_ec`].
pub const BRUTE_FORCE_MAX_POINTS: usize = 20;

/// Exhaustive `sum over non-empty subsets Y of (-1)^{|Y|-1} h_t(Y)`.
pub fn brute_force_ec<T: Scalar>(points: &PointSet<T>, rule: &ComplexRule<T>, t: T) -> Result<i64> {
    let n = points.len();
    if n > BRUTE_FORCE_MAX_POINTS {
        return Err(Error::Domain(format!("subset enumeration limited to {BRUTE_FORCE_MAX_POINTS} points, got {n}")));
    }
    let mut chi = 0i64;
    let mut subset: Vec<&[T]> = Vec::with_capacity(n);
    for mask in 1u32..(1u32 << n) {
        subset.clear();
        subset.extend((0..n).filter(|i| mask >> i & 1 == 1).map(|i| points.point(i)));
        if rule.evaluate(t, &subset)? {
            chi += if subset.len() % 2 == 1 { 1 } else { -1 };
        }
    }
    Ok(chi)
}

impl RuleKind {
    /// Rules exercised by the brute-force equivalence suite.
    pub const BUILT_IN: [RuleKind; 3] = [RuleKind::RipsL2, RuleKind::RipsLinf, RuleKind::Cech];
}
