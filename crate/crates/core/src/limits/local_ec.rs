//! Monte Carlo estimate of the limit through the local Euler characteristic.
//!
//! Every simplex is shared by its `k + 1` vertices, so the Euler
//! characteristic is the sum over points `v` of
//! `sum_k (-1)^k N_k(v) / (k + 1)`, with `N_k(v)` the number of
//! `k`-simplices containing `v`. In the limit the exterior points near a
//! typical point form a Poisson process whose intensity depends only on the
//! radial position of that point, so the limit is a prefactor times the
//! expectation of this local sum at the origin, averaged over the position.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1, Poisson, StandardNormal};
use rayon::prelude::*;

use super::{Estimate, LimitParams, Regime};
use crate::complexes::{rooted_histogram, ComplexRule, EnumOptions, RuleKind};
use crate::error::{Error, Result};
use crate::geometry::PointSet;
use crate::rng;
use crate::special::sphere_area;

/// Samples per independently seeded chunk; fixed so results do not depend
/// on the thread count.
pub const CHUNK: usize = 2048;

/// Estimates of the limit and its per-dimension terms on a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct LocalEstimate {
    pub chi: Vec<Estimate>,
    /// `per_k[k][j]`: estimate of `s_k(grid[j])`.
    pub per_k: Vec<Vec<Estimate>>,
}

#[derive(Debug, Clone, Default)]
struct Moments {
    count: u64,
    chi: Vec<(f64, f64)>,
    per_k: Vec<Vec<(f64, f64)>>,
}

impl Moments {
    fn new(len: usize) -> Self {
        Moments { count: 0, chi: vec![(0.0, 0.0); len], per_k: Vec::new() }
    }

    fn record(&mut self, cumulative: &[Vec<u64>]) {
        let len = self.chi.len();
        while self.per_k.len() < cumulative.len() {
            self.per_k.push(vec![(0.0, 0.0); len]);
        }
        self.count += 1;
        for j in 0..len {
            let mut local = 0.0;
            for (k, row) in cumulative.iter().enumerate() {
                let x = row[j] as f64 / (k + 1) as f64;
                let slot = &mut self.per_k[k][j];
                slot.0 += x;
                slot.1 += x * x;
                local += if k % 2 == 0 { x } else { -x };
            }
            self.chi[j].0 += local;
            self.chi[j].1 += local * local;
        }
        // Dimensions absent from this sample contribute zeros, which the
        // shared count already accounts for.
    }

    fn merge(mut self, other: Moments) -> Moments {
        let len = self.chi.len();
        while self.per_k.len() < other.per_k.len() {
            self.per_k.push(vec![(0.0, 0.0); len]);
        }
        self.count += other.count;
        for (a, b) in self.chi.iter_mut().zip(&other.chi) {
            a.0 += b.0;
            a.1 += b.1;
        }
        for (row, other_row) in self.per_k.iter_mut().zip(&other.per_k) {
            for (a, b) in row.iter_mut().zip(other_row) {
                a.0 += b.0;
                a.1 += b.1;
            }
        }
        self
    }

    fn estimate(&self, (sum, sum_sq): (f64, f64), factor: f64) -> Estimate {
        let n = self.count as f64;
        let mean = sum / n;
        let var = if self.count > 1 { ((sum_sq - n * mean * mean) / (n - 1.0)).max(0.0) } else { 0.0 };
        Estimate { value: mean, std_error: (var / n).sqrt() }.scaled(factor)
    }
}

/// Position of the typical point and the local intensity around it.
struct Site {
    /// Intensity at the origin.
    level: f64,
    /// Unit outward normal and `1/zeta` for the exponential tilt; `None` when
    /// the local process is homogeneous.
    tilt: Option<(Vec<f64>, f64, f64)>,
}

impl Site {
    fn draw(params: &LimitParams, rotation_invariant: bool, rng: &mut ChaCha8Rng) -> Site {
        match params.regime {
            Regime::Heavy { alpha } => {
                let u: f64 = 1.0 - rng.random::<f64>();
                let r = u.powf(-1.0 / (alpha - params.d as f64));
                Site { level: params.xi * r.powf(-alpha), tilt: None }
            }
            Regime::Light { zeta } => {
                let rho: f64 = Exp1.sample(rng);
                if zeta.is_infinite() {
                    return Site { level: params.xi * (-rho).exp(), tilt: None };
                }
                let normal = if rotation_invariant {
                    let mut e = vec![0.0; params.d];
                    e[0] = 1.0;
                    e
                } else {
                    random_direction(params.d, rng)
                };
                Site { level: params.xi * (-rho).exp(), tilt: Some((normal, 1.0 / zeta, rho)) }
            }
        }
    }

    /// Intensity at `y` relative to the bound used for thinning.
    fn keep(&self, y: &[f64], bound: f64) -> f64 {
        match &self.tilt {
            None => self.level / bound,
            Some((normal, inv_zeta, rho)) => {
                let s = rho + inv_zeta * normal.iter().zip(y).map(|(a, b)| a * b).sum::<f64>();
                if s < 0.0 {
                    0.0
                } else {
                    self.level * (rho - s).exp() / bound
                }
            }
        }
    }

    /// Upper bound of the intensity on the box `[-half, half]^d`.
    fn bound(&self, half: f64) -> f64 {
        match &self.tilt {
            None => self.level,
            Some((normal, inv_zeta, rho)) => {
                let reach = inv_zeta * half * normal.iter().map(|a| a.abs()).sum::<f64>();
                self.level * reach.min(*rho).exp()
            }
        }
    }
}

fn random_direction(d: usize, rng: &mut ChaCha8Rng) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..d).map(|_| StandardNormal.sample(rng)).collect();
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 1e-12 {
            return v.into_iter().map(|x| x / norm).collect();
        }
    }
}

/// Multiplier turning the mean local sum into the limit.
pub fn prefactor(params: &LimitParams) -> f64 {
    let base = sphere_area(params.d) * params.xi;
    match params.regime {
        Regime::Heavy { alpha } => base / (alpha - params.d as f64),
        Regime::Light { .. } => base,
    }
}

/// Estimates the limit on `grid` from `samples` local configurations.
pub fn estimate(params: &LimitParams, rule: &ComplexRule<f64>, grid: &[f64], samples: usize, seed: u64) -> Result<LocalEstimate> {
    if samples < 2 {
        return Err(Error::Config("the local estimator needs at least two samples".into()));
    }
    rule.check_dimension(params.d)?;
    let d = params.d;
    let half = rule.box_half_width(d, *grid.last().expect("non-empty grid"));
    let volume = (2.0 * half).powi(d as i32);
    let rotation_invariant = matches!(rule.kind(), RuleKind::RipsL2 | RuleKind::Cech);
    let chunks = samples.div_ceil(CHUNK);
    let parts: Vec<Moments> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = rng::stream(seed, rng::STREAM_LOCAL_EC + c as u64);
            let mut moments = Moments::new(grid.len());
            let mut points = PointSet::new(d);
            let mut y = vec![0.0; d];
            for _ in 0..CHUNK.min(samples - c * CHUNK) {
                let site = Site::draw(params, rotation_invariant, &mut rng);
                let bound = site.bound(half);
                points.clear();
                points.push(&vec![0.0; d]);
                let mean = bound * volume;
                let count = if mean > 0.0 { Poisson::new(mean).map_err(|e| Error::Domain(e.to_string()))?.sample(&mut rng) as usize } else { 0 };
                for _ in 0..count {
                    y.iter_mut().for_each(|x| *x = rng.random_range(-half..half));
                    if rng.random::<f64>() < site.keep(&y, bound) {
                        points.push(&y);
                    }
                }
                let hist = rooted_histogram(&points, rule, grid, EnumOptions::default())?;
                moments.record(&hist.cumulative());
            }
            Ok(moments)
        })
        .collect::<Result<_>>()?;
    let total = parts.into_iter().reduce(Moments::merge).expect("at least one chunk");
    let factor = prefactor(params);
    Ok(LocalEstimate {
        chi: total.chi.iter().map(|&m| total.estimate(m, factor)).collect(),
        per_k: total.per_k.iter().map(|row| row.iter().map(|&m| total.estimate(m, factor)).collect()).collect(),
    })
}
