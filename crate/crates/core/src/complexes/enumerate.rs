//! Ordered depth-first enumeration of all simplices present at the largest
//! scale of a grid, tagged with the first grid index at which each appears.
//!
//! A simplex is extended only by vertices with a larger index that are
//! adjacent to every current vertex, so each simplex is produced once. For
//! Rips rules this enumerates the clique complex; for Čech and custom rules
//! every candidate is additionally tested, and a failing simplex is not
//! extended since every superset fails as well.

use std::sync::atomic::{AtomicU64, Ordering};

use rayon::prelude::*;

use super::neighbor::{neighbor_graph, NeighborGraph};
use super::rule::{ComplexRule, RuleKind};
use crate::error::{Error, Result};
use crate::geometry::PointSet;
use crate::scalar::Scalar;

/// Default cap on the number of simplices a single enumeration may visit.
pub const DEFAULT_SIMPLEX_BUDGET: u64 = 100_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EnumOptions {
    /// Highest simplex dimension to enumerate. Using it marks results truncated.
    pub k_cap: Option<usize>,
    /// Maximum number of simplices visited before giving up.
    pub budget: u64,
}

impl Default for EnumOptions {
    fn default() -> Self {
        EnumOptions { k_cap: None, budget: DEFAULT_SIMPLEX_BUDGET }
    }
}

/// `first_seen[k][j]`: number of `k`-simplices that first appear at grid index `j`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub(crate) struct FiltrationHistogram {
    pub first_seen: Vec<Vec<u64>>,
    pub truncated: bool,
}

impl FiltrationHistogram {
    fn new(grid_len: usize) -> Self {
        FiltrationHistogram { first_seen: vec![vec![0; grid_len]], truncated: false }
    }

    fn add(&mut self, k: usize, j: usize) {
        let len = self.first_seen[0].len();
        while self.first_seen.len() <= k {
            self.first_seen.push(vec![0; len]);
        }
        self.first_seen[k][j] += 1;
    }

    fn merge(mut self, other: Self) -> Self {
        let len = self.first_seen[0].len();
        while self.first_seen.len() < other.first_seen.len() {
            self.first_seen.push(vec![0; len]);
        }
        for (mine, theirs) in self.first_seen.iter_mut().zip(other.first_seen) {
            mine.iter_mut().zip(theirs).for_each(|(a, b)| *a += b);
        }
        self.truncated |= other.truncated;
        self
    }

    /// Cumulative counts: `out[k][j] = S_k(grid[j])`.
    pub fn cumulative(&self) -> Vec<Vec<u64>> {
        self.first_seen
            .iter()
            .map(|row| {
                row.iter()
                    .scan(0u64, |acc, &x| {
                        *acc += x;
                        Some(*acc)
                    })
                    .collect()
            })
            .collect()
    }
}

struct Walker<'a, T> {
    points: &'a PointSet<T>,
    rule: &'a ComplexRule<T>,
    grid: &'a [T],
    graph: NeighborGraph<T>,
    opts: EnumOptions,
    visited: AtomicU64,
}

const BUDGET_FLUSH: u64 = 4096;

impl<'a, T: Scalar> Walker<'a, T> {
    fn new(points: &'a PointSet<T>, rule: &'a ComplexRule<T>, grid: &'a [T], opts: EnumOptions) -> Result<Self> {
        assert!(!grid.is_empty(), "grid must be non-empty");
        let t_max = *grid.last().unwrap();
        rule.check_dimension(points.dim())?;
        let graph = neighbor_graph(points, rule, t_max)?;
        Ok(Walker { points, rule, grid, graph, opts, visited: AtomicU64::new(0) })
    }

    /// First grid index `j >= floor` at which a simplex with `vertices` (two
    /// or more) is present, given that it is present at the last index.
    fn first_index(&self, vertices: &[u32], floor: usize, scale_hint: Option<T>) -> Result<Option<usize>> {
        let scale = match (self.rule.kind(), scale_hint) {
            (RuleKind::RipsL2 | RuleKind::RipsLinf, Some(s)) => Some(s),
            (RuleKind::Custom, _) => None,
            _ => {
                let pts: Vec<&[T]> = vertices.iter().map(|&v| self.points.point(v as usize)).collect();
                let crit = self.rule.critical_scale(&pts)?.expect("built-in rule");
                Some(scale_hint.map_or(crit, |s| s.max(crit)))
            }
        };
        match scale {
            Some(s) => {
                let mut j = self.grid.partition_point(|&g| g < s).max(floor);
                if j < self.grid.len() && self.grid[j] == T::zero() {
                    j += 1;
                }
                Ok((j < self.grid.len()).then_some(j))
            }
            None => {
                let pts: Vec<&[T]> = vertices.iter().map(|&v| self.points.point(v as usize)).collect();
                let (mut lo, mut hi) = (floor, self.grid.len());
                // h is monotone in t: find the first grid scale where it holds.
                while lo < hi {
                    let mid = (lo + hi) / 2;
                    if self.rule.evaluate(self.grid[mid], &pts)? {
                        hi = mid;
                    } else {
                        lo = mid + 1;
                    }
                }
                Ok((lo < self.grid.len()).then_some(lo))
            }
        }
    }

    fn charge(&self, local: &mut u64) -> Result<()> {
        *local += 1;
        if *local >= BUDGET_FLUSH {
            let total = self.visited.fetch_add(*local, Ordering::Relaxed) + *local;
            *local = 0;
            if total > self.opts.budget {
                return Err(self.budget_error());
            }
        }
        Ok(())
    }

    fn budget_error(&self) -> Error {
        Error::Resource(format!(
            "more than {} simplices at scale {}; use a larger radius or a smaller scale",
            self.opts.budget,
            self.grid.last().unwrap()
        ))
    }

    fn finish(&self, local: u64) -> Result<()> {
        let total = self.visited.fetch_add(local, Ordering::Relaxed) + local;
        if total > self.opts.budget {
            return Err(self.budget_error());
        }
        Ok(())
    }

    /// Visits the root vertex `v` and every simplex whose smallest vertex is `v`.
    fn walk_root(&self, v: usize, sink: &mut dyn FnMut(&[u32], usize), truncated: &mut bool) -> Result<()> {
        let mut local = 0u64;
        sink(&[v as u32], 0);
        self.charge(&mut local)?;
        let mut cands = Vec::new();
        for &(u, s) in self.graph.forward(v) {
            if let Some(j) = self.first_index(&[v as u32, u], 0, Some(s).filter(|s| !s.is_nan()))? {
                cands.push((u, j));
            }
        }
        let mut clique = vec![v as u32];
        self.extend(&mut clique, 0, &cands, sink, truncated, &mut local)?;
        self.finish(local)
    }

    fn extend(
        &self,
        clique: &mut Vec<u32>,
        index: usize,
        cands: &[(u32, usize)],
        sink: &mut dyn FnMut(&[u32], usize),
        truncated: &mut bool,
        local: &mut u64,
    ) -> Result<()> {
        let k = clique.len();
        for (p, &(w, edge_index)) in cands.iter().enumerate() {
            let floor = index.max(edge_index);
            clique.push(w);
            let j = if self.rule.is_flag() { Some(floor) } else { self.first_index(clique, floor, None)? };
            let Some(j) = j else {
                clique.pop();
                continue;
            };
            if self.opts.k_cap.is_some_and(|cap| k > cap) {
                *truncated = true;
                clique.pop();
                continue;
            }
            sink(clique, j);
            self.charge(local)?;
            let next = self.intersect(w, &cands[p + 1..])?;
            if !next.is_empty() {
                self.extend(clique, j, &next, sink, truncated, local)?;
            }
            clique.pop();
        }
        Ok(())
    }

    /// Candidates after `w` that are also adjacent to `w`, with the edge
    /// index raised to include the edge to `w`.
    fn intersect(&self, w: u32, rest: &[(u32, usize)]) -> Result<Vec<(u32, usize)>> {
        let adj = self.graph.neighbors(w as usize);
        let mut out = Vec::new();
        let (mut a, mut b) = (0, 0);
        while a < rest.len() && b < adj.len() {
            let (u, ju) = rest[a];
            let (x, sx) = adj[b];
            if u < x {
                a += 1;
            } else if x < u {
                b += 1;
            } else {
                let edge = self.first_index(&[w, u], 0, Some(sx).filter(|s| !s.is_nan()))?;
                if let Some(je) = edge {
                    out.push((u, ju.max(je)));
                }
                a += 1;
                b += 1;
            }
        }
        Ok(out)
    }
}

/// Enumerates every simplex present at `grid.last()` and records in which
/// grid cell it first appears. Runs roots in parallel; results do not depend
/// on the thread count.
pub(crate) fn filtration_histogram<T: Scalar>(
    points: &PointSet<T>,
    rule: &ComplexRule<T>,
    grid: &[T],
    opts: EnumOptions,
) -> Result<FiltrationHistogram> {
    if points.is_empty() {
        return Ok(FiltrationHistogram::new(grid.len()));
    }
    let walker = Walker::new(points, rule, grid, opts)?;
    (0..points.len())
        .into_par_iter()
        .try_fold(
            || FiltrationHistogram::new(grid.len()),
            |mut hist, v| {
                let mut truncated = false;
                walker.walk_root(v, &mut |clique, j| hist.add(clique.len() - 1, j), &mut truncated)?;
                hist.truncated |= truncated;
                Ok(hist)
            },
        )
        .try_reduce(|| FiltrationHistogram::new(grid.len()), |a, b| Ok(a.merge(b)))
}

/// Every simplex of the complex at scale `t` as a sorted vertex list,
/// in enumeration order.
pub fn list_simplices<T: Scalar>(points: &PointSet<T>, rule: &ComplexRule<T>, t: T, opts: EnumOptions) -> Result<Vec<Vec<usize>>> {
    let mut out = Vec::new();
    if points.is_empty() {
        return Ok(out);
    }
    let grid = [t];
    let walker = Walker::new(points, rule, &grid, opts)?;
    let mut truncated = false;
    for v in 0..points.len() {
        walker.walk_root(v, &mut |clique, _| out.push(clique.iter().map(|&u| u as usize).collect()), &mut truncated)?;
    }
    Ok(out)
}

/// Like [`filtration_histogram`] but restricted to simplices that contain
/// vertex 0.
pub(crate) fn rooted_histogram<T: Scalar>(
    points: &PointSet<T>,
    rule: &ComplexRule<T>,
    grid: &[T],
    opts: EnumOptions,
) -> Result<FiltrationHistogram> {
    let mut hist = FiltrationHistogram::new(grid.len());
    if points.is_empty() {
        return Ok(hist);
    }
    let walker = Walker::new(points, rule, grid, opts)?;
    let mut truncated = false;
    walker.walk_root(0, &mut |clique, j| hist.add(clique.len() - 1, j), &mut truncated)?;
    hist.truncated = truncated;
    Ok(hist)
}
