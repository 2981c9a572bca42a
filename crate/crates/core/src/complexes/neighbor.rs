use std::collections::HashMap;

use super::rule::{ComplexRule, RuleKind};
use crate::error::Result;
use crate::geometry::{dist_l2, PointSet};
use crate::scalar::Scalar;

/// Pairwise graph of a complex at a fixed scale: `{i, j}` is an edge iff
/// `h_t({p_i, p_j}) = 1`. Adjacency lists are sorted by vertex index and
/// carry the scale at which each edge appears (`NaN` for custom rules).
#[derive(Debug, Clone, PartialEq)]
pub struct NeighborGraph<T> {
    adj: Vec<Vec<(u32, T)>>,
}

impl<T: Scalar> NeighborGraph<T> {
    pub fn vertex_count(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    /// Sorted neighbors of `v` with the scale of each edge.
    pub fn neighbors(&self, v: usize) -> &[(u32, T)] {
        &self.adj[v]
    }

    /// Sorted list of edges `(i, j)` with `i < j`.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.edge_count());
        for (i, list) in self.adj.iter().enumerate() {
            out.extend(list.iter().filter(|&&(j, _)| j as usize > i).map(|&(j, _)| (i, j as usize)));
        }
        out
    }

    /// Neighbors of `v` with a larger index.
    pub(crate) fn forward(&self, v: usize) -> &[(u32, T)] {
        let list = &self.adj[v];
        let start = list.partition_point(|&(u, _)| (u as usize) <= v);
        &list[start..]
    }
}

/// Builds the pairwise graph at scale `t` with a uniform spatial hash of
/// cell width equal to the pair search radius, so only the `3^d` cells
/// around each point are scanned.
pub fn neighbor_graph<T: Scalar>(points: &PointSet<T>, rule: &ComplexRule<T>, t: T) -> Result<NeighborGraph<T>> {
    let n = points.len();
    let mut adj: Vec<Vec<(u32, T)>> = vec![Vec::new(); n];
    if n < 2 || !(t > T::zero()) {
        return Ok(NeighborGraph { adj });
    }
    let d = points.dim();
    rule.check_dimension(d)?;
    let width = match rule.kind() {
        RuleKind::Custom => rule.locality(d) * t,
        _ => rule.unit_threshold() * t,
    };
    let cell_of = |p: &[T]| -> Vec<i64> { p.iter().map(|&x| (x / width).floor().to_i64().unwrap_or(i64::MAX)).collect() };
    let mut cells: HashMap<Vec<i64>, Vec<u32>> = HashMap::new();
    for (i, p) in points.iter().enumerate() {
        cells.entry(cell_of(p)).or_default().push(i as u32);
    }
    let offsets = neighbor_offsets(d);
    let mut key = vec![0i64; d];
    for (i, p) in points.iter().enumerate() {
        let home = cell_of(p);
        for off in &offsets {
            for ((k, h), o) in key.iter_mut().zip(&home).zip(off) {
                *k = h.saturating_add(*o);
            }
            let Some(members) = cells.get(&key) else { continue };
            for &j in members {
                let j = j as usize;
                if j <= i {
                    continue;
                }
                let q = points.point(j);
                let scale = match rule.kind() {
                    RuleKind::Custom => {
                        if dist_l2(p, q) > width || !rule.evaluate(t, &[p, q])? {
                            continue;
                        }
                        T::nan()
                    }
                    _ => {
                        let s = rule.pair_scale(p, q);
                        if !(s <= t) {
                            continue;
                        }
                        s
                    }
                };
                adj[i].push((j as u32, scale));
                adj[j].push((i as u32, scale));
            }
        }
    }
    for list in &mut adj {
        list.sort_unstable_by_key(|&(j, _)| j);
    }
    Ok(NeighborGraph { adj })
}

fn neighbor_offsets(d: usize) -> Vec<Vec<i64>> {
    let mut out = vec![Vec::with_capacity(d)];
    for _ in 0..d {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                (-1..=1).map(move |o| {
                    let mut v = prefix.clone();
                    v.push(o);
                    v
                })
            })
            .collect();
    }
    out
}
