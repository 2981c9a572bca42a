//! Point storage, norms and the smallest enclosing ball.

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// A list of points in `R^dim`, stored row-major in one buffer.
#[derive(Debug, Clone, PartialEq)]
pub struct PointSet<T> {
    dim: usize,
    coords: Vec<T>,
}

impl<T: Scalar> PointSet<T> {
    pub fn new(dim: usize) -> Self {
        assert!(dim > 0, "points need at least one coordinate");
        PointSet { dim, coords: Vec::new() }
    }

    pub fn with_capacity(dim: usize, n: usize) -> Self {
        assert!(dim > 0, "points need at least one coordinate");
        PointSet { dim, coords: Vec::with_capacity(dim * n) }
    }

    /// Builds a point set from a flat row-major buffer.
    pub fn from_flat(dim: usize, coords: Vec<T>) -> Result<Self> {
        if dim == 0 || !coords.len().is_multiple_of(dim) {
            return Err(Error::Config(format!(
                "{} coordinates do not form points of dimension {dim}",
                coords.len()
            )));
        }
        Ok(PointSet { dim, coords })
    }

    pub fn from_rows<R: AsRef<[T]>>(dim: usize, rows: &[R]) -> Result<Self> {
        let mut set = PointSet::with_capacity(dim, rows.len());
        for row in rows {
            set.try_push(row.as_ref())?;
        }
        Ok(set)
    }

    pub fn try_push(&mut self, p: &[T]) -> Result<()> {
        if p.len() != self.dim {
            return Err(Error::Config(format!("point of dimension {} pushed into a {}-dimensional set", p.len(), self.dim)));
        }
        self.coords.extend_from_slice(p);
        Ok(())
    }

    pub fn push(&mut self, p: &[T]) {
        self.try_push(p).expect("dimension mismatch");
    }

    pub fn clear(&mut self) {
        self.coords.clear();
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.coords.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn point(&self, i: usize) -> &[T] {
        &self.coords[i * self.dim..(i + 1) * self.dim]
    }

    pub fn iter(&self) -> impl ExactSizeIterator<Item = &[T]> + '_ {
        self.coords.chunks_exact(self.dim)
    }

    pub fn as_flat(&self) -> &[T] {
        &self.coords
    }

    /// The points selected by `indices`, in that order.
    pub fn select(&self, indices: &[usize]) -> Self {
        let mut out = PointSet::with_capacity(self.dim, indices.len());
        for &i in indices {
            out.coords.extend_from_slice(self.point(i));
        }
        out
    }

    /// Every point multiplied by `factor`.
    pub fn scaled(&self, factor: T) -> Self {
        PointSet { dim: self.dim, coords: self.coords.iter().map(|&c| c * factor).collect() }
    }

    /// Every point shifted by `offset`.
    pub fn translated(&self, offset: &[T]) -> Self {
        assert_eq!(offset.len(), self.dim);
        let coords = self
            .coords
            .chunks_exact(self.dim)
            .flat_map(|p| p.iter().zip(offset).map(|(&a, &b)| a + b))
            .collect();
        PointSet { dim: self.dim, coords }
    }
}

pub fn norm_l2<T: Scalar>(p: &[T]) -> T {
    p.iter().fold(T::zero(), |acc, &x| acc + x * x).sqrt()
}

pub fn dist2_l2<T: Scalar>(a: &[T], b: &[T]) -> T {
    a.iter().zip(b).fold(T::zero(), |acc, (&x, &y)| {
        let d = x - y;
        acc + d * d
    })
}

pub fn dist_l2<T: Scalar>(a: &[T], b: &[T]) -> T {
    dist2_l2(a, b).sqrt()
}

pub fn dist_linf<T: Scalar>(a: &[T], b: &[T]) -> T {
    a.iter().zip(b).fold(T::zero(), |acc, (&x, &y)| acc.max((x - y).abs()))
}

/// A closed ball `{x : |x - center| <= radius}`.
#[derive(Debug, Clone, PartialEq)]
pub struct Ball<T> {
    pub center: Vec<T>,
    pub radius: T,
}

impl<T: Scalar> Ball<T> {
    fn contains(&self, p: &[T]) -> bool {
        let r2 = self.radius * self.radius;
        // Relative slack absorbs rounding in the circumcenter solve.
        dist2_l2(&self.center, p) <= r2 + T::of(1e4) * T::epsilon() * (r2 + T::one())
    }
}

/// Largest ambient dimension for which [`miniball`] is supported.
pub const MINIBALL_MAX_DIM: usize = 3;

/// Smallest enclosing ball of `points` (Welzl's move-to-front recursion).
///
/// Exact up to floating point rounding for dimensions `1..=3`; errors for
/// larger dimensions. The processing order is a fixed pseudo-random
/// permutation so results are reproducible.
pub fn miniball<T: Scalar>(points: &[&[T]]) -> Result<Ball<T>> {
    let Some(first) = points.first() else {
        return Err(Error::Domain("smallest enclosing ball of an empty set".into()));
    };
    let dim = first.len();
    if dim > MINIBALL_MAX_DIM {
        return Err(Error::Unsupported(format!(
            "smallest enclosing ball is implemented for d <= {MINIBALL_MAX_DIM}, got d = {dim}"
        )));
    }
    let mut order: Vec<&[T]> = points.to_vec();
    // Fisher–Yates with a fixed xorshift stream: expected linear time, deterministic output.
    let mut state = 0x9E37_79B9_7F4A_7C15u64 ^ points.len() as u64;
    for i in (1..order.len()).rev() {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        order.swap(i, (state % (i as u64 + 1)) as usize);
    }
    let mut support: Vec<&[T]> = Vec::with_capacity(dim + 1);
    match welzl(&order, &mut support, dim) {
        Some(ball) => Ok(ball),
        // Rounding produced an affinely dependent support set.
        None => Ok(exhaustive_ball(points, dim)),
    }
}

/// Smallest ball through some subset of at most `dim + 1` points, each
/// candidate inflated to reach every point.
fn exhaustive_ball<T: Scalar>(points: &[&[T]], dim: usize) -> Ball<T> {
    let n = points.len();
    let mut best: Option<Ball<T>> = None;
    let mut subset = Vec::with_capacity(dim + 1);
    for mask in 1u64..(1u64 << n.min(20)) {
        if mask.count_ones() as usize > dim + 1 {
            continue;
        }
        subset.clear();
        subset.extend((0..n).filter(|i| mask >> i & 1 == 1).map(|i| points[i]));
        if let Some(mut ball) = ball_from_support(&subset) {
            ball.radius = points.iter().map(|p| dist_l2(&ball.center, p)).fold(ball.radius, T::max);
            if best.as_ref().is_none_or(|b| ball.radius < b.radius) {
                best = Some(ball);
            }
        }
    }
    best.expect("single points always give a candidate")
}

fn welzl<'a, T: Scalar>(points: &[&'a [T]], support: &mut Vec<&'a [T]>, dim: usize) -> Option<Ball<T>> {
    let mut ball = ball_from_support(support);
    if support.len() == dim + 1 {
        return ball;
    }
    for (i, &p) in points.iter().enumerate() {
        let inside = ball.as_ref().is_some_and(|b| b.contains(p));
        if !inside {
            support.push(p);
            ball = welzl(&points[..i], support, dim);
            support.pop();
        }
    }
    ball
}

/// Smallest ball with every support point on its boundary, `None` for an
/// empty or affinely dependent support.
fn ball_from_support<T: Scalar>(support: &[&[T]]) -> Option<Ball<T>> {
    let (&origin, rest) = support.split_first()?;
    let m = rest.len();
    if m == 0 {
        return Some(Ball { center: origin.to_vec(), radius: T::zero() });
    }
    // center = origin + sum_j lambda_j v_j with 2 <v_i, v_j> lambda_j = |v_i|^2.
    let v: Vec<Vec<T>> = rest.iter().map(|p| p.iter().zip(origin).map(|(&a, &b)| a - b).collect()).collect();
    let dot = |a: &[T], b: &[T]| a.iter().zip(b).fold(T::zero(), |acc, (&x, &y)| acc + x * y);
    let mut a = vec![vec![T::zero(); m + 1]; m];
    for i in 0..m {
        for j in 0..m {
            a[i][j] = T::of(2.0) * dot(&v[i], &v[j]);
        }
        a[i][m] = dot(&v[i], &v[i]);
    }
    let lambda = solve_dense(a)?;
    let mut center = origin.to_vec();
    for (l, vj) in lambda.iter().zip(&v) {
        for (c, &x) in center.iter_mut().zip(vj) {
            *c = *c + *l * x;
        }
    }
    let radius = support.iter().map(|p| dist_l2(&center, p)).fold(T::zero(), T::max);
    Some(Ball { center, radius })
}

/// Gaussian elimination with partial pivoting on an augmented matrix.
fn solve_dense<T: Scalar>(mut a: Vec<Vec<T>>) -> Option<Vec<T>> {
    let m = a.len();
    let scale = a.iter().flat_map(|row| row[..m].iter()).fold(T::zero(), |acc, &x| acc.max(x.abs()));
    if scale <= T::zero() {
        return None;
    }
    for col in 0..m {
        let pivot = (col..m).max_by(|&i, &j| a[i][col].abs().partial_cmp(&a[j][col].abs()).unwrap())?;
        if a[pivot][col].abs() <= scale * T::of(1e-10) {
            return None;
        }
        a.swap(col, pivot);
        for row in col + 1..m {
            let f = a[row][col] / a[col][col];
            let (top, bottom) = a.split_at_mut(row);
            for (x, &p) in bottom[0][col..].iter_mut().zip(&top[col][col..]) {
                *x = *x - f * p;
            }
        }
    }
    let mut x = vec![T::zero(); m];
    for row in (0..m).rev() {
        let mut s = a[row][m];
        for k in row + 1..m {
            s = s - a[row][k] * x[k];
        }
        x[row] = s / a[row][row];
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn point_set_basics() {
        let mut s = PointSet::<f64>::new(2);
        s.push(&[3.0, 4.0]);
        s.push(&[1.0, 0.0]);
        assert_eq!(s.len(), 2);
        assert_eq!(norm_l2(s.point(0)), 5.0);
        assert_eq!(s.select(&[1]).point(0), &[1.0, 0.0]);
        assert!(s.try_push(&[1.0]).is_err());
        assert!(PointSet::<f64>::from_flat(2, vec![1.0; 3]).is_err());
    }

    #[test]
    fn distances() {
        let a = [0.0f64, 0.0];
        let b = [1.0, -2.0];
        assert_eq!(dist_linf(&a, &b), 2.0);
        assert!((dist_l2(&a, &b) - 5f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn miniball_of_obtuse_triangle_is_the_diameter_ball() {
        let pts: [&[f64]; 3] = [&[0.0, 0.0], &[4.0, 0.0], &[2.0, 0.5]];
        let b = miniball(&pts).unwrap();
        assert!((b.radius - 2.0).abs() < 1e-12);
        assert!((b.center[0] - 2.0).abs() < 1e-12 && b.center[1].abs() < 1e-12);
    }

    #[test]
    fn miniball_of_equilateral_triangle_is_circumcircle() {
        let h = 3f64.sqrt() / 2.0;
        let pts: [&[f64]; 3] = [&[0.0, 0.0], &[1.0, 0.0], &[0.5, h]];
        let b = miniball(&pts).unwrap();
        assert!((b.radius - 1.0 / 3f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn miniball_of_regular_tetrahedron() {
        let pts: [&[f64]; 4] = [&[1.0, 1.0, 1.0], &[1.0, -1.0, -1.0], &[-1.0, 1.0, -1.0], &[-1.0, -1.0, 1.0]];
        let b = miniball(&pts).unwrap();
        assert!((b.radius - 3f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn miniball_handles_duplicates_and_collinear_points() {
        let pts: [&[f64]; 4] = [&[0.0, 0.0], &[1.0, 0.0], &[2.0, 0.0], &[1.0, 0.0]];
        let b = miniball(&pts).unwrap();
        assert!((b.radius - 1.0).abs() < 1e-12);
        let single: [&[f64]; 1] = [&[5.0, 5.0]];
        assert_eq!(miniball(&single).unwrap().radius, 0.0);
    }

    #[test]
    fn miniball_rejects_high_dimensions() {
        let pts: [&[f64]; 1] = [&[0.0; 4]];
        assert!(matches!(miniball(&pts), Err(Error::Unsupported(_))));
    }
}
