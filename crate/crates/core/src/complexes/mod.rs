//! Indicator rules, the complexes they induce, and simplex counting.

mod audit;
mod enumerate;
mod io;
mod neighbor;
mod rule;

pub use audit::{audit_indicator, AuditReport};
pub use enumerate::{list_simplices, EnumOptions, DEFAULT_SIMPLEX_BUDGET};
pub(crate) use enumerate::{filtration_histogram, rooted_histogram};
pub use io::{read_points_csv, write_points_csv};
pub use neighbor::{neighbor_graph, NeighborGraph};
pub use rule::{ComplexRule, Indicator, RuleKind, RuleSpec};

use crate::error::Result;
use crate::geometry::{norm_l2, PointSet};
use crate::scalar::Scalar;

/// `h_t(simplex)` for one of the rules.
pub fn evaluate_h<T: Scalar>(rule: &ComplexRule<T>, t: T, simplex: &[&[T]]) -> Result<bool> {
    rule.evaluate(t, simplex)
}

/// Points with `|y| >= radius`; the boundary sphere belongs to the exterior.
pub fn points_outside<T: Scalar>(points: &PointSet<T>, radius: f64) -> PointSet<T> {
    let mut out = PointSet::new(points.dim());
    for p in points.iter() {
        if norm_l2(p).as_f64() >= radius {
            out.push(p);
        }
    }
    out
}

/// Simplex counts `S_k(t)` of a complex, `k = 0..counts.len()`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimplexCounts<T> {
    pub t: T,
    pub counts: Vec<u64>,
    /// Set when a dimension cap stopped the enumeration early.
    pub truncated: bool,
}

impl<T: Scalar> SimplexCounts<T> {
    /// Alternating sum of the counts.
    pub fn euler_characteristic(&self) -> i64 {
        alternating_sum(&self.counts)
    }
}

pub(crate) fn alternating_sum(counts: &[u64]) -> i64 {
    counts.iter().enumerate().map(|(k, &c)| if k % 2 == 0 { c as i64 } else { -(c as i64) }).sum()
}

/// Number of `(k+1)`-subsets with `h_t = 1`, for every `k`.
pub fn simplex_counts<T: Scalar>(points: &PointSet<T>, rule: &ComplexRule<T>, t: T, k_cap: Option<usize>) -> Result<SimplexCounts<T>> {
    simplex_counts_with(points, rule, t, EnumOptions { k_cap, ..EnumOptions::default() })
}

pub fn simplex_counts_with<T: Scalar>(points: &PointSet<T>, rule: &ComplexRule<T>, t: T, opts: EnumOptions) -> Result<SimplexCounts<T>> {
    if !(t >= T::zero()) {
        return Err(crate::Error::Domain(format!("scale t = {t} must be non-negative")));
    }
    let hist = filtration_histogram(points, rule, &[t], opts)?;
    let mut counts: Vec<u64> = hist.first_seen.iter().map(|row| row[0]).collect();
    while counts.len() > 1 && *counts.last().unwrap() == 0 {
        counts.pop();
    }
    Ok(SimplexCounts { t, counts, truncated: hist.truncated })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_1_SQRT_2, SQRT_2};

    fn binom(n: u64, k: u64) -> u64 {
        (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
    }

    #[test]
    fn singletons_are_always_simplices() {
        let p: [&[f64]; 1] = [&[3.0, -1.0]];
        for rule in [ComplexRule::rips_l2(1.0), ComplexRule::rips_linf(0.5), ComplexRule::cech(2.0)] {
            assert!(evaluate_h(&rule, 0.3, &p).unwrap());
            assert!(evaluate_h(&rule, 0.0, &p).unwrap());
        }
    }

    #[test]
    fn sup_norm_pair_on_the_boundary() {
        let pair: [&[f64]; 2] = [&[0.0, 0.0], &[1.0, 0.0]];
        assert!(evaluate_h(&ComplexRule::rips_linf(FRAC_1_SQRT_2), SQRT_2, &pair).unwrap());
        assert!(!evaluate_h(&ComplexRule::rips_linf(FRAC_1_SQRT_2), SQRT_2 * 0.999, &pair).unwrap());
    }

    #[test]
    fn cech_triangle_by_circumradius() {
        // Equilateral triangle with circumradius rho: side rho * sqrt(3).
        let tri = |rho: f64| {
            let s = rho * 3f64.sqrt();
            vec![vec![0.0, 0.0], vec![s, 0.0], vec![s / 2.0, s * 3f64.sqrt() / 2.0]]
        };
        let rule = ComplexRule::cech(1.0);
        for (rho, expected) in [(0.51, false), (0.49, true)] {
            let pts = tri(rho);
            let refs: Vec<&[f64]> = pts.iter().map(Vec::as_slice).collect();
            assert_eq!(evaluate_h(&rule, 1.0, &refs).unwrap(), expected, "rho={rho}");
        }
        // Every pair of the 0.51 triangle is within threshold: Čech is stricter than Rips.
        let pts = tri(0.51);
        let refs: Vec<&[f64]> = pts.iter().map(Vec::as_slice).collect();
        assert!(evaluate_h(&ComplexRule::rips_l2(1.0), 1.0, &refs).unwrap());
    }

    #[test]
    fn empty_simplex_is_a_domain_error() {
        assert!(evaluate_h::<f64>(&ComplexRule::rips_l2(1.0), 1.0, &[]).is_err());
    }

    #[test]
    fn cech_rejects_four_dimensions() {
        let pts = PointSet::from_rows(4, &[[0.0f64; 4], [0.1; 4], [0.2; 4]]).unwrap();
        assert!(matches!(simplex_counts(&pts, &ComplexRule::cech(1.0), 1.0, None), Err(crate::Error::Unsupported(_))));
    }

    #[test]
    fn exterior_filter_is_closed() {
        let pts = PointSet::from_rows(2, &[[3.0f64, 4.0], [1.0, 0.0]]).unwrap();
        assert_eq!(points_outside(&pts, 5.0).len(), 1);
        assert_eq!(points_outside(&pts, 5.0).point(0), &[3.0, 4.0]);
        assert_eq!(points_outside(&pts, 0.0).len(), 2);
        assert!(points_outside(&pts, f64::INFINITY).is_empty());
    }

    #[test]
    fn complete_complex_counts_are_binomial() {
        let m = 7u64;
        let rows: Vec<[f64; 2]> = (0..m).map(|i| [0.01 * i as f64, 0.02 * (i * i % 5) as f64]).collect();
        let pts = PointSet::from_rows(2, &rows).unwrap();
        for rule in [ComplexRule::rips_l2(1.0), ComplexRule::rips_linf(1.0), ComplexRule::cech(1.0)] {
            let c = simplex_counts(&pts, &rule, 1.0, None).unwrap();
            let expected: Vec<u64> = (0..m).map(|k| binom(m, k + 1)).collect();
            assert_eq!(c.counts, expected);
            assert_eq!(c.euler_characteristic(), 1);
        }
    }

    #[test]
    fn empty_points_count_nothing() {
        let pts = PointSet::<f64>::new(2);
        let c = simplex_counts(&pts, &ComplexRule::rips_l2(1.0), 1.0, None).unwrap();
        assert!(c.counts.iter().all(|&x| x == 0));
        assert!(!c.truncated);
    }

    #[test]
    fn dimension_cap_marks_truncation() {
        let pts = PointSet::from_rows(2, &[[0.0f64, 0.0], [0.1, 0.0], [0.0, 0.1], [0.1, 0.1]]).unwrap();
        let rule = ComplexRule::rips_l2(1.0);
        let c = simplex_counts(&pts, &rule, 1.0, Some(1)).unwrap();
        assert_eq!(c.counts, vec![4, 6]);
        assert!(c.truncated);
        let full = simplex_counts(&pts, &rule, 1.0, Some(3)).unwrap();
        assert_eq!(full.counts, vec![4, 6, 4, 1]);
        assert!(!full.truncated);
    }

    #[test]
    fn budget_overflow_is_a_resource_error() {
        let rows: Vec<[f64; 2]> = (0..20).map(|i| [0.001 * i as f64, 0.0]).collect();
        let pts = PointSet::from_rows(2, &rows).unwrap();
        let opts = EnumOptions { k_cap: None, budget: 10_000 };
        let err = simplex_counts_with(&pts, &ComplexRule::rips_l2(1.0), 1.0, opts).unwrap_err();
        assert!(matches!(err, crate::Error::Resource(_)));
    }

    #[test]
    fn builtin_rules_pass_the_audit() {
        for rule in [ComplexRule::rips_l2(1.0f64), ComplexRule::rips_linf(FRAC_1_SQRT_2), ComplexRule::cech(1.0)] {
            for dim in [2, 3] {
                let report = audit_indicator(&rule, dim, 300, 11).unwrap();
                assert!(report.passed(), "{rule:?}: {:?}", report.failures);
            }
        }
    }

    struct NonLocal;
    impl Indicator<f64> for NonLocal {
        fn contains(&self, _simplex: &[&[f64]]) -> bool {
            true
        }
        fn locality(&self) -> f64 {
            1.0
        }
    }

    struct NoPairs;
    impl Indicator<f64> for NoPairs {
        // Not monotone under subsets: rejects every pair, accepts tight larger sets.
        fn contains(&self, simplex: &[&[f64]]) -> bool {
            simplex.len() > 2 && Unit.contains(simplex)
        }
        fn locality(&self) -> f64 {
            1.0
        }
    }

    struct Unit;
    impl Indicator<f64> for Unit {
        fn contains(&self, simplex: &[&[f64]]) -> bool {
            simplex.iter().enumerate().all(|(i, a)| simplex[i + 1..].iter().all(|b| crate::geometry::dist_l2(a, b) <= 1.0))
        }
        fn locality(&self) -> f64 {
            1.0
        }
    }

    #[test]
    fn custom_rules_are_audited_at_registration() {
        use std::sync::Arc;
        assert!(ComplexRule::custom(Arc::new(NonLocal), 2, 200, 1).is_err());
        assert!(ComplexRule::custom(Arc::new(NoPairs), 2, 200, 1).is_err());
        let rule = ComplexRule::custom(Arc::new(Unit), 2, 200, 1).unwrap();
        // A custom Rips rule gives the same counts as the built-in one.
        let rows: Vec<[f64; 2]> = (0..15).map(|i| [(i as f64 * 0.37).sin() * 2.0, (i as f64 * 0.71).cos() * 2.0]).collect();
        let pts = PointSet::from_rows(2, &rows).unwrap();
        let a = simplex_counts(&pts, &rule, 1.3, None).unwrap();
        let b = simplex_counts(&pts, &ComplexRule::rips_l2(1.0), 1.3, None).unwrap();
        assert_eq!(a.counts, b.counts);
    }
}
