//! Randomized checks of the four structural conditions on an indicator:
//! monotonicity under subsets, translation invariance, locality and
//! monotonicity in scale.

use rand::Rng;

use super::rule::ComplexRule;
use crate::error::Result;
use crate::geometry::dist_l2;
use crate::rng;
use crate::scalar::Scalar;

#[derive(Debug, Clone, Default, PartialEq)]
pub struct AuditReport {
    pub cases: usize,
    pub failures: Vec<String>,
}

impl AuditReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

fn random_set<T: Scalar, R: Rng>(rng: &mut R, dim: usize, size: usize, half_width: f64) -> Vec<Vec<T>> {
    (0..size).map(|_| (0..dim).map(|_| T::of(rng.random_range(-half_width..=half_width))).collect()).collect()
}

fn refs<T>(set: &[Vec<T>]) -> Vec<&[T]> {
    set.iter().map(Vec::as_slice).collect()
}

/// Runs `cases` randomized trials of each condition in dimension `dim`.
pub fn audit_indicator<T: Scalar>(rule: &ComplexRule<T>, dim: usize, cases: usize, seed: u64) -> Result<AuditReport> {
    rule.check_dimension(dim)?;
    let mut rng = rng::stream(seed, rng::STREAM_AUDIT);
    let c = rule.locality(dim).as_f64();
    let mut report = AuditReport { cases, failures: Vec::new() };
    let one = T::one();
    for case in 0..cases {
        let size = rng.random_range(2..=6);
        // Half-width chosen so that sets straddle the locality scale.
        let set: Vec<Vec<T>> = random_set(&mut rng, dim, size, 0.45 * c);
        let pts = refs(&set);
        let h = rule.evaluate(one, &pts)?;

        // Monotone under subsets.
        if h {
            for mask in 1u32..(1 << size) - 1 {
                let sub: Vec<&[T]> = (0..size).filter(|i| mask >> i & 1 == 1).map(|i| pts[i]).collect();
                if !rule.evaluate(one, &sub)? {
                    report.failures.push(format!("case {case}: subset monotonicity fails for mask {mask:#b}"));
                    break;
                }
            }
        }

        // Translation invariance, with shifts that are exact in binary.
        let shift: Vec<T> = (0..dim).map(|_| T::of(rng.random_range(-64i32..=64) as f64 * 0.25)).collect();
        let moved: Vec<Vec<T>> = set.iter().map(|p| p.iter().zip(&shift).map(|(&a, &b)| a + b).collect()).collect();
        if rule.evaluate(one, &refs(&moved))? != h {
            report.failures.push(format!("case {case}: translation by {shift:?} changes the indicator"));
        }

        // Locality: stretch the set until its Euclidean diameter exceeds c.
        let mut diam = T::zero();
        for (i, a) in pts.iter().enumerate() {
            for b in &pts[i + 1..] {
                diam = diam.max(dist_l2(a, b));
            }
        }
        if diam > T::zero() {
            let stretch = T::of(c * rng.random_range(1.0001..3.0)) / diam;
            let wide: Vec<Vec<T>> = set.iter().map(|p| p.iter().map(|&x| x * stretch).collect()).collect();
            if rule.evaluate(one, &refs(&wide))? {
                report.failures.push(format!("case {case}: set of diameter > {c} is accepted"));
            }
        }

        // Monotone in scale.
        let s = T::of(rng.random_range(0.0..2.0));
        let t = s + T::of(rng.random_range(0.0..2.0));
        if rule.evaluate(s, &pts)? && !rule.evaluate(t, &pts)? {
            report.failures.push(format!("case {case}: h_{s} = 1 but h_{t} = 0"));
        }
    }
    Ok(report)
}
