use rand::Rng;
use rand_distr::StandardNormal;

use super::{Family, RadialLaw};
use crate::error::{Error, Result};
use crate::geometry::{norm_l2, PointSet};
use crate::rng;
use crate::scalar::Scalar;

/// An i.i.d. sample from a [`RadialLaw`] together with how it was generated.
#[derive(Debug, Clone)]
pub struct PointCloud<T> {
    pub points: PointSet<T>,
    pub n: usize,
    pub seed: u64,
    pub law: RadialLaw,
}

impl<T: Scalar> PointCloud<T> {
    /// Points with `|x| >= radius` (closed condition).
    pub fn points_outside(&self, radius: f64) -> PointSet<T> {
        crate::complexes::points_outside(&self.points, radius)
    }
}

/// Draws `n` points `R * Theta` with `Theta` uniform on the sphere (a
/// normalized Gaussian vector) and `R = G^{-1}(U)` from the radial CDF.
/// Deterministic in `(law, n, seed)`.
pub fn sample_cloud<T: Scalar>(law: &RadialLaw, n: usize, seed: u64) -> PointCloud<T> {
    let d = law.d();
    let mut rng = rng::stream(seed, rng::STREAM_SAMPLING);
    let mut points = PointSet::with_capacity(d, n);
    let mut dir = vec![0.0f64; d];
    let mut row = vec![T::zero(); d];
    for _ in 0..n {
        let norm = loop {
            dir.iter_mut().for_each(|c| *c = rng.sample(StandardNormal));
            let norm = norm_l2(&dir);
            if norm > 0.0 {
                break norm;
            }
        };
        let radius = law.radial_quantile(rng.random::<f64>());
        for (out, c) in row.iter_mut().zip(&dir) {
            *out = T::of(radius * c / norm);
        }
        points.push(&row);
    }
    PointCloud { points, n, seed, law: law.clone() }
}

/// Radius `R_n` solving `n f(R_n) = xi` on the decreasing tail of `f`,
/// found by bisection to 1e-13 relative.
pub fn radius_r_n(law: &RadialLaw, n: usize, xi: f64) -> Result<f64> {
    if n == 0 {
        return Err(Error::Domain("R_n needs n >= 1".into()));
    }
    if !(xi > 0.0 && xi.is_finite()) {
        return Err(Error::Domain(format!("xi = {xi} must be positive and finite")));
    }
    let nf = n as f64;
    if xi >= nf * law.sup_density() {
        return Err(Error::Domain(format!(
            "n f(r) = {xi} has no solution: n sup f = {:.6e}",
            nf * law.sup_density()
        )));
    }
    let excess = |r: f64| nf * law.density(r) - xi;
    let mut lo = 0.0;
    let mut hi = 1.0;
    while excess(hi) > 0.0 {
        lo = hi;
        hi *= 2.0;
        if !hi.is_finite() {
            return Err(Error::Domain("n f(r) = xi has no finite solution".into()));
        }
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi || hi - lo <= 1e-13 * hi {
            break;
        }
        if excess(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    // Pick whichever bracket end solves the equation more closely.
    Ok(if excess(lo).abs() < excess(hi).abs() { lo } else { hi })
}

/// Denominator of the scaled process: `R_n^d` for regularly varying tails,
/// `a(R_n) R_n^{d-1}` for exponential-type tails.
pub fn scaling_denominator(law: &RadialLaw, r_n: f64) -> f64 {
    let d = law.d() as i32;
    match law.family() {
        Family::RegularlyVarying => r_n.powi(d),
        Family::ExponentialType => law.aux_scale(r_n).expect("exponential law has psi'") * r_n.powi(d - 1),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn empty_cloud() {
        let cloud = sample_cloud::<f64>(&RadialLaw::example_3_2(), 0, 7);
        assert!(cloud.points.is_empty());
        assert_eq!(cloud.n, 0);
    }

    #[test]
    fn sampling_is_deterministic() {
        let law = RadialLaw::example_4_2();
        let a = sample_cloud::<f64>(&law, 100, 3);
        let b = sample_cloud::<f64>(&law, 100, 3);
        let c = sample_cloud::<f64>(&law, 100, 4);
        assert_eq!(a.points, b.points);
        assert_ne!(a.points, c.points);
    }

    #[test]
    fn example_3_2_radius() {
        let law = RadialLaw::example_3_2();
        let r = radius_r_n(&law, 10_000, 1.0).unwrap();
        let exact = (2.0e4 / (PI * PI) - 1.0).powf(0.25);
        let asymptotic = (2.0e4 / (PI * PI)).powf(0.25);
        assert!((r - 6.709).abs() < 5e-4, "{r}");
        assert!((r / exact - 1.0).abs() < 1e-12);
        assert!((r / asymptotic - 1.0).abs() < 2e-4);
    }

    #[test]
    fn example_4_2_radius() {
        let law = RadialLaw::example_4_2();
        let n = (10f64.exp() * 2.0 * PI).round() as usize;
        let r = radius_r_n(&law, n, 1.0).unwrap();
        let exact = (n as f64 / (2.0 * PI)).ln();
        assert!((r - exact).abs() < 1e-10);
        assert!((r - 10.0).abs() < 1e-4);
    }

    #[test]
    fn radius_solves_the_equation() {
        for law in [RadialLaw::example_3_2(), RadialLaw::example_4_2(), RadialLaw::heavy(3, 4.0).unwrap()] {
            for n in [1_000usize, 1_000_000] {
                let r = radius_r_n(&law, n, 1.0).unwrap();
                assert!((n as f64 * law.density(r) - 1.0).abs() < 1e-9, "{law:?} n={n}");
            }
        }
    }

    #[test]
    fn radius_domain_errors() {
        let law = RadialLaw::example_3_2();
        assert!(matches!(radius_r_n(&law, 1, 1.0), Err(Error::Domain(_))));
        assert!(radius_r_n(&law, 0, 1.0).is_err());
        assert!(radius_r_n(&law, 10, -1.0).is_err());
    }

    #[test]
    fn scaling_denominators() {
        assert_eq!(scaling_denominator(&RadialLaw::example_3_2(), 10.0), 100.0);
        assert_eq!(scaling_denominator(&RadialLaw::example_4_2(), 10.0), 10.0);
        let law = RadialLaw::exponential(2, 0.5, f64::INFINITY).unwrap();
        assert!((scaling_denominator(&law, 100.0) - 1000.0).abs() < 1e-9);
    }
}
