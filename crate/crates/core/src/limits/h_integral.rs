//! `int_{(R^d)^k} h_t(0, y_1, ..., y_k) dy`.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::complexes::{ComplexRule, RuleKind};
use crate::error::{Error, Result};
use crate::rng;

/// Monte Carlo settings.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct McConfig {
    pub samples: usize,
    pub seed: u64,
}

impl Default for McConfig {
    fn default() -> Self {
        McConfig { samples: 200_000, seed: 0 }
    }
}

/// A value with its Monte Carlo standard error (zero for exact values).
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Estimate {
    pub value: f64,
    pub std_error: f64,
}

impl Estimate {
    pub fn exact(value: f64) -> Self {
        Estimate { value, std_error: 0.0 }
    }

    pub fn scaled(self, factor: f64) -> Self {
        Estimate { value: self.value * factor, std_error: self.std_error * factor.abs() }
    }
}

/// Whether `h_integral` has a closed form for this rule.
pub fn has_closed_form(rule: &ComplexRule<f64>) -> bool {
    rule.kind() == RuleKind::RipsLinf
}

/// The integral at scale `t`. For the sup-norm Rips rule the constraint
/// factorizes over coordinates and each coordinate contributes
/// `(k + 1) (w t)^k`. Other rules use plain Monte Carlo over the box
/// `[-w, w]^{dk}` at `t = 1` and the identity `I(t) = t^{dk} I(1)`.
pub fn h_integral(rule: &ComplexRule<f64>, d: usize, k: usize, t: f64, mc: McConfig) -> Result<Estimate> {
    if k == 0 {
        return Err(Error::Domain("the k = 0 term is the constant s_0, not an integral".into()));
    }
    if !(t >= 0.0 && t.is_finite()) {
        return Err(Error::Domain(format!("scale t = {t} must be finite and non-negative")));
    }
    if t == 0.0 {
        return Ok(Estimate::exact(0.0));
    }
    let dk = (d * k) as i32;
    if has_closed_form(rule) {
        let w = rule.unit_threshold();
        return Ok(Estimate::exact((w * t).powi(dk) * ((k + 1) as f64).powi(d as i32)));
    }
    Ok(h_integral_unit_mc(rule, d, k, mc)?.scaled(t.powi(dk)))
}

/// Monte Carlo estimate of the integral at `t = 1`.
pub fn h_integral_unit_mc(rule: &ComplexRule<f64>, d: usize, k: usize, mc: McConfig) -> Result<Estimate> {
    if mc.samples == 0 {
        return Err(Error::Config("Monte Carlo needs at least one sample".into()));
    }
    rule.check_dimension(d)?;
    let half = rule.box_half_width(d, 1.0);
    let volume = (2.0 * half).powi((d * k) as i32);
    let mut rng = rng::stream(mc.seed, rng::STREAM_H_INTEGRAL + k as u64);
    let mut coords = vec![0.0f64; d * (k + 1)];
    let mut hits = 0u64;
    for _ in 0..mc.samples {
        for c in coords[d..].iter_mut() {
            *c = rng.random_range(-half..half);
        }
        let pts: Vec<&[f64]> = coords.chunks_exact(d).collect();
        if rule.evaluate(1.0, &pts)? {
            hits += 1;
        }
    }
    let n = mc.samples as f64;
    let p = hits as f64 / n;
    // With no hits the binomial error collapses; report the one-hit scale instead.
    let p_err = p.max(1.0 / n);
    Ok(Estimate { value: volume * p, std_error: volume * (p_err * (1.0 - p).max(0.0) / n).sqrt() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_1_SQRT_2, PI, SQRT_2};

    #[test]
    fn sup_norm_closed_form() {
        let e = h_integral(&ComplexRule::rips_linf(1.0), 2, 1, 1.0, McConfig::default()).unwrap();
        assert_eq!(e, Estimate::exact(4.0));
        let e = h_integral(&ComplexRule::rips_linf(FRAC_1_SQRT_2), 2, 2, SQRT_2, McConfig::default()).unwrap();
        assert!((e.value - 9.0).abs() < 1e-12);
    }

    #[test]
    fn sup_norm_closed_form_matches_monte_carlo() {
        // Route the sup-norm rule through the generic estimator.
        let rule = ComplexRule::rips_linf(1.0);
        for k in 1..=3 {
            let mc = h_integral_unit_mc(&rule, 2, k, McConfig { samples: 200_000, seed: 3 }).unwrap();
            let exact = ((k + 1) * (k + 1)) as f64;
            assert!((mc.value - exact).abs() <= 4.0 * mc.std_error, "k={k}: {mc:?}");
        }
    }

    #[test]
    fn euclidean_pair_integral_is_disc_area() {
        let e = h_integral(&ComplexRule::rips_l2(1.0), 2, 1, 1.0, McConfig { samples: 200_000, seed: 9 }).unwrap();
        assert!((e.value - PI).abs() < 3.0 * e.std_error, "{e:?}");
    }

    #[test]
    fn scaling_identity() {
        let rule = ComplexRule::rips_l2(1.0);
        let mc = McConfig { samples: 10_000, seed: 1 };
        let one = h_integral(&rule, 2, 2, 1.0, mc).unwrap();
        let two = h_integral(&rule, 2, 2, 2.0, mc).unwrap();
        assert!((two.value - 16.0 * one.value).abs() < 1e-9 * two.value);
    }

    #[test]
    fn k_zero_is_rejected() {
        assert!(h_integral(&ComplexRule::rips_l2(1.0), 2, 0, 1.0, McConfig::default()).is_err());
    }

    #[test]
    fn quadrupling_samples_halves_the_error() {
        let rule = ComplexRule::rips_l2(1.0);
        let a = h_integral_unit_mc(&rule, 2, 2, McConfig { samples: 50_000, seed: 5 }).unwrap();
        let b = h_integral_unit_mc(&rule, 2, 2, McConfig { samples: 200_000, seed: 5 }).unwrap();
        let ratio = a.std_error / b.std_error;
        assert!((ratio - 2.0).abs() < 0.4, "ratio {ratio}");
    }
}
