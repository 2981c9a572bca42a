//! Deterministic limit of the scaled Euler characteristic process.
//!
//! The limit is the alternating series `sum_k (-1)^k s_k(t)` whose terms
//! count `k`-simplices per unit of scale. With a closed-form integral of the
//! indicator (the sup-norm Rips rule) the series is summed exactly up to a
//! truncation error; for other rules and for exponential tails with a finite
//! limit scale the curve is estimated by Monte Carlo over local
//! configurations, see [`local_ec`].

pub mod h_integral;
pub mod local_ec;

use std::io::Write;

use serde::{Deserialize, Serialize};

pub use h_integral::{h_integral, h_integral_unit_mc, has_closed_form, Estimate, McConfig};

use crate::complexes::ComplexRule;
use crate::ec_process::sup_functional;
use crate::error::{Error, Result};
use crate::radial_models::{Family, RadialLaw};
use crate::special::{ln_factorial, sphere_area, std_normal_central_mass, unit_ball_volume};

/// Tail regime of the limit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    /// Regularly varying density with index `alpha > d`.
    Heavy { alpha: f64 },
    /// Exponential-type density; `zeta` is the limit of the auxiliary scale
    /// (infinite for `tau < 1`).
    Light { zeta: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LimitParams {
    pub d: usize,
    pub regime: Regime,
    pub xi: f64,
}

impl LimitParams {
    pub fn heavy(d: usize, alpha: f64, xi: f64) -> Result<Self> {
        LimitParams { d, regime: Regime::Heavy { alpha }, xi }.validated()
    }

    pub fn light(d: usize, zeta: f64, xi: f64) -> Result<Self> {
        LimitParams { d, regime: Regime::Light { zeta }, xi }.validated()
    }

    pub fn from_law(law: &RadialLaw, xi: f64) -> Result<Self> {
        match law.family() {
            Family::RegularlyVarying => Self::heavy(law.d(), law.alpha().expect("heavy law has alpha"), xi),
            Family::ExponentialType => Self::light(law.d(), law.zeta().expect("light law has zeta"), xi),
        }
    }

    fn validated(self) -> Result<Self> {
        if self.d == 0 {
            return Err(Error::Config("dimension must be at least 1".into()));
        }
        if !(self.xi > 0.0 && self.xi.is_finite()) {
            return Err(Error::Config(format!("xi must be positive and finite (got {})", self.xi)));
        }
        match self.regime {
            Regime::Heavy { alpha } if !(alpha > self.d as f64 && alpha.is_finite()) => {
                Err(Error::Config(format!("alpha must exceed d = {} (got {alpha})", self.d)))
            }
            Regime::Light { zeta } if !(zeta > 0.0) => Err(Error::Config(format!("zeta must be positive (got {zeta})"))),
            _ => Ok(self),
        }
    }

    /// Whether the exponential tilt of the local process vanishes.
    pub fn locally_homogeneous(&self) -> bool {
        match self.regime {
            Regime::Heavy { .. } => true,
            Regime::Light { zeta } => zeta.is_infinite(),
        }
    }

    /// `s_0`, the limit at `t = 0`.
    pub fn s0(&self) -> f64 {
        local_ec::prefactor(self)
    }

    fn ln_denominator(&self, k: usize) -> f64 {
        match self.regime {
            Regime::Heavy { alpha } => (alpha * (k + 1) as f64 - self.d as f64).ln(),
            Regime::Light { .. } => ((k + 1) as f64).ln(),
        }
    }

    /// `s_k(t) / int h_t`: the factor multiplying the indicator integral in
    /// the `k`-th term (locally homogeneous regimes only).
    pub fn term_factor(&self, k: usize) -> f64 {
        (sphere_area(self.d).ln() + (k + 1) as f64 * self.xi.ln() - ln_factorial(k + 1) - self.ln_denominator(k)).exp()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    /// Exact series where available, local Monte Carlo otherwise.
    #[default]
    Auto,
    /// Truncated series with Monte Carlo indicator integrals where needed.
    Series,
    /// Local Euler characteristic Monte Carlo.
    LocalEc,
}

/// Truncation tolerance of the series.
pub const DEFAULT_EPS: f64 = 1e-10;
/// Largest acceptable Monte Carlo standard error, relative to `s_0`.
pub const DEFAULT_MC_TOLERANCE: f64 = 0.02;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LimitSettings {
    pub eps: f64,
    pub mc: McConfig,
    pub mc_tolerance: Option<f64>,
    pub method: Method,
}

impl Default for LimitSettings {
    fn default() -> Self {
        LimitSettings { eps: DEFAULT_EPS, mc: McConfig::default(), mc_tolerance: Some(DEFAULT_MC_TOLERANCE), method: Method::Auto }
    }
}

/// The `k`-th term `s_k(t)` in a locally homogeneous regime.
pub fn series_term(params: &LimitParams, rule: &ComplexRule<f64>, k: usize, t: f64, mc: McConfig) -> Result<Estimate> {
    if !params.locally_homogeneous() {
        return Err(Error::Unsupported("series terms need a heavy tail or zeta = inf".into()));
    }
    if k == 0 {
        return Ok(Estimate::exact(params.s0()));
    }
    Ok(h_integral(rule, params.d, k, t, mc)?.scaled(params.term_factor(k)))
}

/// Logarithm of an upper bound on `|s_k(t)|`.
fn ln_term_bound(params: &LimitParams, rule: &ComplexRule<f64>, k: usize, t: f64) -> f64 {
    let d = params.d as f64;
    let ln_h = if has_closed_form(rule) {
        d * k as f64 * (rule.unit_threshold() * t).ln() + d * ((k + 1) as f64).ln()
    } else {
        k as f64 * (unit_ball_volume(params.d) * (rule.locality(params.d) * t).powi(params.d as i32)).ln()
    };
    params.term_factor(k).ln() + ln_h
}

/// Number of terms beyond `s_0` after which the remainder is below `eps`:
/// the next bound is below `eps / 2` and bounds shrink at least by half
/// from there on.
pub fn truncation_order(params: &LimitParams, rule: &ComplexRule<f64>, t: f64, eps: f64) -> Result<usize> {
    if !(eps > 0.0) {
        return Err(Error::Domain(format!("truncation tolerance must be positive (got {eps})")));
    }
    if t == 0.0 {
        return Ok(0);
    }
    let half_eps = (eps / 2.0).ln();
    let mut next = ln_term_bound(params, rule, 1, t);
    for k in 0..100_000 {
        let after = ln_term_bound(params, rule, k + 2, t);
        if next < half_eps && after - next <= -std::f64::consts::LN_2 {
            return Ok(k);
        }
        next = after;
    }
    Err(Error::Precision { message: format!("series at t = {t} needs more than 100000 terms"), achieved: next.exp() })
}

/// `(pi / 2) [exp(-t^2 / 2) + sqrt(pi / 2) erf(t / sqrt 2) / t]`, the limit for
/// the `example_3_2` law with the sup-norm Rips rule at threshold `1/sqrt 2`
/// and `xi = 1`; equal to `pi` at `t = 0`.
pub fn closed_form_example32(t: f64) -> f64 {
    use std::f64::consts::{FRAC_PI_2, PI};
    if t == 0.0 {
        return PI;
    }
    let ratio = if t < 1e-4 {
        // Series of sqrt(pi/2) erf(t/sqrt2)/t = 1 - t^2/6 + t^4/40.
        let t2 = t * t;
        1.0 - t2 / 6.0 + t2 * t2 / 40.0
    } else {
        FRAC_PI_2.sqrt() * std_normal_central_mass(t) / t
    };
    FRAC_PI_2 * ((-0.5 * t * t).exp() + ratio)
}

/// Limit curve on a grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LimitCurve {
    pub t: Vec<f64>,
    pub value: Vec<f64>,
    pub std_error: Vec<f64>,
    /// Highest simplex dimension that contributed at each scale.
    pub k_used: Vec<usize>,
    pub method: Method,
    /// `per_k[k][j]`: estimate of `s_k(t_j)`.
    #[serde(skip)]
    pub per_k: Vec<Vec<Estimate>>,
}

impl LimitCurve {
    pub fn sup_functional(&self, a: f64, b: f64) -> Result<f64> {
        sup_functional(&self.t, &self.value, a, b)
    }

    /// `t,value,std_error,K_used`.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["t", "value", "std_error", "K_used"])?;
        for j in 0..self.t.len() {
            w.write_record([
                self.t[j].to_string(),
                self.value[j].to_string(),
                self.std_error[j].to_string(),
                self.k_used[j].to_string(),
            ])?;
        }
        w.flush()?;
        Ok(())
    }
}

/// The limit for given parameters, rule and settings.
#[derive(Clone)]
pub struct LimitFunction {
    pub params: LimitParams,
    pub rule: ComplexRule<f64>,
    pub settings: LimitSettings,
}

impl LimitFunction {
    pub fn new(params: LimitParams, rule: ComplexRule<f64>, settings: LimitSettings) -> Result<Self> {
        rule.check_dimension(params.d)?;
        Ok(LimitFunction { params, rule, settings })
    }

    /// Method actually used by [`Method::Auto`].
    pub fn resolved_method(&self) -> Method {
        match self.settings.method {
            Method::Auto if self.params.locally_homogeneous() && has_closed_form(&self.rule) => Method::Series,
            Method::Auto => Method::LocalEc,
            m => m,
        }
    }

    pub fn value(&self, t: f64) -> Result<Estimate> {
        let curve = self.curve(&[t])?;
        Ok(Estimate { value: curve.value[0], std_error: curve.std_error[0] })
    }

    pub fn curve(&self, grid: &[f64]) -> Result<LimitCurve> {
        if grid.is_empty() || grid.iter().any(|t| !(*t >= 0.0 && t.is_finite())) {
            return Err(Error::Domain("limit grid must be non-empty, finite and non-negative".into()));
        }
        if grid.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::Domain("limit grid must be strictly increasing".into()));
        }
        let method = self.resolved_method();
        let curve = match method {
            Method::Series => self.series_curve(grid)?,
            _ => self.local_curve(grid)?,
        };
        self.check_precision(&curve)?;
        Ok(curve)
    }

    fn series_curve(&self, grid: &[f64]) -> Result<LimitCurve> {
        let orders: Vec<usize> = grid.iter().map(|&t| truncation_order(&self.params, &self.rule, t, self.settings.eps)).collect::<Result<_>>()?;
        let k_max = orders.iter().copied().max().unwrap_or(0);
        // Monte Carlo integrals are estimated once at unit scale and rescaled.
        let units: Vec<Estimate> = (1..=k_max)
            .map(|k| {
                if has_closed_form(&self.rule) {
                    Ok(Estimate::exact(0.0))
                } else {
                    h_integral_unit_mc(&self.rule, self.params.d, k, self.settings.mc)
                }
            })
            .collect::<Result<_>>()?;
        let mut per_k = vec![vec![Estimate::default(); grid.len()]; k_max + 1];
        let (mut value, mut std_error) = (Vec::with_capacity(grid.len()), Vec::with_capacity(grid.len()));
        for (j, (&t, &order)) in grid.iter().zip(&orders).enumerate() {
            let (mut sum, mut var) = (0.0, 0.0);
            for k in 0..=order {
                let term = if k == 0 {
                    Estimate::exact(self.params.s0())
                } else if has_closed_form(&self.rule) {
                    series_term(&self.params, &self.rule, k, t, self.settings.mc)?
                } else {
                    units[k - 1].scaled(t.powi((self.params.d * k) as i32) * self.params.term_factor(k))
                };
                per_k[k][j] = term;
                sum += if k % 2 == 0 { term.value } else { -term.value };
                var += term.std_error * term.std_error;
            }
            value.push(sum);
            std_error.push(var.sqrt());
        }
        Ok(LimitCurve { t: grid.to_vec(), value, std_error, k_used: orders, method: Method::Series, per_k })
    }

    fn local_curve(&self, grid: &[f64]) -> Result<LimitCurve> {
        let est = local_ec::estimate(&self.params, &self.rule, grid, self.settings.mc.samples, self.settings.mc.seed)?;
        let k_used = (0..grid.len())
            .map(|j| est.per_k.iter().rposition(|row| row[j].value > 0.0).unwrap_or(0))
            .collect();
        Ok(LimitCurve {
            t: grid.to_vec(),
            value: est.chi.iter().map(|e| e.value).collect(),
            std_error: est.chi.iter().map(|e| e.std_error).collect(),
            k_used,
            method: Method::LocalEc,
            per_k: est.per_k,
        })
    }

    fn check_precision(&self, curve: &LimitCurve) -> Result<()> {
        let Some(tol) = self.settings.mc_tolerance else {
            return Ok(());
        };
        let worst = curve.std_error.iter().copied().fold(0.0, f64::max) / self.params.s0();
        if worst > tol {
            return Err(Error::Precision {
                message: format!(
                    "Monte Carlo standard error reaches {worst:.3e} of s_0, above the tolerance {tol:.3e}; increase the sample count"
                ),
                achieved: worst,
            });
        }
        Ok(())
    }
}

/// Limit for a regularly varying law at a single scale.
pub fn limit_heavy(d: usize, alpha: f64, xi: f64, rule: &ComplexRule<f64>, t: f64, settings: LimitSettings) -> Result<Estimate> {
    LimitFunction::new(LimitParams::heavy(d, alpha, xi)?, rule.clone(), settings)?.value(t)
}

/// Limit for an exponential-type law at a single scale.
pub fn limit_light(d: usize, zeta: f64, xi: f64, rule: &ComplexRule<f64>, t: f64, settings: LimitSettings) -> Result<Estimate> {
    LimitFunction::new(LimitParams::light(d, zeta, xi)?, rule.clone(), settings)?.value(t)
}
