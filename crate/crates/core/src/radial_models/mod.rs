//! Spherically symmetric sampling laws.
//!
//! Two families are supported: densities whose radial profile is regularly
//! varying with index `-alpha` (`alpha > d`), and exponential-type densities
//! `C exp(-psi(|x|))` with `psi` regularly varying of index `tau in (0, 1]`.
//! Each law carries its radial CDF so that sampling, the expanding-ball radius
//! and the limit scaling all come from one object.
//!
//! For exponential-type laws the eventual monotonicity of `psi'` and `psi''`
//! is assumed, not checked.

mod cdf;
mod sampling;
mod spec;

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

pub use cdf::{RadialFn, TABLE_INTERVALS};
pub use sampling::{radius_r_n, sample_cloud, scaling_denominator, PointCloud};
pub use spec::{LawSpec, PresetName};

use crate::error::{Error, Result};
use crate::special::sphere_area;
use cdf::{RadialCdf, RadialTable};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    RegularlyVarying,
    ExponentialType,
}

#[derive(Clone)]
enum Profile {
    /// `f(r) = C / (1 + r^alpha)`.
    RationalTail,
    /// `psi(r) = r^tau / (tau * scale)`.
    PowerExponent { scale: f64 },
    /// Caller-supplied normalized density profile.
    Density(RadialFn),
    /// Caller-supplied exponent `psi` and its derivative.
    Exponent { psi: RadialFn, psi_prime: RadialFn },
}

/// A spherically symmetric density on `R^d`, with its radial distribution.
#[derive(Clone)]
pub struct RadialLaw {
    family: Family,
    d: usize,
    alpha: Option<f64>,
    tau: Option<f64>,
    zeta: Option<f64>,
    norm_const: f64,
    profile: Profile,
    preset: Option<PresetName>,
    cdf: RadialCdf,
    sup_density: f64,
}

impl fmt::Debug for RadialLaw {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RadialLaw")
            .field("family", &self.family)
            .field("d", &self.d)
            .field("alpha", &self.alpha)
            .field("tau", &self.tau)
            .field("zeta", &self.zeta)
            .field("norm_const", &self.norm_const)
            .field("preset", &self.preset)
            .field("cdf", &self.cdf)
            .finish()
    }
}

/// Radii and ratios at which the regular-variation property is checked.
const RV_CHECK_RADII: [f64; 3] = [1e2, 1e3, 1e4];
const RV_CHECK_RATIOS: [f64; 2] = [2.0, 5.0];
const RV_CHECK_TOLERANCE: f64 = 0.05;
/// Allowed deviation of the total mass from one for caller-supplied densities.
pub const NORMALIZATION_TOLERANCE: f64 = 1e-6;

impl RadialLaw {
    /// `f(x) = 2 / (pi^2 (1 + |x|^4))` on the plane: `alpha = 4`.
    pub fn example_3_2() -> Self {
        RadialLaw {
            family: Family::RegularlyVarying,
            d: 2,
            alpha: Some(4.0),
            tau: None,
            zeta: None,
            norm_const: 2.0 / (PI * PI),
            profile: Profile::RationalTail,
            preset: Some(PresetName::Example32),
            cdf: RadialCdf::ArctanSquare,
            sup_density: 2.0 / (PI * PI),
        }
    }

    /// `f(x) = C exp(-|x|)` on the plane (`tau = 1`, `zeta = 1`), `C = 1 / (2 pi)`.
    pub fn example_4_2() -> Self {
        RadialLaw {
            family: Family::ExponentialType,
            d: 2,
            alpha: None,
            tau: Some(1.0),
            zeta: Some(1.0),
            norm_const: 1.0 / (2.0 * PI),
            profile: Profile::PowerExponent { scale: 1.0 },
            preset: Some(PresetName::Example42),
            cdf: RadialCdf::Gamma2 { scale: 1.0 },
            sup_density: 1.0 / (2.0 * PI),
        }
    }

    /// `f(x) = C / (1 + |x|^alpha)` on `R^d`, `C` fixed numerically.
    pub fn heavy(d: usize, alpha: f64) -> Result<Self> {
        check_dimension(d)?;
        if !(alpha > d as f64 && alpha.is_finite()) {
            return Err(Error::Config(format!("tail exponent alpha = {alpha} must exceed d = {d}")));
        }
        if d == 2 && alpha == 4.0 {
            let mut law = Self::example_3_2();
            law.preset = None;
            return Ok(law);
        }
        let raw: RadialFn = Arc::new(move |r: f64| 1.0 / (1.0 + r.powf(alpha)));
        Self::assemble(Family::RegularlyVarying, d, Some(alpha), None, None, Profile::RationalTail, raw, None)
    }

    /// Heavy-tailed law from a caller-supplied normalized density profile `r -> f(r)`.
    pub fn heavy_custom(d: usize, alpha: f64, density: RadialFn) -> Result<Self> {
        check_dimension(d)?;
        if !(alpha > d as f64 && alpha.is_finite()) {
            return Err(Error::Config(format!("tail exponent alpha = {alpha} must exceed d = {d}")));
        }
        let profile = Profile::Density(density.clone());
        Self::assemble(Family::RegularlyVarying, d, Some(alpha), None, None, profile, density, Some(1.0))
    }

    /// `f(x) = C exp(-psi(|x|))` with `psi(r) = r^tau / tau` for `tau < 1`
    /// (`zeta = inf`) and `psi(r) = r / zeta` for `tau = 1`. `C` is fixed numerically.
    pub fn exponential(d: usize, tau: f64, zeta: f64) -> Result<Self> {
        check_dimension(d)?;
        check_tau_zeta(tau, zeta)?;
        let scale = if tau == 1.0 {
            zeta
        } else if zeta.is_infinite() {
            1.0
        } else {
            return Err(Error::Config(format!(
                "for psi(r) = r^tau / tau with tau = {tau} < 1, a(z) = z^(1 - tau) diverges, so zeta must be inf (got {zeta})"
            )));
        };
        if d == 2 && tau == 1.0 {
            let mut law = Self::example_4_2();
            law.preset = None;
            law.zeta = Some(zeta);
            law.profile = Profile::PowerExponent { scale };
            law.norm_const = 1.0 / (2.0 * PI * scale * scale);
            law.sup_density = law.norm_const;
            law.cdf = RadialCdf::Gamma2 { scale };
            return Ok(law);
        }
        let raw: RadialFn = Arc::new(move |r: f64| (-(r.powf(tau) / (tau * scale))).exp());
        Self::assemble(Family::ExponentialType, d, None, Some(tau), Some(zeta), Profile::PowerExponent { scale }, raw, None)
    }

    /// Exponential-type law from caller-supplied `psi` and `psi'`; `zeta` is
    /// the analytic limit of `1 / psi'(z)`.
    pub fn exponential_custom(d: usize, tau: f64, zeta: f64, psi: RadialFn, psi_prime: RadialFn) -> Result<Self> {
        check_dimension(d)?;
        check_tau_zeta(tau, zeta)?;
        let p = psi.clone();
        let raw: RadialFn = Arc::new(move |r: f64| (-p(r)).exp());
        Self::assemble(Family::ExponentialType, d, None, Some(tau), Some(zeta), Profile::Exponent { psi, psi_prime }, raw, None)
    }

    /// Tabulates `raw` (the profile up to its constant) and finishes construction.
    /// `given_const` is `Some(1.0)` when `raw` must already be normalized.
    #[allow(clippy::too_many_arguments)]
    fn assemble(
        family: Family,
        d: usize,
        alpha: Option<f64>,
        tau: Option<f64>,
        zeta: Option<f64>,
        profile: Profile,
        raw: RadialFn,
        given_const: Option<f64>,
    ) -> Result<Self> {
        let area = sphere_area(d);
        let dm1 = (d - 1) as i32;
        let r0 = raw.clone();
        let marginal: RadialFn = Arc::new(move |r: f64| area * r.powi(dm1) * r0(r));
        // Stretch the compactified axis so heavy tails stay regular at x -> 1.
        let power = match alpha {
            Some(a) => (2.0 / (a - d as f64)).max(1.0),
            None => 1.0,
        };
        let (table, mass) = RadialTable::build(marginal, 1.0, power)?;
        let norm_const = match given_const {
            Some(c) => {
                if (mass - 1.0).abs() > NORMALIZATION_TOLERANCE {
                    return Err(Error::Config(format!("density integrates to {mass}, not 1")));
                }
                c
            }
            None => 1.0 / mass,
        };
        let sup_raw = std::iter::once(0.0).chain(table.node_radii()).map(|r| raw(r)).fold(0.0f64, f64::max);
        let law = RadialLaw {
            family,
            d,
            alpha,
            tau,
            zeta,
            norm_const,
            profile,
            preset: None,
            sup_density: sup_raw * if given_const.is_some() { 1.0 } else { norm_const },
            cdf: RadialCdf::Table(Arc::new(table)),
        };
        law.validate_tail()?;
        Ok(law)
    }

    fn validate_tail(&self) -> Result<()> {
        match self.family {
            Family::RegularlyVarying => {
                let alpha = self.alpha.expect("regularly varying law has alpha");
                for r in RV_CHECK_RADII {
                    for t in RV_CHECK_RATIOS {
                        let ratio = self.density(r * t) / self.density(r);
                        let expected = t.powf(-alpha);
                        if ((ratio - expected) / expected).abs() > RV_CHECK_TOLERANCE {
                            return Err(Error::Config(format!(
                                "density is not regularly varying with index -{alpha}: f({:e})/f({r:e}) = {ratio:.6e}, expected {expected:.6e}",
                                r * t
                            )));
                        }
                    }
                }
            }
            Family::ExponentialType => {
                if let RadialCdf::Table(table) = &self.cdf {
                    if let Some(r) = table.node_radii().step_by(16).find(|&r| r.is_finite() && !(self.psi_prime(r).unwrap_or(0.0) > 0.0)) {
                        return Err(Error::Config(format!("psi'({r:e}) is not positive")));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn alpha(&self) -> Option<f64> {
        self.alpha
    }

    pub fn tau(&self) -> Option<f64> {
        self.tau
    }

    /// Limit of `a(z) = 1/psi'(z)`; `f64::INFINITY` is allowed.
    pub fn zeta(&self) -> Option<f64> {
        self.zeta
    }

    pub fn norm_const(&self) -> f64 {
        self.norm_const
    }

    pub fn preset(&self) -> Option<PresetName> {
        self.preset
    }

    /// Density at any point of norm `r`.
    pub fn density(&self, r: f64) -> f64 {
        match &self.profile {
            Profile::RationalTail => self.norm_const / (1.0 + r.powf(self.alpha.unwrap())),
            Profile::PowerExponent { .. } | Profile::Exponent { .. } => self.norm_const * (-self.psi(r).unwrap()).exp(),
            Profile::Density(f) => f(r),
        }
    }

    pub fn psi(&self, r: f64) -> Option<f64> {
        match &self.profile {
            Profile::PowerExponent { scale } => {
                let tau = self.tau.unwrap();
                Some(r.powf(tau) / (tau * scale))
            }
            Profile::Exponent { psi, .. } => Some(psi(r)),
            _ => None,
        }
    }

    pub fn psi_prime(&self, r: f64) -> Option<f64> {
        match &self.profile {
            Profile::PowerExponent { scale } => Some(r.powf(self.tau.unwrap() - 1.0) / scale),
            Profile::Exponent { psi_prime, .. } => Some(psi_prime(r)),
            _ => None,
        }
    }

    /// Auxiliary scale `a(z) = 1/psi'(z)` of an exponential-type law.
    pub fn aux_scale(&self, z: f64) -> Option<f64> {
        self.psi_prime(z).map(|p| 1.0 / p)
    }

    /// Density of `|X|`: `s_{d-1} r^{d-1} f(r)`.
    pub fn radial_density(&self, r: f64) -> f64 {
        if r < 0.0 {
            return 0.0;
        }
        sphere_area(self.d) * r.powi(self.d as i32 - 1) * self.density(r)
    }

    pub fn radial_cdf(&self, r: f64) -> f64 {
        self.cdf.cdf(r)
    }

    pub fn radial_quantile(&self, u: f64) -> f64 {
        self.cdf.quantile(u)
    }

    /// Supremum of the density (attained at the origin for the built-in profiles).
    pub fn sup_density(&self) -> f64 {
        self.sup_density
    }

    /// Hypotheses of the corresponding limit theorem that this law violates.
    /// Such laws can still be sampled; convergence is then not guaranteed.
    pub fn theorem_caveats(&self) -> Vec<String> {
        let mut out = Vec::new();
        if self.family == Family::ExponentialType && self.d == 2 && self.tau == Some(1.0) {
            out.push("the exponential-tail limit theorem restricts tau to (0, 1) when d = 2".to_string());
        }
        out
    }

    /// Serializable description, `None` for laws built from caller closures.
    pub fn spec(&self) -> Option<LawSpec> {
        match self.profile {
            Profile::Density(_) | Profile::Exponent { .. } => None,
            _ => Some(LawSpec {
                family: Some(self.family),
                d: Some(self.d),
                alpha: self.alpha,
                tau: self.tau,
                zeta: self.zeta,
                preset: self.preset,
            }),
        }
    }
}

fn check_dimension(d: usize) -> Result<()> {
    if d < 2 {
        return Err(Error::Config(format!("ambient dimension must be at least 2, got {d}")));
    }
    Ok(())
}

fn check_tau_zeta(tau: f64, zeta: f64) -> Result<()> {
    if !(tau > 0.0 && tau <= 1.0) {
        return Err(Error::Config(format!("tau = {tau} must lie in (0, 1]")));
    }
    if !(zeta > 0.0) {
        return Err(Error::Config(format!("zeta = {zeta} must lie in (0, inf]; the zeta = 0 regime is not covered")));
    }
    Ok(())
}
