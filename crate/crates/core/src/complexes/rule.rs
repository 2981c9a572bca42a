use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{dist_l2, dist_linf, miniball, MINIBALL_MAX_DIM};
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RuleKind {
    /// Vietoris–Rips with Euclidean diameter.
    RipsL2,
    /// Vietoris–Rips with sup-norm diameter.
    RipsLinf,
    /// Čech: closed balls of diameter `unit_threshold * t` share a point.
    Cech,
    /// Caller-supplied indicator, admitted after a property audit.
    Custom,
}

impl RuleKind {
    pub fn as_str(self) -> &'static str {
        match self {
            RuleKind::RipsL2 => "rips_l2",
            RuleKind::RipsLinf => "rips_linf",
            RuleKind::Cech => "cech",
            RuleKind::Custom => "custom",
        }
    }
}

impl std::str::FromStr for RuleKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.replace('-', "_").as_str() {
            "rips_l2" => Ok(RuleKind::RipsL2),
            "rips_linf" => Ok(RuleKind::RipsLinf),
            "cech" => Ok(RuleKind::Cech),
            other => Err(Error::Config(format!("unknown rule {other:?} (expected rips_l2, rips_linf or cech)"))),
        }
    }
}

/// A scale-1 indicator `h` on finite point sets supplied by the caller.
pub trait Indicator<T: Scalar>: Send + Sync {
    /// `h(simplex)` at scale one; `simplex` has at least two points.
    fn contains(&self, simplex: &[&[T]]) -> bool;
    /// A constant `c` with `h(X) = 0` whenever the Euclidean diameter of `X` exceeds `c`.
    fn locality(&self) -> T;
}

/// The indicator family `h_t(X) = h(X / t)` that defines the complex.
#[derive(Clone)]
pub struct ComplexRule<T> {
    kind: RuleKind,
    unit_threshold: T,
    custom: Option<Arc<dyn Indicator<T>>>,
}

impl<T: Scalar> fmt::Debug for ComplexRule<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ComplexRule").field("kind", &self.kind).field("unit_threshold", &self.unit_threshold).finish()
    }
}

impl<T: Scalar> ComplexRule<T> {
    pub fn new(kind: RuleKind, unit_threshold: T) -> Result<Self> {
        if kind == RuleKind::Custom {
            return Err(Error::Config("custom rules are built with ComplexRule::custom".into()));
        }
        if !(unit_threshold > T::zero() && unit_threshold.is_finite()) {
            return Err(Error::Config(format!("unit threshold {unit_threshold} must be positive and finite")));
        }
        Ok(ComplexRule { kind, unit_threshold, custom: None })
    }

    pub fn rips_l2(unit_threshold: T) -> Self {
        Self::new(RuleKind::RipsL2, unit_threshold).expect("valid threshold")
    }

    pub fn rips_linf(unit_threshold: T) -> Self {
        Self::new(RuleKind::RipsLinf, unit_threshold).expect("valid threshold")
    }

    pub fn cech(unit_threshold: T) -> Self {
        Self::new(RuleKind::Cech, unit_threshold).expect("valid threshold")
    }

    /// The sup-norm Rips rule with threshold `1/sqrt(2)` used with both worked examples.
    pub fn example_rule() -> Self {
        Self::rips_linf(T::FRAC_1_SQRT_2())
    }

    /// Wraps a caller-supplied indicator after it passes [`super::audit_indicator`]
    /// on `cases` random configurations in dimension `dim`.
    pub fn custom(indicator: Arc<dyn Indicator<T>>, dim: usize, cases: usize, seed: u64) -> Result<Self> {
        let locality = indicator.locality();
        if !(locality > T::zero() && locality.is_finite()) {
            return Err(Error::Config(format!("declared locality constant {locality} must be positive and finite")));
        }
        let rule = ComplexRule { kind: RuleKind::Custom, unit_threshold: locality, custom: Some(indicator) };
        let report = super::audit_indicator(&rule, dim, cases, seed)?;
        if let Some(failure) = report.failures.first() {
            return Err(Error::Config(format!("custom indicator failed the property audit: {failure}")));
        }
        Ok(rule)
    }

    pub fn kind(&self) -> RuleKind {
        self.kind
    }

    /// Threshold at scale one (diameter for Rips, ball diameter for Čech,
    /// the locality constant for custom rules).
    pub fn unit_threshold(&self) -> T {
        self.unit_threshold
    }

    /// Locality constant for Euclidean diameters in dimension `d`.
    pub fn locality(&self, d: usize) -> T {
        match self.kind {
            RuleKind::RipsLinf => self.unit_threshold * T::of(d as f64).sqrt(),
            RuleKind::Custom => self.custom.as_ref().unwrap().locality(),
            _ => self.unit_threshold,
        }
    }

    /// Half-width of a coordinate box that contains every point adjacent to
    /// the origin at scale `t`.
    pub fn box_half_width(&self, d: usize, t: T) -> T {
        match self.kind {
            RuleKind::Custom => self.locality(d) * t,
            _ => self.unit_threshold * t,
        }
    }

    /// Whether simplices are exactly the cliques of the pairwise graph.
    pub fn is_flag(&self) -> bool {
        matches!(self.kind, RuleKind::RipsL2 | RuleKind::RipsLinf)
    }

    pub fn check_dimension(&self, d: usize) -> Result<()> {
        if self.kind == RuleKind::Cech && d > MINIBALL_MAX_DIM {
            return Err(Error::Unsupported(format!(
                "Čech complexes need the exact smallest enclosing ball, available for d <= {MINIBALL_MAX_DIM} (got d = {d})"
            )));
        }
        Ok(())
    }

    /// Pairwise distance in the rule's geometry divided by the unit
    /// threshold: the scale at which the edge appears. Custom rules report
    /// the Euclidean distance over the locality constant.
    pub fn pair_scale(&self, a: &[T], b: &[T]) -> T {
        match self.kind {
            RuleKind::RipsLinf => dist_linf(a, b) / self.unit_threshold,
            _ => dist_l2(a, b) / self.unit_threshold,
        }
    }

    /// Smallest `t` at which a built-in rule contains `simplex`. `None` for custom rules.
    pub fn critical_scale(&self, simplex: &[&[T]]) -> Result<Option<T>> {
        if self.kind == RuleKind::Custom {
            return Ok(None);
        }
        let mut diam = T::zero();
        for (i, a) in simplex.iter().enumerate() {
            for b in &simplex[i + 1..] {
                diam = diam.max(self.pair_scale(a, b));
            }
        }
        if self.kind == RuleKind::Cech && simplex.len() >= 3 {
            self.check_dimension(simplex[0].len())?;
            let ball = miniball(simplex)?;
            let ball_diam = T::of(2.0) * ball.radius / self.unit_threshold;
            // A ball spanned by the farthest pair must give exactly the pair
            // distance, or subsets could come out an ulp above supersets.
            if ball_diam - diam > T::of(16.0) * T::epsilon() * diam {
                diam = ball_diam;
            }
        }
        Ok(Some(diam))
    }

    /// `h_t(simplex)`.
    pub fn evaluate(&self, t: T, simplex: &[&[T]]) -> Result<bool> {
        if simplex.is_empty() {
            return Err(Error::Domain("the indicator is defined on non-empty sets".into()));
        }
        if !(t >= T::zero()) {
            return Err(Error::Domain(format!("scale t = {t} must be non-negative")));
        }
        if simplex.len() == 1 {
            return Ok(true);
        }
        if t == T::zero() {
            return Ok(false);
        }
        if let Some(ind) = &self.custom {
            let scaled: Vec<Vec<T>> = simplex.iter().map(|p| p.iter().map(|&x| x / t).collect()).collect();
            let refs: Vec<&[T]> = scaled.iter().map(|p| p.as_slice()).collect();
            return Ok(ind.contains(&refs));
        }
        Ok(self.critical_scale(simplex)?.expect("built-in rule") <= t)
    }
}

/// Serializable rule description `{"kind": "rips_linf", "unit_threshold": 0.7071...}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RuleSpec {
    pub kind: RuleKind,
    pub unit_threshold: f64,
}

impl RuleSpec {
    pub fn build<T: Scalar>(&self) -> Result<ComplexRule<T>> {
        ComplexRule::new(self.kind, T::of(self.unit_threshold))
    }

    pub fn example() -> Self {
        RuleSpec { kind: RuleKind::RipsLinf, unit_threshold: std::f64::consts::FRAC_1_SQRT_2 }
    }
}

impl<T: Scalar> ComplexRule<T> {
    pub fn spec(&self) -> Option<RuleSpec> {
        (self.kind != RuleKind::Custom).then(|| RuleSpec { kind: self.kind, unit_threshold: self.unit_threshold.as_f64() })
    }
}
