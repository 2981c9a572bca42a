//! Radial distribution functions: closed forms for the worked examples and a
//! tabulated monotone inverse for everything else.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::quadrature;

pub type RadialFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Number of intervals in the tabulated radial CDF.
pub const TABLE_INTERVALS: usize = 4096;

#[derive(Clone)]
pub(crate) enum RadialCdf {
    /// `G(r) = (2/pi) arctan(r^2)`, the radial law of `2 / (pi^2 (1 + |x|^4))` in the plane.
    ArctanSquare,
    /// Gamma(2, scale): radial law of `C exp(-|x| / scale)` in the plane.
    Gamma2 { scale: f64 },
    Table(Arc<RadialTable>),
}

impl fmt::Debug for RadialCdf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RadialCdf::ArctanSquare => write!(f, "ArctanSquare"),
            RadialCdf::Gamma2 { scale } => write!(f, "Gamma2 {{ scale: {scale} }}"),
            RadialCdf::Table(t) => write!(f, "Table {{ intervals: {} }}", t.cum.len() - 1),
        }
    }
}

impl RadialCdf {
    pub fn cdf(&self, r: f64) -> f64 {
        if r.is_nan() || r <= 0.0 {
            return 0.0;
        }
        if r.is_infinite() {
            return 1.0;
        }
        match self {
            RadialCdf::ArctanSquare => std::f64::consts::FRAC_2_PI * (r * r).atan(),
            RadialCdf::Gamma2 { scale } => {
                let y = r / scale;
                -((1.0 + y) * (-y).exp() - 1.0)
            }
            RadialCdf::Table(t) => t.cdf(r),
        }
    }

    pub fn quantile(&self, u: f64) -> f64 {
        if u <= 0.0 {
            return 0.0;
        }
        if u >= 1.0 {
            return f64::INFINITY;
        }
        match self {
            RadialCdf::ArctanSquare => (std::f64::consts::FRAC_PI_2 * u).tan().sqrt(),
            RadialCdf::Gamma2 { scale } => scale * gamma2_quantile(u),
            RadialCdf::Table(t) => t.quantile(u),
        }
    }
}

/// Inverse of `1 - (1 + y) e^{-y}`, solved in log-survival form
/// `y - ln(1 + y) = -ln(1 - u)`.
fn gamma2_quantile(u: f64) -> f64 {
    let target = -(-u).ln_1p();
    let h = |y: f64| y - y.ln_1p() - target;
    let dh = |y: f64| y / (1.0 + y);
    // h(y) <= y - ln(1+y) grows at least linearly past y = 1.
    let mut lo = 0.0;
    let mut hi = 2.0 * target + 2.0 * (target.max(1.0)).sqrt() + 2.0;
    while h(hi) < 0.0 {
        hi *= 2.0;
    }
    let start = (2.0 * target).sqrt().min(hi);
    safeguarded_newton(h, dh, &mut lo, &mut hi, start)
}

/// Newton iteration kept inside a shrinking bracket `[lo, hi]` of an
/// increasing function; falls back to bisection whenever a step leaves it.
pub(crate) fn safeguarded_newton<F, D>(f: F, df: D, lo: &mut f64, hi: &mut f64, start: f64) -> f64
where
    F: Fn(f64) -> f64,
    D: Fn(f64) -> f64,
{
    let mut x = start.clamp(*lo, *hi);
    for _ in 0..200 {
        let fx = f(x);
        if fx == 0.0 {
            return x;
        }
        if fx < 0.0 {
            *lo = x;
        } else {
            *hi = x;
        }
        if *hi - *lo <= 1e-15 * hi.abs().max(f64::MIN_POSITIVE) {
            break;
        }
        let slope = df(x);
        let step = x - fx / slope;
        let next = if slope > 0.0 && step > *lo && step < *hi { step } else { 0.5 * (*lo + *hi) };
        if next == x {
            break;
        }
        x = next;
    }
    x
}

/// Monotone table of the radial CDF on a compactified axis
/// `r = L (x / (1 - x))^m`, `x in [0, 1)`, with exact values at the nodes and
/// Gauss–Legendre refinement between them.
pub(crate) struct RadialTable {
    length: f64,
    power: f64,
    density: RadialFn,
    cum: Vec<f64>,
}

impl RadialTable {
    /// Tabulates `density` (a radial marginal `r -> s_{d-1} r^{d-1} f(r)`).
    /// Returns the table and the total mass before normalization.
    pub fn build(density: RadialFn, length: f64, power: f64) -> Result<(Self, f64)> {
        let n = TABLE_INTERVALS;
        let mut table = RadialTable { length, power, density, cum: Vec::with_capacity(n + 1) };
        let mut acc = 0.0;
        table.cum.push(0.0);
        for i in 0..n {
            let (a, b) = (i as f64 / n as f64, (i + 1) as f64 / n as f64);
            let piece = quadrature::integrate(&|x| table.integrand(x), a, b, 1e-15).ok_or_else(|| {
                Error::Config(format!(
                    "radial CDF quadrature did not converge for r in [{:.6e}, {:.6e}]",
                    table.radius(a),
                    table.radius(b)
                ))
            })?;
            if piece < 0.0 {
                return Err(Error::Config(format!(
                    "negative radial density for r in [{:.6e}, {:.6e}]",
                    table.radius(a),
                    table.radius(b)
                )));
            }
            acc += piece;
            table.cum.push(acc);
        }
        let total = acc;
        if !(total.is_finite() && total > 0.0) {
            return Err(Error::Config(format!("radial density has non-positive or infinite mass {total}")));
        }
        // The axis is stretched so that an integrable tail leaves almost
        // nothing for the last cell; a large remainder means the mass diverges.
        let last = table.cum[n] - table.cum[n - 1];
        if last > 1e-6 * total {
            return Err(Error::Config(format!(
                "radial density does not appear integrable: mass {last:.3e} beyond r = {:.3e}",
                table.radius(table.node_x(n - 1))
            )));
        }
        table.cum.iter_mut().for_each(|c| *c /= total);
        let density = table.density.clone();
        table.density = Arc::new(move |r| density(r) / total);
        Ok((table, total))
    }

    fn radius(&self, x: f64) -> f64 {
        if x >= 1.0 {
            return f64::INFINITY;
        }
        self.length * (x / (1.0 - x)).powf(self.power)
    }

    fn axis(&self, r: f64) -> f64 {
        let s = (r / self.length).powf(1.0 / self.power);
        s / (1.0 + s)
    }

    fn integrand(&self, x: f64) -> f64 {
        if x <= 0.0 || x >= 1.0 {
            return 0.0;
        }
        let ratio = x / (1.0 - x);
        let r = self.length * ratio.powf(self.power);
        let dr = self.length * self.power * ratio.powf(self.power - 1.0) / ((1.0 - x) * (1.0 - x));
        let g = (self.density)(r);
        if g == 0.0 {
            0.0
        } else {
            g * dr
        }
    }

    fn node_x(&self, i: usize) -> f64 {
        i as f64 / TABLE_INTERVALS as f64
    }

    fn partial(&self, i: usize, x: f64) -> f64 {
        let a = self.node_x(i);
        if x <= a {
            return 0.0;
        }
        // One cell of the stretched axis is short enough for a single rule.
        quadrature::gauss_legendre_16(&|y| self.integrand(y), a, x)
    }

    fn interval_of_x(&self, x: f64) -> usize {
        let n = self.cum.len() - 1;
        ((x * n as f64).floor() as usize).min(n - 1)
    }

    pub fn cdf(&self, r: f64) -> f64 {
        let x = self.axis(r);
        let i = self.interval_of_x(x);
        (self.cum[i] + self.partial(i, x)).clamp(0.0, 1.0)
    }

    pub fn quantile(&self, u: f64) -> f64 {
        let n = self.cum.len() - 1;
        let i = (self.cum.partition_point(|&c| c <= u)).clamp(1, n) - 1;
        let (mut lo, mut hi) = (self.node_x(i), self.node_x(i + 1));
        let base = self.cum[i];
        let f = |x: f64| {
            let v = base + self.partial(i, x) - u;
            // Residuals at the rounding level of u count as a root.
            if v.abs() <= 2.0 * f64::EPSILON * u {
                0.0
            } else {
                v
            }
        };
        let df = |x: f64| self.integrand(x);
        let width = self.cum[i + 1] - base;
        let start = if width > 0.0 { lo + (hi - lo) * ((u - base) / width) } else { lo };
        let x = safeguarded_newton(f, df, &mut lo, &mut hi, start);
        self.radius(x)
    }

    /// Radii of the table nodes, excluding the endpoints at 0 and infinity.
    pub fn node_radii(&self) -> impl Iterator<Item = f64> + '_ {
        (1..self.cum.len() - 1).map(|i| self.radius(self.node_x(i)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closed_forms_round_trip() {
        for cdf in [RadialCdf::ArctanSquare, RadialCdf::Gamma2 { scale: 1.0 }, RadialCdf::Gamma2 { scale: 2.5 }] {
            for j in 1..100 {
                let u = j as f64 / 100.0;
                let r = cdf.quantile(u);
                assert!((cdf.cdf(r) - u).abs() < 1e-12, "{cdf:?} u={u}");
            }
        }
    }

    #[test]
    fn gamma2_quantile_far_tail() {
        let cdf = RadialCdf::Gamma2 { scale: 1.0 };
        // 1 - u is exact for a power of two.
        let tail = 2f64.powi(-40);
        let r = cdf.quantile(1.0 - tail);
        let survival = (1.0 + r) * (-r).exp();
        assert!((survival / tail - 1.0).abs() < 1e-9);
    }

    #[test]
    fn table_matches_exponential_law() {
        // r e^{-r}: Gamma(2, 1).
        let g: RadialFn = Arc::new(|r: f64| r * (-r).exp());
        let (table, total) = RadialTable::build(g, 1.0, 1.0).unwrap();
        assert!((total - 1.0).abs() < 1e-12);
        let exact = RadialCdf::Gamma2 { scale: 1.0 };
        for r in [0.1, 1.0, 2.0, 7.5, 30.0] {
            assert!((table.cdf(r) - exact.cdf(r)).abs() < 1e-12, "r={r}");
        }
        for u in [0.01, 0.3, 0.5, 0.99] {
            assert!((table.quantile(u) / exact.quantile(u) - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn table_reports_non_integrable_density() {
        let g: RadialFn = Arc::new(|r: f64| 1.0 / (1.0 + r));
        assert!(matches!(RadialTable::build(g, 1.0, 1.0), Err(Error::Config(_))));
    }
}
