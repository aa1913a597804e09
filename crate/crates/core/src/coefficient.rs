//! Thermal conductivity `σ(x)` on `[0, 1]` and the travel-time map
//! `τ(x) = ∫₀ˣ dξ/σ(ξ)`.
//!
//! The heat equation is `q_t = (σ²(x) q_x)_x`; `σ²` is the diffusivity.
//! Everything downstream consumes `σ`, the logarithmic derivative
//! `μ = σ'/σ`, and `τ`.

use std::io::BufRead;

use crate::error::{check_unit, Error, Result};
use crate::quadrature::GaussLegendre;

/// Samples used to certify positivity and find `sigma_min`.
const POSITIVITY_SAMPLES: usize = 4096;

/// Which closed form (or table) backs a [`Conductivity`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConductivityKind {
    Constant,
    /// `σ²(x) = (3 − (2x − 1)²)/24`; with `q₀ = x(1−x)` the exact solution is `x(1−x)e^{−t}`.
    Parabolic24,
    /// `σ²(x) = (6337 − 252√111 − 4500x²(11 + x(−14 + 5x))) / (9000(11 + 6x(−7 + 5x)))`.
    Rational9000,
    Tabulated,
}

impl ConductivityKind {
    pub fn name(self) -> &'static str {
        match self {
            Self::Constant => "constant",
            Self::Parabolic24 => "parabolic24",
            Self::Rational9000 => "rational9000",
            Self::Tabulated => "tabulated",
        }
    }
}

#[derive(Debug, Clone)]
enum Repr {
    Constant(f64),
    Parabolic24,
    Rational9000,
    Tabulated(MonotoneCubic),
}

/// Validated, positive conductivity on `[0, 1]`.
#[derive(Debug, Clone)]
pub struct Conductivity {
    repr: Repr,
    sigma_min: f64,
    sigma_max: f64,
}

/// The rational coefficient's denominator vanishes at `0.7 ∓ √111/30`. The
/// numerator shares the first root, so the only true pole is the second one,
/// just right of the unit interval.
fn rational9000_pole() -> f64 {
    0.7 + 111f64.sqrt() / 30.0
}

impl Conductivity {
    /// `σ ≡ c`.
    pub fn constant(c: f64) -> Result<Self> {
        if !(c > 0.0 && c.is_finite()) {
            return Err(Error::NonPositiveConductivity { x: 0.0, value: c });
        }
        Self::validated(Repr::Constant(c))
    }

    pub fn parabolic24() -> Self {
        Self::validated(Repr::Parabolic24).expect("catalog coefficient is positive")
    }

    pub fn rational9000() -> Self {
        Self::validated(Repr::Rational9000).expect("catalog coefficient is positive")
    }

    /// Monotone cubic interpolation of tabulated `(x, σ²(x))` pairs.
    pub fn tabulated(xs: Vec<f64>, sigma_squared: Vec<f64>) -> Result<Self> {
        if xs.len() != sigma_squared.len() {
            return Err(Error::MalformedTable(format!(
                "{} abscissae but {} values",
                xs.len(),
                sigma_squared.len()
            )));
        }
        if xs.len() < 2 {
            return Err(Error::MalformedTable("need at least two rows".into()));
        }
        if let Some(i) = xs.windows(2).position(|w| !(w[1] > w[0])) {
            return Err(Error::MalformedTable(format!(
                "abscissae not strictly increasing at row {} ({} then {})",
                i + 2,
                xs[i],
                xs[i + 1]
            )));
        }
        if xs[0] > 0.0 || *xs.last().unwrap() < 1.0 {
            return Err(Error::MalformedTable(format!(
                "table covers [{}, {}], not [0, 1]",
                xs[0],
                xs.last().unwrap()
            )));
        }
        if let Some((x, v)) = xs
            .iter()
            .zip(&sigma_squared)
            .find(|(_, v)| !(**v > 0.0 && v.is_finite()))
        {
            return Err(Error::NonPositiveConductivity { x: *x, value: *v });
        }
        Self::validated(Repr::Tabulated(MonotoneCubic::new(xs, sigma_squared)))
    }

    /// Reads a two-column CSV of `x, σ²(x)`. A non-numeric first row is
    /// treated as a header; blank lines and `#` comments are skipped.
    pub fn from_csv<R: BufRead>(reader: R) -> Result<Self> {
        let mut xs = Vec::new();
        let mut vals = Vec::new();
        for (lineno, line) in reader.lines().enumerate() {
            let line = line.map_err(|e| Error::MalformedTable(e.to_string()))?;
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut cols = line.split(',').map(str::trim);
            let (a, b) = match (cols.next(), cols.next(), cols.next()) {
                (Some(a), Some(b), None) => (a, b),
                _ => {
                    return Err(Error::MalformedTable(format!(
                        "line {}: expected two columns",
                        lineno + 1
                    )))
                }
            };
            match (a.parse::<f64>(), b.parse::<f64>()) {
                (Ok(x), Ok(v)) => {
                    xs.push(x);
                    vals.push(v);
                }
                _ if xs.is_empty() && lineno == 0 => continue,
                _ => {
                    return Err(Error::MalformedTable(format!(
                        "line {}: cannot parse `{line}`",
                        lineno + 1
                    )))
                }
            }
        }
        Self::tabulated(xs, vals)
    }

    fn validated(repr: Repr) -> Result<Self> {
        let mut c = Self { repr, sigma_min: 0.0, sigma_max: 0.0 };
        let mut lo = f64::INFINITY;
        let mut hi = 0.0f64;
        for i in 0..=POSITIVITY_SAMPLES {
            let x = i as f64 / POSITIVITY_SAMPLES as f64;
            let s2 = c.sigma_squared(x);
            if !(s2 > 0.0 && s2.is_finite()) {
                return Err(Error::NonPositiveConductivity { x, value: s2 });
            }
            lo = lo.min(s2);
            hi = hi.max(s2);
        }
        c.sigma_min = lo.sqrt();
        c.sigma_max = hi.sqrt();
        Ok(c)
    }

    pub fn kind(&self) -> ConductivityKind {
        match self.repr {
            Repr::Constant(_) => ConductivityKind::Constant,
            Repr::Parabolic24 => ConductivityKind::Parabolic24,
            Repr::Rational9000 => ConductivityKind::Rational9000,
            Repr::Tabulated(_) => ConductivityKind::Tabulated,
        }
    }

    /// Value of `σ` if the coefficient is constant.
    pub fn constant_value(&self) -> Option<f64> {
        match self.repr {
            Repr::Constant(c) => Some(c),
            _ => None,
        }
    }

    pub fn sigma_min(&self) -> f64 {
        self.sigma_min
    }

    pub fn sigma_max(&self) -> f64 {
        self.sigma_max
    }

    /// The diffusivity `σ²(x)`.
    pub fn sigma_squared(&self, x: f64) -> f64 {
        match &self.repr {
            Repr::Constant(c) => c * c,
            Repr::Parabolic24 => {
                let u = 2.0 * x - 1.0;
                (3.0 - u * u) / 24.0
            }
            Repr::Rational9000 => {
                // Quotient plus remainder of the closed form after cancelling
                // the common factor with the denominator.
                -x * x / 12.0 + 7.0 * x / 60.0 + 19.0 / 1800.0 + 7.0 / (250.0 * (rational9000_pole() - x))
            }
            Repr::Tabulated(t) => t.eval(x),
        }
    }

    /// `(σ²)'(x)`.
    pub fn sigma_squared_derivative(&self, x: f64) -> f64 {
        match &self.repr {
            Repr::Constant(_) => 0.0,
            Repr::Parabolic24 => -(2.0 * x - 1.0) / 6.0,
            Repr::Rational9000 => {
                let d = rational9000_pole() - x;
                -x / 6.0 + 7.0 / 60.0 + 7.0 / (250.0 * d * d)
            }
            Repr::Tabulated(t) => t.derivative(x),
        }
    }

    pub fn sigma(&self, x: f64) -> f64 {
        match self.repr {
            Repr::Constant(c) => c,
            _ => self.sigma_squared(x).sqrt(),
        }
    }

    /// `σ'(x) = (σ²)'/(2σ)`.
    pub fn dsigma(&self, x: f64) -> f64 {
        match self.repr {
            Repr::Constant(_) => 0.0,
            _ => self.sigma_squared_derivative(x) / (2.0 * self.sigma(x)),
        }
    }

    /// `μ(x) = σ'(x)/σ(x) = (σ²)'/(2σ²)`, without a domain check.
    pub fn mu(&self, x: f64) -> f64 {
        match self.repr {
            Repr::Constant(_) => 0.0,
            _ => self.sigma_squared_derivative(x) / (2.0 * self.sigma_squared(x)),
        }
    }

    /// `σ'(x)/σ(x)` for `x ∈ [0, 1]`.
    pub fn log_derivative(&self, x: f64) -> Result<f64> {
        check_unit("x in [0, 1]", x)?;
        Ok(self.mu(x))
    }

    /// `∫_a^b |μ|`, which controls the size of the order-`n` simplex terms.
    pub fn total_variation_log(&self, a: f64, b: f64) -> f64 {
        if matches!(self.repr, Repr::Constant(_)) || b <= a {
            return 0.0;
        }
        let g = GaussLegendre::cached(20);
        // |μ| has kinks at sign changes of σ'; fine panels keep that harmless.
        g.integrate_composite(a, b, 256, |y| self.mu(y).abs())
    }
}

/// Monotone piecewise-cubic Hermite interpolant (Fritsch–Carlson slopes).
#[derive(Debug, Clone)]
pub struct MonotoneCubic {
    xs: Vec<f64>,
    ys: Vec<f64>,
    slopes: Vec<f64>,
}

impl MonotoneCubic {
    pub fn new(xs: Vec<f64>, ys: Vec<f64>) -> Self {
        let n = xs.len();
        assert!(n >= 2 && n == ys.len());
        let h: Vec<f64> = xs.windows(2).map(|w| w[1] - w[0]).collect();
        let delta: Vec<f64> = (0..n - 1).map(|i| (ys[i + 1] - ys[i]) / h[i]).collect();
        let mut m = vec![0.0; n];
        if n == 2 {
            m[0] = delta[0];
            m[1] = delta[0];
        } else {
            for i in 1..n - 1 {
                if delta[i - 1] * delta[i] > 0.0 {
                    let w1 = 2.0 * h[i] + h[i - 1];
                    let w2 = h[i] + 2.0 * h[i - 1];
                    m[i] = (w1 + w2) / (w1 / delta[i - 1] + w2 / delta[i]);
                }
            }
            m[0] = end_slope(h[0], h[1], delta[0], delta[1]);
            m[n - 1] = end_slope(h[n - 2], h[n - 3], delta[n - 2], delta[n - 3]);
        }
        Self { xs, ys, slopes: m }
    }

    fn locate(&self, x: f64) -> usize {
        let n = self.xs.len();
        match self.xs.binary_search_by(|p| p.partial_cmp(&x).unwrap()) {
            Ok(i) => i.min(n - 2),
            Err(0) => 0,
            Err(i) => (i - 1).min(n - 2),
        }
    }

    pub fn eval(&self, x: f64) -> f64 {
        let i = self.locate(x);
        let h = self.xs[i + 1] - self.xs[i];
        let t = (x - self.xs[i]) / h;
        let (t2, t3) = (t * t, t * t * t);
        let h00 = 2.0 * t3 - 3.0 * t2 + 1.0;
        let h10 = t3 - 2.0 * t2 + t;
        let h01 = -2.0 * t3 + 3.0 * t2;
        let h11 = t3 - t2;
        h00 * self.ys[i] + h10 * h * self.slopes[i] + h01 * self.ys[i + 1] + h11 * h * self.slopes[i + 1]
    }

    pub fn derivative(&self, x: f64) -> f64 {
        let i = self.locate(x);
        let h = self.xs[i + 1] - self.xs[i];
        let t = (x - self.xs[i]) / h;
        let t2 = t * t;
        let d00 = 6.0 * t2 - 6.0 * t;
        let d10 = 3.0 * t2 - 4.0 * t + 1.0;
        let d01 = -6.0 * t2 + 6.0 * t;
        let d11 = 3.0 * t2 - 2.0 * t;
        (d00 * self.ys[i] + d01 * self.ys[i + 1]) / h + d10 * self.slopes[i] + d11 * self.slopes[i + 1]
    }
}

/// Three-point end slope, limited to keep the interpolant monotone.
fn end_slope(h0: f64, h1: f64, d0: f64, d1: f64) -> f64 {
    let m = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
    if m * d0 <= 0.0 {
        0.0
    } else if d0 * d1 <= 0.0 && m.abs() > 3.0 * d0.abs() {
        3.0 * d0
    } else {
        m
    }
}

/// Cached `τ(x) = ∫₀ˣ dξ/σ(ξ)`.
///
/// Panel-end values come from 10-point Gauss–Legendre integration of `1/σ`;
/// between panel ends `τ` is the quintic Hermite interpolant matching
/// `τ`, `τ' = 1/σ`, `τ'' = −σ'/σ²`. The panel count doubles until two
/// consecutive levels agree to the requested tolerance.
#[derive(Debug, Clone)]
pub struct TravelTimeMap {
    panels: usize,
    values: Vec<f64>,
    d1: Vec<f64>,
    d2: Vec<f64>,
    total: f64,
}

const MIN_PANELS: usize = 16;
const MAX_PANELS: usize = 1 << 16;

impl TravelTimeMap {
    pub fn build(c: &Conductivity, tol: f64) -> Result<Self> {
        if !(tol > 0.0) {
            return Err(Error::InvalidParameter(format!("travel-time tolerance must be positive, got {tol}")));
        }
        if let Some(s) = c.constant_value() {
            return Ok(Self::linear(s));
        }
        let rule = GaussLegendre::cached(10);
        let mut coarse = Self::at_level(c, MIN_PANELS, &rule);
        loop {
            let fine = Self::at_level(c, coarse.panels * 2, &rule);
            let mut diff = 0.0f64;
            let mut monotone = true;
            for p in 0..coarse.panels {
                let h = 1.0 / coarse.panels as f64;
                for f in [0.13, 0.37, 0.5, 0.71, 0.94] {
                    let x = (p as f64 + f) * h;
                    diff = diff.max((coarse.tau(x) - fine.tau(x)).abs());
                }
            }
            for p in 0..fine.panels {
                let h = 1.0 / fine.panels as f64;
                monotone &= (0..=8).all(|i| fine.derivative((p as f64 + i as f64 / 8.0) * h) > 0.0);
            }
            if diff <= tol && monotone {
                return Ok(fine);
            }
            if fine.panels >= MAX_PANELS {
                return Err(Error::ToleranceNotReached { tol, panels: fine.panels });
            }
            coarse = fine;
        }
    }

    fn linear(s: f64) -> Self {
        Self {
            panels: 1,
            values: vec![0.0, 1.0 / s],
            d1: vec![1.0 / s; 2],
            d2: vec![0.0; 2],
            total: 1.0 / s,
        }
    }

    fn at_level(c: &Conductivity, panels: usize, rule: &GaussLegendre) -> Self {
        let h = 1.0 / panels as f64;
        let mut values = Vec::with_capacity(panels + 1);
        let mut acc = 0.0;
        values.push(0.0);
        for p in 0..panels {
            let a = p as f64 * h;
            acc += rule.integrate(a, a + h, |y| 1.0 / c.sigma(y));
            values.push(acc);
        }
        let xs = (0..=panels).map(|i| i as f64 * h);
        let d1 = xs.clone().map(|x| 1.0 / c.sigma(x)).collect();
        let d2 = xs.map(|x| -c.dsigma(x) / c.sigma_squared(x)).collect();
        Self { panels, values, d1, d2, total: acc }
    }

    /// `τ(1)`.
    pub fn total(&self) -> f64 {
        self.total
    }

    /// Number of cache panels.
    pub fn resolution(&self) -> usize {
        self.panels
    }

    fn panel(&self, x: f64) -> (usize, f64, f64) {
        let h = 1.0 / self.panels as f64;
        let p = ((x * self.panels as f64).floor() as isize).clamp(0, self.panels as isize - 1) as usize;
        let t = (x - p as f64 * h) / h;
        (p, t, h)
    }

    /// `τ(x)` for `x ∈ [0, 1]` (clamped, no domain check).
    pub fn tau(&self, x: f64) -> f64 {
        if x <= 0.0 {
            return 0.0;
        }
        if x >= 1.0 {
            return self.total;
        }
        let (p, t, h) = self.panel(x);
        let (s, s2, s3) = (t, t * t, t * t * t);
        let (s4, s5) = (s3 * s, s3 * s2);
        let h00 = 1.0 - 10.0 * s3 + 15.0 * s4 - 6.0 * s5;
        let h10 = s - 6.0 * s3 + 8.0 * s4 - 3.0 * s5;
        let h20 = 0.5 * (s2 - 3.0 * s3 + 3.0 * s4 - s5);
        let h01 = 10.0 * s3 - 15.0 * s4 + 6.0 * s5;
        let h11 = -4.0 * s3 + 7.0 * s4 - 3.0 * s5;
        let h21 = 0.5 * (s3 - 2.0 * s4 + s5);
        h00 * self.values[p]
            + h * h10 * self.d1[p]
            + h * h * h20 * self.d2[p]
            + h01 * self.values[p + 1]
            + h * h11 * self.d1[p + 1]
            + h * h * h21 * self.d2[p + 1]
    }

    /// Derivative of the cached interpolant (approximates `1/σ`).
    pub fn derivative(&self, x: f64) -> f64 {
        let (p, t, h) = self.panel(x.clamp(0.0, 1.0));
        let (s, s2, s3, s4) = (t, t * t, t * t * t, t * t * t * t);
        let d00 = -30.0 * s2 + 60.0 * s3 - 30.0 * s4;
        let d10 = 1.0 - 18.0 * s2 + 32.0 * s3 - 15.0 * s4;
        let d20 = 0.5 * (2.0 * s - 9.0 * s2 + 12.0 * s3 - 5.0 * s4);
        let d01 = -d00;
        let d11 = -12.0 * s2 + 28.0 * s3 - 15.0 * s4;
        let d21 = 0.5 * (3.0 * s2 - 8.0 * s3 + 5.0 * s4);
        (d00 * self.values[p] + d01 * self.values[p + 1]) / h
            + d10 * self.d1[p]
            + h * d20 * self.d2[p]
            + d11 * self.d1[p + 1]
            + h * d21 * self.d2[p + 1]
    }
}

/// Builds the travel-time cache with `tol` as the uniform accuracy target.
pub fn build_travel_time(c: &Conductivity, tol: f64) -> Result<TravelTimeMap> {
    TravelTimeMap::build(c, tol)
}

/// Default tolerance of the travel-time cache.
pub const DEFAULT_TAU_TOL: f64 = 1e-13;

#[cfg(test)]
mod tests {
    use super::*;

    fn parabolic_tau_exact(x: f64) -> f64 {
        let r3 = 3f64.sqrt();
        6f64.sqrt() * (((2.0 * x - 1.0) / r3).asin() + (1.0 / r3).asin())
    }

    fn rational_closed_form(x: f64) -> f64 {
        let num = 6337.0 - 252.0 * 111f64.sqrt() - 4500.0 * x * x * (11.0 + x * (-14.0 + 5.0 * x));
        let den = 9000.0 * (11.0 + 6.0 * x * (-7.0 + 5.0 * x));
        num / den
    }

    #[test]
    fn constant_coefficient_is_flat() {
        let c = Conductivity::constant(1.0).unwrap();
        for x in [0.0, 0.3, 1.0] {
            assert_eq!(c.sigma(x), 1.0);
            assert_eq!(c.dsigma(x), 0.0);
            assert_eq!(c.log_derivative(x).unwrap(), 0.0);
        }
        let tt = TravelTimeMap::build(&c, 1e-12).unwrap();
        assert_eq!(tt.total(), 1.0);
        assert!((tt.tau(0.37) - 0.37).abs() < 1e-15);
        let c2 = Conductivity::constant(2.0).unwrap();
        assert_eq!(TravelTimeMap::build(&c2, 1e-12).unwrap().total(), 0.5);
    }

    #[test]
    fn parabolic_catalog_values() {
        let c = Conductivity::parabolic24();
        assert!((c.sigma(0.5).powi(2) - 0.125).abs() < 1e-16);
        assert!((c.sigma(0.0).powi(2) - 1.0 / 12.0).abs() < 1e-16);
        assert_eq!(c.log_derivative(0.5).unwrap(), 0.0);
    }

    #[test]
    fn log_derivative_matches_finite_difference_of_log_sigma() {
        for c in [Conductivity::parabolic24(), Conductivity::rational9000()] {
            let x = 0.25;
            let h = 1e-4;
            let f = |x: f64| c.sigma(x).ln();
            // fourth-order centered difference
            let fd = (-f(x + 2.0 * h) + 8.0 * f(x + h) - 8.0 * f(x - h) + f(x - 2.0 * h)) / (12.0 * h);
            assert!((c.log_derivative(x).unwrap() - fd).abs() < 1e-8, "{:?}", c.kind());
        }
    }

    #[test]
    fn dsigma_is_second_order_consistent() {
        let c = Conductivity::rational9000();
        for i in 1..50 {
            let x = i as f64 / 50.0;
            let h = 1e-5;
            let fd = (c.sigma(x + h) - c.sigma(x - h)) / (2.0 * h);
            assert!((c.dsigma(x) - fd).abs() < 1e-7, "x={x}");
        }
    }

    #[test]
    fn domain_is_checked() {
        let c = Conductivity::parabolic24();
        assert!(matches!(c.log_derivative(1.5), Err(Error::DomainError { .. })));
        assert!(matches!(c.log_derivative(-0.1), Err(Error::DomainError { .. })));
    }

    #[test]
    fn catalog_exactness_on_1000_samples() {
        let p = Conductivity::parabolic24();
        let r = Conductivity::rational9000();
        for i in 0..1000 {
            let x = i as f64 / 999.0;
            let u = 2.0 * x - 1.0;
            let exact = (3.0 - u * u) / 24.0;
            assert!((p.sigma(x).powi(2) - exact).abs() <= 4.0 * f64::EPSILON * exact);
            // The unreduced quotient loses digits near its removable zero
            // (x ≈ 0.3488); scale the tolerance by that cancellation.
            let den = 9000.0 * (11.0 + 6.0 * x * (-7.0 + 5.0 * x));
            let cancel = (99000.0 / den.abs()).max(1.0);
            let closed = rational_closed_form(x);
            let tol = 16.0 * f64::EPSILON * cancel * closed.abs();
            assert!((r.sigma_squared(x) - closed).abs() <= tol, "x={x}: {} vs {closed}", r.sigma_squared(x));
        }
    }

    #[test]
    fn parabolic_travel_time_closed_form() {
        let c = Conductivity::parabolic24();
        let tt = TravelTimeMap::build(&c, 1e-13).unwrap();
        let expected = 2.0 * 6f64.sqrt() * (1.0 / 3f64.sqrt()).asin();
        assert!((tt.total() - expected).abs() < 1e-13);
        assert!((tt.total() - 3.01507).abs() < 2e-4);
        for i in 0..=200 {
            let x = i as f64 / 200.0;
            assert!((tt.tau(x) - parabolic_tau_exact(x)).abs() < 1e-12, "x={x}");
        }
    }

    #[test]
    fn travel_time_is_monotone_and_consistent() {
        for c in [Conductivity::parabolic24(), Conductivity::rational9000()] {
            let tt = TravelTimeMap::build(&c, 1e-12).unwrap();
            assert_eq!(tt.tau(0.0), 0.0);
            assert_eq!(tt.tau(1.0), tt.total());
            let xs: Vec<f64> = (0..=5000).map(|i| i as f64 / 5000.0).collect();
            assert!(xs.windows(2).all(|w| tt.tau(w[0]) < tt.tau(w[1])));
            for i in 1..100 {
                let x = i as f64 / 100.0;
                let h = 1e-3;
                let fd = (8.0 * (tt.tau(x + h) - tt.tau(x - h)) - (tt.tau(x + 2.0 * h) - tt.tau(x - 2.0 * h))) / (12.0 * h);
                assert!((fd - 1.0 / c.sigma(x)).abs() < 1e-7, "{:?} x={x}: {fd} vs {}", c.kind(), 1.0 / c.sigma(x));
            }
        }
    }

    #[test]
    fn refinement_changes_tau_below_tolerance() {
        let c = Conductivity::rational9000();
        let tol = 1e-10;
        let tt = TravelTimeMap::build(&c, tol).unwrap();
        let finer = TravelTimeMap::build(&c, 1e-14).unwrap();
        for i in 0..=97 {
            let x = i as f64 / 97.0;
            assert!((tt.tau(x) - finer.tau(x)).abs() < tol, "x={x}");
        }
    }

    #[test]
    fn tabulated_reproduces_smooth_coefficient() {
        let n = 401;
        let xs: Vec<f64> = (0..n).map(|i| i as f64 / (n - 1) as f64).collect();
        let p = Conductivity::parabolic24();
        let vals = xs.iter().map(|&x| p.sigma_squared(x)).collect();
        let t = Conductivity::tabulated(xs, vals).unwrap();
        for i in 0..100 {
            let x = (i as f64 + 0.5) / 100.0;
            assert!((t.sigma(x) - p.sigma(x)).abs() < 1e-7);
            assert!((t.mu(x) - p.mu(x)).abs() < 1e-3);
        }
    }

    #[test]
    fn table_errors() {
        assert!(matches!(
            Conductivity::tabulated(vec![0.0, 0.5, 0.4, 1.0], vec![1.0; 4]),
            Err(Error::MalformedTable(_))
        ));
        assert!(matches!(
            Conductivity::tabulated(vec![0.0, 0.5, 1.0], vec![1.0, -0.2, 1.0]),
            Err(Error::NonPositiveConductivity { .. })
        ));
        assert!(matches!(
            Conductivity::tabulated(vec![0.0, 0.5], vec![1.0, 1.0]),
            Err(Error::MalformedTable(_))
        ));
        assert!(matches!(Conductivity::constant(0.0), Err(Error::NonPositiveConductivity { .. })));
    }

    #[test]
    fn csv_parsing() {
        let text = "x,sigma2\n0,0.5\n0.5,1.0\n# comment\n\n1,0.5\n";
        let c = Conductivity::from_csv(text.as_bytes()).unwrap();
        assert_eq!(c.kind(), ConductivityKind::Tabulated);
        assert!((c.sigma_squared(0.5) - 1.0).abs() < 1e-15);
        let bad = "0,1\n0.7,1\n0.6,1\n1,1\n";
        assert!(matches!(Conductivity::from_csv(bad.as_bytes()), Err(Error::MalformedTable(_))));
        let bad_cols = "0,1,2\n";
        assert!(matches!(Conductivity::from_csv(bad_cols.as_bytes()), Err(Error::MalformedTable(_))));
    }

    #[test]
    fn monotone_cubic_preserves_monotone_data() {
        let xs = vec![0.0, 0.1, 0.2, 0.6, 1.0];
        let ys = vec![1.0, 1.0, 2.0, 8.0, 8.5];
        let m = MonotoneCubic::new(xs, ys);
        let mut prev = m.eval(0.0);
        for i in 1..=1000 {
            let v = m.eval(i as f64 / 1000.0);
            assert!(v >= prev - 1e-14);
            prev = v;
        }
    }
}
