//! Ordered-simplex integrals
//!
//! ```text
//! S_n^{(a,b)}(k) = 2^{-n} ∫_{a ≤ y₁ ≤ … ≤ y_n ≤ b} Π μ(y_p) · sin(k A(y)) dy,
//! A(y) = Σ_{p=0}^{n} (−1)^p (τ(y_{p+1}) − τ(y_p)),   y₀ = a, y_{n+1} = b,
//! ```
//!
//! evaluated as nested one-dimensional Gauss–Legendre integrals, innermost
//! variable first, each mapped onto its current sub-interval. The cost of one
//! term is `Q^n` integrand samples.

use std::sync::Arc;

use num_complex::Complex64;

use crate::coefficient::{Conductivity, TravelTimeMap};
use crate::error::{check_unit, Error, Result};
use crate::quadrature::GaussLegendre;

/// Highest simplex order accepted (`Q^n` cost).
pub const MAX_SIMPLEX_ORDER: usize = 6;

pub const DEFAULT_QUAD_ORDER: usize = 32;
pub const DEFAULT_TERM_TOL: f64 = 1e-10;

/// Truncation order and quadrature configuration of the series.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesSpec {
    /// Series are summed for `n = 0..=truncation`.
    pub truncation: usize,
    /// Gauss–Legendre nodes per simplex dimension.
    pub quad_order: usize,
    /// Target absolute accuracy per term.
    pub tol: f64,
}

impl SeriesSpec {
    pub fn new(truncation: usize) -> Result<Self> {
        Self { truncation, quad_order: DEFAULT_QUAD_ORDER, tol: DEFAULT_TERM_TOL }.validate()
    }

    pub fn with_quad_order(mut self, quad_order: usize) -> Result<Self> {
        self.quad_order = quad_order;
        self.validate()
    }

    pub fn validate(self) -> Result<Self> {
        if self.quad_order < 2 {
            return Err(Error::InvalidParameter(format!("quad_order must be at least 2, got {}", self.quad_order)));
        }
        if self.truncation > MAX_SIMPLEX_ORDER {
            return Err(Error::OrderTooHigh { order: self.truncation, max: MAX_SIMPLEX_ORDER });
        }
        if !(self.tol > 0.0) {
            return Err(Error::InvalidParameter(format!("tol must be positive, got {}", self.tol)));
        }
        Ok(self)
    }
}

/// One evaluated term, kept for diagnostics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimplexTerm {
    pub n: usize,
    pub interval: (f64, f64),
    pub k: Complex64,
    pub value: Complex64,
}

/// Simplex-series evaluator bound to one coefficient and rule.
#[derive(Debug, Clone)]
pub struct Simplex<'a> {
    c: &'a Conductivity,
    tt: &'a TravelTimeMap,
    rule: Arc<GaussLegendre>,
    spec: SeriesSpec,
}

impl<'a> Simplex<'a> {
    pub fn new(c: &'a Conductivity, tt: &'a TravelTimeMap, spec: SeriesSpec) -> Self {
        Self { c, tt, rule: GaussLegendre::cached(spec.quad_order), spec }
    }

    pub fn spec(&self) -> SeriesSpec {
        self.spec
    }

    pub fn conductivity(&self) -> &'a Conductivity {
        self.c
    }

    pub fn travel_time(&self) -> &'a TravelTimeMap {
        self.tt
    }

    fn check(&self, n: usize, a: f64, b: f64) -> Result<()> {
        if n > MAX_SIMPLEX_ORDER {
            return Err(Error::OrderTooHigh { order: n, max: MAX_SIMPLEX_ORDER });
        }
        check_unit("a in [0, 1]", a)?;
        check_unit("b in [0, 1]", b)?;
        if a > b {
            return Err(Error::DomainError { what: "interval with a <= b", value: a - b });
        }
        Ok(())
    }

    /// Accumulates `weight · Π μ · leaf(A)` over the simplex below level `p`.
    #[allow(clippy::too_many_arguments)]
    fn nested<T, F>(&self, p: usize, a: f64, u: f64, tau_a: f64, tau_u: f64, phase: f64, weight: f64, leaf: &F, acc: &mut T)
    where
        T: Copy + std::ops::AddAssign + std::ops::Mul<f64, Output = T>,
        F: Fn(f64) -> T,
    {
        if p == 0 {
            *acc += leaf(phase + (tau_u - tau_a)) * weight;
            return;
        }
        let sign = if p.is_multiple_of(2) { 1.0 } else { -1.0 };
        let half = 0.5 * (u - a);
        let mid = 0.5 * (u + a);
        for (&x, &w) in self.rule.nodes.iter().zip(&self.rule.weights) {
            let y = mid + half * x;
            let ty = self.tt.tau(y);
            let m = self.c.mu(y);
            self.nested(p - 1, a, y, tau_a, ty, phase + sign * (tau_u - ty), weight * half * w * m, leaf, acc);
        }
    }

    fn accumulate<T, F>(&self, n: usize, a: f64, b: f64, leaf: F) -> T
    where
        T: Copy + Default + std::ops::AddAssign + std::ops::Mul<f64, Output = T>,
        F: Fn(f64) -> T,
    {
        let mut acc = T::default();
        if n > 0 && (b == a || self.c.constant_value().is_some()) {
            return acc;
        }
        let scale = 0.5f64.powi(n as i32);
        self.nested(n, a, b, self.tt.tau(a), self.tt.tau(b), 0.0, scale, &leaf, &mut acc);
        acc
    }

    /// `S_n^{(a,b)}(k)`.
    pub fn term(&self, n: usize, a: f64, b: f64, k: Complex64) -> Result<Complex64> {
        self.check(n, a, b)?;
        Ok(self.accumulate(n, a, b, |phase| (k * phase).sin()))
    }

    /// `S_n^{(a,b)}(k)` for real `k`, in real arithmetic.
    pub fn term_real(&self, n: usize, a: f64, b: f64, k: f64) -> Result<f64> {
        self.check(n, a, b)?;
        Ok(self.accumulate(n, a, b, |phase| (k * phase).sin()))
    }

    /// `e^{ik·shift} S_n^{(a,b)}(k)` with `sin` split into exponentials whose
    /// arguments `ik(shift ± A)` never grow for `Im k ≥ 0`, since `|A| ≤ τ(b) − τ(a) ≤ shift`.
    pub fn regularized_term(&self, n: usize, a: f64, b: f64, k: Complex64, shift: f64) -> Result<Complex64> {
        self.check(n, a, b)?;
        let travel = self.tt.tau(b) - self.tt.tau(a);
        if shift < travel * (1.0 - 1e-14) {
            return Err(Error::ShiftTooSmall { shift, travel });
        }
        let ik = Complex64::i() * k;
        let half_over_i = Complex64::new(0.0, -0.5);
        Ok(self.accumulate(n, a, b, |phase| ((ik * (shift + phase)).exp() - (ik * (shift - phase)).exp()) * half_over_i))
    }

    /// Terms `n = 0..=truncation` for the interval.
    pub fn terms(&self, a: f64, b: f64, k: Complex64) -> Result<Vec<Complex64>> {
        (0..=self.spec.truncation).map(|n| self.term(n, a, b, k)).collect()
    }

    pub fn regularized_terms(&self, a: f64, b: f64, k: Complex64, shift: f64) -> Result<Vec<Complex64>> {
        (0..=self.spec.truncation).map(|n| self.regularized_term(n, a, b, k, shift)).collect()
    }

    /// `Σ_{n ≤ N} S_n^{(a,b)}(k)`.
    pub fn sum(&self, a: f64, b: f64, k: Complex64) -> Result<Complex64> {
        Ok(self.terms(a, b, k)?.into_iter().sum())
    }

    pub fn sum_real(&self, a: f64, b: f64, k: f64) -> Result<f64> {
        (0..=self.spec.truncation).map(|n| self.term_real(n, a, b, k)).sum()
    }

    pub fn regularized_sum(&self, a: f64, b: f64, k: Complex64, shift: f64) -> Result<Complex64> {
        Ok(self.regularized_terms(a, b, k, shift)?.into_iter().sum())
    }

    /// `|S_n(Q) − S_n(2Q)|`, a quadrature error estimate for one term.
    pub fn term_error_estimate(&self, n: usize, a: f64, b: f64, k: Complex64) -> Result<f64> {
        let coarse = self.term(n, a, b, k)?;
        let doubled = SeriesSpec { quad_order: 2 * self.spec.quad_order, ..self.spec };
        let fine = Simplex::new(self.c, self.tt, doubled).term(n, a, b, k)?;
        Ok((coarse - fine).norm())
    }

    /// `cosh(|Im k|(τ(b) − τ(a))) · (∫_a^b |μ|)^n / (2^n n!)`, an upper bound on `|S_n^{(a,b)}(k)|`.
    pub fn term_bound(&self, n: usize, a: f64, b: f64, k: Complex64) -> f64 {
        let travel = self.tt.tau(b) - self.tt.tau(a);
        let variation = self.c.total_variation_log(a, b);
        let factorial: f64 = (1..=n).map(|i| i as f64).product();
        (k.im.abs() * travel).cosh() * (0.5 * variation).powi(n as i32) / factorial
    }
}

/// `S_n^{(a,b)}(k)`.
pub fn simplex_integral(
    c: &Conductivity,
    tt: &TravelTimeMap,
    n: usize,
    a: f64,
    b: f64,
    k: Complex64,
    spec: &SeriesSpec,
) -> Result<Complex64> {
    Simplex::new(c, tt, *spec).term(n, a, b, k)
}

/// `e^{ik·shift} S_n^{(a,b)}(k)`, overflow-safe for `Im k ≥ 0`.
#[allow(clippy::too_many_arguments)]
pub fn regularized_simplex_integral(
    c: &Conductivity,
    tt: &TravelTimeMap,
    n: usize,
    a: f64,
    b: f64,
    k: Complex64,
    spec: &SeriesSpec,
    shift: f64,
) -> Result<Complex64> {
    Simplex::new(c, tt, *spec).regularized_term(n, a, b, k, shift)
}

/// `Σ_{n=0}^{N} S_n^{(a,b)}(k)`.
pub fn series_sum(c: &Conductivity, tt: &TravelTimeMap, a: f64, b: f64, k: Complex64, spec: &SeriesSpec) -> Result<Complex64> {
    Simplex::new(c, tt, *spec).sum(a, b, k)
}

/// `e^{ik·shift} Σ_{n=0}^{N} S_n^{(a,b)}(k)`.
pub fn regularized_series_sum(
    c: &Conductivity,
    tt: &TravelTimeMap,
    a: f64,
    b: f64,
    k: Complex64,
    spec: &SeriesSpec,
    shift: f64,
) -> Result<Complex64> {
    Simplex::new(c, tt, *spec).regularized_sum(a, b, k, shift)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coefficient::DEFAULT_TAU_TOL;

    fn setup(c: Conductivity) -> (Conductivity, TravelTimeMap) {
        let tt = TravelTimeMap::build(&c, DEFAULT_TAU_TOL).unwrap();
        (c, tt)
    }

    /// Adaptive Simpson, independent of the Gauss–Legendre machinery.
    fn adaptive_simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> f64 {
        fn rec<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, fa: f64, fm: f64, fb: f64, whole: f64, tol: f64, depth: u32) -> f64 {
            let m = 0.5 * (a + b);
            let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
            let (flm, frm) = (f(lm), f(rm));
            let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
            let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
            if depth == 0 || (left + right - whole).abs() <= 15.0 * tol {
                left + right + (left + right - whole) / 15.0
            } else {
                rec(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1) + rec(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1)
            }
        }
        let (fa, fb, fm) = (f(a), f(b), f(0.5 * (a + b)));
        let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
        rec(f, a, b, fa, fm, fb, whole, tol, 40)
    }

    #[test]
    fn zeroth_order_is_plain_sine() {
        let (c, tt) = setup(Conductivity::parabolic24());
        let spec = SeriesSpec::new(2).unwrap();
        let k = Complex64::new(1.3, 0.4);
        let s0 = simplex_integral(&c, &tt, 0, 0.0, 1.0, k, &spec).unwrap();
        assert!((s0 - (k * tt.total()).sin()).norm() < 1e-14);
    }

    #[test]
    fn constant_coefficient_kills_higher_orders() {
        let (c, tt) = setup(Conductivity::constant(1.0).unwrap());
        let spec = SeriesSpec::new(3).unwrap();
        for n in 1..=3 {
            let s = simplex_integral(&c, &tt, n, 0.1, 0.8, Complex64::new(2.0, 0.5), &spec).unwrap();
            assert_eq!(s, Complex64::new(0.0, 0.0));
            let r = regularized_simplex_integral(&c, &tt, n, 0.0, 1.0, Complex64::new(0.0, 4.0), &spec, 1.0).unwrap();
            assert_eq!(r, Complex64::new(0.0, 0.0));
        }
        let sum = series_sum(&c, &tt, 0.0, 1.0, Complex64::new(0.7, 0.0), &spec).unwrap();
        assert!((sum.re - 0.7f64.sin()).abs() < 1e-15);
    }

    #[test]
    fn first_order_matches_adaptive_oracle() {
        let (c, tt) = setup(Conductivity::parabolic24());
        let spec = SeriesSpec::new(1).unwrap();
        let total = tt.total();
        let oracle = 0.5 * adaptive_simpson(&|y: f64| c.mu(y) * (2.0 * tt.tau(y) - total).sin(), 0.0, 1.0, 1e-13);
        let s1 = simplex_integral(&c, &tt, 1, 0.0, 1.0, Complex64::new(1.0, 0.0), &spec).unwrap();
        assert!((s1.re - oracle).abs() < 1e-8, "{} vs {oracle}", s1.re);
        assert!(s1.im.abs() < 1e-15);
    }

    #[test]
    fn regularized_closed_form() {
        let (c, tt) = setup(Conductivity::constant(1.0).unwrap());
        let spec = SeriesSpec::new(0).unwrap();
        let k = Complex64::new(0.0, 10.0);
        let r = regularized_simplex_integral(&c, &tt, 0, 0.0, 1.0, k, &spec, 1.0).unwrap();
        let expect = Complex64::new(0.0, 0.5 * (1.0 - (-20f64).exp()));
        assert!((r - expect).norm() < 1e-15, "{r}");
    }

    #[test]
    fn regularized_agrees_with_plain_path() {
        let (c, tt) = setup(Conductivity::parabolic24());
        let spec = SeriesSpec::new(2).unwrap();
        let k = Complex64::from_polar(5.0, std::f64::consts::PI / 8.0);
        let plain = simplex_integral(&c, &tt, 2, 0.0, 1.0, k, &spec).unwrap();
        let reg = regularized_simplex_integral(&c, &tt, 2, 0.0, 1.0, k, &spec, tt.total()).unwrap();
        let lifted = (Complex64::i() * k * tt.total()).exp() * plain;
        assert!((reg - lifted).norm() < 1e-10, "{reg} vs {lifted}");
    }

    #[test]
    fn shift_too_small_is_rejected() {
        let (c, tt) = setup(Conductivity::parabolic24());
        let spec = SeriesSpec::new(1).unwrap();
        let err = regularized_simplex_integral(&c, &tt, 1, 0.0, 1.0, Complex64::new(1.0, 1.0), &spec, 1.0);
        assert!(matches!(err, Err(Error::ShiftTooSmall { .. })));
    }

    #[test]
    fn empty_interval_and_domain_errors() {
        let (c, tt) = setup(Conductivity::parabolic24());
        let spec = SeriesSpec::new(3).unwrap();
        let s = series_sum(&c, &tt, 0.4, 0.4, Complex64::new(3.0, 1.0), &spec).unwrap();
        assert_eq!(s, Complex64::new(0.0, 0.0));
        assert!(matches!(
            simplex_integral(&c, &tt, 1, 0.6, 0.2, Complex64::new(1.0, 0.0), &spec),
            Err(Error::DomainError { .. })
        ));
        assert!(matches!(
            simplex_integral(&c, &tt, 7, 0.0, 1.0, Complex64::new(1.0, 0.0), &spec),
            Err(Error::OrderTooHigh { .. })
        ));
        assert!(matches!(SeriesSpec::new(9), Err(Error::OrderTooHigh { .. })));
    }

    #[test]
    fn partial_sums_decay_within_factorial_bound() {
        let (c, tt) = setup(Conductivity::parabolic24());
        let spec = SeriesSpec::new(3).unwrap();
        let sx = Simplex::new(&c, &tt, spec);
        let k = Complex64::new(2.0, 0.0);
        let terms = sx.terms(0.0, 1.0, k).unwrap();
        let variation = c.total_variation_log(0.0, 1.0);
        assert!((variation - 1.5f64.ln()).abs() < 1e-10);
        for (n, t) in terms.iter().enumerate() {
            assert!(t.norm() <= sx.term_bound(n, 0.0, 1.0, k) + 1e-15, "n={n}");
        }
        // Cauchy tails: successive partial sums move by less than the bound on the next term.
        let mut partial = Complex64::new(0.0, 0.0);
        let mut prev_step = f64::INFINITY;
        for (n, t) in terms.iter().enumerate() {
            partial += t;
            if n >= 1 {
                assert!(t.norm() < prev_step);
            }
            prev_step = t.norm();
        }
        assert!(partial.norm().is_finite());
    }

    #[test]
    fn doubling_quad_order_is_below_tolerance() {
        let (c, tt) = setup(Conductivity::rational9000());
        let spec = SeriesSpec::new(2).unwrap();
        let sx = Simplex::new(&c, &tt, spec);
        for n in 0..=2 {
            let e = sx.term_error_estimate(n, 0.0, 1.0, Complex64::new(3.0, 0.5)).unwrap();
            assert!(e < spec.tol, "n={n}: {e}");
        }
    }

    #[test]
    fn real_path_matches_complex_path() {
        let (c, tt) = setup(Conductivity::rational9000());
        let spec = SeriesSpec::new(2).unwrap();
        let sx = Simplex::new(&c, &tt, spec);
        for n in 0..=2 {
            let r = sx.term_real(n, 0.1, 0.9, 2.7).unwrap();
            let z = sx.term(n, 0.1, 0.9, Complex64::new(2.7, 0.0)).unwrap();
            assert!((r - z.re).abs() < 1e-15 && z.im.abs() < 1e-15);
        }
    }
}
