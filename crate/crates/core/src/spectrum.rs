//! Dirichlet spectrum of `(σ² y')' = λ y` on `(0, 1)`.
//!
//! Eigenvalues are `λ_m = −κ_m²` with `κ_m` the positive zeros of `Δ_N`, and
//!
//! ```text
//! X_m(x) = σ(x)^{−1/2} Σ_{n ≤ N} S_n^{(0,x)}(κ_m).
//! ```
//!
//! The printed eigenfunction formula evaluates `S_n^{(0,x)}` at `κ_n`, with
//! the summation index as subscript. That is read as `κ_m`; for constant `σ`
//! only `n = 0` survives and `κ_m` reproduces `sin(mπx)`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::coefficient::{Conductivity, TravelTimeMap};
use crate::error::{check_unit, Error, Result};
use crate::profile::PanelGrid;
use crate::simplex::{SeriesSpec, Simplex};

/// Bisection stops once the bracket is this narrow.
pub const BISECTION_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EigenPair {
    /// Mode index, starting at 1.
    pub m: usize,
    pub kappa: f64,
    pub lambda: f64,
    pub truncation: usize,
    /// `|Δ_N(κ)|`.
    pub residual: f64,
}

fn delta(sx: &Simplex<'_>, k: f64) -> Result<f64> {
    sx.sum_real(0.0, 1.0, k)
}

/// First `count` positive zeros of `Δ_N` on the real axis.
///
/// Sign changes are bracketed on a uniform scan of step `π/(8τ(1))` up to
/// `(2·count + 4)π/τ(1)`, bisected, then Newton-polished.
pub fn find_eigenvalues(c: &Conductivity, tt: &TravelTimeMap, spec: &SeriesSpec, count: usize) -> Result<Vec<EigenPair>> {
    if count == 0 {
        return Err(Error::InvalidParameter("eigenvalue count must be at least 1".into()));
    }
    let spec = spec.validate()?;
    let sx = Simplex::new(c, tt, spec);
    let step = PI / (8.0 * tt.total());
    let ceiling = (2 * count + 4) as f64 * PI / tt.total();

    let mut brackets = Vec::with_capacity(count);
    let mut a = 0.5 * step;
    let mut fa = delta(&sx, a)?;
    while brackets.len() < count && a < ceiling {
        let b = a + step;
        let fb = delta(&sx, b)?;
        if fb == 0.0 {
            brackets.push((b, b));
            // skip past the exact zero
            a = b + 0.5 * step;
            fa = delta(&sx, a)?;
            continue;
        }
        if fa.signum() != fb.signum() {
            brackets.push((a, b));
        }
        a = b;
        fa = fb;
    }
    if brackets.len() < count {
        return Err(Error::RootMissed { found: brackets.len(), wanted: count, ceiling });
    }

    brackets
        .into_iter()
        .enumerate()
        .map(|(i, (lo, hi))| {
            let kappa = polish(&sx, lo, hi)?;
            Ok(EigenPair { m: i + 1, kappa, lambda: -kappa * kappa, truncation: spec.truncation, residual: delta(&sx, kappa)?.abs() })
        })
        .collect()
}

fn polish(sx: &Simplex<'_>, mut lo: f64, mut hi: f64) -> Result<f64> {
    if lo == hi {
        return Ok(lo);
    }
    let mut flo = delta(sx, lo)?;
    for _ in 0..200 {
        if hi - lo <= BISECTION_TOL {
            break;
        }
        let mid = 0.5 * (lo + hi);
        let fm = delta(sx, mid)?;
        if fm == 0.0 {
            return Ok(mid);
        }
        if fm.signum() == flo.signum() {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    if hi - lo > BISECTION_TOL {
        return Err(Error::NoConvergence(0.5 * (lo + hi)));
    }
    let (lo, hi) = (lo - BISECTION_TOL, hi + BISECTION_TOL);
    let mut k = 0.5 * (lo + hi);
    for _ in 0..8 {
        let f = delta(sx, k)?;
        let h = 1e-5 * k.max(1.0);
        let df = (delta(sx, k + h)? - delta(sx, k - h)?) / (2.0 * h);
        if df == 0.0 || !df.is_finite() {
            break;
        }
        let next = k - f / df;
        if !(lo..=hi).contains(&next) {
            return Err(Error::NoConvergence(k));
        }
        let done = (next - k).abs() <= 4.0 * f64::EPSILON * k;
        k = next;
        if done {
            break;
        }
    }
    Ok(k)
}

/// Normalized eigenfunction `X_m`, with unit `L²` norm and `X'(0) > 0`.
#[derive(Debug, Clone)]
pub struct Eigenfunction<'a> {
    pub pair: EigenPair,
    c: &'a Conductivity,
    tt: &'a TravelTimeMap,
    spec: SeriesSpec,
    scale: f64,
}

/// Panels used for the normalization integral.
const NORM_PANELS: usize = 64;

pub fn eigenfunction<'a>(c: &'a Conductivity, tt: &'a TravelTimeMap, pair: EigenPair, spec: &SeriesSpec) -> Result<Eigenfunction<'a>> {
    let spec = spec.validate()?;
    if !(pair.kappa > 0.0) {
        return Err(Error::DomainError { what: "kappa > 0", value: pair.kappa });
    }
    let grid = PanelGrid::new(c, tt, NORM_PANELS.max(PanelGrid::panels_for(tt, pair.kappa)), &[]);
    let raw = raw_on_nodes(&grid, tt, pair.kappa, spec.truncation, c);
    let norm2: f64 = raw.iter().zip(grid.weights()).map(|(v, w)| v * v * w).sum();
    // slope sign at the origin, from the first node
    let sign = if raw[0] >= 0.0 { 1.0 } else { -1.0 };
    Ok(Eigenfunction { pair, c, tt, spec, scale: sign / norm2.sqrt() })
}

fn raw_on_nodes(grid: &PanelGrid, tt: &TravelTimeMap, kappa: f64, truncation: usize, c: &Conductivity) -> Vec<f64> {
    let k = Complex64::new(kappa, 0.0);
    let prof = grid.profile(k, truncation);
    grid.nodes()
        .iter()
        .zip(&prof.left_nodes)
        .map(|(&y, l)| (l * Complex64::from_polar(1.0, -kappa * tt.tau(y))).re / c.sigma(y).sqrt())
        .collect()
}

impl<'a> Eigenfunction<'a> {
    /// Normalization factor applied to `σ^{−1/2} Σ S_n^{(0,x)}`.
    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn eval(&self, x: f64) -> Result<f64> {
        check_unit("x in [0, 1]", x)?;
        let sx = Simplex::new(self.c, self.tt, self.spec);
        Ok(self.scale * sx.sum_real(0.0, x, self.pair.kappa)? / self.c.sigma(x).sqrt())
    }

    /// Values on many points at once, through one panel sweep.
    pub fn sample(&self, xs: &[f64]) -> Result<Vec<f64>> {
        for &x in xs {
            check_unit("x in [0, 1]", x)?;
        }
        let grid = PanelGrid::new(self.c, self.tt, PanelGrid::panels_for(self.tt, self.pair.kappa), xs);
        let prof = grid.profile(Complex64::new(self.pair.kappa, 0.0), self.spec.truncation);
        Ok(xs
            .iter()
            .map(|&x| {
                let i = grid.break_index(x).expect("x is a breakpoint");
                let phase = Complex64::from_polar(1.0, -self.pair.kappa * self.tt.tau(x));
                self.scale * (prof.left(i) * phase).re / self.c.sigma(x).sqrt()
            })
            .collect())
    }
}

/// Zeros of `Δ_N` inside the rectangle `[re.0, re.1] × [im.0, im.1]`, by
/// the winding number of `Δ_N` along its boundary. Sides are subdivided
/// until each step turns the phase by less than `π/4`, starting from
/// steps no longer than a quarter of the root spacing `π/τ(1)`.
pub fn count_zeros(c: &Conductivity, tt: &TravelTimeMap, spec: &SeriesSpec, re: (f64, f64), im: (f64, f64)) -> Result<usize> {
    let sx = Simplex::new(c, tt, spec.validate()?);
    let corners = [
        Complex64::new(re.0, im.0),
        Complex64::new(re.1, im.0),
        Complex64::new(re.1, im.1),
        Complex64::new(re.0, im.1),
    ];
    let f = |k: Complex64| sx.sum(0.0, 1.0, k);
    let mut winding = 0.0;
    for side in 0..4 {
        let (a, b) = (corners[side], corners[(side + 1) % 4]);
        // start from pieces shorter than a quarter of the root spacing
        let pieces = ((b - a).norm() * tt.total() * 4.0 / PI).ceil().max(4.0) as usize;
        let mut stack = Vec::with_capacity(pieces);
        let mut right = f(b)?;
        for p in (0..pieces).rev() {
            let s0 = p as f64 / pieces as f64;
            let s1 = (p + 1) as f64 / pieces as f64;
            let left = f(a + (b - a) * s0)?;
            stack.push((s0, s1, left, right));
            right = left;
        }
        while let Some((s0, s1, f0, f1)) = stack.pop() {
            if f0.norm() == 0.0 || f1.norm() == 0.0 {
                return Err(Error::DenominatorNearZero { re: a.re, im: a.im, magnitude: 0.0 });
            }
            let turn = (f1 / f0).arg();
            if turn.abs() < PI / 4.0 || s1 - s0 < 1e-10 {
                winding += turn;
                continue;
            }
            let sm = 0.5 * (s0 + s1);
            let fm = f(a + (b - a) * sm)?;
            // push right half first so the left half is processed next
            stack.push((sm, s1, fm, f1));
            stack.push((s0, sm, f0, fm));
        }
    }
    let n = (winding / (2.0 * PI)).round();
    Ok(n.max(0.0) as usize)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coefficient::DEFAULT_TAU_TOL;

    fn setup(c: Conductivity) -> (Conductivity, TravelTimeMap) {
        let tt = TravelTimeMap::build(&c, DEFAULT_TAU_TOL).unwrap();
        (c, tt)
    }

    #[test]
    fn constant_eigenvalues() {
        let (c, tt) = setup(Conductivity::constant(1.0).unwrap());
        for n in 0..3 {
            let pairs = find_eigenvalues(&c, &tt, &SeriesSpec::new(n).unwrap(), 3).unwrap();
            for p in &pairs {
                let exact = -(p.m as f64 * PI).powi(2);
                assert!((p.lambda - exact).abs() < 1e-10, "{p:?}");
            }
        }
        let (c, tt) = setup(Conductivity::constant(2.0).unwrap());
        let pairs = find_eigenvalues(&c, &tt, &SeriesSpec::new(0).unwrap(), 2).unwrap();
        assert!((pairs[1].kappa - 4.0 * PI).abs() < 1e-10);
    }

    #[test]
    fn constant_modes_are_sines() {
        let (c, tt) = setup(Conductivity::constant(1.0).unwrap());
        let spec = SeriesSpec::new(1).unwrap();
        let pairs = find_eigenvalues(&c, &tt, &spec, 3).unwrap();
        for p in pairs {
            let f = eigenfunction(&c, &tt, p, &spec).unwrap();
            let xs: Vec<f64> = (0..=20).map(|i| i as f64 / 20.0).collect();
            let bulk = f.sample(&xs).unwrap();
            for (&x, v) in xs.iter().zip(bulk) {
                let exact = 2f64.sqrt() * (p.m as f64 * PI * x).sin();
                assert!((f.eval(x).unwrap() - exact).abs() < 1e-9, "m={} x={x}", p.m);
                assert!((v - exact).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn parabolic_first_eigenvalue_near_minus_one() {
        let (c, tt) = setup(Conductivity::parabolic24());
        let pairs = find_eigenvalues(&c, &tt, &SeriesSpec::new(2).unwrap(), 1).unwrap();
        assert!((pairs[0].lambda + 1.000636).abs() < 5e-6, "{:?}", pairs[0]);
        assert!(pairs[0].residual < 1e-12);
    }

    #[test]
    fn zero_count_matches_real_roots() {
        let (c, tt) = setup(Conductivity::parabolic24());
        let spec = SeriesSpec::new(2).unwrap();
        let pairs = find_eigenvalues(&c, &tt, &spec, 4).unwrap();
        let lo = 0.5 * pairs[0].kappa;
        let hi = 0.5 * (pairs[2].kappa + pairs[3].kappa);
        assert_eq!(count_zeros(&c, &tt, &spec, (lo, hi), (-0.5, 1.0)).unwrap(), 3);
        // a box with no zeros
        assert_eq!(count_zeros(&c, &tt, &spec, (lo, hi), (0.5, 1.0)).unwrap(), 0);
    }

    #[test]
    fn rejects_zero_count() {
        let (c, tt) = setup(Conductivity::parabolic24());
        assert!(find_eigenvalues(&c, &tt, &SeriesSpec::new(0).unwrap(), 0).is_err());
    }
}
