//! Reproduction checks, grouped into numbered criteria. Each criterion
//! returns a report of individual checks with measured and expected values.

use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::coefficient::{Conductivity, TravelTimeMap, DEFAULT_TAU_TOL};
use crate::error::Result;
use crate::oracles::{crank_nicolson, dn_bruteforce, dn_switchform, dn_via_det, fd_eigenvalues, InterfacePartition};
use crate::quadrature::GaussLegendre;
use crate::simplex::{SeriesSpec, Simplex};
use crate::spectrum::{eigenfunction, find_eigenvalues};
use crate::transform::{delta_fn, solve_grid, Contour};

/// Published eigenvalues from the roots of `Δ_N`, `N = 0, 1, 2`, for
/// `σ² = (3 − (2x−1)²)/24`.
pub const PUBLISHED_ROOT_EIGENVALUES: [[f64; 4]; 3] = [
    [-1.0856, -4.3423, -9.7702, -17.3692],
    [-0.9917, -4.2474, -9.6749, -17.2737],
    [-1.0006, -4.2542, -9.6814, -17.2801],
];

/// Published reference eigenvalues for the same coefficient.
pub const PUBLISHED_REFERENCE_EIGENVALUES: [f64; 4] = [-1.0000, -4.2540, -9.6812, -17.2800];

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub label: String,
    pub measured: f64,
    pub expected: String,
    pub passed: bool,
}

impl Check {
    fn within(label: impl Into<String>, measured: f64, target: f64, tol: f64) -> Self {
        Self {
            label: label.into(),
            measured,
            expected: format!("{target} ± {tol:e}"),
            passed: (measured - target).abs() <= tol,
        }
    }

    fn at_most(label: impl Into<String>, measured: f64, bound: f64) -> Self {
        Self { label: label.into(), measured, expected: format!("<= {bound:e}"), passed: measured <= bound }
    }

    fn at_least(label: impl Into<String>, measured: f64, bound: f64) -> Self {
        Self { label: label.into(), measured, expected: format!(">= {bound}"), passed: measured >= bound }
    }

    fn positive(label: impl Into<String>, measured: f64) -> Self {
        Self { label: label.into(), measured, expected: "> 0".into(), passed: measured > 0.0 }
    }

    fn info(label: impl Into<String>, measured: f64) -> Self {
        Self { label: label.into(), measured, expected: "(informational)".into(), passed: true }
    }

    fn exactly(label: impl Into<String>, measured: usize, expected: usize) -> Self {
        Self { label: label.into(), measured: measured as f64, expected: expected.to_string(), passed: measured == expected }
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = if self.passed { "ok  " } else { "FAIL" };
        write!(f, "  [{tag}] {}: measured {:.6e}, expected {}", self.label, self.measured, self.expected)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CriterionReport {
    pub id: usize,
    pub title: &'static str,
    pub checks: Vec<Check>,
}

impl CriterionReport {
    pub fn passed(&self) -> bool {
        !self.checks.is_empty() && self.checks.iter().all(|c| c.passed)
    }

    /// One-line verdict.
    pub fn summary(&self) -> String {
        let failed = self.checks.iter().filter(|c| !c.passed).count();
        let verdict = if self.passed() { "PASS" } else { "FAIL" };
        format!("criterion {} {verdict}: {} ({} checks, {failed} failed)", self.id, self.title, self.checks.len())
    }
}

impl fmt::Display for CriterionReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", self.summary())?;
        for c in &self.checks {
            writeln!(f, "{c}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Table1,
    Figure2,
    Determinant,
    Convergence,
    All,
}

impl Suite {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "table1" => Some(Self::Table1),
            "figure2" => Some(Self::Figure2),
            "determinant" => Some(Self::Determinant),
            "convergence" => Some(Self::Convergence),
            "all" => Some(Self::All),
            _ => None,
        }
    }

    pub fn criteria(self) -> &'static [usize] {
        match self {
            Self::Table1 => &[1, 2],
            Self::Figure2 => &[3],
            Self::Determinant => &[5],
            Self::Convergence => &[6, 8],
            Self::All => &[1, 2, 3, 4, 5, 6, 7, 8],
        }
    }
}

pub fn run_criterion(id: usize) -> Result<CriterionReport> {
    match id {
        1 => root_eigenvalues(),
        2 => reference_eigenvalues(),
        3 => exact_solution_benchmark(),
        4 => constant_coefficient(),
        5 => determinant_identity(),
        6 => discrete_convergence(),
        7 => eigenfunction_properties(),
        8 => term_bounds(),
        _ => Err(crate::Error::InvalidParameter(format!("no criterion {id}"))),
    }
}

pub fn run_suite(suite: Suite) -> Result<Vec<CriterionReport>> {
    suite.criteria().iter().map(|&id| run_criterion(id)).collect()
}

fn parabolic() -> Result<(Conductivity, TravelTimeMap)> {
    let c = Conductivity::parabolic24();
    let tt = TravelTimeMap::build(&c, DEFAULT_TAU_TOL)?;
    Ok((c, tt))
}

/// Eigenvalues from `Δ_N` roots against the published values.
pub fn root_eigenvalues() -> Result<CriterionReport> {
    let (c, tt) = parabolic()?;
    let mut checks = Vec::new();
    for (n, published) in PUBLISHED_ROOT_EIGENVALUES.iter().enumerate() {
        let pairs = find_eigenvalues(&c, &tt, &SeriesSpec::new(n)?, 4)?;
        for (p, &target) in pairs.iter().zip(published) {
            checks.push(Check::within(format!("N={n} λ_{}", p.m), p.lambda, target, 5e-4));
        }
    }
    Ok(CriterionReport { id: 1, title: "eigenvalues from roots of Δ_N, N = 0, 1, 2", checks })
}

/// Extrapolated finite-difference eigenvalues against the published reference.
pub fn reference_eigenvalues() -> Result<CriterionReport> {
    let c = Conductivity::parabolic24();
    let fd = fd_eigenvalues(&c, 4, 400)?;
    let checks = fd
        .iter()
        .zip(PUBLISHED_REFERENCE_EIGENVALUES)
        .enumerate()
        .map(|(m, (&l, target))| Check::within(format!("λ_{}", m + 1), l, target, 1e-3))
        .collect();
    Ok(CriterionReport { id: 2, title: "finite-difference reference eigenvalues", checks })
}

/// `q_N` against `x(1−x)e^{−t}` and against Crank–Nicolson.
pub fn exact_solution_benchmark() -> Result<CriterionReport> {
    let (c, tt) = parabolic()?;
    let q0 = |x: f64| x * (1.0 - x);
    let xs: Vec<f64> = (0..=20).map(|i| i as f64 / 20.0).collect();
    let ts = [0.25, 1.0, 4.0];
    let exact = |x: f64, t: f64| x * (1.0 - x) * (-t).exp();
    let contour = Contour::default();

    let mut errors = Vec::new();
    let mut samples = Vec::new();
    for n in 0..=2 {
        let out = solve_grid(&c, &tt, q0, &xs, &ts, &SeriesSpec::new(n)?, &contour)?;
        errors.push(out.iter().map(|s| (s.value - exact(s.x, s.t)).abs()).fold(0.0, f64::max));
        samples.push(out);
    }
    let mut checks = vec![
        Check::positive("max error N=0 minus N=1", errors[0] - errors[1]),
        Check::positive("max error N=1 minus N=2", errors[1] - errors[2]),
        Check::at_most("max error N=2", errors[2], 5e-3),
    ];
    for (n, e) in errors.iter().enumerate() {
        checks.push(Check::info(format!("max error N={n}"), *e));
    }

    let mut cn_exact = 0.0f64;
    let mut cn_gap = 0.0f64;
    for &t in &ts {
        let steps = (400.0 * t.max(1.0)) as usize;
        let cn = crank_nicolson(&c, q0, t, 400, steps)?;
        for s in samples[2].iter().filter(|s| s.t == t) {
            let v = cn.value_at(s.x);
            cn_exact = cn_exact.max((v - exact(s.x, t)).abs());
            cn_gap = cn_gap.max((v - s.value).abs());
        }
    }
    checks.push(Check::at_most("Crank–Nicolson max error", cn_exact, 1e-5));
    checks.push(Check::at_most("max |q_2 − Crank–Nicolson|", cn_gap, 5e-3 + cn_exact));
    Ok(CriterionReport { id: 3, title: "exact-solution benchmark, error decreasing in N", checks })
}

/// `σ ≡ 1` solution and spectrum.
pub fn constant_coefficient() -> Result<CriterionReport> {
    let c = Conductivity::constant(1.0)?;
    let tt = TravelTimeMap::build(&c, DEFAULT_TAU_TOL)?;
    let xs: Vec<f64> = (0..=10).map(|i| i as f64 / 10.0).collect();
    let ts = [0.1, 0.5, 1.0];
    let mut checks = Vec::new();
    for n in 0..=2 {
        let spec = SeriesSpec::new(n)?;
        let out = solve_grid(&c, &tt, |x| (PI * x).sin(), &xs, &ts, &spec, &Contour::default())?;
        let err = out.iter().map(|s| (s.value - (-PI * PI * s.t).exp() * (PI * s.x).sin()).abs()).fold(0.0, f64::max);
        checks.push(Check::at_most(format!("N={n} max solution error"), err, 1e-6));
        let pairs = find_eigenvalues(&c, &tt, &spec, 3)?;
        let err = pairs.iter().map(|p| (p.lambda + (p.m as f64 * PI).powi(2)).abs()).fold(0.0, f64::max);
        checks.push(Check::at_most(format!("N={n} max eigenvalue error"), err, 1e-10));
    }
    Ok(CriterionReport { id: 4, title: "constant-coefficient exactness", checks })
}

fn random_partition(rng: &mut ChaCha8Rng, n: usize) -> Result<InterfacePartition> {
    let mut inner: Vec<f64> = (0..n - 1).map(|_| rng.gen_range(0.01..0.99)).collect();
    inner.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mut nodes = vec![0.0];
    nodes.extend(inner);
    nodes.push(1.0);
    nodes.dedup();
    let sigmas = (0..nodes.len() - 1).map(|_| rng.gen_range(0.2..2.0)).collect();
    InterfacePartition::new(nodes, sigmas)
}

/// `(i/2) det A ∏ 1/Λ⁺` against the binary sum on random partitions.
pub fn determinant_identity() -> Result<CriterionReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(20_240_601);
    let cases = 240;
    let mut worst = 0.0f64;
    let mut complex_cases = 0;
    let mut failures = 0;
    for _ in 0..cases {
        let n = rng.gen_range(1..=10);
        let part = random_partition(&mut rng, n)?;
        let k = Complex64::new(rng.gen_range(-5.0..5.0), rng.gen_range(-2.0..2.0));
        if k.im.abs() > 0.5 {
            complex_cases += 1;
        }
        let det = dn_via_det(&part, k);
        let brute = dn_bruteforce(&part, k)?;
        let err = (det - brute).norm() / brute.norm().max(1.0);
        worst = worst.max(err);
        if err > 1e-10 {
            failures += 1;
        }
    }
    let checks = vec![
        Check::at_most("worst scaled discrepancy", worst, 1e-10),
        Check::exactly("cases outside tolerance", failures, 0),
        Check::at_least("cases run", cases as f64, 200.0),
        Check::at_least("cases with |Im k| > 0.5", complex_cases as f64, 50.0),
    ];
    Ok(CriterionReport { id: 5, title: "determinant identity against brute-force sums", checks })
}

/// Empirical order of `|D_N^{(3)} − Δ_3|` in `1/N`.
pub fn discrete_convergence() -> Result<CriterionReport> {
    let (c, tt) = parabolic()?;
    let spec = SeriesSpec::new(3)?;
    let sizes = [250, 500, 1000, 2000];
    let mut checks = Vec::new();
    for k in [0.5, 1.0, 2.0] {
        let kc = Complex64::new(k, 0.0);
        let limit = delta_fn(&c, &tt, kc, &spec)?;
        let mut errs = Vec::new();
        for &n in &sizes {
            let part = InterfacePartition::uniform(&c, n)?;
            errs.push((dn_switchform(&part, kc, 3)? - limit).norm());
        }
        for (i, w) in errs.windows(2).enumerate() {
            let order = (w[0] / w[1]).log2();
            checks.push(Check::at_least(format!("k={k} order N={}→{}", sizes[i], sizes[i + 1]), order, 0.9));
        }
    }
    Ok(CriterionReport { id: 6, title: "discrete model converges to Δ_3", checks })
}

/// Finite-difference weights for the `order`-th derivative at `z` on
/// `points` (Fornberg's recursion).
fn fd_weights(z: f64, points: &[f64], order: usize) -> Vec<f64> {
    let n = points.len();
    let mut c = vec![vec![0.0; order + 1]; n];
    let mut c1 = 1.0;
    let mut c4 = points[0] - z;
    c[0][0] = 1.0;
    for i in 1..n {
        let mn = i.min(order);
        let mut c2 = 1.0;
        let c5 = c4;
        c4 = points[i] - z;
        for j in 0..i {
            let c3 = points[i] - points[j];
            c2 *= c3;
            if j == i - 1 {
                for k in (1..=mn).rev() {
                    c[i][k] = c1 * (k as f64 * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
                }
                c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
            }
            for k in (1..=mn).rev() {
                c[j][k] = (c4 * c[j][k] - k as f64 * c[j][k - 1]) / c3;
            }
            c[j][0] = c4 * c[j][0] / c3;
        }
        c1 = c2;
    }
    c.into_iter().map(|row| row[order]).collect()
}

/// Boundary values, ODE residual, orthogonality and nodal count of `X_m^{(2)}`.
pub fn eigenfunction_properties() -> Result<CriterionReport> {
    let (c, tt) = parabolic()?;
    let spec = SeriesSpec::new(2)?;
    let pairs = find_eigenvalues(&c, &tt, &spec, 4)?;
    let funs: Vec<_> = pairs.iter().map(|&p| eigenfunction(&c, &tt, p, &spec)).collect::<Result<_>>()?;
    let mut checks = Vec::new();

    let grid: Vec<f64> = (0..=200).map(|i| i as f64 / 200.0).collect();
    let h = 2e-3;
    for f in &funs {
        let m = f.pair.m;
        let boundary = f.eval(0.0)?.abs().max(f.eval(1.0)?.abs());
        checks.push(Check::at_most(format!("m={m} boundary values"), boundary, 1e-8));

        let mut residual = 0.0f64;
        for &x in &grid {
            // seven-point stencil, shifted inward near the ends
            let first = ((x / h).round() as i64 - 3).clamp(0, ((1.0 - 6.0 * h) / h).round() as i64);
            let pts: Vec<f64> = (0..7).map(|j| ((first + j) as f64 * h).min(1.0)).collect();
            let vals: Vec<f64> = pts.iter().map(|&p| f.eval(p)).collect::<Result<_>>()?;
            let d1: f64 = fd_weights(x, &pts, 1).iter().zip(&vals).map(|(w, v)| w * v).sum();
            let d2: f64 = fd_weights(x, &pts, 2).iter().zip(&vals).map(|(w, v)| w * v).sum();
            let x0: f64 = fd_weights(x, &pts, 0).iter().zip(&vals).map(|(w, v)| w * v).sum();
            let r = c.sigma_squared(x) * d2 + c.sigma_squared_derivative(x) * d1 - f.pair.lambda * x0;
            residual = residual.max(r.abs());
        }
        checks.push(Check::at_most(format!("m={m} ODE residual sup"), residual, 1e-3));

        let fine: Vec<f64> = (0..=2000).map(|i| i as f64 / 2000.0).collect();
        let vals = f.sample(&fine)?;
        let interior = &vals[1..vals.len() - 1];
        let scale = interior.iter().fold(0.0f64, |a, v| a.max(v.abs()));
        let signs: Vec<f64> = interior.iter().filter(|v| v.abs() > 1e-9 * scale).map(|v| v.signum()).collect();
        let changes = signs.windows(2).filter(|w| w[0] != w[1]).count();
        checks.push(Check::exactly(format!("m={m} interior sign changes"), changes, m - 1));
    }

    let rule = GaussLegendre::cached(16);
    let panels = 64;
    let nodes: Vec<(f64, f64)> = (0..panels)
        .flat_map(|p| rule.mapped(p as f64 / panels as f64, (p + 1) as f64 / panels as f64).collect::<Vec<_>>())
        .collect();
    let xs: Vec<f64> = nodes.iter().map(|n| n.0).collect();
    let values: Vec<Vec<f64>> = funs.iter().map(|f| f.sample(&xs)).collect::<Result<_>>()?;
    for i in 0..funs.len() {
        for j in i + 1..funs.len() {
            let ip: f64 = nodes.iter().enumerate().map(|(q, (_, w))| w * values[i][q] * values[j][q]).sum();
            checks.push(Check::at_most(format!("|<X_{}, X_{}>|", i + 1, j + 1), ip.abs(), 1e-3));
        }
    }
    Ok(CriterionReport { id: 7, title: "eigenfunction properties of X_m^{(2)}", checks })
}

/// Every term of a test matrix lies under the factorial bound.
pub fn term_bounds() -> Result<CriterionReport> {
    let xs: Vec<f64> = (0..=64).map(|i| i as f64 / 64.0).collect();
    let table: Vec<f64> = xs.iter().map(|&x| 0.3 + 0.2 * (3.0 * x).sin().powi(2)).collect();
    let coefficients = [Conductivity::parabolic24(), Conductivity::rational9000(), Conductivity::tabulated(xs, table)?];
    let intervals = [(0.0, 1.0), (0.2, 0.7), (0.5, 0.5), (0.05, 0.3), (0.6, 1.0)];
    let ks = [
        Complex64::new(0.5, 0.0),
        Complex64::new(2.0, 0.0),
        Complex64::new(7.0, 0.0),
        Complex64::new(3.0, 2.0),
        Complex64::new(-1.5, 0.8),
        Complex64::from_polar(5.0, PI / 8.0),
        Complex64::new(0.0, 3.0),
        Complex64::new(1.0, -1.0),
    ];
    let spec = SeriesSpec::new(4)?.with_quad_order(16)?;
    let mut worst = 0.0f64;
    let mut count = 0usize;
    let mut violations = 0usize;
    for c in &coefficients {
        let tt = TravelTimeMap::build(c, DEFAULT_TAU_TOL)?;
        let sx = Simplex::new(c, &tt, spec);
        for &(a, b) in &intervals {
            for &k in &ks {
                for n in 0..=spec.truncation {
                    let v = sx.term(n, a, b, k)?.norm();
                    let bound = sx.term_bound(n, a, b, k);
                    count += 1;
                    if bound > 0.0 {
                        worst = worst.max(v / bound);
                    }
                    if v > bound * (1.0 + 1e-12) + 1e-15 {
                        violations += 1;
                    }
                }
            }
        }
    }
    let checks = vec![
        Check::exactly("terms above bound", violations, 0),
        Check::at_most("largest |S_n| / bound", worst, 1.0 + 1e-12),
        Check::at_least("terms checked", count as f64, 100.0),
    ];
    Ok(CriterionReport { id: 8, title: "series terms under the factorial bound", checks })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fornberg_weights_match_classical_stencils() {
        let pts = [-1.0, 0.0, 1.0];
        let w = fd_weights(0.0, &pts, 2);
        assert!((w[0] - 1.0).abs() < 1e-14 && (w[1] + 2.0).abs() < 1e-14 && (w[2] - 1.0).abs() < 1e-14);
        let w = fd_weights(0.0, &pts, 1);
        assert!((w[0] + 0.5).abs() < 1e-14 && w[1].abs() < 1e-14 && (w[2] - 0.5).abs() < 1e-14);
        // one-sided stencil differentiates a cubic exactly
        let pts: Vec<f64> = (0..5).map(|i| i as f64 * 0.1).collect();
        let d: f64 = fd_weights(0.0, &pts, 1).iter().zip(&pts).map(|(w, x)| w * (x.powi(3) + 2.0 * x)).sum();
        assert!((d - 2.0).abs() < 1e-11);
    }

    #[test]
    fn suite_names_round_trip() {
        for name in ["table1", "figure2", "determinant", "convergence", "all"] {
            assert!(Suite::parse(name).is_some());
        }
        assert!(Suite::parse("figure9").is_none());
        assert_eq!(Suite::All.criteria().len(), 8);
    }
}
