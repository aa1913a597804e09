//! Gauss–Legendre rules on `[-1, 1]` and the spectral integration matrix
//! used for cumulative (indefinite) integrals on panels.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::{Arc, OnceLock, RwLock};

/// An `n`-point Gauss–Legendre rule on `[-1, 1]`, nodes ascending.
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

/// Legendre polynomial `P_n(x)` and its derivative by the three-term recurrence.
fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for j in 2..=n {
        let j = j as f64;
        let p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
        p0 = p1;
        p1 = p2;
    }
    let n = n as f64;
    let dp = n * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

/// All Legendre polynomials `P_0 ..= P_n` at `x`.
fn legendre_all(n: usize, x: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(n + 1);
    out.push(1.0);
    if n >= 1 {
        out.push(x);
    }
    for j in 2..=n {
        let jf = j as f64;
        let v = ((2.0 * jf - 1.0) * x * out[j - 1] - (jf - 1.0) * out[j - 2]) / jf;
        out.push(v);
    }
    out
}

impl GaussLegendre {
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "Gauss-Legendre rule needs at least one node");
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let m = n.div_ceil(2);
        for i in 0..m {
            // Tricomi's initial guess, then Newton.
            let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            for _ in 0..100 {
                let (p, dp) = legendre_with_derivative(n, x);
                let dx = p / dp;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, dp) = legendre_with_derivative(n, x);
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        if n % 2 == 1 {
            nodes[n / 2] = 0.0;
        }
        Self { nodes, weights }
    }

    /// Shared rule for `n` nodes.
    pub fn cached(n: usize) -> Arc<GaussLegendre> {
        static CACHE: OnceLock<RwLock<HashMap<usize, Arc<GaussLegendre>>>> = OnceLock::new();
        let cache = CACHE.get_or_init(|| RwLock::new(HashMap::new()));
        if let Some(rule) = cache.read().expect("quadrature cache poisoned").get(&n) {
            return Arc::clone(rule);
        }
        let rule = Arc::new(GaussLegendre::new(n));
        cache
            .write()
            .expect("quadrature cache poisoned")
            .entry(n)
            .or_insert(rule)
            .clone()
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Nodes and weights mapped to `[a, b]`.
    pub fn mapped(&self, a: f64, b: f64) -> impl Iterator<Item = (f64, f64)> + '_ {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(move |(&x, &w)| (mid + half * x, half * w))
    }

    /// `∫_a^b f` with this rule.
    pub fn integrate<F: FnMut(f64) -> f64>(&self, a: f64, b: f64, mut f: F) -> f64 {
        self.mapped(a, b).map(|(x, w)| w * f(x)).sum()
    }

    /// `∫_a^b f` on `panels` equal sub-intervals.
    pub fn integrate_composite<F: FnMut(f64) -> f64>(
        &self,
        a: f64,
        b: f64,
        panels: usize,
        mut f: F,
    ) -> f64 {
        let h = (b - a) / panels as f64;
        (0..panels)
            .map(|p| {
                let lo = a + h * p as f64;
                self.integrate(lo, lo + h, &mut f)
            })
            .sum()
    }

    /// Row-major matrix `W[i][j] = ∫_{-1}^{x_i} ℓ_j(s) ds` where `ℓ_j` is the
    /// Lagrange basis on the rule's nodes. Multiplying nodal values by `W`
    /// gives the indefinite integral of their interpolant at the nodes.
    pub fn integration_matrix(&self) -> Vec<f64> {
        let n = self.len();
        let deg = n - 1;
        // ℓ_j = Σ_m c_{jm} P_m, c_{jm} = w_j P_m(x_j) (2m+1)/2, exact for deg ℓ_j P_m ≤ 2n-2.
        let basis_at_nodes: Vec<Vec<f64>> = self.nodes.iter().map(|&x| legendre_all(deg + 1, x)).collect();
        let mut out = vec![0.0; n * n];
        for i in 0..n {
            let pi = &basis_at_nodes[i];
            // ∫_{-1}^{x} P_0 = x + 1;  ∫_{-1}^{x} P_m = (P_{m+1} - P_{m-1}) / (2m+1).
            let integrals: Vec<f64> = (0..=deg)
                .map(|m| {
                    if m == 0 {
                        self.nodes[i] + 1.0
                    } else {
                        (pi[m + 1] - pi[m - 1]) / (2 * m + 1) as f64
                    }
                })
                .collect();
            for j in 0..n {
                let pj = &basis_at_nodes[j];
                let mut acc = 0.0;
                for m in 0..=deg {
                    let c = self.weights[j] * pj[m] * (2 * m + 1) as f64 / 2.0;
                    acc += c * integrals[m];
                }
                out[i * n + j] = acc;
            }
        }
        out
    }
}
