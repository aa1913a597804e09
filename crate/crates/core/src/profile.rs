//! Simplex series along a whole panel grid at once.
//!
//! Splitting `sin(kA) = (e^{ikA} − e^{−ikA})/2i` factorizes the simplex
//! integrand, so the order-`n` term with a moving endpoint obeys a Volterra
//! recursion in that endpoint:
//!
//! ```text
//! F_0^c(y) = e^{ickτ(y)},
//! F_n^c(y) = ∫_0^y F_{n−1}^c(s) μ(s) e^{ick(−1)^n (τ(y) − τ(s))} ds,
//! S_n^{(0,y)}(k) = 2^{−n} (F_n^+(y) − F_n^−(y)) / 2i,
//! ```
//!
//! and symmetrically for a moving left endpoint with `b = 1` fixed. Each
//! panel carries Gauss–Legendre nodes and a spectral integration matrix, so
//! the recursion costs `O(panels · nodes²)` per order instead of `Q^n` per point.
//!
//! All quantities are stored regularized: the left series `Σ S_n^{(0,y)}` is
//! scaled by `e^{ikτ(y)}` and the right series `Σ S_n^{(x,1)}` by
//! `e^{ik(τ(1) − τ(x))}`. For `Im k ≥ 0` every propagation factor then has a
//! non-growing exponent.

use std::sync::Arc;

use num_complex::Complex64;

use crate::coefficient::{Conductivity, TravelTimeMap};
use crate::quadrature::GaussLegendre;

/// Nodes per panel of a [`PanelGrid`].
pub const PANEL_NODES: usize = 16;

/// Piecewise Gauss–Legendre grid on `[0, 1]` with coefficient data cached at
/// nodes and breakpoints.
#[derive(Debug, Clone)]
pub struct PanelGrid {
    breaks: Vec<f64>,
    rule: Arc<GaussLegendre>,
    /// Row-major `P × P` integration matrix on `[-1, 1]`.
    cumulative: Vec<f64>,
    nodes: Vec<f64>,
    weights: Vec<f64>,
    tau_nodes: Vec<f64>,
    mu_nodes: Vec<f64>,
    sigma_nodes: Vec<f64>,
    tau_breaks: Vec<f64>,
    sigma_breaks: Vec<f64>,
    tau_total: f64,
}

impl PanelGrid {
    /// Uniform panels, refined so that each requested point is a breakpoint.
    pub fn new(c: &Conductivity, tt: &TravelTimeMap, min_panels: usize, points: &[f64]) -> Self {
        let m = min_panels.max(1);
        let mut breaks: Vec<f64> = (0..=m).map(|i| i as f64 / m as f64).collect();
        breaks.extend(points.iter().copied().filter(|x| (0.0..=1.0).contains(x)));
        breaks.sort_by(|a, b| a.partial_cmp(b).unwrap());
        breaks.dedup_by(|a, b| (*a - *b).abs() < 1e-12);
        // dedup keeps the earlier entry; pin the ends exactly
        breaks[0] = 0.0;
        *breaks.last_mut().unwrap() = 1.0;
        Self::from_breaks(c, tt, breaks)
    }

    /// Panel count resolving oscillation `e^{2ikτ}` for `|k| ≤ kmax`.
    pub fn panels_for(tt: &TravelTimeMap, kmax: f64) -> usize {
        (32.0f64).max((kmax * tt.total() / 1.5).ceil()) as usize
    }

    fn from_breaks(c: &Conductivity, tt: &TravelTimeMap, breaks: Vec<f64>) -> Self {
        let rule = GaussLegendre::cached(PANEL_NODES);
        let cumulative = rule.integration_matrix();
        let mut nodes = Vec::with_capacity((breaks.len() - 1) * PANEL_NODES);
        let mut weights = Vec::with_capacity(nodes.capacity());
        for w in breaks.windows(2) {
            for (x, wt) in rule.mapped(w[0], w[1]) {
                nodes.push(x);
                weights.push(wt);
            }
        }
        let tau_nodes = nodes.iter().map(|&y| tt.tau(y)).collect();
        let mu_nodes = nodes.iter().map(|&y| c.mu(y)).collect();
        let sigma_nodes = nodes.iter().map(|&y| c.sigma(y)).collect();
        let tau_breaks = breaks.iter().map(|&y| tt.tau(y)).collect();
        let sigma_breaks = breaks.iter().map(|&y| c.sigma(y)).collect();
        Self {
            breaks,
            rule,
            cumulative,
            nodes,
            weights,
            tau_nodes,
            mu_nodes,
            sigma_nodes,
            tau_breaks,
            sigma_breaks,
            tau_total: tt.total(),
        }
    }

    pub fn breaks(&self) -> &[f64] {
        &self.breaks
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn panels(&self) -> usize {
        self.breaks.len() - 1
    }

    /// Index of the breakpoint equal to `x`, if any.
    pub fn break_index(&self, x: f64) -> Option<usize> {
        self.breaks.iter().position(|b| (b - x).abs() < 1e-12)
    }

    /// Nodal weights `q₀(y)/√σ(y)` for a source profile.
    pub fn source_weights<Q: Fn(f64) -> f64>(&self, q0: Q) -> Vec<f64> {
        self.nodes.iter().zip(&self.sigma_nodes).map(|(&y, s)| q0(y) / s.sqrt()).collect()
    }

    fn panel_width(&self, i: usize) -> f64 {
        self.breaks[i + 1] - self.breaks[i]
    }

    /// Regularized series at every node and breakpoint for one `k`.
    pub fn profile(&self, k: Complex64, truncation: usize) -> SeriesProfile {
        let np = self.nodes.len();
        let nb = self.breaks.len();
        let ik = Complex64::i() * k;
        let half_over_i = Complex64::new(0.0, -0.5);

        let mut left_nodes = vec![Complex64::default(); np];
        let mut right_nodes = vec![Complex64::default(); np];
        let mut left_terms = vec![vec![Complex64::default(); nb]; truncation + 1];
        let mut right_terms = vec![vec![Complex64::default(); nb]; truncation + 1];

        // Order 0: F̃_0^+ = e^{2ikτ}, F̃_0^− = 1; B̃_0^+ = e^{2ik(τ(1)−τ)}, B̃_0^− = 1.
        let mut fwd: [Vec<Complex64>; 2] = [
            self.tau_nodes.iter().map(|t| (ik * 2.0 * t).exp()).collect(),
            vec![Complex64::new(1.0, 0.0); np],
        ];
        let mut fwd_b: [Vec<Complex64>; 2] = [
            self.tau_breaks.iter().map(|t| (ik * 2.0 * t).exp()).collect(),
            vec![Complex64::new(1.0, 0.0); nb],
        ];
        let mut bwd: [Vec<Complex64>; 2] = [
            self.tau_nodes.iter().map(|t| (ik * 2.0 * (self.tau_total - t)).exp()).collect(),
            vec![Complex64::new(1.0, 0.0); np],
        ];
        let mut bwd_b: [Vec<Complex64>; 2] = [
            self.tau_breaks.iter().map(|t| (ik * 2.0 * (self.tau_total - t)).exp()).collect(),
            vec![Complex64::new(1.0, 0.0); nb],
        ];

        for n in 0..=truncation {
            if n > 0 {
                let sign_n = if n.is_multiple_of(2) { 1.0 } else { -1.0 };
                let mut next_fwd = [vec![Complex64::default(); np], vec![Complex64::default(); np]];
                let mut next_fwd_b = [vec![Complex64::default(); nb], vec![Complex64::default(); nb]];
                for (ci, c) in [1.0, -1.0].into_iter().enumerate() {
                    let alpha = 1.0 + c * sign_n;
                    self.sweep_forward(ik * alpha, &fwd[ci], &mut next_fwd[ci], &mut next_fwd_b[ci]);
                }
                let mut next_bwd = [vec![Complex64::default(); np], vec![Complex64::default(); np]];
                let mut next_bwd_b = [vec![Complex64::default(); nb], vec![Complex64::default(); nb]];
                for (ci, c) in [1.0, -1.0].into_iter().enumerate() {
                    // B̃_m^c consumes B̃_{m−1}^{−c}.
                    let alpha = 1.0 + c;
                    self.sweep_backward(ik * alpha, &bwd[1 - ci], &mut next_bwd[ci], &mut next_bwd_b[ci]);
                }
                fwd = next_fwd;
                fwd_b = next_fwd_b;
                bwd = next_bwd;
                bwd_b = next_bwd_b;
            }
            let scale = half_over_i * 0.5f64.powi(n as i32);
            for i in 0..np {
                left_nodes[i] += (fwd[0][i] - fwd[1][i]) * scale;
                right_nodes[i] += (bwd[0][i] - bwd[1][i]) * scale;
            }
            for i in 0..nb {
                left_terms[n][i] = (fwd_b[0][i] - fwd_b[1][i]) * scale;
                right_terms[n][i] = (bwd_b[0][i] - bwd_b[1][i]) * scale;
            }
        }
        SeriesProfile { k, left_nodes, right_nodes, left_terms, right_terms }
    }

    /// One forward order: `out(y) = ∫_0^y prev(s) μ(s) e^{β(τ(y) − τ(s))} ds`.
    fn sweep_forward(&self, beta: Complex64, prev: &[Complex64], out: &mut [Complex64], out_b: &mut [Complex64]) {
        let p = self.rule.len();
        let mut g = vec![Complex64::default(); p];
        out_b[0] = Complex64::default();
        for panel in 0..self.panels() {
            let half = 0.5 * self.panel_width(panel);
            let base = panel * p;
            let tb = self.tau_breaks[panel];
            for l in 0..p {
                let idx = base + l;
                g[l] = prev[idx] * self.mu_nodes[idx] * (-beta * (self.tau_nodes[idx] - tb)).exp();
            }
            let start = out_b[panel];
            for j in 0..p {
                let row = &self.cumulative[j * p..(j + 1) * p];
                let acc: Complex64 = row.iter().zip(&g).map(|(w, v)| v * *w).sum();
                let idx = base + j;
                out[idx] = (beta * (self.tau_nodes[idx] - tb)).exp() * (start + acc * half);
            }
            let full: Complex64 = self.rule.weights.iter().zip(&g).map(|(w, v)| v * *w).sum();
            out_b[panel + 1] = (beta * (self.tau_breaks[panel + 1] - tb)).exp() * (start + full * half);
        }
    }

    /// One backward order: `out(x) = ∫_x^1 μ(s) e^{β(τ(s) − τ(x))} prev(s) ds`.
    fn sweep_backward(&self, beta: Complex64, prev: &[Complex64], out: &mut [Complex64], out_b: &mut [Complex64]) {
        let p = self.rule.len();
        let mut g = vec![Complex64::default(); p];
        let last = self.panels();
        out_b[last] = Complex64::default();
        for panel in (0..last).rev() {
            let half = 0.5 * self.panel_width(panel);
            let base = panel * p;
            let te = self.tau_breaks[panel + 1];
            for l in 0..p {
                let idx = base + l;
                g[l] = prev[idx] * self.mu_nodes[idx] * (-beta * (te - self.tau_nodes[idx])).exp();
            }
            let end = out_b[panel + 1];
            let full: Complex64 = self.rule.weights.iter().zip(&g).map(|(w, v)| v * *w).sum();
            for j in 0..p {
                let row = &self.cumulative[j * p..(j + 1) * p];
                let below: Complex64 = row.iter().zip(&g).map(|(w, v)| v * *w).sum();
                let idx = base + j;
                out[idx] = (beta * (te - self.tau_nodes[idx])).exp() * (end + (full - below) * half);
            }
            out_b[panel] = (beta * (te - self.tau_breaks[panel])).exp() * (end + full * half);
        }
    }

    /// Regularized `e^{ikτ(1)} Φ_N(k, x)` at every breakpoint, from nodal
    /// source weights `q₀/√σ`: `Φ = σ(x)^{-1/2} [R(x) ∫_0^x L q₀/√σ + L(x) ∫_x^1 R q₀/√σ]`.
    pub fn phi(&self, prof: &SeriesProfile, source: &[f64]) -> Vec<Complex64> {
        let p = self.rule.len();
        let nb = self.breaks.len();
        let ik = Complex64::i() * prof.k;
        let mut jl = vec![Complex64::default(); nb];
        let mut jr = vec![Complex64::default(); nb];
        for panel in 0..self.panels() {
            let te = self.tau_breaks[panel + 1];
            let mut acc = Complex64::default();
            for l in 0..p {
                let idx = panel * p + l;
                acc += prof.left_nodes[idx] * (ik * (te - self.tau_nodes[idx])).exp() * (self.weights[idx] * source[idx]);
            }
            jl[panel + 1] = (ik * (te - self.tau_breaks[panel])).exp() * jl[panel] + acc;
        }
        for panel in (0..self.panels()).rev() {
            let tb = self.tau_breaks[panel];
            let mut acc = Complex64::default();
            for l in 0..p {
                let idx = panel * p + l;
                acc += prof.right_nodes[idx] * (ik * (self.tau_nodes[idx] - tb)).exp() * (self.weights[idx] * source[idx]);
            }
            jr[panel] = (ik * (self.tau_breaks[panel + 1] - tb)).exp() * jr[panel + 1] + acc;
        }
        (0..nb)
            .map(|i| {
                let l = prof.left(i);
                let r = prof.right(i);
                (r * jl[i] + l * jr[i]) / self.sigma_breaks[i].sqrt()
            })
            .collect()
    }
}

/// Output of [`PanelGrid::profile`].
#[derive(Debug, Clone)]
pub struct SeriesProfile {
    pub k: Complex64,
    /// `e^{ikτ(y)} Σ_n S_n^{(0,y)}(k)` at grid nodes.
    pub left_nodes: Vec<Complex64>,
    /// `e^{ik(τ(1)−τ(y))} Σ_n S_n^{(y,1)}(k)` at grid nodes.
    pub right_nodes: Vec<Complex64>,
    /// Per-order regularized left terms at breakpoints, `[n][break]`.
    pub left_terms: Vec<Vec<Complex64>>,
    /// Per-order regularized right terms at breakpoints.
    pub right_terms: Vec<Vec<Complex64>>,
}

impl SeriesProfile {
    pub fn left(&self, break_index: usize) -> Complex64 {
        self.left_terms.iter().map(|t| t[break_index]).sum()
    }

    pub fn right(&self, break_index: usize) -> Complex64 {
        self.right_terms.iter().map(|t| t[break_index]).sum()
    }

    /// `e^{ikτ(1)} Δ_N(k)`, read off the left series at `y = 1`.
    pub fn regularized_delta(&self) -> Complex64 {
        let last = self.left_terms[0].len() - 1;
        self.left(last)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coefficient::DEFAULT_TAU_TOL;
    use crate::simplex::{SeriesSpec, Simplex};

    #[test]
    fn profile_matches_nested_quadrature() {
        let c = Conductivity::parabolic24();
        let tt = TravelTimeMap::build(&c, DEFAULT_TAU_TOL).unwrap();
        let grid = PanelGrid::new(&c, &tt, 20, &[0.3, 0.7]);
        let spec = SeriesSpec::new(3).unwrap();
        let sx = Simplex::new(&c, &tt, spec);
        for k in [Complex64::new(1.7, 0.0), Complex64::from_polar(6.0, 0.4), Complex64::new(-2.0, 3.0)] {
            let prof = grid.profile(k, 3);
            for x in [0.0, 0.3, 0.7, 1.0] {
                let i = grid.break_index(x).unwrap();
                for n in 0..=3 {
                    let l = sx.regularized_term(n, 0.0, x, k, tt.tau(x)).unwrap();
                    let r = sx.regularized_term(n, x, 1.0, k, tt.total() - tt.tau(x)).unwrap();
                    assert!((prof.left_terms[n][i] - l).norm() < 1e-12, "L n={n} x={x} k={k}");
                    assert!((prof.right_terms[n][i] - r).norm() < 1e-12, "R n={n} x={x} k={k}");
                }
            }
            // both ends of the grid carry the same characteristic function
            assert!((prof.regularized_delta() - prof.right(0)).norm() < 1e-12);
        }
    }

    #[test]
    fn constant_coefficient_profile_is_exact() {
        let c = Conductivity::constant(1.0).unwrap();
        let tt = TravelTimeMap::build(&c, DEFAULT_TAU_TOL).unwrap();
        let grid = PanelGrid::new(&c, &tt, 8, &[]);
        let k = Complex64::new(3.0, 2.0);
        let prof = grid.profile(k, 2);
        for (i, &x) in grid.breaks().iter().enumerate() {
            let expect = (Complex64::i() * k * x).exp() * (k * x).sin();
            assert!((prof.left(i) - expect).norm() < 1e-14);
        }
    }
}
