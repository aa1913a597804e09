//! Characteristic function `Δ_N`, kernel `Ψ_N`, numerator `Φ_N`, and the
//! contour-integral solution
//!
//! ```text
//! q_N(x, t) = (1/iπ) ∫_γ [e^{ikτ(1)} Φ_N(k, x)] / [e^{ikτ(1)} Δ_N(k)] e^{−k²t} dk.
//! ```
//!
//! `γ` runs in from `∞·e^{i(π−δ)}`, around the upper half of `|k| = r`
//! clockwise, and out to `∞·e^{iδ}`. With `δ < π/4`, `Re k² > 0` on both rays
//! and `e^{−k²t}` decays.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::coefficient::{Conductivity, TravelTimeMap};
use crate::error::{check_unit, Error, Result};
use crate::profile::PanelGrid;
use crate::quadrature::GaussLegendre;
use crate::simplex::{SeriesSpec, Simplex};

/// Magnitude below which the regularized denominator counts as vanishing.
/// Regularized values are `O(1)` on the contour.
pub const DENOMINATOR_FLOOR: f64 = 1e-12;

/// Relative tolerance on the estimated contour truncation tail.
pub const TAIL_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ContourShape {
    /// The rays `arg k = π/4, 3π/4` joined by the arc `|k| = r`.
    BoundaryOmega,
    /// Rays at `arg k = δ` and `π − δ` joined by the arc `|k| = r`.
    AngledRays,
}

/// Integration path and its discretization.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Contour {
    pub shape: ContourShape,
    pub r: f64,
    /// Ray angle above the real axis (ignored for `BoundaryOmega`).
    pub delta: f64,
    /// Truncation radius; `None` picks `max(8, 6/√t)`.
    pub kmax: Option<f64>,
    pub nodes_per_unit: usize,
}

impl Default for Contour {
    fn default() -> Self {
        Self { shape: ContourShape::AngledRays, r: 0.5, delta: PI / 8.0, kmax: None, nodes_per_unit: 40 }
    }
}

/// One quadrature node: `∫ f dk ≈ Σ weight · f(k)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContourNode {
    pub k: Complex64,
    pub weight: Complex64,
}

impl Contour {
    pub fn validate(&self) -> Result<()> {
        if !(self.r > 0.0) {
            return Err(Error::InvalidParameter(format!("contour radius must be positive, got {}", self.r)));
        }
        if self.shape == ContourShape::AngledRays && !(self.delta > 0.0 && self.delta < PI / 4.0) {
            return Err(Error::InvalidParameter(format!("ray angle must lie in (0, π/4), got {}", self.delta)));
        }
        if let Some(kmax) = self.kmax {
            if !(kmax > self.r) {
                return Err(Error::InvalidParameter(format!("kmax {kmax} must exceed r {}", self.r)));
            }
        }
        if self.nodes_per_unit == 0 {
            return Err(Error::InvalidParameter("nodes_per_unit must be positive".into()));
        }
        Ok(())
    }

    pub fn ray_angle(&self) -> f64 {
        match self.shape {
            ContourShape::BoundaryOmega => PI / 4.0,
            ContourShape::AngledRays => self.delta,
        }
    }

    pub fn kmax_for(&self, t: f64) -> f64 {
        self.kmax.unwrap_or_else(|| 8f64.max(6.0 / t.sqrt()))
    }

    /// Nodes for truncation radius `kmax`, in path order. The set is
    /// symmetric under `k ↦ −k̄` with weights `w ↦ w̄`.
    pub fn nodes(&self, kmax: f64) -> Vec<ContourNode> {
        let delta = self.ray_angle();
        let panel_len = 0.5;
        let per_panel = ((self.nodes_per_unit as f64 * panel_len).ceil() as usize).max(4);

        let mut right = Vec::new();
        // arc from the top (θ = π/2) down to θ = δ
        let arc_len = self.r * (PI / 2.0 - delta);
        let arc_nodes = ((self.nodes_per_unit as f64 * arc_len).ceil() as usize).max(8);
        let arc_rule = GaussLegendre::cached(arc_nodes);
        let mut arc: Vec<ContourNode> = arc_rule
            .mapped(delta, PI / 2.0)
            .map(|(theta, w)| {
                let k = Complex64::from_polar(self.r, theta);
                ContourNode { k, weight: -Complex64::i() * k * w }
            })
            .collect();
        arc.reverse();
        right.extend(arc);
        // ray outward from r e^{iδ}
        let dir = Complex64::from_polar(1.0, delta);
        let len = kmax - self.r;
        let panels = (len / panel_len).ceil().max(1.0) as usize;
        let h = len / panels as f64;
        let ray_rule = GaussLegendre::cached(per_panel);
        for p in 0..panels {
            let a = self.r + p as f64 * h;
            for (s, w) in ray_rule.mapped(a, a + h) {
                right.push(ContourNode { k: dir * s, weight: dir * w });
            }
        }

        let mut nodes: Vec<ContourNode> = right
            .iter()
            .rev()
            .map(|n| ContourNode { k: -n.k.conj(), weight: n.weight.conj() })
            .collect();
        nodes.extend(right);
        nodes
    }
}

/// Point value of the solution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolutionSample {
    pub x: f64,
    pub t: f64,
    pub value: f64,
    pub truncation: usize,
    /// `|Im|` of the raw contour integral.
    pub imag_residual: f64,
}

/// `Δ_N(k) = Σ_{n ≤ N} S_n^{(0,1)}(k)`.
pub fn delta_fn(c: &Conductivity, tt: &TravelTimeMap, k: Complex64, spec: &SeriesSpec) -> Result<Complex64> {
    Simplex::new(c, tt, *spec).sum(0.0, 1.0, k)
}

/// `e^{ikτ(1)} Δ_N(k)`.
pub fn regularized_delta_fn(c: &Conductivity, tt: &TravelTimeMap, k: Complex64, spec: &SeriesSpec) -> Result<Complex64> {
    Simplex::new(c, tt, *spec).regularized_sum(0.0, 1.0, k, tt.total())
}

/// `Δ_N(k)` for real `k`.
pub fn delta_real(c: &Conductivity, tt: &TravelTimeMap, k: f64, spec: &SeriesSpec) -> Result<f64> {
    Simplex::new(c, tt, *spec).sum_real(0.0, 1.0, k)
}

fn ordered(x: f64, y: f64) -> Result<(f64, f64)> {
    check_unit("x in [0, 1]", x)?;
    check_unit("y in [0, 1]", y)?;
    Ok(if y <= x { (y, x) } else { (x, y) })
}

/// `Ψ_N(k, x, y) = (Σ_{n≤N} S_n^{(0,lo)}) (Σ_{n≤N} S_n^{(hi,1)})` with
/// `lo = min(x, y)`, `hi = max(x, y)`.
pub fn psi_kernel(c: &Conductivity, tt: &TravelTimeMap, k: Complex64, x: f64, y: f64, spec: &SeriesSpec) -> Result<Complex64> {
    let (lo, hi) = ordered(x, y)?;
    let sx = Simplex::new(c, tt, *spec);
    Ok(sx.sum(0.0, lo, k)? * sx.sum(hi, 1.0, k)?)
}

/// `e^{ikτ(1)} Ψ_N(k, x, y)`, each factor regularized by its own travel time.
pub fn regularized_psi_kernel(c: &Conductivity, tt: &TravelTimeMap, k: Complex64, x: f64, y: f64, spec: &SeriesSpec) -> Result<Complex64> {
    let (lo, hi) = ordered(x, y)?;
    let sx = Simplex::new(c, tt, *spec);
    let (tlo, thi) = (tt.tau(lo), tt.tau(hi));
    let left = sx.regularized_sum(0.0, lo, k, tlo)?;
    let right = sx.regularized_sum(hi, 1.0, k, tt.total() - thi)?;
    Ok(left * right * (Complex64::i() * k * (thi - tlo)).exp())
}

/// Cauchy-product truncation `Σ_{n≤N} Σ_{ℓ≤n} S_{n−ℓ}^{(0,lo)} S_ℓ^{(hi,1)}`.
pub fn psi_kernel_cauchy(c: &Conductivity, tt: &TravelTimeMap, k: Complex64, x: f64, y: f64, spec: &SeriesSpec) -> Result<Complex64> {
    let (lo, hi) = ordered(x, y)?;
    let sx = Simplex::new(c, tt, *spec);
    let left = sx.terms(0.0, lo, k)?;
    let right = sx.terms(hi, 1.0, k)?;
    let mut acc = Complex64::default();
    for n in 0..=spec.truncation {
        for l in 0..=n {
            acc += left[n - l] * right[l];
        }
    }
    Ok(acc)
}

/// `e^{ikτ(1)} Φ_N(k, x)` for `Φ_N = ∫₀¹ Ψ_N(k,x,y) q₀(y) / √(σ(x)σ(y)) dy`,
/// integrated on a panel grid with a breakpoint at `y = x`.
pub fn regularized_phi_fn<Q>(c: &Conductivity, tt: &TravelTimeMap, k: Complex64, x: f64, q0: Q, spec: &SeriesSpec) -> Result<Complex64>
where
    Q: Fn(f64) -> f64,
{
    check_unit("x in [0, 1]", x)?;
    let grid = PanelGrid::new(c, tt, PanelGrid::panels_for(tt, k.norm()), &[x]);
    let source = grid.source_weights(q0);
    let prof = grid.profile(k, spec.truncation);
    let phi = grid.phi(&prof, &source);
    Ok(phi[grid.break_index(x).expect("x is a breakpoint")])
}

/// `Φ_N(k, x)`.
pub fn phi_fn<Q>(c: &Conductivity, tt: &TravelTimeMap, k: Complex64, x: f64, q0: Q, spec: &SeriesSpec) -> Result<Complex64>
where
    Q: Fn(f64) -> f64,
{
    let reg = regularized_phi_fn(c, tt, k, x, q0, spec)?;
    Ok(reg * (-Complex64::i() * k * tt.total()).exp())
}

fn guard_denominator(k: Complex64, denom: Complex64) -> Result<Complex64> {
    if denom.norm() < DENOMINATOR_FLOOR {
        return Err(Error::DenominatorNearZero { re: k.re, im: k.im, magnitude: denom.norm() });
    }
    Ok(denom)
}

/// `q_N(x, t)` at one point.
pub fn solve<Q>(
    c: &Conductivity,
    tt: &TravelTimeMap,
    q0: Q,
    x: f64,
    t: f64,
    spec: &SeriesSpec,
    contour: &Contour,
) -> Result<SolutionSample>
where
    Q: Fn(f64) -> f64 + Sync,
{
    Ok(solve_grid(c, tt, q0, &[x], &[t], spec, contour)?.remove(0))
}

/// `q_N` on every `(t, x)` pair, `t`-major. One contour (sized for the
/// smallest `t`) is shared by all points; the per-node work is independent
/// and is reduced in fixed node order.
pub fn solve_grid<Q>(
    c: &Conductivity,
    tt: &TravelTimeMap,
    q0: Q,
    xs: &[f64],
    ts: &[f64],
    spec: &SeriesSpec,
    contour: &Contour,
) -> Result<Vec<SolutionSample>>
where
    Q: Fn(f64) -> f64 + Sync,
{
    contour.validate()?;
    for &x in xs {
        check_unit("x in [0, 1]", x)?;
    }
    let t_min = ts.iter().copied().fold(f64::INFINITY, f64::min);
    if ts.is_empty() || !(t_min > 0.0) {
        return Err(Error::DomainError { what: "t > 0", value: t_min });
    }
    let kmax = contour.kmax_for(t_min);
    let grid = PanelGrid::new(c, tt, PanelGrid::panels_for(tt, kmax), xs);
    let source = grid.source_weights(&q0);
    let idx: Vec<usize> = xs.iter().map(|&x| grid.break_index(x).expect("x is a breakpoint")).collect();
    let nodes = contour.nodes(kmax);

    let width = ts.len() * xs.len();
    let per_node = |node: &ContourNode| -> Result<(Vec<Complex64>, f64)> {
        let prof = grid.profile(node.k, spec.truncation);
        let denom = guard_denominator(node.k, prof.regularized_delta())?;
        let phi = grid.phi(&prof, &source);
        let mut out = Vec::with_capacity(width);
        let mut ratio_max = 0.0f64;
        let ratios: Vec<Complex64> = idx.iter().map(|&i| phi[i] / denom).collect();
        for r in &ratios {
            ratio_max = ratio_max.max(r.norm());
        }
        for &t in ts {
            let decay = (-node.k * node.k * t).exp() * node.weight;
            out.extend(ratios.iter().map(|r| r * decay));
        }
        Ok((out, ratio_max))
    };

    #[cfg(feature = "parallel")]
    let contributions: Vec<Result<(Vec<Complex64>, f64)>> = {
        use rayon::prelude::*;
        nodes.par_iter().map(per_node).collect()
    };
    #[cfg(not(feature = "parallel"))]
    let contributions: Vec<Result<(Vec<Complex64>, f64)>> = nodes.iter().map(per_node).collect();

    let mut sums = vec![Complex64::default(); width];
    let mut end_ratio = 0.0f64;
    let n_nodes = contributions.len();
    for (j, item) in contributions.into_iter().enumerate() {
        let (vals, ratio_max) = item?;
        if j == 0 || j + 1 == n_nodes {
            end_ratio = end_ratio.max(ratio_max);
        }
        for (s, v) in sums.iter_mut().zip(vals) {
            *s += v;
        }
    }

    let two_delta = 2.0 * contour.ray_angle();
    let mut out = Vec::with_capacity(width);
    for (ti, &t) in ts.iter().enumerate() {
        // ∫_K^∞ e^{−a s²} ds ≤ e^{−aK²}/(2aK) on each ray, a = t cos 2δ
        let a = t * two_delta.cos();
        let tail = if a > 0.0 {
            2.0 * end_ratio * (-a * kmax * kmax).exp() / (2.0 * a * kmax) / PI
        } else {
            f64::INFINITY
        };
        for (xi, &x) in xs.iter().enumerate() {
            let raw = sums[ti * xs.len() + xi] / (Complex64::i() * PI);
            if tail > TAIL_TOL * raw.re.abs().max(1.0) {
                return Err(Error::TailTooLarge { tail, t });
            }
            out.push(SolutionSample { x, t, value: raw.re, truncation: spec.truncation, imag_residual: raw.im.abs() });
        }
    }
    Ok(out)
}
