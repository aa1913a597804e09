//! Piecewise-constant interface model.
//!
//! On a partition `0 = x_0 < … < x_N = 1` with `σ ≡ σ_j` on cell `j`, the
//! global relations of the `N` constant-coefficient problems at `k` and `−k`
//! form a `2N × 2N` system `A(k) X = Y(k)`. Unknowns are ordered as
//! `(ik g₀^{(1)}, …, ik g₀^{(N−1)}, σ²g₁^{(0)}, …, σ²g₁^{(N)})`: interface
//! values first, then fluxes. Row `j` is the relation of cell `j` at `k`,
//! row `N + j` the same at `−k`. With `ν = ±k/σ_j`, row `j` reads
//!
//! ```text
//! e^{−iνx_{j−1}} (σ_j ik g₀^{(j−1)}·sgn + σ²g₁^{(j−1)}) − e^{−iνx_j} (σ_j ik g₀^{(j)}·sgn + σ²g₁^{(j)}) = q̂₀^{(j)}(ν)
//! ```
//!
//! where `g₀^{(0)} = g₀^{(N)} = 0`. The flux columns carry `σ₀ = σ₁`; the
//! choice only rescales a column and cancels in every ratio. Row `j` is
//! multiplied by `e^{iνx_{j−1}}` so entries stay bounded for large `Im k`;
//! the pair of factors for `±k` has product one and leaves `det A` unchanged.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::coefficient::Conductivity;
use crate::error::{Error, Result};
use crate::linalg::{BandLu, ComplexMatrix};
use crate::quadrature::GaussLegendre;
use crate::transform::Contour;

/// Largest `N` accepted by [`dn_bruteforce`].
pub const MAX_BRUTEFORCE_CELLS: usize = 24;

/// Gauss nodes per cell for the half-range transforms of `q₀`.
const CELL_QUAD: usize = 12;

#[derive(Debug, Clone, PartialEq)]
pub struct InterfacePartition {
    nodes: Vec<f64>,
    sigmas: Vec<f64>,
}

impl InterfacePartition {
    /// `nodes` has `N + 1` entries from 0 to 1; `sigmas` has `N`.
    pub fn new(nodes: Vec<f64>, sigmas: Vec<f64>) -> Result<Self> {
        if nodes.len() < 2 || sigmas.len() + 1 != nodes.len() {
            return Err(Error::InvalidParameter(format!(
                "partition needs N+1 nodes for N conductivities, got {} and {}",
                nodes.len(),
                sigmas.len()
            )));
        }
        if nodes[0] != 0.0 || *nodes.last().unwrap() != 1.0 {
            return Err(Error::InvalidParameter("partition must start at 0 and end at 1".into()));
        }
        for (i, w) in nodes.windows(2).enumerate() {
            if !(w[1] > w[0]) {
                return Err(Error::SingularPartition(i + 1));
            }
        }
        for (i, &s) in sigmas.iter().enumerate() {
            if !(s > 0.0) || !s.is_finite() {
                return Err(Error::NonPositiveConductivity { x: 0.5 * (nodes[i] + nodes[i + 1]), value: s });
            }
        }
        Ok(Self { nodes, sigmas })
    }

    /// Cells on the given nodes with `σ_j = σ(midpoint)`.
    pub fn sampled(c: &Conductivity, nodes: Vec<f64>) -> Result<Self> {
        let sigmas = nodes.windows(2).map(|w| c.sigma(0.5 * (w[0] + w[1]))).collect();
        Self::new(nodes, sigmas)
    }

    /// `N` equal cells with midpoint conductivities.
    pub fn uniform(c: &Conductivity, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter("partition needs at least one cell".into()));
        }
        let mut nodes: Vec<f64> = (0..=n).map(|i| i as f64 / n as f64).collect();
        nodes[n] = 1.0;
        Self::sampled(c, nodes)
    }

    /// Number of cells `N`.
    pub fn cells(&self) -> usize {
        self.sigmas.len()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    /// `σ_j`, indexed from 0 for cell 1.
    pub fn sigmas(&self) -> &[f64] {
        &self.sigmas
    }

    pub fn sigma0(&self) -> f64 {
        self.sigmas[0]
    }

    pub fn widths(&self) -> Vec<f64> {
        self.nodes.windows(2).map(|w| w[1] - w[0]).collect()
    }

    /// `L = max Δx_j`.
    pub fn max_width(&self) -> f64 {
        self.widths().into_iter().fold(0.0, f64::max)
    }

    /// `Σ Δx_j / σ_j`, the discrete travel time.
    pub fn travel_time(&self) -> f64 {
        self.widths().iter().zip(&self.sigmas).map(|(d, s)| d / s).sum()
    }

    pub fn lambda_factors(&self) -> LambdaFactors {
        let s = &self.sigmas;
        let plus: Vec<f64> = s.windows(2).map(|w| w[1] + w[0]).collect();
        let minus: Vec<f64> = s.windows(2).map(|w| w[1] - w[0]).collect();
        let ratio = plus.iter().zip(&minus).map(|(p, m)| m / p).collect();
        LambdaFactors { plus, minus, ratio }
    }

    /// Widths and conductivities of cells `first..=last` (1-based).
    fn cell_range(&self, first: usize, last: usize) -> (Vec<f64>, Vec<f64>) {
        let widths = self.widths();
        (widths[first - 1..last].to_vec(), self.sigmas[first - 1..last].to_vec())
    }
}

/// `Λ_p^± = σ_{p+1} ± σ_p` and `ρ_p = Λ_p^−/Λ_p^+` for interfaces
/// `p = 1..N−1`, stored from index 0.
#[derive(Debug, Clone, PartialEq)]
pub struct LambdaFactors {
    pub plus: Vec<f64>,
    pub minus: Vec<f64>,
    pub ratio: Vec<f64>,
}

impl LambdaFactors {
    pub fn plus_product(&self) -> f64 {
        self.plus.iter().product()
    }
}

#[derive(Debug, Clone)]
pub struct GlobalRelationSystem {
    pub k: Complex64,
    pub matrix: ComplexMatrix,
    pub rhs: Vec<Complex64>,
}

fn g0_col(j: usize) -> usize {
    j - 1
}

fn g1_col(n: usize, j: usize) -> usize {
    n - 1 + j
}

/// Calls `put(row, col, value)` for every nonzero of the row-scaled `A(k)`.
fn for_each_entry<F: FnMut(usize, usize, Complex64)>(part: &InterfacePartition, k: Complex64, mut put: F) {
    let n = part.cells();
    let x = &part.nodes;
    for j in 1..=n {
        let s = part.sigmas[j - 1];
        let nu = k / s;
        for (half, sgn) in [(0usize, 1.0f64), (1, -1.0)] {
            let row = half * n + j - 1;
            // scaled by e^{i·sgn·ν·x_{j−1}}
            let er = (-Complex64::i() * sgn * nu * (x[j] - x[j - 1])).exp();
            let el = Complex64::new(1.0, 0.0);
            put(row, g1_col(n, j), -er);
            put(row, g1_col(n, j - 1), el);
            if j < n {
                put(row, g0_col(j), -er * sgn * s);
            }
            if j > 1 {
                put(row, g0_col(j - 1), el * sgn * s);
            }
        }
    }
}

fn assemble_matrix(part: &InterfacePartition, k: Complex64) -> ComplexMatrix {
    let mut a = ComplexMatrix::zeros(2 * part.cells());
    for_each_entry(part, k, |i, j, v| a.add(i, j, v));
    a
}

/// Interleaving rows as `(j, k), (j, −k)` and unknowns as
/// `g₁^{(0)}, g₀^{(1)}, g₁^{(1)}, …, g₁^{(N)}` turns `A` into a band matrix
/// with two sub- and two super-diagonals. Maps paper indices to band indices.
struct BandLayout {
    rows: Vec<usize>,
    cols: Vec<usize>,
    sign: f64,
}

impl BandLayout {
    fn new(n: usize) -> Self {
        let rows = (0..2 * n).map(|r| if r < n { 2 * r } else { 2 * (r - n) + 1 }).collect::<Vec<_>>();
        let mut cols = vec![0; 2 * n];
        for i in 1..n {
            cols[g0_col(i)] = 2 * i - 1;
        }
        for i in 0..=n {
            cols[g1_col(n, i)] = if i < n { 2 * i } else { 2 * n - 1 };
        }
        let sign = permutation_sign(&rows) * permutation_sign(&cols);
        Self { rows, cols, sign }
    }
}

fn permutation_sign(map: &[usize]) -> f64 {
    let mut seen = vec![false; map.len()];
    let mut sign = 1.0;
    for start in 0..map.len() {
        if seen[start] {
            continue;
        }
        let mut len = 0;
        let mut i = start;
        while !seen[i] {
            seen[i] = true;
            i = map[i];
            len += 1;
        }
        if len % 2 == 0 {
            sign = -sign;
        }
    }
    sign
}

fn band_factor(part: &InterfacePartition, k: Complex64) -> (BandLu, BandLayout) {
    let layout = BandLayout::new(part.cells());
    let mut entries = Vec::with_capacity(8 * part.cells());
    for_each_entry(part, k, |i, j, v| entries.push((layout.rows[i], layout.cols[j], v)));
    (BandLu::from_entries(2 * part.cells(), 2, 2, entries), layout)
}

/// `q̂₀^{(j)}(±ν_j)` with the same row scaling as the matrix.
fn assemble_rhs<Q: Fn(f64) -> f64>(part: &InterfacePartition, k: Complex64, q0: &Q) -> Vec<Complex64> {
    let n = part.cells();
    let rule = GaussLegendre::cached(CELL_QUAD);
    let mut rhs = vec![Complex64::default(); 2 * n];
    for j in 1..=n {
        let (a, b) = (part.nodes[j - 1], part.nodes[j]);
        let nu = k / part.sigmas[j - 1];
        for (y, w) in rule.mapped(a, b) {
            let q = q0(y) * w;
            let phase = (-Complex64::i() * nu * (y - a)).exp();
            rhs[j - 1] += phase * q;
            rhs[n + j - 1] += q / phase;
        }
    }
    rhs
}

pub fn assemble_system<Q: Fn(f64) -> f64>(part: &InterfacePartition, k: Complex64, q0: Q) -> Result<GlobalRelationSystem> {
    if k == Complex64::default() {
        return Err(Error::DomainError { what: "k != 0", value: 0.0 });
    }
    Ok(GlobalRelationSystem { k, matrix: assemble_matrix(part, k), rhs: assemble_rhs(part, k, &q0) })
}

/// `D_N(k) = (i/2) det A(k) ∏ 1/Λ_p^+`, through a banded LU.
pub fn dn_via_det(part: &InterfacePartition, k: Complex64) -> Complex64 {
    let (lu, layout) = band_factor(part, k);
    let scales: Vec<f64> = part.lambda_factors().plus.iter().map(|p| 1.0 / p).collect();
    Complex64::new(0.0, 0.5 * layout.sign) * lu.scaled_determinant(&scales)
}

/// Same as [`dn_via_det`] with a dense LU and the paper's row and column order.
pub fn dn_via_dense_det(part: &InterfacePartition, k: Complex64) -> Complex64 {
    let a = assemble_matrix(part, k);
    Complex64::new(0.0, 0.5) * a.determinant() / part.lambda_factors().plus_product()
}

/// `D_N` as the explicit sum over `ℓ ∈ {0,1}^N` with `ℓ_1 = 0`.
pub fn dn_bruteforce(part: &InterfacePartition, k: Complex64) -> Result<Complex64> {
    let n = part.cells();
    if n > MAX_BRUTEFORCE_CELLS {
        return Err(Error::TooManyTerms { n, max: MAX_BRUTEFORCE_CELLS });
    }
    let legs: Vec<f64> = part.widths().iter().zip(&part.sigmas).map(|(d, s)| d / s).collect();
    let rho = part.lambda_factors().ratio;
    let mut total = Complex64::default();
    for bits in 0u32..(1u32 << (n - 1)) {
        // ℓ_{p+1} is bit p; ℓ_1 = 0
        let ell = |p: usize| if p == 0 { 0 } else { (bits >> (p - 1)) & 1 };
        let mut weight = 1.0;
        let mut arg = 0.0;
        for p in 0..n {
            arg += if ell(p) == 0 { legs[p] } else { -legs[p] };
            if p + 1 < n && ell(p) != ell(p + 1) {
                weight *= rho[p];
            }
        }
        total += (k * arg).sin() * weight;
    }
    Ok(total)
}

/// Switch-location form of `D_N` keeping at most `max_switches` sign
/// changes. Runs a recursion over cells for each exponential branch:
///
/// ```text
/// H_0(s) = e^{ick T_s},
/// H_n(s+1) = e^{ick(−1)^n (T_{s+1} − T_s)} (H_n(s) + ρ_s H_{n−1}(s)),
/// ```
///
/// with `T_s = Σ_{r≤s} Δx_r/σ_r` and `ρ_s` only at interior interfaces.
pub fn dn_switchform(part: &InterfacePartition, k: Complex64, max_switches: usize) -> Result<Complex64> {
    let (widths, sigmas) = part.cell_range(1, part.cells());
    switch_sum(&widths, &sigmas, k, max_switches)
}

fn switch_sum(widths: &[f64], sigmas: &[f64], k: Complex64, max_switches: usize) -> Result<Complex64> {
    let n = widths.len();
    if n == 0 {
        return Ok(Complex64::default());
    }
    if max_switches > n - 1 {
        return Err(Error::InvalidParameter(format!("max_switches {max_switches} exceeds N-1 = {}", n - 1)));
    }
    let legs: Vec<f64> = widths.iter().zip(sigmas).map(|(d, s)| d / s).collect();
    let rho: Vec<f64> = sigmas.windows(2).map(|w| (w[1] - w[0]) / (w[1] + w[0])).collect();
    let mut total = Complex64::default();
    for c in [1.0, -1.0] {
        let step = |leg: f64, order: usize| {
            let sign = if order.is_multiple_of(2) { 1.0 } else { -1.0 };
            (Complex64::i() * c * sign * k * leg).exp()
        };
        // h[n] at position s (after s cells)
        let mut h = vec![Complex64::default(); max_switches + 1];
        h[0] = Complex64::new(1.0, 0.0);
        for s in 0..n {
            // a switch may sit at interface s (between cells s and s+1), s ≥ 1
            if s >= 1 {
                for order in (1..=max_switches).rev() {
                    let prev = h[order - 1];
                    h[order] += prev * rho[s - 1];
                }
            }
            for (order, v) in h.iter_mut().enumerate() {
                *v *= step(legs[s], order);
            }
        }
        let branch: Complex64 = h.iter().sum();
        total += branch * c;
    }
    Ok(total * Complex64::new(0.0, -0.5))
}

/// `E_N(k, j) = ½ det A_j(k) ∏ 1/Λ_p^+`, with column `j` replaced by `Y`.
pub fn en_det<Q: Fn(f64) -> f64>(part: &InterfacePartition, k: Complex64, j: usize, q0: Q) -> Result<Complex64> {
    check_interface(part, j)?;
    let sys = assemble_system(part, k, q0)?;
    let aj = sys.matrix.with_column(g0_col(j), &sys.rhs);
    Ok(0.5 * aj.determinant() / part.lambda_factors().plus_product())
}

fn check_interface(part: &InterfacePartition, j: usize) -> Result<()> {
    if j == 0 || j >= part.cells() {
        return Err(Error::InvalidParameter(format!("interface index {j} outside 1..={}", part.cells().saturating_sub(1))));
    }
    Ok(())
}

/// Discrete kernel `Ψ_{j,m}` for `m ≤ j` from its product form:
/// `√(σ_j/σ_m) ∏_{p=m}^{j} (2σ_p/Λ_p^+) · D_{[1,m]} · D_{[j+1,N]}`, where the
/// `D` factors are the binary sums restricted to the stated cells.
pub fn psi_discrete(part: &InterfacePartition, k: Complex64, j: usize, m: usize) -> Result<Complex64> {
    check_interface(part, j)?;
    let (j, m) = if m <= j { (j, m) } else { (m, j) };
    if m == 0 || j >= part.cells() {
        return Err(Error::InvalidParameter(format!("cell pair ({j}, {m}) outside the partition")));
    }
    let s = &part.sigmas;
    let lf = part.lambda_factors();
    let mut pref = (s[j - 1] / s[m - 1]).sqrt();
    for p in m..=j {
        pref *= 2.0 * s[p - 1] / lf.plus[p - 1];
    }
    let (w_left, s_left) = part.cell_range(1, m);
    let (w_right, s_right) = part.cell_range(j + 1, part.cells());
    let left = switch_sum(&w_left, &s_left, k, m - 1)?;
    let right = switch_sum(&w_right, &s_right, k, part.cells() - j - 1)?;
    Ok(left * right * pref)
}

/// `q^{(j)}(x_j, t) = −(1/π) ∫ X_j e^{−k²t} dk` where `X = A⁻¹Y`. Cramer's
/// ratio `det A_j / det A` is taken from the linear solve, so the common
/// exponential scale of the two determinants never forms.
pub fn interface_solution<Q>(part: &InterfacePartition, q0: Q, j: usize, t: f64, contour: &Contour) -> Result<f64>
where
    Q: Fn(f64) -> f64 + Sync,
{
    check_interface(part, j)?;
    contour.validate()?;
    if !(t > 0.0) {
        return Err(Error::DomainError { what: "t > 0", value: t });
    }
    let nodes = contour.nodes(contour.kmax_for(t));
    let mut acc = Complex64::default();
    for node in &nodes {
        let (lu, layout) = band_factor(part, node.k);
        let y = assemble_rhs(part, node.k, &q0);
        let mut rhs = vec![Complex64::default(); y.len()];
        for (r, v) in y.into_iter().enumerate() {
            rhs[layout.rows[r]] = v;
        }
        let x = lu
            .solve(&rhs)
            .ok_or(Error::DenominatorNearZero { re: node.k.re, im: node.k.im, magnitude: 0.0 })?;
        acc += x[layout.cols[g0_col(j)]] * (-node.k * node.k * t).exp() * node.weight;
    }
    Ok((-acc / PI).re)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_partition(rng: &mut ChaCha8Rng, n: usize) -> InterfacePartition {
        let mut inner: Vec<f64> = (0..n - 1).map(|_| rng.gen_range(0.02..0.98)).collect();
        inner.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let mut nodes = vec![0.0];
        nodes.extend(inner);
        nodes.push(1.0);
        nodes.dedup();
        let cells = nodes.len() - 1;
        let sigmas = (0..cells).map(|_| rng.gen_range(0.3..1.5)).collect();
        InterfacePartition::new(nodes, sigmas).unwrap()
    }

    #[test]
    fn single_cell_determinant() {
        let part = InterfacePartition::new(vec![0.0, 1.0], vec![0.7]).unwrap();
        let k = Complex64::new(1.3, 0.4);
        let det = assemble_matrix(&part, k).determinant();
        assert!((det - Complex64::new(0.0, -2.0) * (k / 0.7).sin()).norm() < 1e-13);
        assert!((dn_via_det(&part, k) - (k / 0.7).sin()).norm() < 1e-13);
    }

    #[test]
    fn two_cell_expansion() {
        let part = InterfacePartition::new(vec![0.0, 0.35, 1.0], vec![0.6, 1.1]).unwrap();
        let k = Complex64::new(2.1, -0.3);
        let (a, b) = (0.35 / 0.6, 0.65 / 1.1);
        let rho = (1.1 - 0.6) / (1.1 + 0.6);
        let expect = (k * (a + b)).sin() + rho * (k * (a - b)).sin();
        assert!((dn_via_det(&part, k) - expect).norm() < 1e-12);
        assert!((dn_bruteforce(&part, k).unwrap() - expect).norm() < 1e-14);
    }

    #[test]
    fn determinant_matches_bruteforce_on_random_partitions() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for n in 1..=8 {
            let part = random_partition(&mut rng, n);
            let k = Complex64::new(rng.gen_range(-4.0..4.0), rng.gen_range(-2.0..2.0));
            let a = dn_via_det(&part, k);
            let b = dn_bruteforce(&part, k).unwrap();
            assert!((a - b).norm() < 1e-10 * b.norm().max(1.0), "N={n}: {a} vs {b}");
        }
    }

    #[test]
    fn banded_and_dense_determinants_agree() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for n in [1, 2, 3, 7] {
            let part = random_partition(&mut rng, n);
            let k = Complex64::new(1.1, 0.7);
            let a = dn_via_det(&part, k);
            let b = dn_via_dense_det(&part, k);
            assert!((a - b).norm() < 1e-12 * b.norm().max(1.0), "N={n}: {a} vs {b}");
        }
    }

    #[test]
    fn large_partitions_do_not_underflow() {
        let c = Conductivity::parabolic24();
        let part = InterfacePartition::uniform(&c, 2000).unwrap();
        let k = Complex64::new(2.0, 0.5);
        let det = dn_via_det(&part, k);
        let switch = dn_switchform(&part, k, part.cells() - 1).unwrap();
        assert!(det.is_finite());
        assert!((det - switch).norm() < 1e-10 * switch.norm(), "{det} vs {switch}");
    }

    #[test]
    fn switchform_equals_bruteforce() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let part = random_partition(&mut rng, 10);
        let k = Complex64::new(1.7, 0.9);
        let full = dn_switchform(&part, k, part.cells() - 1).unwrap();
        let brute = dn_bruteforce(&part, k).unwrap();
        assert!((full - brute).norm() < 1e-12);
    }

    #[test]
    fn constant_partitions_reduce_to_sine() {
        let part = InterfacePartition::new(vec![0.0, 0.2, 0.5, 1.0], vec![2.0; 3]).unwrap();
        let k = Complex64::new(3.0, 0.5);
        let expect = (k / 2.0).sin();
        assert!((dn_bruteforce(&part, k).unwrap() - expect).norm() < 1e-14);
        for s in 0..3 {
            assert!((dn_switchform(&part, k, s).unwrap() - expect).norm() < 1e-14);
        }
        assert!(part.lambda_factors().ratio.iter().all(|&r| r == 0.0));
    }

    #[test]
    fn bruteforce_size_cap() {
        let c = Conductivity::parabolic24();
        let part = InterfacePartition::uniform(&c, 30).unwrap();
        assert!(matches!(dn_bruteforce(&part, Complex64::new(1.0, 0.0)), Err(Error::TooManyTerms { .. })));
    }

    #[test]
    fn partition_validation() {
        assert!(InterfacePartition::new(vec![0.0, 0.5, 0.5, 1.0], vec![1.0; 3]).is_err());
        assert!(InterfacePartition::new(vec![0.0, 1.0], vec![-1.0]).is_err());
        assert!(InterfacePartition::new(vec![0.0, 0.9], vec![1.0]).is_err());
    }

    #[test]
    fn zero_data_gives_zero_numerator() {
        let c = Conductivity::parabolic24();
        let part = InterfacePartition::uniform(&c, 6).unwrap();
        let e = en_det(&part, Complex64::new(1.0, 0.2), 3, |_| 0.0).unwrap();
        assert_eq!(e, Complex64::default());
    }

    #[test]
    fn interface_solution_constant_case() {
        let part = InterfacePartition::new(vec![0.0, 0.5, 1.0], vec![1.0, 1.0]).unwrap();
        let v = interface_solution(&part, |y| (PI * y).sin(), 1, 0.1, &Contour::default()).unwrap();
        assert!((v - (-PI * PI * 0.1).exp()).abs() < 1e-5, "{v}");
    }
}
