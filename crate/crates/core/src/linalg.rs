//! Dense complex LU with partial pivoting and tridiagonal helpers.

use num_complex::Complex64;

/// Dense row-major complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    pub n: usize,
    pub data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn zeros(n: usize) -> Self {
        Self { n, data: vec![Complex64::default(); n * n] }
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Complex64) {
        self.data[i * self.n + j] = v;
    }

    pub fn add(&mut self, i: usize, j: usize, v: Complex64) {
        self.data[i * self.n + j] += v;
    }

    /// Copy with column `j` replaced by `col`.
    pub fn with_column(&self, j: usize, col: &[Complex64]) -> Self {
        let mut m = self.clone();
        for (i, v) in col.iter().enumerate() {
            m.set(i, j, *v);
        }
        m
    }

    pub fn lu(&self) -> Lu {
        Lu::factor(self.clone())
    }

    pub fn determinant(&self) -> Complex64 {
        self.lu().determinant()
    }
}

/// `PA = LU`, stored compactly.
#[derive(Debug, Clone)]
pub struct Lu {
    a: ComplexMatrix,
    perm: Vec<usize>,
    parity: f64,
    singular: bool,
}

impl Lu {
    pub fn factor(mut a: ComplexMatrix) -> Self {
        let n = a.n;
        let mut perm: Vec<usize> = (0..n).collect();
        let mut parity = 1.0;
        let mut singular = false;
        for col in 0..n {
            let (pivot_row, pivot_mag) = (col..n)
                .map(|r| (r, a.get(r, col).norm()))
                .fold((col, -1.0), |best, cur| if cur.1 > best.1 { cur } else { best });
            if pivot_mag == 0.0 {
                singular = true;
                continue;
            }
            if pivot_row != col {
                for j in 0..n {
                    a.data.swap(col * n + j, pivot_row * n + j);
                }
                perm.swap(col, pivot_row);
                parity = -parity;
            }
            let pivot = a.get(col, col);
            for r in col + 1..n {
                let factor = a.get(r, col) / pivot;
                if factor == Complex64::default() {
                    continue;
                }
                a.set(r, col, factor);
                for j in col + 1..n {
                    let v = a.get(col, j);
                    a.data[r * n + j] -= factor * v;
                }
            }
        }
        Self { a, perm, parity, singular }
    }

    pub fn determinant(&self) -> Complex64 {
        if self.singular {
            return Complex64::default();
        }
        (0..self.a.n).fold(Complex64::new(self.parity, 0.0), |acc, i| acc * self.a.get(i, i))
    }

    pub fn is_singular(&self) -> bool {
        self.singular
    }

    pub fn solve(&self, rhs: &[Complex64]) -> Option<Vec<Complex64>> {
        if self.singular {
            return None;
        }
        let n = self.a.n;
        let mut x: Vec<Complex64> = self.perm.iter().map(|&p| rhs[p]).collect();
        for i in 0..n {
            for j in 0..i {
                let l = self.a.get(i, j);
                x[i] = x[i] - l * x[j];
            }
        }
        for i in (0..n).rev() {
            for j in i + 1..n {
                let u = self.a.get(i, j);
                x[i] = x[i] - u * x[j];
            }
            x[i] /= self.a.get(i, i);
        }
        Some(x)
    }
}

/// Banded matrix with `kl` sub- and `ku` super-diagonals, factored by
/// partial pivoting. Row swaps widen the upper band to `ku + kl`; the
/// multipliers stay in place, so solves replay the swaps column by column.
#[derive(Debug, Clone)]
pub struct BandLu {
    n: usize,
    kl: usize,
    width: usize,
    /// `band[i * width + (j + kl − i)]` holds entry `(i, j)`.
    band: Vec<Complex64>,
    pivots: Vec<usize>,
    parity: f64,
    singular: bool,
}

impl BandLu {
    /// Factors the band of `a`; entries outside it are ignored.
    pub fn factor(a: &ComplexMatrix, kl: usize, ku: usize) -> Self {
        let n = a.n;
        let mut entries = Vec::new();
        for i in 0..n {
            for j in i.saturating_sub(kl)..=(i + ku).min(n - 1) {
                entries.push((i, j, a.get(i, j)));
            }
        }
        Self::from_entries(n, kl, ku, entries)
    }

    /// Factors an `n × n` matrix given as `(row, col, value)` triples, summing
    /// repeats. Every entry must lie inside the band.
    pub fn from_entries<I>(n: usize, kl: usize, ku: usize, entries: I) -> Self
    where
        I: IntoIterator<Item = (usize, usize, Complex64)>,
    {
        let width = 2 * kl + ku + 1;
        let mut band = vec![Complex64::default(); n * width];
        for (i, j, v) in entries {
            assert!(j + kl >= i && j <= i + ku, "entry ({i}, {j}) outside the band");
            band[i * width + j + kl - i] += v;
        }
        let mut lu = Self { n, kl, width, band, pivots: (0..n).collect(), parity: 1.0, singular: false };
        lu.eliminate(ku);
        lu
    }

    fn idx(&self, i: usize, j: usize) -> usize {
        i * self.width + j + self.kl - i
    }

    fn reach(&self) -> usize {
        self.width - 1 - self.kl
    }

    fn eliminate(&mut self, ku: usize) {
        let (n, kl) = (self.n, self.kl);
        let reach = ku + kl;
        for col in 0..n {
            let last = (col + kl).min(n - 1);
            let (mut best, mut mag) = (col, -1.0);
            for r in col..=last {
                let v = self.band[self.idx(r, col)].norm();
                if v > mag {
                    best = r;
                    mag = v;
                }
            }
            self.pivots[col] = best;
            if mag == 0.0 {
                self.singular = true;
                continue;
            }
            let right = (col + reach).min(n - 1);
            if best != col {
                for j in col..=right {
                    let (a, b) = (self.idx(col, j), self.idx(best, j));
                    self.band.swap(a, b);
                }
                self.parity = -self.parity;
            }
            let pivot = self.band[self.idx(col, col)];
            for r in col + 1..=last {
                let at = self.idx(r, col);
                let f = self.band[at] / pivot;
                self.band[at] = f;
                if f == Complex64::default() {
                    continue;
                }
                for j in col + 1..=right {
                    let u = self.band[self.idx(col, j)];
                    let at = self.idx(r, j);
                    self.band[at] -= f * u;
                }
            }
        }
    }

    pub fn is_singular(&self) -> bool {
        self.singular
    }

    /// `det · ∏ scales`, accumulated in log form so that neither factor
    /// over- or underflows on its own.
    pub fn scaled_determinant(&self, scales: &[f64]) -> Complex64 {
        if self.singular {
            return Complex64::default();
        }
        let mut log_mag = 0.0;
        let mut phase = Complex64::new(self.parity, 0.0);
        for i in 0..self.n {
            let d = self.band[self.idx(i, i)];
            log_mag += d.norm().ln();
            phase *= d / d.norm();
        }
        let mut sign = 1.0;
        for &s in scales {
            log_mag += s.abs().ln();
            sign *= s.signum();
        }
        phase * (sign * log_mag.exp())
    }

    pub fn solve(&self, rhs: &[Complex64]) -> Option<Vec<Complex64>> {
        if self.singular {
            return None;
        }
        let n = self.n;
        let mut x = rhs.to_vec();
        for col in 0..n {
            x.swap(col, self.pivots[col]);
            let xc = x[col];
            for r in col + 1..=(col + self.kl).min(n - 1) {
                x[r] -= self.band[self.idx(r, col)] * xc;
            }
        }
        for i in (0..n).rev() {
            for j in i + 1..=(i + self.reach()).min(n - 1) {
                let u = self.band[self.idx(i, j)];
                x[i] = x[i] - u * x[j];
            }
            x[i] /= self.band[self.idx(i, i)];
        }
        Some(x)
    }
}

/// Solves a tridiagonal system in place (Thomas algorithm). `lower[i]`
/// couples row `i+1` to `i`, `upper[i]` couples row `i` to `i+1`.
pub fn solve_tridiagonal(lower: &[f64], diag: &[f64], upper: &[f64], rhs: &mut [f64]) {
    let n = diag.len();
    let mut c = vec![0.0; n];
    let mut d = diag[0];
    rhs[0] /= d;
    for i in 1..n {
        c[i - 1] = upper[i - 1] / d;
        d = diag[i] - lower[i - 1] * c[i - 1];
        rhs[i] = (rhs[i] - lower[i - 1] * rhs[i - 1]) / d;
    }
    for i in (0..n - 1).rev() {
        rhs[i] -= c[i] * rhs[i + 1];
    }
}

/// Number of eigenvalues of the symmetric tridiagonal matrix below `x`
/// (count of negative pivots of `T − xI`).
pub fn sturm_count(diag: &[f64], off: &[f64], x: f64) -> usize {
    let mut count = 0;
    let mut q = diag[0] - x;
    if q < 0.0 {
        count += 1;
    }
    for i in 1..diag.len() {
        let denom = if q == 0.0 { f64::EPSILON * (diag[i - 1].abs() + off[i - 1].abs()).max(f64::MIN_POSITIVE) } else { q };
        q = diag[i] - x - off[i - 1] * off[i - 1] / denom;
        if q < 0.0 {
            count += 1;
        }
    }
    count
}

/// The `index`-th smallest eigenvalue (0-based) of a symmetric tridiagonal matrix, by bisection.
pub fn tridiagonal_eigenvalue(diag: &[f64], off: &[f64], index: usize) -> f64 {
    // Gershgorin bounds
    let n = diag.len();
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for i in 0..n {
        let r = if i > 0 { off[i - 1].abs() } else { 0.0 } + if i + 1 < n { off[i].abs() } else { 0.0 };
        lo = lo.min(diag[i] - r);
        hi = hi.max(diag[i] + r);
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if sturm_count(diag, off, mid) > index {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    0.5 * (lo + hi)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn determinant_of_small_matrices() {
        let mut m = ComplexMatrix::zeros(2);
        m.set(0, 0, c(1.0, 1.0));
        m.set(0, 1, c(2.0, 0.0));
        m.set(1, 0, c(0.0, 3.0));
        m.set(1, 1, c(4.0, -1.0));
        let expect = c(1.0, 1.0) * c(4.0, -1.0) - c(2.0, 0.0) * c(0.0, 3.0);
        assert!((m.determinant() - expect).norm() < 1e-14);

        // permutation needing a pivot swap
        let mut p = ComplexMatrix::zeros(3);
        p.set(0, 1, c(1.0, 0.0));
        p.set(1, 2, c(1.0, 0.0));
        p.set(2, 0, c(1.0, 0.0));
        assert!((p.determinant() - c(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn solve_recovers_known_vector() {
        let n = 6;
        let mut m = ComplexMatrix::zeros(n);
        for i in 0..n {
            for j in 0..n {
                m.set(i, j, c(((i * 7 + j * 3) % 5) as f64 - 2.0, ((i + 2 * j) % 3) as f64));
            }
            m.add(i, i, c(6.0, 0.0));
        }
        let x: Vec<Complex64> = (0..n).map(|i| c(i as f64, 1.0 - i as f64)).collect();
        let b: Vec<Complex64> = (0..n).map(|i| (0..n).map(|j| m.get(i, j) * x[j]).sum()).collect();
        let sol = m.lu().solve(&b).unwrap();
        for (a, e) in sol.iter().zip(&x) {
            assert!((a - e).norm() < 1e-12);
        }
    }

    #[test]
    fn singular_matrix_detected() {
        let m = ComplexMatrix::zeros(3);
        assert!(m.lu().is_singular());
        assert_eq!(m.determinant(), Complex64::default());
    }

    fn banded_test_matrix(n: usize) -> ComplexMatrix {
        let mut m = ComplexMatrix::zeros(n);
        for i in 0..n {
            for j in i.saturating_sub(2)..=(i + 1).min(n - 1) {
                // small diagonal forces pivoting
                let v = if i == j {
                    c(0.1 * (i % 3) as f64, 0.05)
                } else {
                    c(1.0 + ((i + 2 * j) % 4) as f64, (i as f64 - j as f64) * 0.3)
                };
                m.set(i, j, v);
            }
        }
        m
    }

    #[test]
    fn band_lu_matches_dense() {
        let n = 9;
        let m = banded_test_matrix(n);
        let band = BandLu::factor(&m, 2, 1);
        let dense = m.determinant();
        assert!((band.scaled_determinant(&[]) - dense).norm() < 1e-12 * dense.norm());
        let scaled = band.scaled_determinant(&[2.0, -0.5, 4.0]);
        assert!((scaled + dense * 4.0).norm() < 1e-12 * dense.norm());
        let b: Vec<Complex64> = (0..n).map(|i| c(i as f64, 1.0)).collect();
        let xd = m.lu().solve(&b).unwrap();
        let xb = band.solve(&b).unwrap();
        for (a, e) in xb.iter().zip(&xd) {
            assert!((a - e).norm() < 1e-11);
        }
    }

    #[test]
    fn thomas_solves_laplacian() {
        let n = 5;
        let lower = vec![-1.0; n - 1];
        let upper = vec![-1.0; n - 1];
        let diag = vec![2.0; n];
        let x = [1.0, -2.0, 0.5, 3.0, 1.0];
        let mut b: Vec<f64> = (0..n)
            .map(|i| 2.0 * x[i] - if i > 0 { x[i - 1] } else { 0.0 } - if i + 1 < n { x[i + 1] } else { 0.0 })
            .collect();
        solve_tridiagonal(&lower, &diag, &upper, &mut b);
        for (a, e) in b.iter().zip(x) {
            assert!((a - e).abs() < 1e-13);
        }
    }

    #[test]
    fn discrete_laplacian_eigenvalues() {
        let n = 50;
        let diag = vec![2.0; n];
        let off = vec![-1.0; n - 1];
        for j in 0..5 {
            let exact = 2.0 - 2.0 * (std::f64::consts::PI * (j + 1) as f64 / (n + 1) as f64).cos();
            assert!((tridiagonal_eigenvalue(&diag, &off, j) - exact).abs() < 1e-13);
        }
    }
}
