//! Finite-difference Dirichlet eigenpairs of `(σ² y')'`.
//!
//! The conservative three-point discretization is symmetric tridiagonal;
//! eigenvalues come from Sturm-sequence bisection and eigenvectors from
//! inverse iteration.

use crate::coefficient::Conductivity;
use crate::error::{Error, Result};
use crate::linalg::{solve_tridiagonal, tridiagonal_eigenvalue};

fn operator(c: &Conductivity, nx: usize) -> (Vec<f64>, Vec<f64>) {
    let h = 1.0 / nx as f64;
    let faces: Vec<f64> = (0..nx).map(|i| c.sigma_squared((i as f64 + 0.5) * h) / (h * h)).collect();
    let diag = (0..nx - 1).map(|i| faces[i] + faces[i + 1]).collect();
    let off = (0..nx - 2).map(|i| -faces[i + 1]).collect();
    (diag, off)
}

fn check(count: usize, nx: usize) -> Result<()> {
    if nx < 64 {
        return Err(Error::InvalidParameter(format!("finite-difference grid needs nx >= 64, got {nx}")));
    }
    if count == 0 || count >= nx - 1 {
        return Err(Error::InvalidParameter(format!("cannot take {count} eigenvalues from {} unknowns", nx - 1)));
    }
    Ok(())
}

/// The first `count` eigenvalues `λ_1 > λ_2 > …` on an `nx`-cell grid.
pub fn fd_eigenvalues_raw(c: &Conductivity, count: usize, nx: usize) -> Result<Vec<f64>> {
    check(count, nx)?;
    let (diag, off) = operator(c, nx);
    Ok((0..count).map(|m| -tridiagonal_eigenvalue(&diag, &off, m)).collect())
}

/// Richardson combination `(4λ(2nx) − λ(nx))/3` of two grids.
pub fn fd_eigenvalues(c: &Conductivity, count: usize, nx: usize) -> Result<Vec<f64>> {
    let coarse = fd_eigenvalues_raw(c, count, nx)?;
    let fine = fd_eigenvalues_raw(c, count, 2 * nx)?;
    Ok(coarse.iter().zip(&fine).map(|(a, b)| (4.0 * b - a) / 3.0).collect())
}

/// Mode `m` (from 1) on the grid `x_i = i/nx`, endpoints included, with unit
/// trapezoidal `L²` norm and positive slope at `x = 0`.
pub fn fd_eigenvector(c: &Conductivity, m: usize, nx: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    if m == 0 {
        return Err(Error::InvalidParameter("mode index starts at 1".into()));
    }
    check(m, nx)?;
    let (diag, off) = operator(c, nx);
    let mu = tridiagonal_eigenvalue(&diag, &off, m - 1);
    let shift = mu * (1.0 + 1e-10) + 1e-12;
    let shifted: Vec<f64> = diag.iter().map(|d| d - shift).collect();
    let n = diag.len();
    let mut v: Vec<f64> = (0..n).map(|i| 1.0 + 0.1 * ((i * 7919) % 13) as f64).collect();
    for _ in 0..4 {
        solve_tridiagonal(&off, &shifted, &off, &mut v);
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        v.iter_mut().for_each(|x| *x /= norm);
    }
    let h = 1.0 / nx as f64;
    let norm = (v.iter().map(|x| x * x).sum::<f64>() * h).sqrt();
    let sign = if v[0] >= 0.0 { 1.0 } else { -1.0 };
    let mut values = vec![0.0];
    values.extend(v.iter().map(|x| sign * x / norm));
    values.push(0.0);
    let xs = (0..=nx).map(|i| i as f64 * h).collect();
    Ok((xs, values))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn constant_coefficient_spectrum() {
        let c = Conductivity::constant(1.0).unwrap();
        let raw = fd_eigenvalues_raw(&c, 3, 200).unwrap();
        for (m, l) in raw.iter().enumerate() {
            let exact = -((m + 1) as f64 * PI).powi(2);
            let h = 1.0 / 200.0;
            // leading error term λ²h²/12
            assert!((l - exact).abs() < exact * exact * h * h / 12.0 * 1.05, "{l} vs {exact}");
        }
        let extrapolated = fd_eigenvalues(&c, 3, 200).unwrap();
        for (m, l) in extrapolated.iter().enumerate() {
            assert!((l + ((m + 1) as f64 * PI).powi(2)).abs() < 1e-4);
        }
    }

    #[test]
    fn eigenvector_is_sine() {
        let c = Conductivity::constant(1.0).unwrap();
        let (xs, v) = fd_eigenvector(&c, 2, 400).unwrap();
        for (x, y) in xs.iter().zip(&v) {
            assert!((y - 2f64.sqrt() * (2.0 * PI * x).sin()).abs() < 1e-4);
        }
    }

    #[test]
    fn parameter_checks() {
        let c = Conductivity::parabolic24();
        assert!(fd_eigenvalues_raw(&c, 3, 10).is_err());
        assert!(fd_eigenvector(&c, 0, 100).is_err());
    }
}
