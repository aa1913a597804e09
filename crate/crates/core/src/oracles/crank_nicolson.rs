//! Crank–Nicolson for `q_t = (σ² q_x)_x` with `q(0) = q(1) = 0`.
//!
//! Conservative second-order differences with `σ²` at cell faces, one
//! tridiagonal solve per step.

use crate::coefficient::Conductivity;
use crate::error::{Error, Result};
use crate::linalg::solve_tridiagonal;

#[derive(Debug, Clone, PartialEq)]
pub struct CnSolution {
    /// Grid `x_i = i/nx`, endpoints included.
    pub xs: Vec<f64>,
    pub t: f64,
    /// Solution at `t` on `xs`.
    pub values: Vec<f64>,
    /// Smallest and largest value seen over all time levels.
    pub range: (f64, f64),
}

impl CnSolution {
    /// Piecewise-linear interpolation of the final profile.
    pub fn value_at(&self, x: f64) -> f64 {
        let nx = self.xs.len() - 1;
        let s = (x.clamp(0.0, 1.0) * nx as f64).min(nx as f64 - 1e-12);
        let i = s.floor() as usize;
        let f = s - i as f64;
        self.values[i] * (1.0 - f) + self.values[i + 1] * f
    }
}

pub fn crank_nicolson<Q: Fn(f64) -> f64>(c: &Conductivity, q0: Q, t_final: f64, nx: usize, nt: usize) -> Result<CnSolution> {
    if nx < 8 || nt < 8 {
        return Err(Error::InvalidParameter(format!("Crank–Nicolson needs nx, nt >= 8, got {nx}, {nt}")));
    }
    if !(t_final > 0.0) {
        return Err(Error::DomainError { what: "t > 0", value: t_final });
    }
    let h = 1.0 / nx as f64;
    let dt = t_final / nt as f64;
    let xs: Vec<f64> = (0..=nx).map(|i| i as f64 * h).collect();
    let faces: Vec<f64> = (0..nx).map(|i| c.sigma_squared((i as f64 + 0.5) * h)).collect();

    let m = nx - 1;
    let r = 0.5 * dt / (h * h);
    // interior unknown i ↔ grid point i + 1
    let diag: Vec<f64> = (0..m).map(|i| 1.0 + r * (faces[i] + faces[i + 1])).collect();
    let off: Vec<f64> = (0..m - 1).map(|i| -r * faces[i + 1]).collect();

    let mut q: Vec<f64> = xs.iter().map(|&x| q0(x)).collect();
    q[0] = 0.0;
    q[nx] = 0.0;
    let mut lo = q.iter().copied().fold(f64::INFINITY, f64::min);
    let mut hi = q.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mut rhs = vec![0.0; m];
    for _ in 0..nt {
        for i in 0..m {
            let g = i + 1;
            let flux = faces[g] * (q[g + 1] - q[g]) - faces[g - 1] * (q[g] - q[g - 1]);
            rhs[i] = q[g] + r * flux;
        }
        solve_tridiagonal(&off, &diag, &off, &mut rhs);
        q[1..nx].copy_from_slice(&rhs);
        for &v in &q {
            lo = lo.min(v);
            hi = hi.max(v);
        }
    }
    Ok(CnSolution { xs, t: t_final, values: q, range: (lo, hi) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn max_error(nx: usize, nt: usize) -> f64 {
        let c = Conductivity::constant(1.0).unwrap();
        let sol = crank_nicolson(&c, |x| (PI * x).sin(), 0.1, nx, nt).unwrap();
        let decay = (-PI * PI * 0.1).exp();
        sol.xs.iter().zip(&sol.values).map(|(&x, v)| (v - decay * (PI * x).sin()).abs()).fold(0.0, f64::max)
    }

    #[test]
    fn constant_sine_mode() {
        assert!(max_error(100, 100) < 1e-4);
    }

    #[test]
    fn second_order_refinement() {
        let coarse = max_error(40, 40);
        let fine = max_error(80, 80);
        let ratio = coarse / fine;
        assert!((ratio - 4.0).abs() < 0.3, "ratio {ratio}");
    }

    #[test]
    fn parabolic_exact_solution() {
        let c = Conductivity::parabolic24();
        let sol = crank_nicolson(&c, |x| x * (1.0 - x), 1.0, 200, 200).unwrap();
        let err = sol.xs.iter().zip(&sol.values).map(|(&x, v)| (v - x * (1.0 - x) * (-1f64).exp()).abs()).fold(0.0, f64::max);
        assert!(err < 1e-5, "{err}");
        assert!((sol.value_at(0.5) - 0.25 * (-1f64).exp()).abs() < 1e-5);
    }

    #[test]
    fn stays_within_initial_range() {
        let c = Conductivity::rational9000();
        let sol = crank_nicolson(&c, |x| x * (1.0 - x), 0.5, 100, 200).unwrap();
        assert!(sol.range.0 >= -1e-14 && sol.range.1 <= 0.25 + 1e-14, "{:?}", sol.range);
    }

    #[test]
    fn rejects_coarse_grids() {
        let c = Conductivity::parabolic24();
        assert!(crank_nicolson(&c, |x| x, 1.0, 4, 100).is_err());
    }
}
