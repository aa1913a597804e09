//! Sine-series solution for constant `σ`.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::quadrature::GaussLegendre;

/// `Σ_{m ≤ modes} b_m e^{−(mπσ)² t} sin(mπx)` with `b_m = 2∫ q₀ sin(mπy) dy`.
pub fn fourier_solution<Q: Fn(f64) -> f64>(sigma: f64, q0: Q, x: f64, t: f64, modes: usize) -> Result<f64> {
    if modes == 0 {
        return Err(Error::InvalidParameter("at least one mode is required".into()));
    }
    if !(sigma > 0.0) {
        return Err(Error::NonPositiveConductivity { x: 0.0, value: sigma });
    }
    if t < 0.0 {
        return Err(Error::DomainError { what: "t >= 0", value: t });
    }
    let rule = GaussLegendre::cached(16);
    let panels = 32.max(modes / 2);
    let samples: Vec<(f64, f64)> = (0..panels)
        .flat_map(|p| {
            let a = p as f64 / panels as f64;
            rule.mapped(a, a + 1.0 / panels as f64).collect::<Vec<_>>()
        })
        .map(|(y, w)| (y, w * q0(y)))
        .collect();
    let mut total = 0.0;
    for m in 1..=modes {
        let w = m as f64 * PI;
        let b = 2.0 * samples.iter().map(|(y, qw)| qw * (w * y).sin()).sum::<f64>();
        total += b * (-(w * sigma).powi(2) * t).exp() * (w * x).sin();
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_mode() {
        let v = fourier_solution(1.0, |y| (PI * y).sin(), 0.3, 0.2, 5).unwrap();
        assert!((v - (-PI * PI * 0.2).exp() * (PI * 0.3).sin()).abs() < 1e-14);
    }

    #[test]
    fn quadratic_coefficients() {
        // b_m = 8/(mπ)³ for odd m, so the x = 1/2 partial sums converge absolutely
        let exact = |modes: usize| -> f64 {
            (1..=modes)
                .filter(|m| m % 2 == 1)
                .map(|m| {
                    let w = m as f64 * PI;
                    8.0 / w.powi(3) * (-w * w * 0.1).exp() * (0.5 * w).sin()
                })
                .sum()
        };
        for modes in [1, 3, 9] {
            let v = fourier_solution(1.0, |y| y * (1.0 - y), 0.5, 0.1, modes).unwrap();
            assert!((v - exact(modes)).abs() < 1e-14);
        }
    }

    #[test]
    fn recovers_initial_data() {
        let v = fourier_solution(1.0, |y| y * (1.0 - y), 0.3, 0.0, 400).unwrap();
        assert!((v - 0.21).abs() < 1e-6);
    }
}
