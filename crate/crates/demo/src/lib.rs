//! Browser bindings. Each export returns a [`Plot`]: one x-axis, several
//! named curves, optional vertical marks, and a line of text.

use num_complex::Complex64;
use wasm_bindgen::prelude::*;

use varheat_core::coefficient::DEFAULT_TAU_TOL;
use varheat_core::oracles::fd_eigenvector;
use varheat_core::spectrum::{eigenfunction, find_eigenvalues};
use varheat_core::transform::{delta_fn, solve_grid};
use varheat_core::{Conductivity, Contour, SeriesSpec, TravelTimeMap};

#[wasm_bindgen]
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Plot {
    x: Vec<f64>,
    curves: Vec<(String, Vec<f64>)>,
    marks: Vec<f64>,
    note: String,
}

#[wasm_bindgen]
impl Plot {
    pub fn x(&self) -> Vec<f64> {
        self.x.clone()
    }

    pub fn count(&self) -> usize {
        self.curves.len()
    }

    pub fn label(&self, i: usize) -> String {
        self.curves.get(i).map(|c| c.0.clone()).unwrap_or_default()
    }

    pub fn values(&self, i: usize) -> Vec<f64> {
        self.curves.get(i).map(|c| c.1.clone()).unwrap_or_default()
    }

    /// Positions on the x-axis to highlight, such as roots.
    pub fn marks(&self) -> Vec<f64> {
        self.marks.clone()
    }

    pub fn note(&self) -> String {
        self.note.clone()
    }
}

fn problem(kind: &str, param: f64) -> Result<(Conductivity, TravelTimeMap), String> {
    let c = match kind {
        "parabolic24" => Conductivity::parabolic24(),
        "rational9000" => Conductivity::rational9000(),
        "constant" => Conductivity::constant(param).map_err(|e| e.to_string())?,
        other => return Err(format!("unknown conductivity `{other}`")),
    };
    let tt = TravelTimeMap::build(&c, DEFAULT_TAU_TOL).map_err(|e| e.to_string())?;
    Ok((c, tt))
}

fn spec(n: usize) -> Result<SeriesSpec, String> {
    SeriesSpec::new(n).map_err(|e| e.to_string())
}

fn grid(points: usize) -> Vec<f64> {
    (0..points).map(|i| i as f64 / (points - 1) as f64).collect()
}

/// `Δ_M(k)` on `[0, kmax]` for every `M ≤ n`, with the roots of `Δ_n` as marks.
pub fn characteristic_plot(kind: &str, param: f64, n: usize, kmax: f64) -> Result<Plot, String> {
    if !(kmax > 0.0 && kmax <= 60.0) {
        return Err("kmax must lie in (0, 60]".into());
    }
    let (c, tt) = problem(kind, param)?;
    let ks: Vec<f64> = (0..=400).map(|i| kmax * i as f64 / 400.0).collect();
    let mut curves = Vec::new();
    for m in 0..=n {
        let s = spec(m)?;
        let values = ks
            .iter()
            .map(|&k| delta_fn(&c, &tt, Complex64::new(k, 0.0), &s).map(|d| d.re))
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| e.to_string())?;
        curves.push((format!("N={m}"), values));
    }
    // roots occur about every π/τ(1)
    let count = ((kmax * tt.total() / std::f64::consts::PI).floor() as usize).max(1);
    let pairs = find_eigenvalues(&c, &tt, &spec(n)?, count).map_err(|e| e.to_string())?;
    let marks: Vec<f64> = pairs.iter().map(|p| p.kappa).filter(|&k| k <= kmax).collect();
    let lambdas: Vec<String> = pairs.iter().filter(|p| p.kappa <= kmax).map(|p| format!("{:.5}", p.lambda)).collect();
    Ok(Plot { x: ks, curves, marks, note: format!("eigenvalues at N={n}: {}", lambdas.join(", ")) })
}

/// Eigenfunctions `1..=modes` at truncation `n`, each with its
/// finite-difference counterpart labelled `fd`.
pub fn eigenfunction_plot(kind: &str, param: f64, n: usize, modes: usize) -> Result<Plot, String> {
    if !(1..=6).contains(&modes) {
        return Err("modes must be 1 to 6".into());
    }
    let (c, tt) = problem(kind, param)?;
    let s = spec(n)?;
    let xs = grid(201);
    let pairs = find_eigenvalues(&c, &tt, &s, modes).map_err(|e| e.to_string())?;
    let mut curves = Vec::new();
    let mut worst = 0.0f64;
    for p in &pairs {
        let f = eigenfunction(&c, &tt, *p, &s).map_err(|e| e.to_string())?;
        let values = f.sample(&xs).map_err(|e| e.to_string())?;
        // 200 intervals put the finite-difference nodes on the plot grid
        let (_, fd) = fd_eigenvector(&c, p.m, 200).map_err(|e| e.to_string())?;
        worst = worst.max(values.iter().zip(&fd).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max));
        curves.push((format!("X{} N={n}", p.m), values));
        curves.push((format!("X{} fd", p.m), fd));
    }
    Ok(Plot { x: xs, curves, marks: Vec::new(), note: format!("max deviation from finite differences: {worst:.2e}") })
}

/// `q(x, t)` from `q₀ = x(1 − x)`, with the initial data and, for the
/// parabolic coefficient, the exact solution.
pub fn heat_plot(kind: &str, param: f64, n: usize, t: f64) -> Result<Plot, String> {
    if !(t > 0.0 && t <= 10.0) {
        return Err("t must lie in (0, 10]".into());
    }
    let (c, tt) = problem(kind, param)?;
    let xs = grid(41);
    let q0 = |x: f64| x * (1.0 - x);
    let samples = solve_grid(&c, &tt, q0, &xs, &[t], &spec(n)?, &Contour::default()).map_err(|e| e.to_string())?;
    let q: Vec<f64> = samples.iter().map(|s| s.value).collect();
    let mut curves = vec![("q0".to_string(), xs.iter().map(|&x| q0(x)).collect()), (format!("q N={n}"), q.clone())];
    let mut note = format!("max q = {:.6}", q.iter().copied().fold(f64::NEG_INFINITY, f64::max));
    if kind == "parabolic24" {
        let exact: Vec<f64> = xs.iter().map(|&x| q0(x) * (-t).exp()).collect();
        let err = q.iter().zip(&exact).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        note = format!("max |q_N - x(1-x)e^(-t)| = {err:.3e}");
        curves.push(("exact".to_string(), exact));
    }
    Ok(Plot { x: xs, curves, marks: Vec::new(), note })
}

#[wasm_bindgen]
pub fn characteristic(kind: &str, param: f64, n: usize, kmax: f64) -> Result<Plot, JsError> {
    characteristic_plot(kind, param, n, kmax).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn eigenfunctions(kind: &str, param: f64, n: usize, modes: usize) -> Result<Plot, JsError> {
    eigenfunction_plot(kind, param, n, modes).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn heat_profile(kind: &str, param: f64, n: usize, t: f64) -> Result<Plot, JsError> {
    heat_plot(kind, param, n, t).map_err(|e| JsError::new(&e))
}
