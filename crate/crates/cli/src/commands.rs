//! The four subcommands, as functions from a configuration to rendered output.

use varheat_core::oracles::{fd_eigenvalues, fd_eigenvector};
use varheat_core::spectrum::{eigenfunction, find_eigenvalues};
use varheat_core::transform::solve_grid;
use varheat_core::verify::{run_suite, CriterionReport, Suite};
use varheat_core::{Conductivity, TravelTimeMap};

use crate::config::{ConfigError, Format, RunConfig};
use crate::output::{self, Field};
use crate::svg::{self, Panel, Series};
use crate::CliError;

/// What a command produced: the data document, an optional figure, and
/// human-readable notes for stderr.
#[derive(Debug, Clone, PartialEq)]
pub struct Rendered {
    pub data: String,
    pub svg: Option<String>,
    pub notes: Vec<String>,
}

fn setup(cfg: &RunConfig) -> Result<(Conductivity, TravelTimeMap), CliError> {
    let c = cfg.conductivity()?;
    let tt = TravelTimeMap::build(&c, varheat_core::coefficient::DEFAULT_TAU_TOL)?;
    Ok((c, tt))
}

fn table(format: Format, header: &[&str], rows: &[Vec<Field>]) -> String {
    match format {
        Format::Csv => output::csv(header, rows),
        Format::Json => output::json(header, rows),
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolveRow {
    pub x: f64,
    pub t: f64,
    pub q: f64,
    pub imag_residual: f64,
    pub n: usize,
}

/// Solutions for every truncation, time and grid point, in that nesting order.
pub fn solve_rows(cfg: &RunConfig) -> Result<Vec<SolveRow>, CliError> {
    let (c, tt) = setup(cfg)?;
    let q0 = cfg.initial_profile()?;
    let xs = cfg.x_grid();
    let mut rows = Vec::new();
    for &n in &cfg.truncations {
        let samples = solve_grid(&c, &tt, |x| q0.eval(x), &xs, &cfg.times, &cfg.series(n), &cfg.contour)?;
        rows.extend(samples.iter().map(|s| SolveRow { x: s.x, t: s.t, q: s.value, imag_residual: s.imag_residual, n }));
    }
    Ok(rows)
}

pub fn benchmark_exact(x: f64, t: f64) -> f64 {
    x * (1.0 - x) * (-t).exp()
}

pub fn cmd_solve(cfg: &RunConfig) -> Result<Rendered, CliError> {
    let rows = solve_rows(cfg)?;
    let fields: Vec<Vec<Field>> = rows
        .iter()
        .map(|r| vec![Field::Real(r.x), Field::Real(r.t), Field::Real(r.q), Field::Real(r.imag_residual), Field::Count(r.n)])
        .collect();
    let data = table(cfg.format, &["x", "t", "q", "imag_residual", "N"], &fields);

    let mut notes = Vec::new();
    let mut solution = Panel { title: "solution".into(), xlabel: "x".into(), ylabel: "q(x, t)".into(), ..Default::default() };
    let mut error = Panel { title: "error".into(), xlabel: "x".into(), ylabel: "|q_N - q|".into(), log_y: true, ..Default::default() };
    let benchmark = cfg.is_benchmark();
    for &t in &cfg.times {
        if benchmark {
            let exact = cfg.x_grid().iter().map(|&x| (x, benchmark_exact(x, t))).collect();
            solution.series.push(Series::reference(format!("exact, t={t}"), exact));
        }
        for &n in &cfg.truncations {
            let pts: Vec<(f64, f64)> = rows.iter().filter(|r| r.n == n && r.t == t).map(|r| (r.x, r.q)).collect();
            if benchmark {
                let errs: Vec<(f64, f64)> = pts.iter().map(|&(x, q)| (x, (q - benchmark_exact(x, t)).abs())).collect();
                let worst = errs.iter().map(|e| e.1).fold(0.0, f64::max);
                notes.push(format!("N={n} t={t}: max|q_N - x(1-x)e^(-t)| = {worst:.6e}"));
                error.series.push(Series::new(format!("N={n}, t={t}"), errs));
            }
            solution.series.push(Series::new(format!("N={n}, t={t}"), pts));
        }
    }
    let panels = if benchmark { vec![solution, error] } else { vec![solution] };
    Ok(Rendered { data, svg: Some(svg::render(&panels)), notes })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EigRow {
    pub m: usize,
    pub kappa: f64,
    pub lambda: f64,
    pub residual: f64,
    pub n: usize,
    pub fd_lambda: Option<f64>,
}

pub fn eig_rows(cfg: &RunConfig) -> Result<Vec<EigRow>, CliError> {
    let (c, tt) = setup(cfg)?;
    let fd = if cfg.reference { Some(fd_eigenvalues(&c, cfg.count, cfg.fd_nx)?) } else { None };
    let mut rows = Vec::new();
    for &n in &cfg.truncations {
        for p in find_eigenvalues(&c, &tt, &cfg.series(n), cfg.count)? {
            let fd_lambda = fd.as_ref().map(|f| f[p.m - 1]);
            rows.push(EigRow { m: p.m, kappa: p.kappa, lambda: p.lambda, residual: p.residual, n, fd_lambda });
        }
    }
    Ok(rows)
}

pub fn cmd_eigs(cfg: &RunConfig) -> Result<Rendered, CliError> {
    let rows = eig_rows(cfg)?;
    let mut header = vec!["m", "kappa", "lambda", "residual", "N"];
    if cfg.reference {
        header.extend(["fd_lambda", "abs_diff"]);
    }
    let mut notes = Vec::new();
    let fields: Vec<Vec<Field>> = rows
        .iter()
        .map(|r| {
            let mut f = vec![Field::Real(r.kappa), Field::Real(r.lambda), Field::Real(r.residual), Field::Count(r.n)];
            f.insert(0, Field::Count(r.m));
            let mut note = format!("N={} m={}: lambda = {:.6}", r.n, r.m, r.lambda);
            if let Some(fd) = r.fd_lambda {
                f.extend([Field::Real(fd), Field::Real((r.lambda - fd).abs())]);
                note.push_str(&format!("   fd = {fd:.6}   |diff| = {:.3e}", (r.lambda - fd).abs()));
            }
            notes.push(note);
            f
        })
        .collect();
    Ok(Rendered { data: table(cfg.format, &header, &fields), svg: None, notes })
}

#[derive(Debug, Clone, PartialEq)]
pub struct EigfunCurve {
    pub m: usize,
    pub n: usize,
    pub lambda: f64,
    pub values: Vec<f64>,
}

fn interpolate(xs: &[f64], ys: &[f64], x: f64) -> f64 {
    let i = xs.partition_point(|&p| p < x).clamp(1, xs.len() - 1);
    let (x0, x1) = (xs[i - 1], xs[i]);
    ys[i - 1] + (ys[i] - ys[i - 1]) * (x - x0) / (x1 - x0)
}

pub fn eigfun_curves(cfg: &RunConfig) -> Result<Vec<EigfunCurve>, CliError> {
    let (c, tt) = setup(cfg)?;
    let xs = cfg.x_grid();
    let top = *cfg.modes.iter().max().expect("validated modes");
    let mut curves = Vec::new();
    for &n in &cfg.truncations {
        let spec = cfg.series(n);
        let pairs = find_eigenvalues(&c, &tt, &spec, top)?;
        for &m in &cfg.modes {
            let f = eigenfunction(&c, &tt, pairs[m - 1], &spec)?;
            curves.push(EigfunCurve { m, n, lambda: pairs[m - 1].lambda, values: f.sample(&xs)? });
        }
    }
    Ok(curves)
}

pub fn cmd_eigfuns(cfg: &RunConfig) -> Result<Rendered, CliError> {
    let c = cfg.conductivity()?;
    let curves = eigfun_curves(cfg)?;
    let xs = cfg.x_grid();
    let mut reference = Vec::new();
    if cfg.reference {
        for &m in &cfg.modes {
            reference.push((m, fd_eigenvector(&c, m, cfg.fd_nx)?));
        }
    }
    let mut names: Vec<String> = curves.iter().map(|k| format!("X{}_N{}", k.m, k.n)).collect();
    names.extend(reference.iter().map(|(m, _)| format!("X{m}_fd")));
    let mut header = vec!["x"];
    header.extend(names.iter().map(String::as_str));
    let fields: Vec<Vec<Field>> = xs
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let mut row = vec![Field::Real(x)];
            row.extend(curves.iter().map(|k| Field::Real(k.values[i])));
            row.extend(reference.iter().map(|(_, (fx, fy))| Field::Real(interpolate(fx, fy, x))));
            row
        })
        .collect();

    let mut notes = Vec::new();
    let mut panels = Vec::new();
    for &m in &cfg.modes {
        let mut panel = Panel { title: format!("mode {m}"), xlabel: "x".into(), ylabel: format!("X_{m}(x)"), ..Default::default() };
        let fd = reference.iter().find(|r| r.0 == m).map(|r| &r.1);
        for k in curves.iter().filter(|k| k.m == m) {
            if let Some((fx, fy)) = fd {
                let dev = xs.iter().zip(&k.values).map(|(&x, v)| (v - interpolate(fx, fy, x)).abs()).fold(0.0, f64::max);
                notes.push(format!("m={m} N={}: max deviation from finite differences = {dev:.3e}", k.n));
            }
            panel.series.push(Series::new(format!("N={}", k.n), xs.iter().copied().zip(k.values.iter().copied()).collect()));
        }
        if let Some((fx, fy)) = fd {
            panel.series.push(Series::reference("finite differences", fx.iter().copied().zip(fy.iter().copied()).collect()));
        }
        panels.push(panel);
    }
    Ok(Rendered { data: table(cfg.format, &header, &fields), svg: Some(svg::render(&panels)), notes })
}

pub fn verify_reports(suite: &str) -> Result<Vec<CriterionReport>, CliError> {
    let suite = Suite::parse(suite).ok_or_else(|| {
        CliError::Config(ConfigError {
            key: None,
            line: None,
            message: format!("unknown suite `{suite}` (table1, figure2, determinant, convergence, all)"),
        })
    })?;
    Ok(run_suite(suite)?)
}

/// Reports are the data; a failed check makes the command fail.
pub fn cmd_verify(suite: &str) -> Result<(Rendered, usize), CliError> {
    let reports = verify_reports(suite)?;
    let failed = reports.iter().filter(|r| !r.passed()).count();
    let data: String = reports.iter().map(|r| r.to_string()).collect();
    let notes = vec![format!("{} of {} criteria passed", reports.len() - failed, reports.len())];
    Ok((Rendered { data, svg: None, notes }, failed))
}
