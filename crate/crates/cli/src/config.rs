//! Run configuration: flat `key = value` text with dotted keys.
//!
//! ```text
//! sigma.kind = "rational9000"
//! series.N = [0, 1]
//! contour.delta = 0.3927
//! grid.t = [0.1, 1.0]
//! ```
//!
//! Every key is optional; unknown keys, wrong types and out-of-range values
//! are rejected with the key and its line.

use std::collections::BTreeMap;
use std::fmt;
use std::fs::File;
use std::io::BufReader;
use std::path::{Path, PathBuf};

use toml::de::{DeTable, DeValue};
use varheat_core::coefficient::MonotoneCubic;
use varheat_core::simplex::DEFAULT_QUAD_ORDER;
use varheat_core::{Conductivity, Contour, ContourShape, SeriesSpec};

/// A configuration problem, located by key and line where possible.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfigError {
    pub key: Option<String>,
    pub line: Option<usize>,
    pub message: String,
}

impl ConfigError {
    fn at(key: &str, line: Option<usize>, message: impl Into<String>) -> Self {
        Self { key: Some(key.to_string()), line, message: message.into() }
    }
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(line) = self.line {
            write!(f, "line {line}: ")?;
        }
        if let Some(key) = &self.key {
            write!(f, "key `{key}`: ")?;
        }
        f.write_str(&self.message)
    }
}

impl std::error::Error for ConfigError {}

#[derive(Debug, Clone, PartialEq)]
pub enum SigmaSpec {
    Constant(f64),
    Parabolic24,
    Rational9000,
    /// Two-column CSV of `(x, σ²(x))`.
    Table(PathBuf),
}

#[derive(Debug, Clone, PartialEq)]
pub enum InitialSpec {
    /// `x(1 − x)`
    Quadratic,
    /// `sin(mπx)`
    Sine(usize),
    /// Two-column CSV of `(x, q₀(x))`, interpolated monotonically.
    Table(PathBuf),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "csv" => Some(Self::Csv),
            "json" => Some(Self::Json),
            _ => None,
        }
    }

    pub fn extension(self) -> &'static str {
        match self {
            Self::Csv => "csv",
            Self::Json => "json",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub sigma: SigmaSpec,
    pub initial: InitialSpec,
    /// Truncation orders; several give one set of results each.
    pub truncations: Vec<usize>,
    pub quad_order: usize,
    pub contour: Contour,
    /// Uniform sample points on `[0, 1]`, endpoints included.
    pub nx: usize,
    pub times: Vec<f64>,
    pub count: usize,
    pub modes: Vec<usize>,
    /// Attach finite-difference reference values to eigenvalue output.
    pub reference: bool,
    pub fd_nx: usize,
    pub format: Format,
    pub output: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            sigma: SigmaSpec::Parabolic24,
            initial: InitialSpec::Quadratic,
            truncations: vec![2],
            quad_order: DEFAULT_QUAD_ORDER,
            contour: Contour::default(),
            nx: 101,
            times: vec![1.0],
            count: 4,
            modes: vec![1, 2],
            reference: true,
            fd_nx: 400,
            format: Format::Csv,
            output: None,
        }
    }
}

const KEYS: &[&str] = &[
    "sigma.kind",
    "sigma.params",
    "sigma.table",
    "initial.kind",
    "initial.mode",
    "initial.table",
    "series.N",
    "series.quad_order",
    "contour.shape",
    "contour.r",
    "contour.delta",
    "contour.kmax",
    "contour.density",
    "grid.nx",
    "grid.t",
    "spectrum.count",
    "spectrum.modes",
    "spectrum.reference",
    "spectrum.fd_nx",
    "output.format",
    "output.path",
];

struct Entry<'i> {
    line: usize,
    value: DeValue<'i>,
}

struct Entries<'i> {
    map: BTreeMap<String, Entry<'i>>,
}

fn line_of(text: &str, offset: usize) -> usize {
    text[..offset.min(text.len())].bytes().filter(|&b| b == b'\n').count() + 1
}

fn flatten<'i>(text: &str, table: DeTable<'i>, prefix: &str, out: &mut BTreeMap<String, Entry<'i>>) {
    for (key, value) in table {
        let line = line_of(text, key.span().start);
        let name = if prefix.is_empty() { key.get_ref().to_string() } else { format!("{prefix}.{}", key.get_ref()) };
        match value.into_inner() {
            DeValue::Table(inner) => flatten(text, inner, &name, out),
            value => {
                out.insert(name, Entry { line, value });
            }
        }
    }
}

fn as_f64(v: &DeValue) -> Option<f64> {
    match v {
        DeValue::Float(f) => f.as_str().replace('_', "").parse().ok(),
        DeValue::Integer(i) => as_i64(i.as_str(), i.radix()).map(|i| i as f64),
        _ => None,
    }
}

fn as_i64(s: &str, radix: u32) -> Option<i64> {
    let s = s.replace('_', "");
    let digits = if radix == 10 { s.as_str() } else { s.get(2..)? };
    i64::from_str_radix(digits, radix).ok()
}

fn as_usize(v: &DeValue) -> Option<usize> {
    match v {
        DeValue::Integer(i) => as_i64(i.as_str(), i.radix()).and_then(|i| usize::try_from(i).ok()),
        _ => None,
    }
}

impl<'i> Entries<'i> {
    fn line(&self, key: &str) -> Option<usize> {
        self.map.get(key).map(|e| e.line)
    }

    fn fail(&self, key: &str, message: impl Into<String>) -> ConfigError {
        ConfigError::at(key, self.line(key), message)
    }

    fn get<T>(&self, key: &str, what: &str, f: impl Fn(&DeValue) -> Option<T>) -> Result<Option<T>, ConfigError> {
        match self.map.get(key) {
            None => Ok(None),
            Some(e) => f(&e.value).map(Some).ok_or_else(|| self.fail(key, format!("expected {what}"))),
        }
    }

    fn string(&self, key: &str) -> Result<Option<String>, ConfigError> {
        self.get(key, "a string", |v| v.as_str().map(str::to_string))
    }

    fn float(&self, key: &str) -> Result<Option<f64>, ConfigError> {
        self.get(key, "a number", as_f64)
    }

    fn count(&self, key: &str) -> Result<Option<usize>, ConfigError> {
        self.get(key, "a non-negative integer", as_usize)
    }

    fn boolean(&self, key: &str) -> Result<Option<bool>, ConfigError> {
        self.get(key, "true or false", |v| v.as_bool())
    }

    /// A scalar or an array of scalars.
    fn list<T>(&self, key: &str, what: &str, f: impl Fn(&DeValue) -> Option<T>) -> Result<Option<Vec<T>>, ConfigError> {
        self.get(key, what, |v| match v {
            DeValue::Array(items) => items.iter().map(|i| f(i.get_ref())).collect(),
            v => f(v).map(|x| vec![x]),
        })
    }
}

impl RunConfig {
    /// Reads a configuration file; relative table paths resolve against its directory.
    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| ConfigError { key: None, line: None, message: format!("cannot read {}: {e}", path.display()) })?;
        Self::parse(&text, path.parent().unwrap_or(Path::new(".")))
    }

    pub fn parse(text: &str, base: &Path) -> Result<Self, ConfigError> {
        let table = DeTable::parse(text).map_err(|e| ConfigError {
            key: None,
            line: e.span().map(|s| line_of(text, s.start)),
            message: e.message().to_string(),
        })?;
        let mut map = BTreeMap::new();
        flatten(text, table.into_inner(), "", &mut map);
        let entries = Entries { map };
        if let Some((key, e)) = entries.map.iter().find(|(k, _)| !KEYS.contains(&k.as_str())) {
            return Err(ConfigError::at(key, Some(e.line), "unknown key"));
        }
        let mut cfg = Self::default();
        let resolve = |p: String| if Path::new(&p).is_absolute() { PathBuf::from(p) } else { base.join(p) };

        let params = entries.list("sigma.params", "a number or an array of numbers", as_f64)?;
        let table = entries.string("sigma.table")?;
        let kind = entries.string("sigma.kind")?;
        cfg.sigma = match kind.as_deref().unwrap_or("parabolic24") {
            "constant" => match params.as_deref() {
                Some(&[c]) if c > 0.0 && c.is_finite() => SigmaSpec::Constant(c),
                Some(_) => return Err(entries.fail("sigma.params", "constant conductivity takes one positive value")),
                None => return Err(entries.fail("sigma.kind", "`constant` needs `sigma.params`")),
            },
            "parabolic24" => SigmaSpec::Parabolic24,
            "rational9000" => SigmaSpec::Rational9000,
            "table" => match table.clone() {
                Some(p) => SigmaSpec::Table(resolve(p)),
                None => return Err(entries.fail("sigma.kind", "`table` needs `sigma.table`")),
            },
            other => {
                return Err(entries.fail(
                    "sigma.kind",
                    format!("unknown conductivity `{other}` (constant, parabolic24, rational9000, table)"),
                ))
            }
        };
        if params.is_some() && !matches!(cfg.sigma, SigmaSpec::Constant(_)) {
            return Err(entries.fail("sigma.params", "only used with sigma.kind = \"constant\""));
        }
        if table.is_some() && !matches!(cfg.sigma, SigmaSpec::Table(_)) {
            return Err(entries.fail("sigma.table", "only used with sigma.kind = \"table\""));
        }

        let mode = entries.count("initial.mode")?;
        let table = entries.string("initial.table")?;
        cfg.initial = match entries.string("initial.kind")?.as_deref().unwrap_or("quadratic") {
            "quadratic" => InitialSpec::Quadratic,
            "sine" => match mode.unwrap_or(1) {
                0 => return Err(entries.fail("initial.mode", "modes start at 1")),
                m => InitialSpec::Sine(m),
            },
            "table" => match table.clone() {
                Some(p) => InitialSpec::Table(resolve(p)),
                None => return Err(entries.fail("initial.kind", "`table` needs `initial.table`")),
            },
            other => return Err(entries.fail("initial.kind", format!("unknown profile `{other}` (quadratic, sine, table)"))),
        };
        if mode.is_some() && !matches!(cfg.initial, InitialSpec::Sine(_)) {
            return Err(entries.fail("initial.mode", "only used with initial.kind = \"sine\""));
        }
        if table.is_some() && !matches!(cfg.initial, InitialSpec::Table(_)) {
            return Err(entries.fail("initial.table", "only used with initial.kind = \"table\""));
        }

        if let Some(ns) = entries.list("series.N", "an integer or an array of integers", as_usize)? {
            cfg.truncations = ns;
        }
        if let Some(q) = entries.count("series.quad_order")? {
            cfg.quad_order = q;
        }
        cfg.check_series().map_err(|(key, msg)| entries.fail(key, msg))?;

        if let Some(shape) = entries.string("contour.shape")? {
            cfg.contour.shape = match shape.as_str() {
                "angled_rays" => ContourShape::AngledRays,
                "boundary_omega" => ContourShape::BoundaryOmega,
                other => {
                    return Err(entries.fail("contour.shape", format!("unknown shape `{other}` (angled_rays, boundary_omega)")))
                }
            };
        }
        if let Some(r) = entries.float("contour.r")? {
            cfg.contour.r = r;
        }
        if let Some(d) = entries.float("contour.delta")? {
            cfg.contour.delta = d;
        }
        if let Some(k) = entries.float("contour.kmax")? {
            cfg.contour.kmax = Some(k);
        }
        if let Some(n) = entries.count("contour.density")? {
            cfg.contour.nodes_per_unit = n;
        }
        if let Err(e) = cfg.contour.validate() {
            let key = ["contour.delta", "contour.r", "contour.kmax", "contour.density"]
                .into_iter()
                .find(|k| entries.line(k).is_some())
                .unwrap_or("contour");
            return Err(entries.fail(key, e.to_string()));
        }

        if let Some(nx) = entries.count("grid.nx")? {
            if nx < 2 {
                return Err(entries.fail("grid.nx", "at least 2 points"));
            }
            cfg.nx = nx;
        }
        if let Some(ts) = entries.list("grid.t", "a number or an array of numbers", as_f64)? {
            if ts.is_empty() || ts.iter().any(|t| !(*t > 0.0 && t.is_finite())) {
                return Err(entries.fail("grid.t", "times must be positive and finite"));
            }
            cfg.times = ts;
        }
        if let Some(c) = entries.count("spectrum.count")? {
            if c == 0 {
                return Err(entries.fail("spectrum.count", "at least 1"));
            }
            cfg.count = c;
        }
        if let Some(ms) = entries.list("spectrum.modes", "an integer or an array of integers", as_usize)? {
            if ms.is_empty() || ms.contains(&0) {
                return Err(entries.fail("spectrum.modes", "a non-empty list of modes starting at 1"));
            }
            cfg.modes = ms;
        }
        if let Some(r) = entries.boolean("spectrum.reference")? {
            cfg.reference = r;
        }
        if let Some(n) = entries.count("spectrum.fd_nx")? {
            if n < 8 {
                return Err(entries.fail("spectrum.fd_nx", "at least 8 intervals"));
            }
            cfg.fd_nx = n;
        }
        if let Some(f) = entries.string("output.format")? {
            cfg.format = Format::parse(&f).ok_or_else(|| entries.fail("output.format", format!("`{f}` is not csv or json")))?;
        }
        if let Some(p) = entries.string("output.path")? {
            cfg.output = Some(resolve(p));
        }
        Ok(cfg)
    }

    /// Truncations and quadrature order within the series limits.
    pub fn check_series(&self) -> Result<(), (&'static str, String)> {
        if self.truncations.is_empty() {
            return Err(("series.N", "at least one truncation order".into()));
        }
        for &n in &self.truncations {
            SeriesSpec::new(n).map_err(|e| ("series.N", e.to_string()))?;
        }
        SeriesSpec::new(0)
            .and_then(|s| s.with_quad_order(self.quad_order))
            .map_err(|e| ("series.quad_order", e.to_string()))?;
        Ok(())
    }

    pub fn series(&self, n: usize) -> SeriesSpec {
        SeriesSpec::new(n).and_then(|s| s.with_quad_order(self.quad_order)).expect("validated series parameters")
    }

    pub fn conductivity(&self) -> Result<Conductivity, ConfigError> {
        match &self.sigma {
            SigmaSpec::Constant(c) => Conductivity::constant(*c),
            SigmaSpec::Parabolic24 => Ok(Conductivity::parabolic24()),
            SigmaSpec::Rational9000 => Ok(Conductivity::rational9000()),
            SigmaSpec::Table(path) => {
                let file = File::open(path)
                    .map_err(|e| ConfigError::at("sigma.table", None, format!("cannot open {}: {e}", path.display())))?;
                Conductivity::from_csv(BufReader::new(file))
            }
        }
        .map_err(|e| ConfigError::at("sigma", None, e.to_string()))
    }

    pub fn initial_profile(&self) -> Result<InitialProfile, ConfigError> {
        Ok(match &self.initial {
            InitialSpec::Quadratic => InitialProfile::Quadratic,
            InitialSpec::Sine(m) => InitialProfile::Sine(*m as f64 * std::f64::consts::PI),
            InitialSpec::Table(path) => {
                let fail = |msg: String| ConfigError::at("initial.table", None, msg);
                let text = std::fs::read_to_string(path).map_err(|e| fail(format!("cannot read {}: {e}", path.display())))?;
                let (xs, ys) = read_pairs(&text).map_err(fail)?;
                InitialProfile::Table(MonotoneCubic::new(xs, ys))
            }
        })
    }

    /// The configuration whose exact solution `x(1 − x)e^{−t}` is known.
    pub fn is_benchmark(&self) -> bool {
        self.sigma == SigmaSpec::Parabolic24 && self.initial == InitialSpec::Quadratic
    }

    pub fn x_grid(&self) -> Vec<f64> {
        let last = (self.nx - 1) as f64;
        (0..self.nx).map(|i| i as f64 / last).collect()
    }
}

/// Reads `x, y` rows with increasing `x` spanning `[0, 1]`. A non-numeric
/// first row is taken as a header.
fn read_pairs(text: &str) -> Result<(Vec<f64>, Vec<f64>), String> {
    let (mut xs, mut ys) = (Vec::new(), Vec::new());
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut cols = line.split(',').map(str::trim);
        let parsed = match (cols.next(), cols.next(), cols.next()) {
            (Some(a), Some(b), None) => a.parse::<f64>().ok().zip(b.parse::<f64>().ok()),
            _ => None,
        };
        match parsed {
            Some((x, y)) => {
                if xs.last().is_some_and(|&p| x <= p) {
                    return Err(format!("row {}: x must increase", i + 1));
                }
                xs.push(x);
                ys.push(y);
            }
            None if xs.is_empty() && i == 0 => {}
            None => return Err(format!("row {}: expected two numbers", i + 1)),
        }
    }
    if xs.len() < 2 || xs[0] != 0.0 || *xs.last().unwrap() != 1.0 {
        return Err("table must start at x = 0 and end at x = 1".into());
    }
    Ok((xs, ys))
}

/// Initial data, ready to evaluate.
#[derive(Debug, Clone)]
pub enum InitialProfile {
    Quadratic,
    /// `sin(ωx)`
    Sine(f64),
    Table(MonotoneCubic),
}

impl InitialProfile {
    pub fn eval(&self, x: f64) -> f64 {
        match self {
            Self::Quadratic => x * (1.0 - x),
            Self::Sine(w) => (w * x).sin(),
            Self::Table(t) => t.eval(x),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(text: &str) -> Result<RunConfig, ConfigError> {
        RunConfig::parse(text, Path::new("/cfg"))
    }

    #[test]
    fn empty_text_gives_defaults() {
        assert_eq!(parse("").unwrap(), RunConfig::default());
    }

    #[test]
    fn dotted_and_sectioned_keys_agree() {
        let a = parse("sigma.kind = \"constant\"\nsigma.params = 2\ncontour.delta = 0.25\n").unwrap();
        let b = parse("[sigma]\nkind = \"constant\"\nparams = [2.0]\n[contour]\ndelta = 0.25\n").unwrap();
        assert_eq!(a, b);
        assert_eq!(a.sigma, SigmaSpec::Constant(2.0));
        assert_eq!(a.contour.delta, 0.25);
    }

    #[test]
    fn unknown_key_is_named_with_its_line() {
        let e = parse("series.N = 1\n\ncontour.angle = 0.3\n").unwrap_err();
        assert_eq!(e.key.as_deref(), Some("contour.angle"));
        assert_eq!(e.line, Some(3));
        assert!(e.to_string().contains("contour.angle"));
    }

    #[test]
    fn type_and_range_errors_name_the_key() {
        let e = parse("grid.nx = \"many\"").unwrap_err();
        assert_eq!((e.key.as_deref(), e.line), (Some("grid.nx"), Some(1)));
        let e = parse("a = 1\nseries.N = 9").unwrap_err();
        assert_eq!(e.key.as_deref(), Some("a"));
        let e = parse("series.N = 9").unwrap_err();
        assert_eq!(e.key.as_deref(), Some("series.N"));
        let e = parse("\ncontour.delta = 1.0").unwrap_err();
        assert_eq!((e.key.as_deref(), e.line), (Some("contour.delta"), Some(2)));
        let e = parse("sigma.kind = \"constant\"\nsigma.params = -1").unwrap_err();
        assert_eq!(e.key.as_deref(), Some("sigma.params"));
        let e = parse("initial.mode = 2").unwrap_err();
        assert_eq!(e.key.as_deref(), Some("initial.mode"));
    }

    #[test]
    fn syntax_errors_carry_a_line() {
        let e = parse("series.N = 1\ngrid.t = [1.0,\n").unwrap_err();
        assert!(e.line.is_some());
    }

    #[test]
    fn lists_accept_scalars() {
        let c = parse("series.N = 1\ngrid.t = 0.5\nspectrum.modes = [1, 3]").unwrap();
        assert_eq!(c.truncations, vec![1]);
        assert_eq!(c.times, vec![0.5]);
        assert_eq!(c.modes, vec![1, 3]);
    }

    #[test]
    fn relative_paths_resolve_against_the_config() {
        let c = parse("sigma.kind = \"table\"\nsigma.table = \"s.csv\"\noutput.path = \"/tmp/o.csv\"").unwrap();
        assert_eq!(c.sigma, SigmaSpec::Table(PathBuf::from("/cfg/s.csv")));
        assert_eq!(c.output, Some(PathBuf::from("/tmp/o.csv")));
    }

    #[test]
    fn pair_tables() {
        let (xs, ys) = read_pairs("x,q\n0,0\n0.5,0.25\n1,0\n").unwrap();
        assert_eq!(xs, vec![0.0, 0.5, 1.0]);
        assert_eq!(ys, vec![0.0, 0.25, 0.0]);
        assert!(read_pairs("0,0\n0.5,1\n0.4,1\n1,0").is_err());
        assert!(read_pairs("0,0\n0.9,0").is_err());
    }
}
