//! Line plots written directly as SVG 1.1.

use std::fmt::Write;

const PANEL_W: f64 = 440.0;
const PANEL_H: f64 = 330.0;
const LEFT: f64 = 70.0;
const RIGHT: f64 = 16.0;
const TOP: f64 = 34.0;
const BOTTOM: f64 = 50.0;
const COLORS: [&str; 6] = ["#1b6ca8", "#d1495b", "#2e933c", "#edae49", "#6a4c93", "#30343f"];

#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    pub label: String,
    pub points: Vec<(f64, f64)>,
    /// Reference curves are drawn dashed in grey-black.
    pub reference: bool,
}

impl Series {
    pub fn new(label: impl Into<String>, points: Vec<(f64, f64)>) -> Self {
        Self { label: label.into(), points, reference: false }
    }

    pub fn reference(label: impl Into<String>, points: Vec<(f64, f64)>) -> Self {
        Self { label: label.into(), points, reference: true }
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Panel {
    pub title: String,
    pub xlabel: String,
    pub ylabel: String,
    pub log_y: bool,
    pub series: Vec<Series>,
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

/// Ticks at 1, 2 or 5 times a power of ten, about five across the range.
fn ticks(lo: f64, hi: f64) -> Vec<f64> {
    let raw = (hi - lo) / 5.0;
    let mag = 10f64.powf(raw.log10().floor());
    let step = [1.0, 2.0, 5.0, 10.0].into_iter().map(|m| m * mag).find(|s| *s >= raw).unwrap_or(10.0 * mag);
    let first = (lo / step).ceil() as i64;
    let last = (hi / step).floor() as i64;
    (first..=last).map(|i| i as f64 * step).collect()
}

fn tick_label(v: f64, log: bool) -> String {
    if log {
        format!("1e{}", v.round() as i64)
    } else if v == 0.0 {
        "0".into()
    } else if v.abs() >= 1e4 || v.abs() < 1e-3 {
        format!("{v:.1e}")
    } else {
        let s = format!("{v:.4}");
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    }
}

fn range(values: impl Iterator<Item = f64>) -> Option<(f64, f64)> {
    let (lo, hi) = values.filter(|v| v.is_finite()).fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), v| (l.min(v), h.max(v)));
    if lo > hi {
        return None;
    }
    if hi - lo < 1e-300 {
        let pad = if lo == 0.0 { 1.0 } else { 0.1 * lo.abs() };
        return Some((lo - pad, hi + pad));
    }
    Some((lo, hi))
}

impl Panel {
    fn y_value(&self, y: f64) -> Option<f64> {
        match self.log_y {
            true if y > 0.0 => Some(y.log10()),
            true => None,
            false => Some(y),
        }
    }

    fn draw(&self, out: &mut String, ox: f64) {
        let (pw, ph) = (PANEL_W - LEFT - RIGHT, PANEL_H - TOP - BOTTOM);
        let pts = || self.series.iter().flat_map(|s| s.points.iter());
        let (x0, x1) = range(pts().map(|p| p.0)).unwrap_or((0.0, 1.0));
        let (mut y0, mut y1) = range(pts().filter_map(|p| self.y_value(p.1))).unwrap_or((0.0, 1.0));
        if self.log_y {
            y0 = y0.floor();
            y1 = y1.ceil().max(y0 + 1.0);
        } else {
            let pad = 0.05 * (y1 - y0);
            y0 -= pad;
            y1 += pad;
        }
        let sx = |x: f64| ox + LEFT + (x - x0) / (x1 - x0) * pw;
        let sy = |y: f64| TOP + (y1 - y) / (y1 - y0) * ph;

        writeln!(out, "<g font-family=\"sans-serif\" font-size=\"12\">").unwrap();
        writeln!(out, "<text x=\"{:.1}\" y=\"20\" text-anchor=\"middle\" font-size=\"14\">{}</text>", ox + LEFT + pw / 2.0, escape(&self.title)).unwrap();
        writeln!(out, "<rect x=\"{:.1}\" y=\"{TOP}\" width=\"{pw:.1}\" height=\"{ph:.1}\" fill=\"none\" stroke=\"#000\"/>", ox + LEFT).unwrap();
        for t in ticks(x0, x1) {
            let x = sx(t);
            writeln!(out, "<line x1=\"{x:.1}\" y1=\"{:.1}\" x2=\"{x:.1}\" y2=\"{:.1}\" stroke=\"#000\"/>", TOP + ph, TOP + ph + 5.0).unwrap();
            writeln!(out, "<text x=\"{x:.1}\" y=\"{:.1}\" text-anchor=\"middle\">{}</text>", TOP + ph + 18.0, tick_label(t, false)).unwrap();
        }
        let yt = if self.log_y { (y0 as i64..=y1 as i64).map(|e| e as f64).collect() } else { ticks(y0, y1) };
        for t in yt {
            let y = sy(t);
            writeln!(out, "<line x1=\"{:.1}\" y1=\"{y:.1}\" x2=\"{:.1}\" y2=\"{y:.1}\" stroke=\"#000\"/>", ox + LEFT - 5.0, ox + LEFT).unwrap();
            writeln!(out, "<text x=\"{:.1}\" y=\"{:.1}\" text-anchor=\"end\">{}</text>", ox + LEFT - 8.0, y + 4.0, tick_label(t, self.log_y)).unwrap();
        }
        writeln!(out, "<text x=\"{:.1}\" y=\"{:.1}\" text-anchor=\"middle\">{}</text>", ox + LEFT + pw / 2.0, PANEL_H - 10.0, escape(&self.xlabel)).unwrap();
        let (lx, ly) = (ox + 16.0, TOP + ph / 2.0);
        writeln!(out, "<text x=\"{lx:.1}\" y=\"{ly:.1}\" text-anchor=\"middle\" transform=\"rotate(-90 {lx:.1} {ly:.1})\">{}</text>", escape(&self.ylabel)).unwrap();

        let mut color = 0;
        for (i, s) in self.series.iter().enumerate() {
            let (stroke, dash) = if s.reference {
                ("#000", " stroke-dasharray=\"6 4\"")
            } else {
                color += 1;
                (COLORS[(color - 1) % COLORS.len()], "")
            };
            // log panels break the path at non-positive values
            let mut d = String::new();
            let mut pen_up = true;
            for &(x, y) in &s.points {
                match self.y_value(y) {
                    Some(v) if v.is_finite() && x.is_finite() => {
                        write!(d, "{}{:.2},{:.2} ", if pen_up { "M" } else { "L" }, sx(x), sy(v)).unwrap();
                        pen_up = false;
                    }
                    _ => pen_up = true,
                }
            }
            if !d.is_empty() {
                writeln!(out, "<path d=\"{}\" fill=\"none\" stroke=\"{stroke}\" stroke-width=\"1.5\"{dash}/>", d.trim_end()).unwrap();
            }
            let (kx, ky) = (ox + LEFT + pw - 120.0, TOP + 14.0 + 16.0 * i as f64);
            writeln!(out, "<line x1=\"{kx:.1}\" y1=\"{ky:.1}\" x2=\"{:.1}\" y2=\"{ky:.1}\" stroke=\"{stroke}\" stroke-width=\"1.5\"{dash}/>", kx + 22.0).unwrap();
            writeln!(out, "<text x=\"{:.1}\" y=\"{:.1}\">{}</text>", kx + 28.0, ky + 4.0, escape(&s.label)).unwrap();
        }
        writeln!(out, "</g>").unwrap();
    }
}

/// Panels side by side in one standalone document.
pub fn render(panels: &[Panel]) -> String {
    let width = PANEL_W * panels.len().max(1) as f64;
    let mut out = String::new();
    writeln!(out, "<?xml version=\"1.0\" encoding=\"UTF-8\" standalone=\"no\"?>").unwrap();
    writeln!(out, "<!DOCTYPE svg PUBLIC \"-//W3C//DTD SVG 1.1//EN\" \"http://www.w3.org/Graphics/SVG/1.1/DTD/svg11.dtd\">").unwrap();
    writeln!(out, "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{width}\" height=\"{PANEL_H}\" viewBox=\"0 0 {width} {PANEL_H}\">").unwrap();
    writeln!(out, "<rect width=\"100%\" height=\"100%\" fill=\"#fff\"/>").unwrap();
    for (i, p) in panels.iter().enumerate() {
        p.draw(&mut out, i as f64 * PANEL_W);
    }
    out.push_str("</svg>\n");
    out
}
