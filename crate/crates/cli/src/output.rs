//! CSV and JSON writers. Numbers carry 17 significant digits.

use std::fmt::Write;

/// `{:.16e}`: seventeen significant digits, so re-parsing is exact.
pub fn number(v: f64) -> String {
    format!("{v:.16e}")
}

fn json_number(v: f64) -> String {
    if v.is_finite() {
        number(v)
    } else {
        "null".into()
    }
}

/// A row of named fields, rendered as a CSV row or a JSON object.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Field {
    Real(f64),
    Count(usize),
}

impl Field {
    fn csv(self) -> String {
        match self {
            Self::Real(v) => number(v),
            Self::Count(n) => n.to_string(),
        }
    }

    fn json(self) -> String {
        match self {
            Self::Real(v) => json_number(v),
            Self::Count(n) => n.to_string(),
        }
    }
}

pub fn csv(header: &[&str], rows: &[Vec<Field>]) -> String {
    let mut out = header.join(",");
    out.push('\n');
    for row in rows {
        let cells: Vec<String> = row.iter().map(|f| f.csv()).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

/// An array of flat objects, one per line.
pub fn json(header: &[&str], rows: &[Vec<Field>]) -> String {
    let mut out = String::from("[\n");
    for (i, row) in rows.iter().enumerate() {
        out.push_str("  {");
        for (j, (name, f)) in header.iter().zip(row).enumerate() {
            if j > 0 {
                out.push_str(", ");
            }
            write!(out, "\"{name}\": {}", f.json()).unwrap();
        }
        out.push('}');
        if i + 1 < rows.len() {
            out.push(',');
        }
        out.push('\n');
    }
    out.push_str("]\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seventeen_digits() {
        assert_eq!(number(0.1), "1.0000000000000001e-1");
        assert_eq!(number(-4.0), "-4.0000000000000000e0");
        for v in [0.1, 1.0 / 3.0, -1.000636e-7, f64::MIN_POSITIVE, 6.02e23] {
            assert_eq!(number(v).parse::<f64>().unwrap(), v);
        }
    }

    #[test]
    fn layouts() {
        let rows = vec![vec![Field::Count(1), Field::Real(0.5)], vec![Field::Count(2), Field::Real(f64::NAN)]];
        assert_eq!(csv(&["m", "v"], &rows), "m,v\n1,5.0000000000000000e-1\n2,NaN\n");
        assert_eq!(json(&["m", "v"], &rows), "[\n  {\"m\": 1, \"v\": 5.0000000000000000e-1},\n  {\"m\": 2, \"v\": null}\n]\n");
        assert_eq!(json(&["m"], &[]), "[\n]\n");
    }
}
