//! Number formatting and artifact writers.
//!
//! Every float leaves the program rounded to 15 significant digits, so that
//! output is stable across platforms and thread counts.

use std::fs;
use std::io::{self, Write};
use std::path::Path;

use bilap_core::problem::EigenResult;
use bilap_core::Coupling;
use serde_json::{json, Value};

pub const SCHEMA: u32 = 1;

/// `x` rounded to 15 significant digits.
pub fn round15(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{x:.14e}").parse().unwrap_or(x)
}

/// CSV text of a float: shortest form of the rounded value, scientific
/// outside `[1e−5, 1e15)`.
pub fn fmt(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let y = round15(x);
    if y == 0.0 {
        return "0".into();
    }
    let m = y.abs();
    if (1e-5..1e15).contains(&m) {
        format!("{y}")
    } else {
        format!("{y:e}")
    }
}

/// JSON value of a float; non-finite values become `null`.
pub fn num(x: f64) -> Value {
    let y = round15(x);
    serde_json::Number::from_f64(y).map_or(Value::Null, Value::Number)
}

pub fn gamma_json(g: Coupling) -> Value {
    match g {
        Coupling::Finite(x) => num(x),
        Coupling::Infinite => Value::String("inf".into()),
    }
}

pub fn gamma_text(g: Coupling) -> String {
    match g {
        Coupling::Finite(x) => fmt(x),
        Coupling::Infinite => "inf".into(),
    }
}

/// Bracket residual above which an eigenvalue row is flagged.
pub const RESIDUAL_TOL: f64 = 1e-8;

pub fn eigen_json(e: &EigenResult) -> Value {
    json!({
        "ell": e.ell,
        "k": e.k,
        "lambda": num(e.lambda),
        "lambda4": num(e.lambda4),
        "multiplicity": e.multiplicity,
        "source": e.source.as_str(),
        "residual": num(e.residual),
        "flagged": e.residual > RESIDUAL_TOL,
    })
}

pub const EIGEN_HEADER: &str = "ell,k,lambda,lambda4,multiplicity,source,residual,flagged";

pub fn eigen_csv(e: &EigenResult) -> String {
    format!(
        "{},{},{},{},{},{},{},{}",
        e.ell,
        e.k,
        fmt(e.lambda),
        fmt(e.lambda4),
        e.multiplicity,
        e.source.as_str(),
        fmt(e.residual),
        e.residual > RESIDUAL_TOL
    )
}

/// A versioned CSV document: `# schema=1`, `#`-prefixed metadata, header,
/// rows.
#[derive(Debug, Default)]
pub struct Csv {
    meta: Vec<String>,
    header: String,
    rows: Vec<String>,
}

impl Csv {
    pub fn new(header: &str) -> Self {
        Csv {
            meta: Vec::new(),
            header: header.to_string(),
            rows: Vec::new(),
        }
    }

    pub fn meta(&mut self, key: &str, value: impl std::fmt::Display) -> &mut Self {
        self.meta.push(format!("# {key}={value}"));
        self
    }

    pub fn row(&mut self, line: String) {
        self.rows.push(line);
    }

    pub fn render(&self) -> String {
        let mut s = format!("# schema={SCHEMA}\n");
        for m in &self.meta {
            s.push_str(m);
            s.push('\n');
        }
        s.push_str(&self.header);
        s.push('\n');
        for r in &self.rows {
            s.push_str(r);
            s.push('\n');
        }
        s
    }
}

pub fn render_json(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values always serialise");
    s.push('\n');
    s
}

/// Writes `text` to `path`, or to stdout without one.
pub fn emit(text: &str, path: Option<&Path>) -> io::Result<()> {
    match path {
        Some(p) => fs::write(p, text),
        None => {
            let mut out = io::stdout().lock();
            out.write_all(text.as_bytes())?;
            out.flush()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rounding_keeps_fifteen_digits() {
        assert_eq!(fmt(1.841183781340659), "1.84118378134066");
        assert_eq!(fmt(0.2), "0.2");
        assert_eq!(fmt(5.0), "5");
        assert_eq!(fmt(1.0 / 3.0), "0.333333333333333");
        assert_eq!(fmt(1.5e-300), "1.5e-300");
        assert_eq!(fmt(-2.5e20), "-2.5e20");
        assert_eq!(fmt(f64::NAN), "nan");
    }

    #[test]
    fn json_numbers_are_rounded() {
        assert_eq!(num(2.0 / 3.0).to_string(), "0.666666666666667");
        assert_eq!(num(f64::INFINITY), Value::Null);
    }

    #[test]
    fn csv_starts_with_schema() {
        let mut c = Csv::new("a,b");
        c.meta("n", 2).row("1,2".into());
        assert_eq!(c.render(), "# schema=1\n# n=2\na,b\n1,2\n");
    }
}
