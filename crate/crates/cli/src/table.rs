use std::io::Write;
use std::path::PathBuf;

use serde_json::{json, Map, Value};

use crate::args::Format;
use crate::CliError;

pub const OUT_DIR_ENV: &str = "SPIN_COULOMB_OUT_DIR";

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(i64),
    Text(String),
    Bool(bool),
    Empty,
}

impl Cell {
    pub fn text(s: impl Into<String>) -> Self {
        Cell::Text(s.into())
    }

    pub fn opt(v: Option<f64>) -> Self {
        v.map_or(Cell::Empty, Cell::Num)
    }

    fn csv(&self) -> String {
        match self {
            Cell::Num(x) => fmt_sig(*x),
            Cell::Int(i) => i.to_string(),
            Cell::Text(s) => s.clone(),
            Cell::Bool(b) => b.to_string(),
            Cell::Empty => String::new(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Num(x) if x.is_finite() => fmt_sig(*x).parse::<f64>().map(Value::from).unwrap_or(Value::Null),
            Cell::Num(_) | Cell::Empty => Value::Null,
            Cell::Int(i) => json!(i),
            Cell::Text(s) => json!(s),
            Cell::Bool(b) => json!(b),
        }
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Num(v)
    }
}

impl From<i64> for Cell {
    fn from(v: i64) -> Self {
        Cell::Int(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

/// `%.12g`-style rendering: 12 significant digits, trailing zeros dropped.
pub fn fmt_sig(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{x:.11e}");
    let (mant, exp) = sci.split_once('e').unwrap();
    let exp: i32 = exp.parse().unwrap();
    if !(-4..12).contains(&exp) {
        format!("{}e{exp}", trim_zeros(mant))
    } else {
        trim_zeros(&format!("{x:.*}", (11 - exp) as usize)).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// A result table plus the provenance written around it.
#[derive(Debug, Clone, Default)]
pub struct Table {
    pub command: String,
    pub params: Vec<(String, String)>,
    pub notes: Vec<String>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
    pub summary: Vec<(String, Cell)>,
}

impl Table {
    pub fn new(command: &str, columns: &[&str]) -> Self {
        Self { command: command.into(), columns: columns.iter().map(|c| c.to_string()).collect(), ..Self::default() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn note(&mut self, s: impl Into<String>) {
        self.notes.push(s.into());
    }

    pub fn summarize(&mut self, key: &str, v: impl Into<Cell>) {
        self.summary.push((key.into(), v.into()));
    }

    pub fn render(&self, format: Format, stamp: Option<&str>) -> Result<String, CliError> {
        match format {
            Format::Csv => self.render_csv(stamp),
            Format::Json => Ok(self.render_json(stamp)),
        }
    }

    fn render_csv(&self, stamp: Option<&str>) -> Result<String, CliError> {
        let mut out = format!("# spin-coulomb {} {}\n", env!("CARGO_PKG_VERSION"), self.command);
        if let Some(s) = stamp {
            out.push_str(&format!("# stamp = {s}\n"));
        }
        for (k, v) in &self.params {
            out.push_str(&format!("# {k} = {v}\n"));
        }
        for n in &self.notes {
            out.push_str(&format!("# {n}\n"));
        }
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
        w.write_record(&self.columns)?;
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::csv))?;
        }
        let body = w.into_inner().map_err(|e| CliError::Io(e.into_error()))?;
        out.push_str(&String::from_utf8(body).expect("csv output is UTF-8"));
        for (k, v) in &self.summary {
            out.push_str(&format!("# {k} = {}\n", v.csv()));
        }
        Ok(out)
    }

    fn render_json(&self, stamp: Option<&str>) -> String {
        let params: Map<String, Value> = self.params.iter().map(|(k, v)| (k.clone(), json!(v))).collect();
        let summary: Map<String, Value> = self.summary.iter().map(|(k, v)| (k.clone(), v.json())).collect();
        let rows: Vec<Value> = self.rows.iter().map(|r| Value::Array(r.iter().map(Cell::json).collect())).collect();
        let mut doc = json!({
            "program": "spin-coulomb",
            "version": env!("CARGO_PKG_VERSION"),
            "command": self.command,
            "parameters": params,
            "notes": self.notes,
            "columns": self.columns,
            "rows": rows,
            "summary": summary,
        });
        if let Some(s) = stamp {
            doc["stamp"] = json!(s);
        }
        let mut s = serde_json::to_string_pretty(&doc).expect("serializable");
        s.push('\n');
        s
    }
}

/// Resolves `--out` against `SPIN_COULOMB_OUT_DIR`; `None` means stdout.
pub fn output_path(out: Option<&PathBuf>) -> Option<PathBuf> {
    let out = out?;
    match std::env::var_os(OUT_DIR_ENV) {
        Some(dir) if out.is_relative() && !dir.is_empty() => Some(PathBuf::from(dir).join(out)),
        _ => Some(out.clone()),
    }
}

pub fn emit(text: &str, out: Option<&PathBuf>) -> Result<(), CliError> {
    match output_path(out) {
        Some(path) => {
            if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
                std::fs::create_dir_all(parent)?;
            }
            std::fs::write(&path, text)?;
        }
        None => {
            let mut so = std::io::stdout().lock();
            so.write_all(text.as_bytes())?;
            so.flush()?;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twelve_significant_digits() {
        assert_eq!(fmt_sig(-0.5), "-0.5");
        assert_eq!(fmt_sig(1.0 / 3.0), "0.333333333333");
        assert_eq!(fmt_sig(273.06452716), "273.06452716");
        assert_eq!(fmt_sig(2.0 / 3.0 * 1e-7), "6.66666666667e-8");
        assert_eq!(fmt_sig(1e12), "1e12");
        assert_eq!(fmt_sig(999999999999.5), "1e12");
        assert_eq!(fmt_sig(123456789012.4), "123456789012");
        assert_eq!(fmt_sig(0.0001), "0.0001");
        assert_eq!(fmt_sig(-0.0), "0");
        assert_eq!(fmt_sig(f64::NAN), "nan");
    }

    #[test]
    fn csv_layout() {
        let mut t = Table::new("demo", &["a[1]", "b"]);
        t.params.push(("x".into(), "1".into()));
        t.push(vec![Cell::Num(0.25), Cell::text("ok")]);
        t.summarize("worst", 1e-3);
        let s = t.render(Format::Csv, None).unwrap();
        assert!(s.ends_with("a[1],b\n0.25,ok\n# worst = 0.001\n"));
        assert!(s.contains("# x = 1\n"));
        assert!(!s.contains('\r'));
    }

    #[test]
    fn json_rounds_numbers() {
        let mut t = Table::new("demo", &["a"]);
        t.push(vec![Cell::Num(1.0 / 3.0)]);
        let v: Value = serde_json::from_str(&t.render(Format::Json, None).unwrap()).unwrap();
        assert_eq!(v["rows"][0][0].as_f64().unwrap(), 0.333333333333);
    }
}
