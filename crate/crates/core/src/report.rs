//! Experiment reports and their CSV/JSON serialization.
//!
//! Floats are written with 12 significant digits so that two runs of the
//! same configuration produce byte-identical files.

use serde_json::{Map, Number, Value};
use std::fmt::Write as _;

#[derive(Clone, Debug, PartialEq)]
pub enum Cell {
    Int(i64),
    Float(f64),
    Text(String),
    Bool(bool),
}

impl Cell {
    pub fn as_f64(&self) -> Option<f64> {
        match self {
            Cell::Int(v) => Some(*v as f64),
            Cell::Float(v) => Some(*v),
            _ => None,
        }
    }

    fn csv(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::Float(v) => fmt_float(*v),
            Cell::Bool(b) => b.to_string(),
            Cell::Text(s) => {
                if s.contains([',', '"', '\n', '\r']) {
                    format!("\"{}\"", s.replace('"', "\"\""))
                } else {
                    s.clone()
                }
            }
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Int(v) => Value::from(*v),
            Cell::Float(v) => match fmt_float(*v).parse::<f64>().ok().and_then(Number::from_f64) {
                Some(n) => Value::Number(n),
                None => Value::String(fmt_float(*v)),
            },
            Cell::Text(s) => Value::String(s.clone()),
            Cell::Bool(b) => Value::Bool(*b),
        }
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Float(v)
    }
}
impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as i64)
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
impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Text(v)
    }
}
impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Bool(v)
    }
}

/// 12 significant digits in scientific form when the magnitude calls for
/// it, trailing zeros trimmed.
pub fn fmt_float(v: f64) -> String {
    if v.is_nan() {
        return "NaN".into();
    }
    if v.is_infinite() {
        return if v > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if v == 0.0 {
        return "0".into();
    }
    let exp = v.abs().log10().floor() as i32;
    if (-5..12).contains(&exp) {
        let decimals = (11 - exp).max(0) as usize;
        let s = format!("{v:.decimals$}");
        let s = if s.contains('.') { s.trim_end_matches('0').trim_end_matches('.').to_string() } else { s };
        if s == "-0" { "0".into() } else { s }
    } else {
        let s = format!("{v:.11e}");
        let (mant, e) = s.split_once('e').unwrap();
        let mant = if mant.contains('.') { mant.trim_end_matches('0').trim_end_matches('.') } else { mant };
        format!("{mant}e{e}")
    }
}

pub const STANDARD_TAIL: [&str; 4] = ["replicate_mean", "stderr", "bound", "pass"];

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentReport {
    pub experiment: String,
    pub seed: u64,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl ExperimentReport {
    /// Report with the given parameter columns followed by
    /// `replicate_mean, stderr, bound, pass`.
    pub fn standard(experiment: &str, seed: u64, params: &[&str]) -> Self {
        let mut columns: Vec<String> = params.iter().map(|s| s.to_string()).collect();
        columns.extend(STANDARD_TAIL.iter().map(|s| s.to_string()));
        Self { experiment: experiment.into(), seed, columns, rows: Vec::new() }
    }

    pub fn with_columns(experiment: &str, seed: u64, columns: &[&str]) -> Self {
        Self {
            experiment: experiment.into(),
            seed,
            columns: columns.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push_row(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.columns.len(), "row width mismatch");
        self.rows.push(row);
    }

    pub fn push(&mut self, params: Vec<Cell>, mean: f64, stderr: f64, bound: f64, pass: bool) {
        let mut row = params;
        row.extend([Cell::Float(mean), Cell::Float(stderr), Cell::Float(bound), Cell::Bool(pass)]);
        self.push_row(row);
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }

    pub fn get(&self, row: usize, name: &str) -> Option<&Cell> {
        self.column(name).and_then(|c| self.rows.get(row).map(|r| &r[c]))
    }

    pub fn f64_column(&self, name: &str) -> Vec<f64> {
        match self.column(name) {
            Some(c) => self.rows.iter().filter_map(|r| r[c].as_f64()).collect(),
            None => Vec::new(),
        }
    }

    pub fn all_pass(&self) -> bool {
        match self.column("pass") {
            Some(c) => self.rows.iter().all(|r| r[c] == Cell::Bool(true)),
            None => true,
        }
    }

    pub fn failing_rows(&self) -> Vec<usize> {
        match self.column("pass") {
            Some(c) => (0..self.rows.len()).filter(|&i| self.rows[i][c] != Cell::Bool(true)).collect(),
            None => Vec::new(),
        }
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        out.push_str(&self.columns.join(","));
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(Cell::csv).collect();
            let _ = writeln!(out, "{}", cells.join(","));
        }
        out
    }

    pub fn to_json(&self) -> String {
        let arr: Vec<Value> = self
            .rows
            .iter()
            .map(|row| {
                let mut obj = Map::new();
                for (k, v) in self.columns.iter().zip(row) {
                    obj.insert(k.clone(), v.json());
                }
                Value::Object(obj)
            })
            .collect();
        let mut s = serde_json::to_string_pretty(&Value::Array(arr)).expect("json");
        s.push('\n');
        s
    }

    pub fn row_summary(&self, row: usize) -> String {
        self.columns
            .iter()
            .zip(&self.rows[row])
            .map(|(k, v)| format!("{k}={}", v.csv()))
            .collect::<Vec<_>>()
            .join(" ")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn float_formatting() {
        assert_eq!(fmt_float(0.1), "0.1");
        assert_eq!(fmt_float(1.0 / 3.0), "0.333333333333");
        assert_eq!(fmt_float(2.0), "2");
        assert_eq!(fmt_float(123456.789), "123456.789");
        assert_eq!(fmt_float(1.5e-9), "1.5e-9");
        assert_eq!(fmt_float(-2.5e20), "-2.5e20");
        assert_eq!(fmt_float(0.0), "0");
        assert_eq!(fmt_float(0.066666666666666666), "0.0666666666667");
    }

    #[test]
    fn csv_and_json_shapes() {
        let mut r = ExperimentReport::standard("x", 1, &["n"]);
        r.push(vec![Cell::Int(4)], 0.5, 0.01, 1.0, true);
        r.push(vec![Cell::Int(16)], 0.25, 0.01, 0.5, false);
        assert_eq!(
            r.to_csv(),
            "n,replicate_mean,stderr,bound,pass\n4,0.5,0.01,1,true\n16,0.25,0.01,0.5,false\n"
        );
        let v: Value = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(v[1]["n"], 16);
        assert_eq!(v[0]["pass"], true);
        assert!(!r.all_pass());
        assert_eq!(r.failing_rows(), vec![1]);
    }
}
