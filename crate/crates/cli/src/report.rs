//! Report assembly and rendering. Floats are printed with 17 significant
//! digits; object keys keep insertion order, so equal inputs give
//! byte-identical output.

use std::fmt::Write as _;
use std::str::FromStr;

use serde_json::{Map, Number, Value};

use crate::config::Format;

/// JSON number with 17 significant digits, `null` when not finite.
pub fn num(x: f64) -> Value {
    if !x.is_finite() {
        return Value::Null;
    }
    Number::from_str(&format!("{x:.16e}"))
        .map(Value::Number)
        .unwrap_or(Value::Null)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Comparison {
    AtMost,
    AtLeast,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    NotApplicable,
}

impl Status {
    fn name(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::NotApplicable => "not-applicable",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckReport {
    pub name: String,
    pub observed: Option<f64>,
    pub tolerance: Option<f64>,
    pub comparison: Comparison,
    pub pass: bool,
    pub status: Status,
    pub provenance: String,
}

impl CheckReport {
    /// Defect-style check: passes when `observed ≤ tolerance`.
    pub fn at_most(name: &str, observed: f64, tolerance: f64, provenance: &str) -> Self {
        Self::compare(name, observed, tolerance, Comparison::AtMost, provenance)
    }

    /// Passes when `observed ≥ tolerance`.
    pub fn at_least(name: &str, observed: f64, tolerance: f64, provenance: &str) -> Self {
        Self::compare(name, observed, tolerance, Comparison::AtLeast, provenance)
    }

    fn compare(name: &str, observed: f64, tolerance: f64, comparison: Comparison, provenance: &str) -> Self {
        let pass = match comparison {
            Comparison::AtMost => observed <= tolerance,
            Comparison::AtLeast => observed >= tolerance,
        };
        CheckReport {
            name: name.to_string(),
            observed: Some(observed),
            tolerance: Some(tolerance),
            comparison,
            pass,
            status: if pass { Status::Pass } else { Status::Fail },
            provenance: provenance.to_string(),
        }
    }

    pub fn not_applicable(name: &str, provenance: &str) -> Self {
        CheckReport {
            name: name.to_string(),
            observed: None,
            tolerance: None,
            comparison: Comparison::AtMost,
            pass: false,
            status: Status::NotApplicable,
            provenance: provenance.to_string(),
        }
    }

    fn to_json(&self) -> Value {
        let mut m = Map::new();
        m.insert("name".into(), self.name.clone().into());
        m.insert("observed".into(), self.observed.map_or(Value::Null, num));
        m.insert("tolerance".into(), self.tolerance.map_or(Value::Null, num));
        m.insert(
            "comparison".into(),
            match self.comparison {
                Comparison::AtMost => "<=",
                Comparison::AtLeast => ">=",
            }
            .into(),
        );
        m.insert("pass".into(), self.pass.into());
        m.insert("status".into(), self.status.name().into());
        m.insert("provenance".into(), self.provenance.clone().into());
        Value::Object(m)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(i64),
    Text(String),
    Null,
}

impl Cell {
    fn to_json(&self) -> Value {
        match self {
            Cell::Num(x) => num(*x),
            Cell::Int(i) => (*i).into(),
            Cell::Text(s) => s.clone().into(),
            Cell::Null => Value::Null,
        }
    }

    fn to_text(&self) -> String {
        match self.to_json() {
            Value::Null => String::new(),
            Value::String(s) => s,
            other => other.to_string(),
        }
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Num(x)
    }
}

impl From<usize> for Cell {
    fn from(i: usize) -> Self {
        Cell::Int(i as i64)
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Text(s.to_string())
    }
}

impl From<String> for Cell {
    fn from(s: String) -> Self {
        Cell::Text(s)
    }
}

impl<T: Into<Cell>> From<Option<T>> for Cell {
    fn from(x: Option<T>) -> Self {
        x.map_or(Cell::Null, Into::into)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: &[&'static str]) -> Self {
        Table {
            columns: columns.to_vec(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    fn to_json(&self) -> Value {
        let mut m = Map::new();
        m.insert("columns".into(), self.columns.iter().map(|c| Value::from(*c)).collect());
        m.insert(
            "rows".into(),
            self.rows
                .iter()
                .map(|r| r.iter().map(Cell::to_json).collect::<Vec<Value>>())
                .collect::<Vec<Vec<Value>>>().into(),
        );
        Value::Object(m)
    }
}

#[derive(Debug, Clone)]
pub struct Report {
    pub meta: Map<String, Value>,
    pub checks: Vec<CheckReport>,
    pub tables: Vec<(&'static str, Table)>,
    /// Table emitted by the CSV format; the check list when `None`.
    pub csv_table: Option<&'static str>,
}

impl Report {
    pub fn new(meta: Map<String, Value>) -> Self {
        Report {
            meta,
            checks: Vec::new(),
            tables: Vec::new(),
            csv_table: None,
        }
    }

    pub fn any_failed(&self) -> bool {
        self.checks.iter().any(|c| c.status == Status::Fail)
    }

    pub fn to_json(&self) -> Value {
        let mut tables = Map::new();
        for (name, t) in &self.tables {
            tables.insert((*name).into(), t.to_json());
        }
        let mut m = Map::new();
        m.insert("meta".into(), Value::Object(self.meta.clone()));
        m.insert("checks".into(), self.checks.iter().map(CheckReport::to_json).collect());
        m.insert("tables".into(), Value::Object(tables));
        Value::Object(m)
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => {
                let mut s = serde_json::to_string_pretty(&self.to_json()).expect("serializable report");
                s.push('\n');
                s
            }
            Format::Csv => self.render_csv(),
            Format::Text => self.render_text(),
        }
    }

    fn checks_table(&self) -> Table {
        let mut t = Table::new(&[
            "name",
            "observed",
            "tolerance",
            "comparison",
            "pass",
            "status",
            "provenance",
        ]);
        for c in &self.checks {
            t.push(vec![
                c.name.clone().into(),
                c.observed.into(),
                c.tolerance.into(),
                match c.comparison {
                    Comparison::AtMost => "<=",
                    Comparison::AtLeast => ">=",
                }
                .into(),
                if c.pass { "true" } else { "false" }.into(),
                c.status.name().into(),
                c.provenance.clone().into(),
            ]);
        }
        t
    }

    fn render_csv(&self) -> String {
        let table = match self.csv_table {
            Some(name) => self
                .tables
                .iter()
                .find(|(n, _)| *n == name)
                .map(|(_, t)| t.clone())
                .unwrap_or_else(|| Table::new(&[])),
            None => self.checks_table(),
        };
        let mut out = String::new();
        let header: Vec<String> = table.columns.iter().map(|c| csv_field(c)).collect();
        out.push_str(&header.join(","));
        out.push('\n');
        for row in &table.rows {
            let fields: Vec<String> = row.iter().map(|c| csv_field(&c.to_text())).collect();
            out.push_str(&fields.join(","));
            out.push('\n');
        }
        out
    }

    fn render_text(&self) -> String {
        let mut out = String::new();
        for (k, v) in &self.meta {
            let shown = match v {
                Value::String(s) => s.clone(),
                other => other.to_string(),
            };
            let _ = writeln!(out, "{k}: {shown}");
        }
        if !self.checks.is_empty() {
            out.push('\n');
            let width = self.checks.iter().map(|c| c.name.len()).max().unwrap_or(0);
            for c in &self.checks {
                let status = c.status.name().to_uppercase();
                match (c.observed, c.tolerance) {
                    (Some(o), Some(t)) => {
                        let op = match c.comparison {
                            Comparison::AtMost => "<=",
                            Comparison::AtLeast => ">=",
                        };
                        let _ = writeln!(
                            out,
                            "{status:<14} {:<width$}  {o:.3e} {op} {t:.1e}  ({})",
                            c.name, c.provenance
                        );
                    }
                    _ => {
                        let _ = writeln!(out, "{status:<14} {:<width$}  ({})", c.name, c.provenance);
                    }
                }
            }
        }
        for (name, t) in &self.tables {
            let _ = writeln!(out, "\n[{name}]");
            let cells: Vec<Vec<String>> = std::iter::once(t.columns.iter().map(|c| c.to_string()).collect())
                .chain(t.rows.iter().map(|r| r.iter().map(Cell::to_text).collect()))
                .collect();
            let widths: Vec<usize> = (0..t.columns.len())
                .map(|j| cells.iter().map(|r| r[j].chars().count()).max().unwrap_or(0))
                .collect();
            for row in &cells {
                let line: Vec<String> = row
                    .iter()
                    .zip(&widths)
                    .map(|(c, w)| format!("{c:<w$}"))
                    .collect();
                let _ = writeln!(out, "{}", line.join("  ").trim_end());
            }
        }
        out
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seventeen_digits() {
        assert_eq!(num(0.1).to_string(), "1.0000000000000001e-1");
        assert_eq!(num(1.25).to_string(), "1.2500000000000000e+0");
        assert_eq!(num(f64::NAN), Value::Null);
        assert_eq!(num(f64::INFINITY), Value::Null);
    }

    #[test]
    fn check_semantics() {
        assert!(CheckReport::at_most("a", 1e-13, 1e-12, "").pass);
        assert!(!CheckReport::at_most("a", f64::NAN, 1e-12, "").pass);
        assert!(CheckReport::at_least("b", 1.4, 1.0, "").pass);
        let na = CheckReport::not_applicable("c", "");
        assert_eq!(na.status, Status::NotApplicable);
        let mut r = Report::new(Map::new());
        r.checks.push(na);
        assert!(!r.any_failed());
        r.checks.push(CheckReport::at_most("d", 2.0, 1.0, ""));
        assert!(r.any_failed());
    }

    #[test]
    fn csv_quotes_and_header() {
        let mut r = Report::new(Map::new());
        let mut t = Table::new(&["x", "note"]);
        t.push(vec![0.5.into(), "a, b".into()]);
        t.push(vec![Cell::Null, "q\"".into()]);
        r.tables.push(("t", t));
        r.csv_table = Some("t");
        assert_eq!(
            r.render(Format::Csv),
            "x,note\n5.0000000000000000e-1,\"a, b\"\n,\"q\"\"\"\n"
        );
    }

    #[test]
    fn json_key_order() {
        let mut meta = Map::new();
        meta.insert("z".into(), 1.into());
        meta.insert("a".into(), 2.into());
        let r = Report::new(meta);
        let s = serde_json::to_string(&r.to_json()).unwrap();
        assert_eq!(s, r#"{"meta":{"z":1,"a":2},"checks":[],"tables":{}}"#);
    }
}
