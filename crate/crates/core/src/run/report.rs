use std::fmt::Write as _;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use serde::ser::{SerializeMap, SerializeSeq};
use serde::{Serialize, Serializer};
use serde_json::value::RawValue;

use super::{Format, RunConfig, ARTIFACT_VERSION};
use crate::{Error, Result};

/// One table cell. Floats are printed with 17 significant digits in both
/// output formats.
#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(i128),
    /// Integer too large for `i128`, kept as decimal digits.
    Big(String),
    Float(f64),
    Bool(bool),
    Text(String),
    Empty,
}

impl Cell {
    pub fn float(x: f64) -> Cell {
        Cell::Float(x)
    }

    fn csv(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::Big(v) => v.clone(),
            Cell::Float(v) => format_float(*v),
            Cell::Bool(v) => v.to_string(),
            Cell::Text(v) => csv_quote(v),
            Cell::Empty => String::new(),
        }
    }

    fn json(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::Big(v) => v.clone(),
            Cell::Float(v) if v.is_finite() => format_float(*v),
            Cell::Float(_) | Cell::Empty => "null".into(),
            Cell::Bool(v) => v.to_string(),
            Cell::Text(v) => serde_json::to_string(v).expect("string serializes"),
        }
    }

    pub fn as_f64(&self) -> Option<f64> {
        match self {
            Cell::Float(v) => Some(*v),
            Cell::Int(v) => Some(*v as f64),
            _ => None,
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
        Cell::Int(v as i128)
    }
}

impl From<u64> for Cell {
    fn from(v: u64) -> Self {
        Cell::Int(v as i128)
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Bool(v)
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

impl<T: Into<Cell>> From<Option<T>> for Cell {
    fn from(v: Option<T>) -> Self {
        v.map_or(Cell::Empty, Into::into)
    }
}

/// `{:.16e}`, i.e. 17 significant digits; non-finite values as `NaN`,
/// `inf`, `-inf`.
pub fn format_float(x: f64) -> String {
    if x.is_nan() {
        "NaN".into()
    } else if x.is_infinite() {
        if x > 0.0 { "inf" } else { "-inf" }.into()
    } else {
        format!("{x:.16e}")
    }
}

fn csv_quote(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub name: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(name: &str, columns: &[&str]) -> Table {
        Table {
            name: name.to_string(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.columns.len(), "row width for table {}", self.name);
        self.rows.push(row);
    }

    /// Appends a column filled from `values`.
    pub fn add_column(&mut self, name: &str, values: Vec<Cell>) {
        assert_eq!(values.len(), self.rows.len());
        self.columns.push(name.to_string());
        for (row, v) in self.rows.iter_mut().zip(values) {
            row.push(v);
        }
    }

    pub fn column(&self, name: &str) -> Option<Vec<&Cell>> {
        let k = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| &r[k]).collect())
    }
}

/// Result of one command invocation.
#[derive(Debug, Clone)]
pub struct Report {
    pub config: RunConfig,
    pub config_hash: String,
    pub tables: Vec<Table>,
    /// Hard assertion failures; the run passes iff this is empty.
    pub failures: Vec<String>,
}

/// Formulas behind the derived columns.
const FORMULAS: &[(&str, &str)] = &[
    ("beta", "(1 + t^2) / (2 n s t^2)"),
    ("gap_factor", "2 n s t^2 / (1 + t^2)"),
    ("gap_relation", "gap_h = gap_factor * (1 - lambda2)"),
    ("stationary", "pi(x) = t^(2 A(x)) / Z"),
    ("cheeger_bound", "2 Q(A, A^c) / pi(A)"),
    ("bottleneck_bound", "2 pi(B) / pi(A)"),
    ("theorem_bound", "8 n s t^(-n^2 / 3)"),
    ("defect_bound", "p(a) t^(-2 a)"),
    ("slope_bound", "-ln(t) / 3"),
    ("sqrt_coefficient_reference", "2 log2(s) sqrt(2 sigma / pi), sigma = sqrt(s) / (2 sqrt(s) + 1)"),
];

impl Report {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn table(&self, name: &str) -> Option<&Table> {
        self.tables.iter().find(|t| t.name == name)
    }

    fn tolerances(&self) -> Vec<(&'static str, f64)> {
        let c = &self.config;
        vec![
            ("identity", c.identity_tol),
            ("relation", c.tol),
            ("frustration", c.frustration_tol),
            ("eigen", c.eigen.tol),
            ("zero", c.eigen.zero_tol),
        ]
    }

    /// CSV for one table, preceded by `#` metadata lines.
    pub fn table_csv(&self, table: &Table) -> String {
        let mut out = String::new();
        let command = self.config.command.as_str();
        let _ = writeln!(out, "# command: {command}");
        let _ = writeln!(out, "# table: {}", table.name);
        let _ = writeln!(out, "# artifact_version: {ARTIFACT_VERSION}");
        let _ = writeln!(out, "# config_hash: {}", self.config_hash);
        for (k, v) in self.tolerances() {
            let _ = writeln!(out, "# tolerance.{k}: {}", format_float(v));
        }
        for (k, v) in FORMULAS {
            let _ = writeln!(out, "# formula.{k}: {v}");
        }
        let mut header = table.columns.clone();
        header.extend(["artifact_version".to_string(), "config_hash".to_string()]);
        let _ = writeln!(out, "{}", header.join(","));
        for row in &table.rows {
            let mut cells: Vec<String> = row.iter().map(Cell::csv).collect();
            cells.push(ARTIFACT_VERSION.to_string());
            cells.push(self.config_hash.clone());
            let _ = writeln!(out, "{}", cells.join(","));
        }
        out
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(&JsonReport(self)).expect("report serializes");
        s.push('\n');
        s
    }

    /// Writes to `out` (a directory that must already exist) or to stdout.
    /// Returns the files written.
    pub fn emit(&self, format: Format, out: Option<&Path>) -> Result<Vec<PathBuf>> {
        let command = self.config.command.as_str();
        match out {
            Some(dir) => {
                if !dir.is_dir() {
                    return Err(Error::Io(io::Error::new(
                        io::ErrorKind::NotFound,
                        format!("output directory {} does not exist", dir.display()),
                    )));
                }
                let mut written = Vec::new();
                match format {
                    Format::Json => {
                        let path = dir.join(format!("{command}.json"));
                        fs::write(&path, self.to_json())?;
                        written.push(path);
                    }
                    Format::Csv => {
                        for table in &self.tables {
                            let path = dir.join(format!("{command}.{}.csv", table.name));
                            fs::write(&path, self.table_csv(table))?;
                            written.push(path);
                        }
                    }
                }
                Ok(written)
            }
            None => {
                let mut stdout = io::stdout().lock();
                match format {
                    Format::Json => stdout.write_all(self.to_json().as_bytes())?,
                    Format::Csv => {
                        for (k, table) in self.tables.iter().enumerate() {
                            if k > 0 {
                                writeln!(stdout)?;
                            }
                            stdout.write_all(self.table_csv(table).as_bytes())?;
                        }
                    }
                }
                stdout.flush()?;
                Ok(Vec::new())
            }
        }
    }
}

struct JsonReport<'a>(&'a Report);
struct JsonTable<'a>(&'a Table, &'a str);
struct JsonRecord<'a>(&'a [String], &'a [Cell], &'a str);
struct Pairs<'a, V>(&'a [(&'a str, V)]);

fn raw(text: String) -> Box<RawValue> {
    RawValue::from_string(text).expect("cell renders valid JSON")
}

impl Serialize for JsonReport<'_> {
    fn serialize<S: Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        let r = self.0;
        let tolerances: Vec<(&str, Box<RawValue>)> = r
            .tolerances()
            .into_iter()
            .map(|(k, v)| (k, raw(Cell::Float(v).json())))
            .collect();
        let tables: Vec<(&str, JsonTable)> = r
            .tables
            .iter()
            .map(|t| (t.name.as_str(), JsonTable(t, &r.config_hash)))
            .collect();
        let mut map = ser.serialize_map(None)?;
        map.serialize_entry("command", r.config.command.as_str())?;
        map.serialize_entry("artifact_version", ARTIFACT_VERSION)?;
        map.serialize_entry("config_hash", &r.config_hash)?;
        map.serialize_entry("config", &r.config)?;
        map.serialize_entry("tolerances", &Pairs(&tolerances))?;
        map.serialize_entry("formulas", &Pairs(FORMULAS))?;
        map.serialize_entry("passed", &r.passed())?;
        map.serialize_entry("failures", &r.failures)?;
        map.serialize_entry("tables", &Pairs(&tables))?;
        map.end()
    }
}

impl<V: Serialize> Serialize for Pairs<'_, V> {
    fn serialize<S: Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = ser.serialize_map(Some(self.0.len()))?;
        for (k, v) in self.0 {
            map.serialize_entry(k, v)?;
        }
        map.end()
    }
}

impl Serialize for JsonTable<'_> {
    fn serialize<S: Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = ser.serialize_seq(Some(self.0.rows.len()))?;
        for row in &self.0.rows {
            seq.serialize_element(&JsonRecord(&self.0.columns, row, self.1))?;
        }
        seq.end()
    }
}

impl Serialize for JsonRecord<'_> {
    fn serialize<S: Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = ser.serialize_map(Some(self.0.len() + 2))?;
        for (k, v) in self.0.iter().zip(self.1) {
            map.serialize_entry(k, &raw(v.json()))?;
        }
        map.serialize_entry("artifact_version", ARTIFACT_VERSION)?;
        map.serialize_entry("config_hash", self.2)?;
        map.end()
    }
}
