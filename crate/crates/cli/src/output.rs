use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde_json::{json, Map, Value};

use crate::args::Format;
use crate::UsageError;

/// One table cell.
#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(i128),
    Float(f64),
    Str(String),
    Bool(bool),
    Missing,
}

impl Cell {
    pub fn text(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::Float(v) => float_text(*v),
            Cell::Str(s) => s.clone(),
            Cell::Bool(b) => b.to_string(),
            Cell::Missing => String::new(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Int(v) => match i64::try_from(*v) {
                Ok(i) => json!(i),
                Err(_) => json!(v.to_string()),
            },
            Cell::Float(v) if v.is_finite() => json!(v),
            Cell::Float(v) => json!(float_text(*v)),
            Cell::Str(s) => json!(s),
            Cell::Bool(b) => json!(b),
            Cell::Missing => Value::Null,
        }
    }
}

/// Shortest round-trip rendering; `inf`, `-inf`, `nan` for non-finite values.
pub fn float_text(v: f64) -> String {
    if v.is_nan() {
        "nan".into()
    } else if v.is_infinite() {
        if v > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        }
    } else {
        serde_json::to_string(&v).expect("finite float")
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Float(v)
    }
}
impl From<u64> for Cell {
    fn from(v: u64) -> Self {
        Cell::Int(v as i128)
    }
}
impl From<u32> for Cell {
    fn from(v: u32) -> Self {
        Cell::Int(v as i128)
    }
}
impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as i128)
    }
}
impl From<i64> for Cell {
    fn from(v: i64) -> Self {
        Cell::Int(v as i128)
    }
}
impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Bool(v)
    }
}
impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Str(v)
    }
}
impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Str(v.to_string())
    }
}
impl<T: Into<Cell>> From<Option<T>> for Cell {
    fn from(v: Option<T>) -> Self {
        v.map_or(Cell::Missing, Into::into)
    }
}

/// What a gnuplot script should draw from the CSV.
#[derive(Debug, Clone)]
pub struct PlotSpec {
    pub x: &'static str,
    pub y: &'static str,
    pub xlabel: &'static str,
    pub ylabel: &'static str,
    pub logx: bool,
    pub logy: bool,
}

/// Output of one command.
#[derive(Debug, Clone)]
pub struct Report {
    pub command: String,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
    /// Extra `key=value` results (text and JSON only).
    pub summary: Vec<(String, Cell)>,
    pub plot: Option<PlotSpec>,
}

impl Report {
    pub fn new(command: &str, columns: &[&'static str]) -> Self {
        Self {
            command: command.to_string(),
            columns: columns.to_vec(),
            rows: Vec::new(),
            summary: Vec::new(),
            plot: None,
        }
    }

    pub fn row(&mut self, cells: Vec<Cell>) {
        assert_eq!(
            cells.len(),
            self.columns.len(),
            "row width for {}",
            self.command
        );
        self.rows.push(cells);
    }

    pub fn note(&mut self, key: impl Into<String>, value: impl Into<Cell>) {
        self.summary.push((key.into(), value.into()));
    }

    pub fn render(&self, format: Format, meta: &Value) -> Result<String> {
        match format {
            Format::Text => Ok(self.render_text()),
            Format::Csv => self.render_csv(),
            Format::Json => {
                let rows: Vec<Value> = self
                    .rows
                    .iter()
                    .map(|r| {
                        let mut m = Map::new();
                        for (c, v) in self.columns.iter().zip(r) {
                            m.insert((*c).to_string(), v.json());
                        }
                        Value::Object(m)
                    })
                    .collect();
                let mut summary = Map::new();
                for (k, v) in &self.summary {
                    summary.insert(k.clone(), v.json());
                }
                let doc = json!({
                    "schema": 1,
                    "command": self.command,
                    "meta": meta,
                    "columns": self.columns,
                    "rows": rows,
                    "summary": summary,
                });
                Ok(serde_json::to_string_pretty(&doc)? + "\n")
            }
        }
    }

    fn render_text(&self) -> String {
        let mut s = String::new();
        for r in &self.rows {
            let line: Vec<String> = self
                .columns
                .iter()
                .zip(r)
                .map(|(c, v)| format!("{c}={}", v.text()))
                .collect();
            let _ = writeln!(s, "{}", line.join(" "));
        }
        for (k, v) in &self.summary {
            let _ = writeln!(s, "{k}={}", v.text());
        }
        s
    }

    fn render_csv(&self) -> Result<String> {
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(Vec::new());
        w.write_record(&self.columns)?;
        for r in &self.rows {
            w.write_record(r.iter().map(Cell::text))?;
        }
        let bytes = w.into_inner().map_err(|e| e.into_error())?;
        Ok(String::from_utf8(bytes)?)
    }
}

pub fn write_file(path: &Path, contents: &str) -> Result<()> {
    std::fs::write(path, contents).with_context(|| format!("writing {}", path.display()))
}

/// Gnuplot script drawing `plot` from the CSV at `data`.
pub fn plot_script(report: &Report, data: &Path) -> Result<String> {
    let spec = report
        .plot
        .as_ref()
        .ok_or_else(|| UsageError(format!("command '{}' has no plot", report.command)))?;
    let mut s = String::new();
    let _ = writeln!(s, "# {} ({})", report.command, data.display());
    let _ = writeln!(s, "set datafile separator ','");
    let _ = writeln!(s, "set key autotitle columnhead");
    if spec.logx {
        let _ = writeln!(s, "set logscale x");
    }
    if spec.logy {
        let _ = writeln!(s, "set logscale y");
    }
    let _ = writeln!(s, "set xlabel '{}'", spec.xlabel);
    let _ = writeln!(s, "set ylabel '{}'", spec.ylabel);
    let _ = writeln!(
        s,
        "plot '{}' using {}:{} with linespoints title '{}'",
        data.display(),
        spec.x,
        spec.y,
        report.command
    );
    Ok(s)
}

/// Sidecar path `<out>.meta.json`.
pub fn meta_path(out: &Path) -> PathBuf {
    let mut name = out.as_os_str().to_owned();
    name.push(".meta.json");
    PathBuf::from(name)
}
