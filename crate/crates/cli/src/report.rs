//! Report tables and their CSV / JSON encodings.
//!
//! CSV files start with `#`-prefixed metadata lines followed by a header row
//! and the data rows. JSON files hold one object with a `rows` array of
//! objects keyed by column name. Both parse back to the same [`Report`].

use std::io::{BufRead, Write};

use anyhow::{anyhow, bail, Context, Result};
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Cell {
    Int(i64),
    Float(f64),
    Bool(bool),
    Text(String),
}

impl Cell {
    /// Non-finite values are stored as text so that both encodings keep them.
    pub fn float(x: f64) -> Self {
        if x.is_finite() {
            Cell::Float(x)
        } else {
            Cell::Text(format!("{x}"))
        }
    }

    pub fn text(s: impl Into<String>) -> Self {
        Cell::Text(s.into())
    }

    pub fn opt(x: Option<f64>) -> Self {
        x.map_or(Cell::Text(String::new()), Cell::float)
    }

    fn render(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::Float(v) => format!("{v:?}"),
            Cell::Bool(v) => v.to_string(),
            Cell::Text(s) => s.clone(),
        }
    }

    fn from_csv(s: &str) -> Self {
        if let Ok(v) = s.parse::<i64>() {
            return Cell::Int(v);
        }
        if s.contains(['.', 'e']) && s.bytes().any(|b| b.is_ascii_digit()) {
            if let Ok(v) = s.parse::<f64>() {
                if v.is_finite() {
                    return Cell::Float(v);
                }
            }
        }
        match s {
            "true" => Cell::Bool(true),
            "false" => Cell::Bool(false),
            _ => Cell::Text(s.to_string()),
        }
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::float(x)
    }
}

impl From<usize> for Cell {
    fn from(x: usize) -> Self {
        Cell::Int(x as i64)
    }
}

impl From<bool> for Cell {
    fn from(x: bool) -> Self {
        Cell::Bool(x)
    }
}

impl From<String> for Cell {
    fn from(x: String) -> Self {
        Cell::Text(x)
    }
}

impl From<&str> for Cell {
    fn from(x: &str) -> Self {
        Cell::Text(x.to_string())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub schema_version: u32,
    pub command: String,
    pub config: Vec<String>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
    pub passed: bool,
    pub failures: Vec<String>,
    pub wall_clock_seconds: f64,
}

impl Report {
    pub fn new(command: &str, config: Vec<String>, columns: &[&str]) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            command: command.to_string(),
            config,
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
            passed: true,
            failures: Vec::new(),
            wall_clock_seconds: 0.0,
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.columns.len(), "row width does not match the header");
        self.rows.push(row);
    }

    pub fn fail(&mut self, message: String) {
        self.passed = false;
        self.failures.push(message);
    }

    /// Recomputes the verdict from the `passed` column, when there is one.
    pub fn passed_from_rows(&self) -> Option<bool> {
        let idx = self.columns.iter().position(|c| c == "passed")?;
        Some(self.rows.iter().all(|r| r[idx] == Cell::Bool(true)))
    }

    pub fn write_csv(&self, out: &mut impl Write) -> Result<()> {
        writeln!(out, "# schema_version: {}", self.schema_version)?;
        writeln!(out, "# command: {}", self.command)?;
        for line in &self.config {
            writeln!(out, "# config: {line}")?;
        }
        writeln!(out, "# passed: {}", self.passed)?;
        for f in &self.failures {
            writeln!(out, "# failure: {}", f.replace('\n', " "))?;
        }
        writeln!(out, "# wall_clock_seconds: {}", self.wall_clock_seconds)?;
        let mut w = csv::Writer::from_writer(out);
        w.write_record(&self.columns)?;
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::render))?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn read_csv(input: impl BufRead) -> Result<Self> {
        let mut meta: Vec<String> = Vec::new();
        let mut body = String::new();
        for line in input.lines() {
            let line = line?;
            if body.is_empty() && line.starts_with('#') {
                meta.push(line);
            } else {
                body.push_str(&line);
                body.push('\n');
            }
        }
        let mut report = Report::new("", Vec::new(), &[]);
        report.schema_version = 0;
        for m in meta {
            let (key, value) = m[1..].trim_start().split_once(": ").unwrap_or((m[1..].trim(), ""));
            match key {
                "schema_version" => report.schema_version = value.parse()?,
                "command" => report.command = value.to_string(),
                "config" => report.config.push(value.to_string()),
                "passed" => report.passed = value == "true",
                "failure" => report.failures.push(value.to_string()),
                "wall_clock_seconds" => report.wall_clock_seconds = value.parse()?,
                other => bail!("unknown metadata key '{other}'"),
            }
        }
        let mut r = csv::ReaderBuilder::new().has_headers(true).from_reader(body.as_bytes());
        report.columns = r.headers()?.iter().map(str::to_string).collect();
        for rec in r.records() {
            report.rows.push(rec?.iter().map(Cell::from_csv).collect());
        }
        Ok(report)
    }

    pub fn to_json(&self) -> Value {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|row| {
                let obj: Map<String, Value> = self
                    .columns
                    .iter()
                    .zip(row)
                    .map(|(c, v)| (c.clone(), serde_json::to_value(v).expect("cell")))
                    .collect();
                Value::Object(obj)
            })
            .collect();
        serde_json::json!({
            "schema_version": self.schema_version,
            "command": self.command,
            "config": self.config,
            "columns": self.columns,
            "rows": rows,
            "summary": { "passed": self.passed, "failures": self.failures },
            "wall_clock_seconds": self.wall_clock_seconds,
        })
    }

    pub fn write_json(&self, out: &mut impl Write) -> Result<()> {
        serde_json::to_writer_pretty(&mut *out, &self.to_json())?;
        writeln!(out)?;
        Ok(())
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let field = |k: &str| v.get(k).ok_or_else(|| anyhow!("missing '{k}'"));
        let strings = |k: &str| -> Result<Vec<String>> { Ok(serde_json::from_value(field(k)?.clone())?) };
        let columns = strings("columns")?;
        let mut rows = Vec::new();
        for (i, row) in field("rows")?.as_array().ok_or_else(|| anyhow!("'rows' is not an array"))?.iter().enumerate() {
            let cells = columns
                .iter()
                .map(|c| {
                    let cell = row.get(c).with_context(|| format!("row {i} has no '{c}'"))?;
                    Ok(serde_json::from_value::<Cell>(cell.clone())?)
                })
                .collect::<Result<Vec<_>>>()?;
            rows.push(cells);
        }
        let summary = field("summary")?;
        Ok(Report {
            schema_version: serde_json::from_value(field("schema_version")?.clone())?,
            command: serde_json::from_value(field("command")?.clone())?,
            config: strings("config")?,
            columns,
            rows,
            passed: summary.get("passed").and_then(Value::as_bool).unwrap_or(false),
            failures: serde_json::from_value(summary.get("failures").cloned().unwrap_or(Value::Array(vec![])))?,
            wall_clock_seconds: serde_json::from_value(field("wall_clock_seconds")?.clone())?,
        })
    }
}
