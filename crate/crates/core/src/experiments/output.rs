use std::fmt::Write as _;
use std::path::Path;

use serde_json::Value;

use crate::error::{Error, Result};

pub const SCHEMA_VERSION: u32 = 1;

/// One CSV row: `series,x,y,extra`.
#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub series: &'static str,
    pub x: f64,
    pub y: f64,
    pub extra: String,
}

impl Row {
    pub fn new(series: &'static str, x: f64, y: f64) -> Self {
        Row {
            series,
            x,
            y,
            extra: String::new(),
        }
    }

    pub fn with_extra(series: &'static str, x: f64, y: f64, extra: impl ToString) -> Self {
        Row {
            series,
            x,
            y,
            extra: extra.to_string(),
        }
    }
}

/// Shortest representation that parses back to the same f64.
pub fn format_f64(x: f64) -> String {
    format!("{x:?}")
}

#[derive(Debug, Clone)]
pub struct ExperimentOutput {
    pub metadata: Value,
    pub rows: Vec<Row>,
}

impl ExperimentOutput {
    pub fn series<'a>(&'a self, name: &'a str) -> impl Iterator<Item = &'a Row> + 'a {
        self.rows.iter().filter(move |r| r.series == name)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        writeln!(out, "# {}", self.metadata).unwrap();
        out.push_str("series,x,y,extra\n");
        for r in &self.rows {
            writeln!(out, "{},{},{},{}", r.series, format_f64(r.x), format_f64(r.y), r.extra).unwrap();
        }
        out
    }

    pub fn write_csv(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_csv())
            .map_err(|e| Error::Validation(format!("output_path: cannot write {}: {e}", path.display())))
    }
}
