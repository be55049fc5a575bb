//! Deterministic table writers. Floats are printed with 17 significant
//! digits so identical configurations produce byte-identical files.

use std::fs;
use std::path::{Path, PathBuf};

use crate::config::OutputFormat;

#[derive(Debug, Clone)]
pub enum Value {
    Int(i64),
    Float(f64),
    Text(String),
    Bool(bool),
}

impl Value {
    fn csv(&self) -> String {
        match self {
            Value::Int(v) => v.to_string(),
            Value::Float(v) => format!("{v:.16e}"),
            Value::Text(v) => v.clone(),
            Value::Bool(v) => v.to_string(),
        }
    }

    fn json(&self) -> String {
        match self {
            Value::Int(v) => v.to_string(),
            Value::Float(v) => format!("{v:.16e}"),
            Value::Text(v) => format!("{v:?}"),
            Value::Bool(v) => v.to_string(),
        }
    }
}

pub struct Table {
    pub name: &'static str,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Value>>,
}

impl Table {
    pub fn new(name: &'static str, columns: Vec<&'static str>) -> Self {
        Self {
            name,
            columns,
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Value>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    /// Writes the table into `dir` and returns the file path.
    pub fn write(&self, dir: &Path, format: OutputFormat) -> std::io::Result<PathBuf> {
        fs::create_dir_all(dir)?;
        let path = dir.join(format!(
            "{}.{}",
            self.name,
            match format {
                OutputFormat::Csv => "csv",
                OutputFormat::Json => "json",
            }
        ));
        let mut text = String::new();
        match format {
            OutputFormat::Csv => {
                text.push_str(&self.columns.join(","));
                text.push('\n');
                for row in &self.rows {
                    let line: Vec<String> = row.iter().map(Value::csv).collect();
                    text.push_str(&line.join(","));
                    text.push('\n');
                }
            }
            OutputFormat::Json => {
                text.push_str("[\n");
                for (i, row) in self.rows.iter().enumerate() {
                    let fields: Vec<String> = self
                        .columns
                        .iter()
                        .zip(row.iter())
                        .map(|(c, v)| format!("{c:?}: {}", v.json()))
                        .collect();
                    text.push_str(&format!("  {{{}}}", fields.join(", ")));
                    text.push_str(if i + 1 < self.rows.len() { ",\n" } else { "\n" });
                }
                text.push_str("]\n");
            }
        }
        fs::write(&path, text)?;
        Ok(path)
    }
}
