use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::Value;

use super::{CliError, ExperimentConfig, Format};
use crate::rng::GENERATOR_FAMILY;

/// One CSV field. Floats print with Rust's shortest round-trip formatting.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Cell {
    Int(u64),
    Float(f64),
    Text(&'static str),
}

impl Cell {
    fn render(&self) -> String {
        match self {
            Cell::Int(i) => i.to_string(),
            Cell::Float(x) => format!("{x:?}"),
            Cell::Text(s) => (*s).to_string(),
        }
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as u64)
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Float(v)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Table {
    #[serde(skip)]
    pub stem: String,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(stem: impl Into<String>, columns: &[&'static str]) -> Self {
        Self {
            stem: stem.into(),
            columns: columns.to_vec(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    fn write(&self, dir: &Path, format: Format) -> Result<PathBuf, CliError> {
        match format {
            Format::Csv => {
                let path = dir.join(format!("{}.csv", self.stem));
                let mut w = csv::Writer::from_path(&path)?;
                w.write_record(&self.columns)?;
                for row in &self.rows {
                    w.write_record(row.iter().map(Cell::render))?;
                }
                w.flush()?;
                Ok(path)
            }
            Format::Json => {
                let path = dir.join(format!("{}.json", self.stem));
                let mut text = serde_json::to_string(self)?;
                text.push('\n');
                fs::write(&path, text)?;
                Ok(path)
            }
        }
    }
}

#[derive(Serialize)]
struct Metadata<'a> {
    tool: &'static str,
    version: &'static str,
    generator: &'static str,
    seed: u64,
    config: &'a ExperimentConfig,
    parameters: Value,
    outputs: Vec<String>,
    summary: Value,
}

/// Writes every table and then `<subcommand>.meta.json`.
pub(super) fn emit(
    config: &ExperimentConfig,
    parameters: Value,
    tables: &[Table],
    summary: Value,
) -> Result<Vec<PathBuf>, CliError> {
    fs::create_dir_all(&config.output)?;
    let mut files = tables
        .iter()
        .map(|t| t.write(&config.output, config.format))
        .collect::<Result<Vec<_>, _>>()?;
    let meta = Metadata {
        tool: env!("CARGO_PKG_NAME"),
        version: env!("CARGO_PKG_VERSION"),
        generator: GENERATOR_FAMILY,
        seed: config.seed,
        config,
        parameters,
        outputs: files
            .iter()
            .filter_map(|p| p.file_name().map(|f| f.to_string_lossy().into_owned()))
            .collect(),
        summary,
    };
    let path = config
        .output
        .join(format!("{}.meta.json", config.subcommand));
    let mut text = serde_json::to_string_pretty(&meta)?;
    text.push('\n');
    fs::write(&path, text)?;
    files.push(path);
    Ok(files)
}
