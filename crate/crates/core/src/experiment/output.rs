//! Tidy CSV tables with `#` legend headers and the JSON run manifest.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::error::Result;
use crate::experiment::config::{Experiment, ExperimentConfig};
use crate::ledger::fmt;

/// A CSV table; numeric cells are pre-formatted with 12 significant digits.
#[derive(Debug, Clone, Default)]
pub struct Table {
    pub name: String,
    pub legend: Vec<String>,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(name: impl Into<String>, columns: &[&'static str]) -> Self {
        Self { name: name.into(), columns: columns.to_vec(), ..Self::default() }
    }

    pub fn legend(mut self, line: impl Into<String>) -> Self {
        self.legend.push(line.into());
        self
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn write<W: Write>(&self, mut out: W) -> Result<()> {
        for l in &self.legend {
            writeln!(out, "# {l}")?;
        }
        writeln!(out, "{}", self.columns.join(","))?;
        for r in &self.rows {
            writeln!(out, "{}", r.join(","))?;
        }
        Ok(())
    }
}

/// Float cell.
pub fn f(x: f64) -> String {
    fmt(x)
}

/// Integer cell.
pub fn i(x: usize) -> String {
    x.to_string()
}

#[derive(Debug, Clone, Serialize)]
pub struct Manifest {
    pub experiment: &'static str,
    pub version: &'static str,
    pub config_sha256: String,
    pub config: ExperimentConfig,
    pub scalars: BTreeMap<String, f64>,
    pub flags: BTreeMap<String, bool>,
    pub files: Vec<String>,
}

/// Everything an experiment produces.
#[derive(Debug, Clone, Default)]
pub struct Report {
    pub tables: Vec<Table>,
    pub scalars: BTreeMap<String, f64>,
    pub flags: BTreeMap<String, bool>,
}

impl Report {
    pub fn scalar(&mut self, key: impl Into<String>, value: f64) {
        self.scalars.insert(key.into(), value);
    }

    pub fn flag(&mut self, key: impl Into<String>, value: bool) {
        self.flags.insert(key.into(), value);
    }

    /// Writes `<name>.csv` for each table and `<experiment>_manifest.json`
    /// into `dir`; returns the written paths.
    pub fn write(&self, dir: &Path, experiment: Experiment, config: &ExperimentConfig) -> Result<Vec<PathBuf>> {
        std::fs::create_dir_all(dir)?;
        let mut written = Vec::new();
        let mut files = Vec::new();
        for t in &self.tables {
            let name = format!("{}.csv", t.name);
            let path = dir.join(&name);
            let mut buf = Vec::new();
            t.write(&mut buf)?;
            std::fs::write(&path, buf)?;
            files.push(name);
            written.push(path);
        }
        let manifest = Manifest {
            experiment: experiment.name(),
            version: env!("CARGO_PKG_VERSION"),
            config_sha256: config.sha256(),
            config: config.resolved(),
            scalars: self.scalars.clone(),
            flags: self.flags.clone(),
            files,
        };
        let path = dir.join(format!("{}_manifest.json", experiment.name()));
        let mut text = serde_json::to_string_pretty(&manifest)?;
        text.push('\n');
        std::fs::write(&path, text)?;
        written.push(path);
        Ok(written)
    }
}
