//! Deterministic CSV emission: mandatory header, 12 significant digits,
//! fixed row order. Re-running a config byte-reproduces the files.

use std::io::Write;
use std::path::Path;

use anyhow::{Context, Result};

/// One float cell with 12 significant digits.
pub fn cell(x: f64) -> String {
    format!("{:.11e}", x)
}

pub struct CsvWriter {
    out: std::io::BufWriter<std::fs::File>,
    columns: usize,
}

impl CsvWriter {
    pub fn create(path: &Path, header: &[&str]) -> Result<Self> {
        if let Some(dir) = path.parent() {
            if !dir.as_os_str().is_empty() {
                std::fs::create_dir_all(dir)
                    .with_context(|| format!("creating output directory {}", dir.display()))?;
            }
        }
        let file = std::fs::File::create(path)
            .with_context(|| format!("creating output file {}", path.display()))?;
        let mut out = std::io::BufWriter::new(file);
        writeln!(out, "{}", header.join(","))?;
        Ok(Self {
            out,
            columns: header.len(),
        })
    }

    pub fn row(&mut self, fields: &[String]) -> Result<()> {
        anyhow::ensure!(
            fields.len() == self.columns,
            "row has {} fields, header has {}",
            fields.len(),
            self.columns
        );
        writeln!(self.out, "{}", fields.join(","))?;
        Ok(())
    }

    pub fn finish(mut self) -> Result<()> {
        self.out.flush()?;
        Ok(())
    }
}
