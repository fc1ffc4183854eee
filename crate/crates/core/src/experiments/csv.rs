//! CSV emission: `#`-prefixed metadata, one header row, one row per record.
//! Reals are written with 17 significant digits so they parse back exactly.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use crate::error::{Error, Result};

pub const TOOL_VERSION: &str = concat!(env!("CARGO_PKG_NAME"), " ", env!("CARGO_PKG_VERSION"));

pub trait CsvRow {
    fn header(&self) -> Vec<String>;
    fn fields(&self) -> Vec<String>;
}

pub fn real(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn write_csv<W: Write, R: CsvRow>(
    mut w: W,
    meta: &[(String, String)],
    records: &[R],
) -> std::io::Result<()> {
    writeln!(w, "# tool={TOOL_VERSION}")?;
    for (k, v) in meta {
        writeln!(w, "# {k}={v}")?;
    }
    if let Some(first) = records.first() {
        writeln!(w, "{}", first.header().join(","))?;
    }
    for r in records {
        writeln!(w, "{}", r.fields().join(","))?;
    }
    w.flush()
}

/// Writes `records` to `path`. An empty record list is an error.
pub fn emit_csv<R: CsvRow>(records: &[R], meta: &[(String, String)], path: &Path) -> Result<()> {
    if records.is_empty() {
        return Err(Error::Empty("records"));
    }
    let io_err = |e: std::io::Error| Error::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    };
    let file = File::create(path).map_err(io_err)?;
    write_csv(BufWriter::new(file), meta, records).map_err(io_err)
}

/// Metadata lines, header, and rows of a CSV produced by [`write_csv`].
#[derive(Debug, Clone, PartialEq)]
pub struct CsvTable {
    pub meta: Vec<(String, String)>,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl CsvTable {
    pub fn parse(text: &str) -> Result<Self> {
        let mut meta = Vec::new();
        let mut header = None;
        let mut rows = Vec::new();
        for line in text.lines() {
            if let Some(m) = line.strip_prefix('#') {
                if let Some((k, v)) = m.trim().split_once('=') {
                    meta.push((k.to_string(), v.to_string()));
                }
                continue;
            }
            let cells: Vec<String> = line.split(',').map(str::to_string).collect();
            if header.is_none() {
                header = Some(cells);
            } else {
                rows.push(cells);
            }
        }
        let header = header.ok_or_else(|| Error::Parse("csv: missing header".into()))?;
        if let Some(r) = rows.iter().find(|r| r.len() != header.len()) {
            return Err(Error::Parse(format!(
                "csv: row has {} cells, header {}",
                r.len(),
                header.len()
            )));
        }
        Ok(CsvTable { meta, header, rows })
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.header.iter().position(|h| h == name)
    }

    pub fn meta_value(&self, key: &str) -> Option<&str> {
        self.meta
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }

    /// Everything after the metadata lines.
    pub fn body(text: &str) -> String {
        text.lines()
            .filter(|l| !l.starts_with('#'))
            .collect::<Vec<_>>()
            .join("\n")
    }
}
