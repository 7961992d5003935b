use std::collections::BTreeSet;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use super::run::ReportDocument;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Format {
    Json,
    Csv,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            other => Err(Error::config("format", format!("unknown format {other:?}"))),
        }
    }
}

/// Parses a comma-separated list such as `json,csv`.
pub fn parse_formats(list: &str) -> Result<BTreeSet<Format>> {
    list.split(',').filter(|s| !s.trim().is_empty()).map(str::parse).collect()
}

/// Writes `report.json` and/or the CSV tables into `dir`; returns the paths.
pub fn emit_outputs(doc: &ReportDocument, dir: &Path, formats: &BTreeSet<Format>) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(dir)?;
    let mut written = Vec::new();
    if formats.contains(&Format::Json) {
        let path = dir.join("report.json");
        std::fs::write(&path, doc.to_json()? + "\n")?;
        written.push(path);
    }
    if formats.contains(&Format::Csv) {
        for (name, contents) in &doc.tables {
            let path = dir.join(name);
            std::fs::write(&path, contents)?;
            written.push(path);
        }
    }
    Ok(written)
}
