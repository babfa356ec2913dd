//! Output files: CSV tables and `mgf-1` documents, each stamped with the tool
//! version and the hash of the producing configuration.

use std::fs;
use std::path::{Path, PathBuf};

use mgf_core::document::{Body, Document, SCHEMA, TOOL_VERSION};
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::Failure;

/// SHA-256 of the canonical JSON of `config`.
pub fn config_hash<C: Serialize>(config: &C) -> String {
    let json = serde_json::to_string(config).expect("config serialises");
    hex::encode(Sha256::digest(json.as_bytes()))
}

/// Shortest round-trip decimal form.
pub fn num(x: f64) -> String {
    format!("{x}")
}

pub fn opt(x: Option<f64>) -> String {
    x.map(num).unwrap_or_default()
}

pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new<S: Into<String>>(header: impl IntoIterator<Item = S>) -> Self {
        Self { header: header.into_iter().map(Into::into).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        self.rows.push(row);
    }

    /// CSV text with a leading `#` provenance line.
    pub fn to_csv(&self, hash: &str) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.header).expect("in-memory write");
        for r in &self.rows {
            w.write_record(r).expect("in-memory write");
        }
        let body = String::from_utf8(w.into_inner().expect("flush")).expect("utf-8");
        format!("# schema={SCHEMA} version={TOOL_VERSION} config_hash={hash}\n{body}")
    }
}

/// Where results go; `None` prints CSV to stdout and drops documents.
pub struct Sink {
    pub dir: Option<PathBuf>,
    pub hash: String,
}

impl Sink {
    pub fn new(dir: Option<PathBuf>, hash: String) -> Result<Self, Failure> {
        if let Some(d) = &dir {
            fs::create_dir_all(d).map_err(|e| Failure::Input(format!("cannot create {}: {e}", d.display())))?;
        }
        Ok(Self { dir, hash })
    }

    pub fn path(&self, name: &str) -> Option<PathBuf> {
        self.dir.as_ref().map(|d| d.join(name))
    }

    pub fn table(&self, name: &str, table: &Table) -> Result<(), Failure> {
        let text = table.to_csv(&self.hash);
        match self.path(name) {
            Some(p) => write(&p, &text),
            None => {
                print!("{text}");
                Ok(())
            }
        }
    }

    pub fn document(&self, name: &str, body: Body) -> Result<Option<PathBuf>, Failure> {
        let Some(p) = self.path(name) else { return Ok(None) };
        Document::new(self.hash.clone(), body).save(&p)?;
        Ok(Some(p))
    }
}

fn write(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| Failure::Input(format!("cannot write {}: {e}", path.display())))
}
