//! In-memory output files, their atomic persistence, the output-directory
//! lock and the run manifest.

use std::fs::{self, OpenOptions};
use std::path::{Path, PathBuf};

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::error::{CliError, CliResult};

/// Written in place of values that are undefined (for instance a g² with
/// zero singles).
pub const NULL: &str = "null";

pub const LOCK_FILE: &str = ".harper.lock";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Artifact {
    pub name: String,
    pub bytes: Vec<u8>,
    /// Data rows, excluding the header, for tabular outputs.
    pub rows: Option<usize>,
}

impl Artifact {
    pub fn text(name: impl Into<String>, text: String) -> Self {
        Self {
            name: name.into(),
            bytes: text.into_bytes(),
            rows: None,
        }
    }

    pub fn sha256(&self) -> String {
        hex::encode(Sha256::digest(&self.bytes))
    }
}

/// Shortest round-trip form, positional for moderate magnitudes and
/// scientific otherwise; `null` for non-finite values.
pub fn num(x: f64) -> String {
    if !x.is_finite() {
        NULL.to_string()
    } else if x == 0.0 || (1e-4..1e15).contains(&x.abs()) {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}

pub fn opt(x: Option<f64>) -> String {
    x.map_or_else(|| NULL.to_string(), num)
}

/// CSV with a mandatory header row.
pub struct Table {
    writer: csv::Writer<Vec<u8>>,
    width: usize,
    rows: usize,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        let mut writer = csv::WriterBuilder::new()
            .terminator(csv::Terminator::CRLF)
            .from_writer(Vec::new());
        writer.write_record(header).expect("in-memory write");
        Self {
            writer,
            width: header.len(),
            rows: 0,
        }
    }

    pub fn push<I, S>(&mut self, record: I)
    where
        I: IntoIterator<Item = S>,
        S: AsRef<[u8]>,
    {
        let fields: Vec<S> = record.into_iter().collect();
        assert_eq!(fields.len(), self.width, "record width differs from header");
        self.writer.write_record(fields).expect("in-memory write");
        self.rows += 1;
    }

    pub fn finish(self, name: impl Into<String>) -> Artifact {
        let rows = self.rows;
        Artifact {
            name: name.into(),
            bytes: self.writer.into_inner().expect("in-memory flush"),
            rows: Some(rows),
        }
    }
}

/// Exclusive claim on an output directory, released on drop.
pub struct OutputLock {
    path: PathBuf,
}

impl OutputLock {
    pub fn acquire(dir: &Path) -> CliResult<Self> {
        let path = dir.join(LOCK_FILE);
        match OpenOptions::new().write(true).create_new(true).open(&path) {
            Ok(_) => Ok(Self { path }),
            Err(e) if e.kind() == std::io::ErrorKind::AlreadyExists => Err(CliError::io(
                &path,
                std::io::Error::new(
                    e.kind(),
                    "output directory is in use by another run (stale lock?)",
                ),
            )),
            Err(e) => Err(CliError::io(&path, e)),
        }
    }
}

impl Drop for OutputLock {
    fn drop(&mut self) {
        let _ = fs::remove_file(&self.path);
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct OutputRecord {
    pub file: String,
    pub sha256: String,
    pub bytes: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rows: Option<usize>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Timings {
    pub prepare_ms: f64,
    pub compute_ms: f64,
    pub write_ms: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct RunManifest {
    pub artifact_version: &'static str,
    pub command: String,
    pub seed: u64,
    pub config: serde_json::Value,
    pub effective_t: f64,
    pub summary: serde_json::Value,
    pub outputs: Vec<OutputRecord>,
    pub timings: Timings,
}

impl RunManifest {
    pub fn file_name(command: &str) -> String {
        format!("{command}.manifest.json")
    }
}

/// Writes every artifact into `dir` through a temporary name and a rename.
/// On failure the files already written by this call are removed.
pub fn persist(dir: &Path, artifacts: &[Artifact]) -> CliResult<Vec<OutputRecord>> {
    let mut written: Vec<PathBuf> = Vec::new();
    let result = artifacts
        .iter()
        .map(|a| {
            let path = dir.join(&a.name);
            let tmp = dir.join(format!(".{}.partial", a.name));
            fs::write(&tmp, &a.bytes).map_err(|e| CliError::io(&tmp, e))?;
            fs::rename(&tmp, &path).map_err(|e| {
                let _ = fs::remove_file(&tmp);
                CliError::io(&path, e)
            })?;
            written.push(path);
            Ok(OutputRecord {
                file: a.name.clone(),
                sha256: a.sha256(),
                bytes: a.bytes.len(),
                rows: a.rows,
            })
        })
        .collect::<CliResult<Vec<_>>>();
    if result.is_err() {
        for p in &written {
            let _ = fs::remove_file(p);
        }
    }
    result
}
