use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use chrono::{DateTime, SecondsFormat, Utc};
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::error::{CliError, Result};

#[derive(Debug, Clone, Serialize)]
pub struct OutputDigest {
    /// File path, or `-` for stdout.
    pub path: String,
    pub bytes: usize,
    pub sha256: String,
}

/// Record of one invocation.
#[derive(Debug, Clone, Serialize)]
pub struct RunManifest {
    pub subcommand: String,
    pub config: serde_json::Value,
    pub seed: Option<u64>,
    pub version: String,
    pub threads: usize,
    pub started: String,
    pub finished: String,
    pub outputs: Vec<OutputDigest>,
}

fn stamp(t: DateTime<Utc>) -> String {
    t.to_rfc3339_opts(SecondsFormat::Micros, true)
}

/// Writes payloads and remembers their digests.
pub struct Recorder {
    subcommand: String,
    config: serde_json::Value,
    seed: Option<u64>,
    threads: usize,
    started: DateTime<Utc>,
    outputs: Vec<OutputDigest>,
}

impl Recorder {
    pub fn new(subcommand: &str, config: serde_json::Value, threads: usize) -> Self {
        Recorder {
            subcommand: subcommand.into(),
            config,
            seed: None,
            threads,
            started: Utc::now(),
            outputs: Vec::new(),
        }
    }

    pub fn set_seed(&mut self, seed: u64) {
        self.seed = Some(seed);
    }

    /// Write `payload` to `path`, or stdout when `path` is `None`.
    pub fn emit(&mut self, path: Option<&Path>, payload: &[u8]) -> Result<()> {
        let shown = match path {
            Some(p) => {
                fs::write(p, payload).map_err(|source| CliError::File {
                    path: p.display().to_string(),
                    source,
                })?;
                p.display().to_string()
            }
            None => {
                let mut out = std::io::stdout().lock();
                out.write_all(payload)?;
                out.flush()?;
                "-".into()
            }
        };
        self.outputs.push(OutputDigest {
            path: shown,
            bytes: payload.len(),
            sha256: hex::encode(Sha256::digest(payload)),
        });
        Ok(())
    }

    pub fn finish(self) -> RunManifest {
        RunManifest {
            subcommand: self.subcommand,
            config: self.config,
            seed: self.seed,
            version: env!("CARGO_PKG_VERSION").into(),
            threads: self.threads,
            started: stamp(self.started),
            finished: stamp(Utc::now()),
            outputs: self.outputs,
        }
    }
}

/// `<out>.<suffix>` next to a primary output file.
pub fn sibling(path: &Path, suffix: &str) -> PathBuf {
    let mut name = path.as_os_str().to_owned();
    name.push(".");
    name.push(suffix);
    PathBuf::from(name)
}

/// Write the manifest to `path`, or to stderr as one line.
pub fn write_manifest(manifest: &RunManifest, path: Option<&Path>) -> Result<()> {
    match path {
        Some(p) => {
            let mut text = serde_json::to_string_pretty(manifest)?;
            text.push('\n');
            fs::write(p, text).map_err(|source| CliError::File {
                path: p.display().to_string(),
                source,
            })
        }
        None => {
            eprintln!("{}", serde_json::to_string(manifest)?);
            Ok(())
        }
    }
}
