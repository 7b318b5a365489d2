use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::error::CliError;

#[derive(Debug, Serialize)]
pub struct Artifact {
    pub path: String,
    pub sha256: String,
    pub bytes: u64,
}

#[derive(Debug, Serialize)]
pub struct Manifest {
    pub command: String,
    pub config_sha256: String,
    pub ecoepi_version: &'static str,
    pub execution: &'static str,
    pub threads: usize,
    pub wall_time_s: f64,
    pub artifacts: Vec<Artifact>,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Collects the files an invocation wrote, relative to `out`, sorted.
pub fn describe(out: &Path, files: &[PathBuf]) -> Result<Vec<Artifact>, CliError> {
    let mut artifacts = files
        .iter()
        .map(|path| {
            let bytes = fs::read(path).map_err(CliError::io(path))?;
            let rel = path.strip_prefix(out).unwrap_or(path);
            Ok(Artifact {
                path: rel.to_string_lossy().into_owned(),
                sha256: sha256_hex(&bytes),
                bytes: bytes.len() as u64,
            })
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    artifacts.sort_by(|a, b| a.path.cmp(&b.path));
    artifacts.dedup_by(|a, b| a.path == b.path);
    Ok(artifacts)
}

impl Manifest {
    pub fn write(&self, out: &Path) -> Result<PathBuf, CliError> {
        let path = out.join("manifest.json");
        let text = serde_json::to_string_pretty(self).expect("manifest serialises");
        fs::write(&path, text + "\n").map_err(CliError::io(&path))?;
        Ok(path)
    }
}
