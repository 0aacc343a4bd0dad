//! Run manifests written next to every output file.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde::Serialize;
use serde_json::{Map, Value};
use sha2::{Digest, Sha256};

#[derive(Debug, Serialize)]
pub struct OutputDigest {
    pub path: String,
    pub sha256: String,
}

#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub subcommand: String,
    pub argv: Vec<String>,
    pub seeds: Vec<u64>,
    pub version: String,
    pub wall_time_s: f64,
    pub outputs: Vec<OutputDigest>,
    /// Subcommand-specific facts needed to read the outputs.
    pub details: Map<String, Value>,
}

pub fn sha256_file(path: &Path) -> Result<String> {
    let bytes = fs::read(path).with_context(|| format!("reading {}", path.display()))?;
    Ok(format!("{:x}", Sha256::digest(&bytes)))
}

pub fn manifest_path(output: &Path) -> PathBuf {
    let mut name = output.as_os_str().to_owned();
    name.push(".manifest.json");
    PathBuf::from(name)
}

impl RunManifest {
    pub fn new(subcommand: &str, seeds: Vec<u64>, wall_time_s: f64) -> Self {
        RunManifest {
            subcommand: subcommand.to_string(),
            argv: std::env::args().collect(),
            seeds,
            version: env!("CARGO_PKG_VERSION").to_string(),
            wall_time_s,
            outputs: Vec::new(),
            details: Map::new(),
        }
    }

    pub fn detail(mut self, key: &str, value: impl Serialize) -> Self {
        self.details.insert(key.to_string(), serde_json::to_value(value).expect("serializable"));
        self
    }

    /// Digests every output and writes one manifest beside each.
    pub fn write_for(mut self, outputs: &[&Path]) -> Result<()> {
        for p in outputs {
            self.outputs.push(OutputDigest { path: p.display().to_string(), sha256: sha256_file(p)? });
        }
        let text = serde_json::to_string_pretty(&self)?;
        for p in outputs {
            let m = manifest_path(p);
            fs::write(&m, &text).with_context(|| format!("writing {}", m.display()))?;
        }
        Ok(())
    }
}
