//! Run manifests written next to every output file.

use std::path::{Path, PathBuf};
use std::time::SystemTime;

use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

#[derive(Debug, Serialize)]
pub struct OutputDigest {
    pub path: String,
    pub sha256: String,
}

#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub config_hash: String,
    pub config: Value,
    pub tool: &'static str,
    pub version: &'static str,
    /// Seconds since the Unix epoch at completion.
    pub finished_at: u64,
    pub wall_seconds: f64,
    pub threads: usize,
    /// Seeds used by each probe, keyed by probe label.
    pub seeds: Vec<(String, u64)>,
    pub outputs: Vec<OutputDigest>,
}

impl RunManifest {
    pub fn new(config_hash: &str, config: &Value, wall_seconds: f64, seeds: Vec<(String, u64)>) -> Self {
        let finished_at = SystemTime::now().duration_since(SystemTime::UNIX_EPOCH).map_or(0, |d| d.as_secs());
        Self {
            config_hash: config_hash.to_string(),
            config: config.clone(),
            tool: env!("CARGO_PKG_NAME"),
            version: env!("CARGO_PKG_VERSION"),
            finished_at,
            wall_seconds,
            threads: rayon::current_num_threads(),
            seeds,
            outputs: Vec::new(),
        }
    }

    pub fn add_output(&mut self, path: &Path, body: &[u8]) {
        self.outputs.push(OutputDigest {
            path: path.display().to_string(),
            sha256: hex::encode(Sha256::digest(body)),
        });
    }
}

/// `<out>.manifest.json`.
pub fn manifest_path(out: &Path) -> PathBuf {
    let mut s = out.as_os_str().to_owned();
    s.push(".manifest.json");
    PathBuf::from(s)
}
