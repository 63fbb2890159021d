//! Provenance record written next to every output.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::csvio::write_file;
use crate::error::Result;

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: String,
    /// Hex SHA-256 of the canonical configuration text.
    pub config_digest: String,
    pub tool_version: String,
    /// `None` when the command consumed no randomness.
    pub master_seed: Option<u64>,
    /// UTC, RFC 3339.
    pub timestamp: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub tie_count: Option<usize>,
    pub outputs: Vec<String>,
}

impl RunManifest {
    pub fn new(command: &str, canonical_config: &str, master_seed: Option<u64>) -> Self {
        RunManifest {
            command: command.to_string(),
            config_digest: hex::encode(Sha256::digest(canonical_config.as_bytes())),
            tool_version: TOOL_VERSION.to_string(),
            master_seed,
            timestamp: chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true),
            tie_count: None,
            outputs: Vec::new(),
        }
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        write_file(path, |w| {
            serde_json::to_writer_pretty(&mut *w, self)?;
            std::io::Write::write_all(w, b"\n")
        })
    }
}

/// `out.csv` → `out.csv.manifest.json`.
pub fn manifest_path_for(output: &Path) -> PathBuf {
    let mut name = output.file_name().map(|s| s.to_os_string()).unwrap_or_default();
    name.push(".manifest.json");
    output.with_file_name(name)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn digest_and_round_trip() {
        let m = RunManifest::new("simulate", "", Some(3));
        assert_eq!(m.config_digest, "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
        assert!(m.timestamp.ends_with('Z'));
        let json = serde_json::to_string(&m).unwrap();
        assert!(!json.contains("tie_count"));
        let back: RunManifest = serde_json::from_str(&json).unwrap();
        assert_eq!(back, m);
    }

    #[test]
    fn manifest_sits_beside_output() {
        assert_eq!(manifest_path_for(Path::new("/tmp/x/path.csv")), PathBuf::from("/tmp/x/path.csv.manifest.json"));
    }
}
