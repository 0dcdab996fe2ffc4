//! Provenance record attached to every command output.

use std::collections::BTreeMap;
use std::time::{SystemTime, UNIX_EPOCH};

use serde::Serialize;
use sha2::{Digest, Sha256};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunManifest {
    pub command: String,
    /// SHA-256 of the input file bytes, hex encoded.
    pub model_sha256: Option<String>,
    pub seed: Option<u64>,
    pub tolerances: BTreeMap<String, f64>,
    pub version: String,
    /// Seconds since the Unix epoch.
    pub timestamp: u64,
}

impl RunManifest {
    pub fn new(command: &str) -> Self {
        RunManifest {
            command: command.to_string(),
            model_sha256: None,
            seed: None,
            tolerances: BTreeMap::new(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            timestamp: SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs()),
        }
    }

    pub fn with_input(mut self, bytes: &[u8]) -> Self {
        self.model_sha256 = Some(sha256_hex(bytes));
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }

    pub fn with_tolerance(mut self, name: &str, value: f64) -> Self {
        self.tolerances.insert(name.to_string(), value);
        self
    }

    /// The manifest without its timestamp, for comparing runs.
    pub fn without_timestamp(&self) -> Self {
        RunManifest { timestamp: 0, ..self.clone() }
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hash_is_stable() {
        assert_eq!(
            sha256_hex(b"abc"),
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad"
        );
    }

    #[test]
    fn identical_inputs_give_identical_manifests() {
        let a = RunManifest::new("cell").with_input(b"{}").with_seed(3).with_tolerance("tol", 1e-7);
        let b = RunManifest::new("cell").with_input(b"{}").with_seed(3).with_tolerance("tol", 1e-7);
        assert_eq!(a.without_timestamp(), b.without_timestamp());
    }
}
