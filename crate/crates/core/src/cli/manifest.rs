use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::Result;

/// Everything needed to re-run a command and check that its primary outputs
/// come out byte-identical.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub tool_version: String,
    /// Command line, without the program name and the manifest flag.
    pub args: Vec<String>,
    pub command: String,
    pub q: Option<u32>,
    pub e: Option<usize>,
    /// `{p, k, modulus}` of the field, when the command built one.
    pub field: Option<serde_json::Value>,
    /// Gram matrices of the forms used, as field-element indices.
    pub gram_matrices: BTreeMap<String, Vec<Vec<usize>>>,
    pub seed: u64,
    pub threads: usize,
    pub wall_time_ms: u64,
    /// SHA-256 of standard output (key `stdout`) and of every file written.
    pub outputs: BTreeMap<String, String>,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

pub fn file_digest(path: &Path) -> Result<String> {
    Ok(sha256_hex(&std::fs::read(path)?))
}

impl RunManifest {
    pub fn load(path: &Path) -> Result<Self> {
        Ok(serde_json::from_slice(&std::fs::read(path)?)?)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, serde_json::to_string_pretty(self)? + "\n")?;
        Ok(())
    }

    /// Output keys whose digests differ from `other`, including keys present
    /// in only one of the two.
    pub fn mismatches(&self, other: &RunManifest) -> Vec<String> {
        let mut keys: Vec<&String> = self.outputs.keys().chain(other.outputs.keys()).collect();
        keys.sort();
        keys.dedup();
        keys.into_iter()
            .filter(|k| self.outputs.get(*k) != other.outputs.get(*k))
            .cloned()
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn digest_of_empty_input() {
        assert_eq!(
            sha256_hex(b""),
            "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855"
        );
    }
}
