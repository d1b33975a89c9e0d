use serde::Serialize;
use sha2::{Digest, Sha256};

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct Artifact {
    /// File path, or `-` for the standard streams.
    pub path: String,
    pub sha256: String,
    pub bytes: usize,
}

impl Artifact {
    pub fn new(path: impl Into<String>, bytes: &[u8]) -> Self {
        Artifact { path: path.into(), sha256: sha256_hex(bytes), bytes: bytes.len() }
    }
}

/// Record of one invocation. Contains no timestamps or host details, so the
/// same inputs and parameters always produce the same manifest.
#[derive(Debug, Clone, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub parameters: serde_json::Value,
    pub inputs: Vec<Artifact>,
    pub tool: String,
    pub version: String,
    pub outputs: Vec<Artifact>,
}
