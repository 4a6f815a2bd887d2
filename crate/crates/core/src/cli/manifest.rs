use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

/// What produced an artifact. Holds nothing that varies between identical
/// invocations, so it can be embedded in outputs compared byte for byte.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub tool: String,
    pub version: String,
    pub command: String,
    pub seed: u64,
    pub config: serde_json::Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub input_sha256: Option<String>,
}

impl RunManifest {
    pub fn new(command: &str, seed: u64, config: impl Serialize, input: Option<&[u8]>) -> Self {
        RunManifest {
            tool: env!("CARGO_PKG_NAME").to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            command: command.to_string(),
            seed,
            config: serde_json::to_value(config).expect("configs serialize"),
            input_sha256: input.map(sha256_hex),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Artifact {
    pub file: String,
    pub sha256: String,
}

/// The sidecar `manifest.json`: the manifest plus wall-clock times and
/// digests of the files written next to it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ManifestRecord {
    #[serde(flatten)]
    pub manifest: RunManifest,
    pub started_at: String,
    pub finished_at: String,
    pub artifacts: Vec<Artifact>,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

pub fn now() -> String {
    chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Millis, true)
}
