use std::path::Path;
use std::time::Instant;

use serde::Serialize;
use sha2::{Digest, Sha256};

#[derive(Debug, Clone, Serialize)]
pub struct FileDigest {
    pub path: String,
    pub sha256: String,
}

impl FileDigest {
    pub fn of(path: &Path, bytes: &[u8]) -> Self {
        FileDigest {
            path: path.display().to_string(),
            sha256: hex::encode(Sha256::digest(bytes)),
        }
    }
}

/// Provenance embedded in every JSON output.
#[derive(Debug, Clone, Serialize)]
pub struct RunManifest {
    pub command_line: Vec<String>,
    pub seeds: Vec<u64>,
    pub version: String,
    pub core_version: String,
    pub inputs: Vec<FileDigest>,
    pub outputs: Vec<FileDigest>,
    /// The only field allowed to differ between identical runs.
    pub wall_time_ms: f64,
}

/// Collects inputs and outputs while a command runs.
pub struct Recorder {
    started: Instant,
    pub manifest: RunManifest,
}

impl Recorder {
    pub fn new(args: Vec<String>) -> Self {
        Recorder {
            started: Instant::now(),
            manifest: RunManifest {
                command_line: args,
                seeds: Vec::new(),
                version: env!("CARGO_PKG_VERSION").to_string(),
                core_version: steiner_core::VERSION.to_string(),
                inputs: Vec::new(),
                outputs: Vec::new(),
                wall_time_ms: 0.0,
            },
        }
    }

    pub fn seed(&mut self, seed: u64) {
        self.manifest.seeds.push(seed);
    }

    pub fn input(&mut self, path: &Path, bytes: &[u8]) {
        self.manifest.inputs.push(FileDigest::of(path, bytes));
    }

    pub fn output(&mut self, path: &Path, bytes: &[u8]) {
        self.manifest.outputs.push(FileDigest::of(path, bytes));
    }

    pub fn finish(mut self) -> RunManifest {
        self.manifest.wall_time_ms = self.started.elapsed().as_secs_f64() * 1e3;
        self.manifest
    }
}
