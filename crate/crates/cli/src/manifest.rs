// Licensed under the Apache License, Version 2.0 (the "License"); you may
// not use this file except in compliance with the License. You may obtain
// a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS, WITHOUT
// WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied. See the
// License for the specific language governing permissions and limitations
// under the License.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use ksigraph_core::generators::RNG_ALGORITHM;
use ksigraph_core::GeneratorSpec;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

pub const MANIFEST_FILE: &str = "manifest.json";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InputDigest {
    pub path: String,
    pub sha256: String,
}

/// Provenance record written next to every run's outputs.
///
/// Only `timestamp` changes between two runs of the same command line.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub tool: String,
    pub version: String,
    pub command: String,
    pub command_line: Vec<String>,
    pub seeds: Vec<u64>,
    pub rng_algorithm: String,
    pub inputs: Vec<InputDigest>,
    pub generator_spec: Option<GeneratorSpec>,
    pub outputs: Vec<String>,
    pub timestamp: String,
}

impl RunManifest {
    pub fn new(command: &str, command_line: Vec<String>) -> Self {
        RunManifest {
            tool: "ksigraph".into(),
            version: env!("CARGO_PKG_VERSION").into(),
            command: command.into(),
            command_line,
            seeds: Vec::new(),
            rng_algorithm: RNG_ALGORITHM.into(),
            inputs: Vec::new(),
            generator_spec: None,
            outputs: Vec::new(),
            timestamp: chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true),
        }
    }

    pub fn add_seed(&mut self, seed: u64) {
        if !self.seeds.contains(&seed) {
            self.seeds.push(seed);
        }
    }

    pub fn add_input(&mut self, path: &Path, bytes: &[u8]) {
        self.inputs.push(InputDigest {
            path: path.display().to_string(),
            sha256: hex::encode(Sha256::digest(bytes)),
        });
    }
}

/// Collects output files under one directory and records their names.
pub struct OutputDir {
    pub dir: PathBuf,
    pub manifest: RunManifest,
}

impl OutputDir {
    pub fn new(dir: PathBuf, manifest: RunManifest) -> Result<Self> {
        fs::create_dir_all(&dir).with_context(|| format!("creating output directory {}", dir.display()))?;
        Ok(OutputDir { dir, manifest })
    }

    pub fn write(&mut self, name: &str, bytes: &[u8]) -> Result<()> {
        let path = self.dir.join(name);
        fs::write(&path, bytes).with_context(|| format!("writing {}", path.display()))?;
        self.manifest.outputs.push(name.to_string());
        Ok(())
    }

    /// JSON outputs carry a `manifest` field pointing back at the manifest file.
    pub fn write_json<T: Serialize>(&mut self, name: &str, value: &T) -> Result<()> {
        let mut value = serde_json::to_value(value)?;
        if let serde_json::Value::Object(map) = &mut value {
            map.insert("manifest".into(), MANIFEST_FILE.into());
        }
        let mut text = serde_json::to_string_pretty(&value)?;
        text.push('\n');
        self.write(name, text.as_bytes())
    }

    pub fn finish(self) -> Result<()> {
        let path = self.dir.join(MANIFEST_FILE);
        let mut text = serde_json::to_string_pretty(&self.manifest)?;
        text.push('\n');
        fs::write(&path, text).with_context(|| format!("writing {}", path.display()))
    }
}
