use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};

/// Per-op tallies from a noise run.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct OpCounts {
    pub enabled: bool,
    /// Sentences on which the op's firing draw succeeded.
    pub fired: u64,
    /// Sentences with at least one site for the op.
    pub applicable: u64,
    /// Sentences the op changed.
    pub applied: u64,
    pub edits: u64,
    /// `applied / applicable`; absent when nothing was applicable.
    pub application_rate: Option<f64>,
}

impl OpCounts {
    pub fn finish(&mut self) {
        self.application_rate = (self.applicable > 0).then(|| self.applied as f64 / self.applicable as f64);
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Counts {
    pub read: u64,
    pub kept: u64,
    /// Rejections by reason; `read == kept + sum(rejected)`.
    pub rejected: BTreeMap<String, u64>,
    pub pairs_emitted: u64,
    #[serde(skip_serializing_if = "BTreeMap::is_empty", default)]
    pub ops: BTreeMap<String, OpCounts>,
    /// Items written to each named output part.
    #[serde(skip_serializing_if = "BTreeMap::is_empty", default)]
    pub parts: BTreeMap<String, u64>,
}

/// Record of one run, enough to reproduce it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub tool: String,
    pub version: String,
    pub command: String,
    pub config_hash: Option<String>,
    pub seed: u64,
    pub workers: usize,
    pub inputs: Vec<PathBuf>,
    pub outputs: Vec<PathBuf>,
    pub counts: Counts,
    pub wall_time_secs: f64,
}

/// Builds a manifest while a command runs.
pub struct ManifestBuilder {
    manifest: RunManifest,
    started: Instant,
}

impl ManifestBuilder {
    pub fn new(command: &str, config_hash: Option<String>, seed: u64, workers: usize) -> Self {
        ManifestBuilder {
            manifest: RunManifest {
                tool: env!("CARGO_PKG_NAME").to_owned(),
                version: env!("CARGO_PKG_VERSION").to_owned(),
                command: command.to_owned(),
                config_hash,
                seed,
                workers,
                inputs: Vec::new(),
                outputs: Vec::new(),
                counts: Counts::default(),
                wall_time_secs: 0.0,
            },
            started: Instant::now(),
        }
    }

    pub fn input(&mut self, path: &Path) {
        self.manifest.inputs.push(path.to_owned());
    }

    pub fn output(&mut self, path: &Path) {
        self.manifest.outputs.push(path.to_owned());
    }

    pub fn counts(&mut self) -> &mut Counts {
        &mut self.manifest.counts
    }

    pub fn reject(&mut self, reason: &str) {
        self.manifest.counts.read += 1;
        *self.manifest.counts.rejected.entry(reason.to_owned()).or_default() += 1;
    }

    pub fn keep(&mut self) {
        self.manifest.counts.read += 1;
        self.manifest.counts.kept += 1;
    }

    pub fn finish(mut self) -> Result<RunManifest> {
        let c = &self.manifest.counts;
        let rejected: u64 = c.rejected.values().sum();
        if c.read != c.kept + rejected {
            return Err(CliError::Internal(format!(
                "manifest counts inconsistent: read {} != kept {} + rejected {rejected}",
                c.read, c.kept
            )));
        }
        for op in self.manifest.counts.ops.values_mut() {
            op.finish();
        }
        self.manifest.wall_time_secs = self.started.elapsed().as_secs_f64();
        Ok(self.manifest)
    }
}
