use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use crate::cli::config::config_lines;
use crate::error::Result;
use crate::harness::ExperimentConfig;

pub const TOOL_VERSION: &str = concat!(env!("CARGO_PKG_NAME"), " ", env!("CARGO_PKG_VERSION"));

/// Record of one run. Rendered as `key=value` text that the config parser
/// accepts as-is, so `--config manifest.txt` repeats the run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunManifest {
    pub command: String,
    pub config: Vec<(String, String)>,
    pub seed: u64,
    pub random_seed: bool,
    pub artifacts: Vec<(String, PathBuf)>,
    pub timestamp: u64,
}

impl RunManifest {
    pub fn new(command: &str, cfg: &ExperimentConfig, random_seed: bool) -> Self {
        RunManifest {
            command: command.to_string(),
            config: config_lines(cfg),
            seed: cfg.seed,
            random_seed,
            artifacts: Vec::new(),
            timestamp: SystemTime::now()
                .duration_since(UNIX_EPOCH)
                .map(|d| d.as_secs())
                .unwrap_or(0),
        }
    }

    pub fn add_artifact(&mut self, kind: &str, path: &Path) {
        self.artifacts.push((kind.to_string(), path.to_path_buf()));
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "manifest.tool_version={TOOL_VERSION}");
        let _ = writeln!(out, "manifest.command={}", self.command);
        let _ = writeln!(out, "manifest.timestamp={}", self.timestamp);
        let _ = writeln!(out, "manifest.seed={}", self.seed);
        let _ = writeln!(
            out,
            "manifest.seed_source={}",
            if self.random_seed { "random" } else { "explicit" }
        );
        for (kind, path) in &self.artifacts {
            let _ = writeln!(out, "manifest.artifact.{kind}={}", path.display());
        }
        for (k, v) in &self.config {
            let _ = writeln!(out, "{k}={v}");
        }
        out
    }

    /// Writes the manifest to `path`, listing `path` itself among the artifacts.
    pub fn write(&mut self, path: &Path) -> Result<()> {
        self.add_artifact("manifest", path);
        std::fs::write(path, self.render())?;
        Ok(())
    }
}
