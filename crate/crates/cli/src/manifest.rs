use std::path::{Path, PathBuf};

use anyhow::Context;
use clue_core::{CluePolicy, ProbeHyperparams, SamplerConfig};
use serde::{Deserialize, Serialize};

use crate::args::Command;

pub const MANIFEST_FILE: &str = "manifest.json";

/// Everything needed to re-run an invocation. `args` holds the parsed
/// command with absolute paths; `replay` executes it as recorded.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: String,
    pub args: Command,
    pub inputs: Vec<PathBuf>,
    pub policy: Option<CluePolicy>,
    pub sampler: Option<SamplerConfig>,
    pub hyperparams: Option<ProbeHyperparams>,
    pub tool_version: String,
    pub timestamp: String,
}

impl RunManifest {
    pub fn new(args: &Command) -> Self {
        RunManifest {
            command: args.name().to_owned(),
            args: args.clone(),
            inputs: args.inputs(),
            policy: None,
            sampler: None,
            hyperparams: None,
            tool_version: env!("CARGO_PKG_VERSION").to_owned(),
            timestamp: chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true),
        }
    }

    pub fn write(&self, path: &Path) -> anyhow::Result<()> {
        let mut json = serde_json::to_string_pretty(self)?;
        json.push('\n');
        std::fs::write(path, json).with_context(|| format!("writing {}", path.display()))
    }

    pub fn read(path: &Path) -> anyhow::Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        serde_json::from_str(&text).with_context(|| format!("parsing manifest {}", path.display()))
    }
}
