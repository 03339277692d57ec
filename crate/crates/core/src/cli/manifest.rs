use serde::{Deserialize, Serialize};

use crate::harness::{ExperimentConfig, GroupChoice};
use crate::params::AokBackend;
use crate::primitives::PrgBackend;

pub const TOOL: &str = "bpkcnm";

/// Which shortcuts a run took relative to a deployment-grade instantiation.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Deviations {
    pub ideal_backend: bool,
    pub toy_group: bool,
    pub insecure_prg: bool,
}

impl Deviations {
    pub fn of(config: &ExperimentConfig) -> Self {
        Self {
            ideal_backend: config.backend == AokBackend::Ideal,
            toy_group: config.group == GroupChoice::Toy,
            insecure_prg: config.prg == PrgBackend::InsecureFast,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub tool: String,
    pub version: String,
    pub command: String,
    /// The fully resolved configuration.
    pub config: serde_json::Value,
    pub seed: u64,
    pub backend: Option<AokBackend>,
    pub artifacts: Vec<String>,
    pub deviations: Deviations,
}

impl RunManifest {
    pub fn new(command: &str, config: serde_json::Value, seed: u64, backend: Option<AokBackend>, deviations: Deviations) -> Self {
        Self {
            tool: TOOL.into(),
            version: env!("CARGO_PKG_VERSION").into(),
            command: command.into(),
            config,
            seed,
            backend,
            artifacts: vec![],
            deviations,
        }
    }

    pub fn for_experiment(command: &str, config: &ExperimentConfig) -> Self {
        Self::new(
            command,
            serde_json::to_value(config).expect("config serializes"),
            config.seed,
            Some(config.backend),
            Deviations::of(config),
        )
    }
}

/// Every JSON file the tool writes: one manifest plus the command's payload.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Artifact<T> {
    pub manifest: RunManifest,
    pub payload: T,
}

impl<T: Serialize> Artifact<T> {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("artifact serializes")
    }
}
