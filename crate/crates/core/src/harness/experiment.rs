use serde::{Deserialize, Serialize};

use super::adversaries::{adversary_from_id, CnmAction, CnmAdversary, CnmView};
use super::event_loop::{run_event_loop, Limits, LoopEnd, View};
use super::world::{HonestKeys, HonestPolicy, Preamble, World};
use crate::bpk::{freeze_file, PublicFile};
use crate::cnmct::SessionRecord;
use crate::error::{Error, Result};
use crate::params::{AokBackend, Params};
use crate::primitives::{BitString, GroupParams, PrgBackend};
use crate::zkaok::LedgerRow;

pub const TRACE_SCHEMA: &str = "bpkcnm-trace/1";

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GroupChoice {
    /// `p = 23, q = 11, g = 2`.
    #[default]
    Toy,
    /// 256-bit safe prime.
    Large,
}

impl GroupChoice {
    pub fn params(self) -> GroupParams {
        match self {
            GroupChoice::Toy => GroupParams::toy(),
            GroupChoice::Large => GroupParams::large(),
        }
    }
}

fn default_n() -> usize {
    16
}
fn default_s() -> usize {
    2
}
fn default_adversary() -> String {
    "relay".into()
}
fn default_max_actions() -> usize {
    10_000
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default = "default_n")]
    pub n: usize,
    /// Sessions per side.
    #[serde(default = "default_s")]
    pub s: usize,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub group: GroupChoice,
    #[serde(default)]
    pub backend: AokBackend,
    #[serde(default)]
    pub prg: PrgBackend,
    #[serde(default = "default_adversary")]
    pub adversary: String,
    #[serde(default = "default_max_actions")]
    pub max_actions: usize,
    /// Auxiliary input handed to the adversary.
    #[serde(default)]
    pub aux: String,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            n: default_n(),
            s: default_s(),
            seed: 0,
            group: GroupChoice::default(),
            backend: AokBackend::default(),
            prg: PrgBackend::default(),
            adversary: default_adversary(),
            max_actions: default_max_actions(),
            aux: String::new(),
        }
    }
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        if self.s == 0 {
            return Err(Error::Config("s must be at least 1".into()));
        }
        if !(1..=256).contains(&self.n) {
            return Err(Error::Config(format!("n = {} outside [1, 256]", self.n)));
        }
        Ok(())
    }

    pub fn params(&self) -> Result<Params> {
        self.validate()?;
        Ok(Params::new(self.group.params(), self.n)?.with_prg(self.prg).with_aok(self.backend))
    }

    pub fn limits(&self) -> Limits {
        Limits { sessions: self.s, max_actions: self.max_actions }
    }
}

/// Final session outputs, `R_L` and `R_R`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Outputs {
    pub left: Vec<BitString>,
    pub right: Vec<BitString>,
}

impl Outputs {
    pub fn from_records(records: &[SessionRecord]) -> Self {
        let pick = |side| {
            records
                .iter()
                .filter(|r| r.side == side)
                .map(|r| r.output_bits().cloned().expect("finalized sessions have outputs"))
                .collect()
        };
        Self { left: pick(crate::cnmct::Side::Left), right: pick(crate::cnmct::Side::Right) }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExperimentTrace {
    pub schema: String,
    pub config: ExperimentConfig,
    pub adversary: String,
    pub public_file: PublicFile,
    pub sessions: Vec<SessionRecord>,
    pub view: CnmView,
    pub actions: Vec<CnmAction>,
    pub end: LoopEnd,
    pub illegal_actions: usize,
    pub outputs: Outputs,
    pub ledger: Vec<LedgerRow>,
}

impl ExperimentTrace {
    pub fn left_records(&self) -> impl Iterator<Item = &SessionRecord> {
        self.sessions.iter().filter(|r| r.side == crate::cnmct::Side::Left)
    }

    pub fn right_records(&self) -> impl Iterator<Item = &SessionRecord> {
        self.sessions.iter().filter(|r| r.side == crate::cnmct::Side::Right)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("trace serializes")
    }
}

/// Preprocessing: the adversary sees `(n, aux, PK_L, PK_R)` and registers
/// its keys; the frozen file goes into the view preamble.
pub fn preprocess(
    config: &ExperimentConfig,
    params: &Params,
    pk_left: Vec<u8>,
    pk_right: Vec<u8>,
    adversary: &mut dyn CnmAdversary,
) -> Result<Preamble> {
    let keys = adversary.preprocess(params, &pk_left, &pk_right);
    let file = freeze_file(pk_left.clone(), pk_right.clone(), keys, config.s)?;
    Ok(Preamble { n: config.n, aux: config.aux.clone(), pk_left, pk_right, file })
}

/// The real experiment with the built-in adversary named in the config.
pub fn run_experiment(config: &ExperimentConfig) -> Result<ExperimentTrace> {
    let mut adversary = adversary_from_id(&config.adversary, config.s, config.seed)?;
    run_experiment_with(config, adversary.as_mut())
}

pub fn run_experiment_with(config: &ExperimentConfig, adversary: &mut dyn CnmAdversary) -> Result<ExperimentTrace> {
    let params = config.params()?;
    let keys = HonestKeys::generate(&params, config.seed);
    run_experiment_with_keys(config, &keys, adversary)
}

pub fn run_experiment_with_keys(
    config: &ExperimentConfig,
    keys: &HonestKeys,
    adversary: &mut dyn CnmAdversary,
) -> Result<ExperimentTrace> {
    let params = config.params()?;
    let preamble = preprocess(config, &params, keys.left.pk.to_bytes(), keys.right.pk.to_bytes(), adversary)?;
    let mut world =
        World::new(params, preamble.file.clone(), HonestPolicy { keys: keys.clone() }, config.seed, "experiment");
    let mut view = View::new(preamble);
    let outcome = run_event_loop(&mut world, adversary, &mut view, config.limits());
    world.finalize();
    let sessions = world.records();
    Ok(ExperimentTrace {
        schema: TRACE_SCHEMA.into(),
        config: config.clone(),
        adversary: adversary.name(),
        public_file: world.file.clone(),
        outputs: Outputs::from_records(&sessions),
        sessions,
        view,
        actions: outcome.actions,
        end: outcome.end,
        illegal_actions: outcome.illegal,
        ledger: world.ledger.dump(),
    })
}

/// The adversary's view after `upto` events.
pub fn adversary_view(trace: &ExperimentTrace, upto: usize) -> Result<CnmView> {
    if upto > trace.view.events.len() {
        return Err(Error::Precondition(format!("trace has {} events", trace.view.events.len())));
    }
    Ok(trace.view.prefix(upto))
}
