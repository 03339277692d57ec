//! The concurrent man-in-the-middle experiment: one single-threaded event
//! loop hosting `s` left and `s` right sessions, with every message routed
//! through a pluggable adversary.

mod adversaries;
mod event_loop;
mod experiment;
mod world;
#[cfg(test)]
mod tests;

pub use adversaries::{
    adversary_from_id, CnmAction, CnmAdversary, CnmView, IndependentAdversary, NullAdversary, RelayAdversary, Script,
    ScriptKey, ScriptedAdversary,
};
pub use event_loop::{run_event_loop, Action, Adversary, Event, Limits, LoopEnd, LoopOutcome, Parties, View};
pub use experiment::{
    adversary_view, preprocess, run_experiment, run_experiment_with, run_experiment_with_keys, ExperimentConfig,
    ExperimentTrace, GroupChoice, Outputs, TRACE_SCHEMA,
};
pub use world::{HonestKeys, HonestPolicy, Policy, Preamble, World};
pub(crate) use world::require_role;
