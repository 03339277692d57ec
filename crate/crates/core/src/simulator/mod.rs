//! The simulator for the coin-tossing protocol: repeated runs of the
//! adversary with a growing set of covered keys, predefined outputs from
//! `M_CRS`, and checkers for the resulting output distribution.

mod classify;
mod covered;
mod crs;
mod probe;
mod simulate;
#[cfg(test)]
mod tests;

pub use classify::{classify_sim, classify_trace, OutputClassification, RightClass};
pub use covered::{CoveredKey, CoveredKeySet, CoveredSecret};
pub use crs::{m_crs_sample, r_crs, CrsDraws, CrsPair, CrsVariant};
pub use probe::{sk_independence_probe, sk_independence_probe_jobs, SkiRelation, SkiReport};
pub use simulate::{
    simulate, simulate_full, transcript_right_key, SimFailure, SimOutput, SimRun, SimulatorState, Trapdoor, SIM_SCHEMA,
};
