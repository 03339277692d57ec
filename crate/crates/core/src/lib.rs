pub mod attack_ddl06;
pub mod bpk;
pub mod cli;
pub mod cnmct;
pub mod error;
pub mod harness;
pub mod params;
pub mod primitives;
pub mod rng;
pub mod sigma;
pub mod simulator;
pub mod zkaok;

pub use error::{Error, Result};
pub use params::{AokBackend, Params};
