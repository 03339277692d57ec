//! Naor's statistically-binding bit commitment and its bitwise string
//! extension.
//!
//! The receiver fixes a 3n-bit string `R`. To commit to `b` with seed `s`
//! the committer sends `PRG(s)` when `b = 0` and `PRG(s) xor R` when `b = 1`.

use serde::{Deserialize, Serialize};

use super::bits::BitString;
use super::prg::Prg;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct NaorCommitment {
    pub receiver_string: BitString,
    pub value: BitString,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NaorOpening {
    pub committed_bit: bool,
    pub seed: BitString,
}

pub fn naor_commit(prg: &Prg, bit: bool, seed: &BitString, receiver: &BitString) -> Result<NaorCommitment> {
    let n = seed.len();
    if receiver.len() != 3 * n {
        return Err(Error::LengthMismatch { expected: 3 * n, got: receiver.len() });
    }
    let stretched = prg.expand(seed, 3 * n);
    let value = if bit { stretched.xor(receiver)? } else { stretched };
    Ok(NaorCommitment { receiver_string: receiver.clone(), value })
}

pub fn naor_verify(prg: &Prg, com: &NaorCommitment, opening: &NaorOpening) -> bool {
    naor_commit(prg, opening.committed_bit, &opening.seed, &com.receiver_string)
        .map(|c| c.value == com.value)
        .unwrap_or(false)
}

/// Commits `msg` bit by bit, position `i` under `seeds[i]`.
pub fn naor_commit_string(
    prg: &Prg,
    msg: &BitString,
    seeds: &[BitString],
    receiver: &BitString,
) -> Result<Vec<NaorCommitment>> {
    if seeds.len() != msg.len() {
        return Err(Error::LengthMismatch { expected: msg.len(), got: seeds.len() });
    }
    msg.iter()
        .zip(seeds)
        .map(|(bit, seed)| naor_commit(prg, bit, seed, receiver))
        .collect()
}

/// Recompute-and-compare check for a string commitment given only the values.
pub fn naor_verify_string(
    prg: &Prg,
    receiver: &BitString,
    values: &[BitString],
    msg: &BitString,
    seeds: &[BitString],
) -> bool {
    if values.len() != msg.len() || seeds.len() != msg.len() {
        return false;
    }
    values.iter().zip(msg.iter()).zip(seeds).all(|((value, bit), seed)| {
        naor_commit(prg, bit, seed, receiver)
            .map(|c| &c.value == value)
            .unwrap_or(false)
    })
}
