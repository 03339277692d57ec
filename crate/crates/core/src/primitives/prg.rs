//! Length-flexible pseudorandom generator.
//!
//! The default backend is Blum-Micali over the group's one-way function: the
//! seed is read as an exponent `x_0 = seed mod q`, each step emits the least
//! significant bit of the current exponent and moves to
//! `x_{i+1} = (g^{x_i} mod p) mod q`.
//!
//! `InsecureFast` is a SplitMix64 stream keyed by the seed. It exists so that
//! large-group demos finish quickly and is flagged in every run manifest.

use std::sync::Arc;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use super::bits::BitString;
use super::group::GroupParams;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PrgBackend {
    #[default]
    BlumMicali,
    InsecureFast,
}

impl PrgBackend {
    pub fn is_secure(&self) -> bool {
        matches!(self, PrgBackend::BlumMicali)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Prg {
    group: Arc<GroupParams>,
    backend: PrgBackend,
}

impl Prg {
    pub fn new(group: Arc<GroupParams>, backend: PrgBackend) -> Self {
        Self { group, backend }
    }

    pub fn group(&self) -> &Arc<GroupParams> {
        &self.group
    }

    pub fn backend(&self) -> PrgBackend {
        self.backend
    }

    /// Deterministically stretch `seed` to `out_len` bits.
    pub fn expand(&self, seed: &BitString, out_len: usize) -> BitString {
        match self.backend {
            PrgBackend::BlumMicali => self.blum_micali(seed, out_len),
            PrgBackend::InsecureFast => splitmix(seed, out_len),
        }
    }

    fn blum_micali(&self, seed: &BitString, out_len: usize) -> BitString {
        let mut out = Vec::with_capacity(out_len);
        if let Some(sg) = self.group.small() {
            let mut x = seed
                .iter()
                .fold(0u64, |acc, b| ((acc << 1) | u64::from(b)) % sg.q);
            for _ in 0..out_len {
                out.push(x & 1 == 1);
                x = sg.pow(sg.g, x) % sg.q;
            }
        } else {
            let p = self.group.p();
            let q = self.group.q();
            let g = self.group.g().into_inner();
            let mut x: BigUint = seed.to_biguint() % q;
            for _ in 0..out_len {
                out.push(x.bit(0));
                x = g.modpow(&x, p) % q;
            }
        }
        BitString::new(out)
    }
}

fn splitmix(seed: &BitString, out_len: usize) -> BitString {
    // Absorb the seed (length included) into a 64-bit state.
    let mut state: u64 = 0x9e37_79b9_7f4a_7c15 ^ (seed.len() as u64);
    for chunk in seed.bits().chunks(64) {
        let word = chunk.iter().fold(0u64, |acc, &b| (acc << 1) | u64::from(b));
        state = mix(state ^ word);
    }
    let mut out = Vec::with_capacity(out_len);
    while out.len() < out_len {
        state = state.wrapping_add(0x9e37_79b9_7f4a_7c15);
        let word = mix(state);
        for i in (0..64).rev() {
            if out.len() == out_len {
                break;
            }
            out.push((word >> i) & 1 == 1);
        }
    }
    BitString::new(out)
}

fn mix(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}
