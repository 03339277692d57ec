//! Domain-separated seeding. Every consumer of randomness in an experiment
//! gets its own ChaCha stream derived from the master seed, a label and an
//! index, so reordering consumers never shifts anyone else's coins.

use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use sha2::{Digest, Sha256};

pub fn derive_seed(master: u64, label: &str, index: u64) -> [u8; 32] {
    let mut hasher = Sha256::new();
    hasher.update(b"bpkcnm/v1");
    hasher.update(master.to_be_bytes());
    hasher.update((label.len() as u32).to_be_bytes());
    hasher.update(label.as_bytes());
    hasher.update(index.to_be_bytes());
    let digest = hasher.finalize();
    let mut out = [0u8; 32];
    out.copy_from_slice(&digest);
    out
}

/// A 64-bit child seed, for nesting derivations.
pub fn derive_u64(master: u64, label: &str, index: u64) -> u64 {
    let bytes = derive_seed(master, label, index);
    u64::from_be_bytes(bytes[..8].try_into().expect("8 bytes"))
}

pub fn derive_rng(master: u64, label: &str, index: u64) -> ChaCha20Rng {
    ChaCha20Rng::from_seed(derive_seed(master, label, index))
}
