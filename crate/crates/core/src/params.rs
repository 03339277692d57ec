use std::sync::Arc;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::primitives::{BitString, Exponent, GroupParams, Prf, Prg, PrgBackend};

/// Which argument-of-knowledge implementation the players use.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AokBackend {
    /// Oracle ledger: the verifier learns `(tag, statement, verdict)` only.
    #[default]
    Ideal,
    /// Live Sigma rounds where the relation has a Sigma core, ideal otherwise.
    Sigma,
}

/// Everything the protocol layers share: the group, the security parameter
/// and the backend choices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Params {
    pub group: Arc<GroupParams>,
    pub n: usize,
    pub prg_backend: PrgBackend,
    pub aok_backend: AokBackend,
}

impl Params {
    pub fn new(group: GroupParams, n: usize) -> Result<Self> {
        if !(1..=256).contains(&n) {
            return Err(Error::Config(format!("n = {n} outside [1, 256]")));
        }
        Ok(Self { group: Arc::new(group), n, prg_backend: PrgBackend::default(), aok_backend: AokBackend::default() })
    }

    pub fn toy(n: usize) -> Self {
        Self::new(GroupParams::toy(), n).expect("valid n")
    }

    pub fn with_prg(mut self, backend: PrgBackend) -> Self {
        self.prg_backend = backend;
        self
    }

    pub fn with_aok(mut self, backend: AokBackend) -> Self {
        self.aok_backend = backend;
        self
    }

    pub fn prg(&self) -> Prg {
        Prg::new(self.group.clone(), self.prg_backend)
    }

    /// GGM PRF keyed by n-bit seeds on n-bit inputs.
    pub fn prf(&self) -> Prf {
        Prf::new(self.prg(), self.n)
    }

    /// Right secret keys are drawn below `min(q, 2^n)` so they fit in an
    /// n-bit commitment.
    pub fn right_sk_bound(&self) -> BigUint {
        let two_n = BigUint::from(1u8) << self.n;
        two_n.min(self.group.q().clone())
    }

    pub fn sk_to_bits(&self, s: &Exponent) -> Result<BitString> {
        BitString::from_biguint(s.value(), self.n)
    }

    /// Length of `sigma || s_sigma`.
    pub fn left_secret_bits(&self) -> usize {
        self.n + self.n * self.n
    }
}
