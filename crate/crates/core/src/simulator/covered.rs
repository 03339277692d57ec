use serde::{Deserialize, Serialize};

use crate::bpk::{validate_left, validate_right, LeftPublicKey, LeftSecretKey, RightPublicKey};
use crate::error::{Error, Result};
use crate::params::Params;
use crate::primitives::Exponent;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "role", rename_all = "kebab-case")]
pub enum CoveredSecret {
    Right { s: Exponent },
    Left { sk: LeftSecretKey },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoveredKey {
    #[serde(with = "hex")]
    pub pk: Vec<u8>,
    pub secret: CoveredSecret,
}

/// Public keys whose secret the simulator knows, keyed by their file bytes.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoveredKeySet {
    keys: Vec<CoveredKey>,
}

impl CoveredKeySet {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds a key after checking the secret against it.
    pub fn insert(&mut self, params: &Params, pk: &[u8], secret: CoveredSecret) -> Result<()> {
        let ok = match &secret {
            CoveredSecret::Right { s } => RightPublicKey::from_bytes(pk).is_ok_and(|k| validate_right(&params.group, &k, s)),
            CoveredSecret::Left { sk } => LeftPublicKey::from_bytes(pk).is_ok_and(|k| validate_left(params, &k, sk)),
        };
        if !ok {
            return Err(Error::Extraction("extracted secret does not match the key".into()));
        }
        if !self.contains(pk) {
            self.keys.push(CoveredKey { pk: pk.to_vec(), secret });
        }
        Ok(())
    }

    pub fn contains(&self, pk: &[u8]) -> bool {
        self.get(pk).is_some()
    }

    pub fn get(&self, pk: &[u8]) -> Option<&CoveredSecret> {
        self.keys.iter().find(|k| k.pk == pk).map(|k| &k.secret)
    }

    pub fn right_secret(&self, pk: &[u8]) -> Option<&Exponent> {
        match self.get(pk)? {
            CoveredSecret::Right { s } => Some(s),
            CoveredSecret::Left { .. } => None,
        }
    }

    pub fn left_secret(&self, pk: &[u8]) -> Option<&LeftSecretKey> {
        match self.get(pk)? {
            CoveredSecret::Left { sk } => Some(sk),
            CoveredSecret::Right { .. } => None,
        }
    }

    pub fn len(&self) -> usize {
        self.keys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.keys.is_empty()
    }

    pub fn public_keys(&self) -> impl Iterator<Item = &[u8]> {
        self.keys.iter().map(|k| k.pk.as_slice())
    }
}
