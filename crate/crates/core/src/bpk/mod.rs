//! Key material of the bare public-key model and the public file.
//!
//! A left player's public key is a Naor commitment to a PRF seed `sigma`,
//! together with the 3n-bit receiver string the commitment was made under.
//! A right player's public key is a pair of one-way images `(y0, y1)` of which
//! it keeps exactly one preimage.

mod file;

pub use file::{freeze_file, FileEntry, PublicFile, Registrant, Role, HONEST_LEFT_ID, HONEST_RIGHT_ID};

use rand::RngCore;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::params::Params;
use crate::primitives::{naor_commit_string, naor_verify_string, random_below, BitString, Elem, Exponent, GroupParams};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LeftPublicKey {
    pub receiver_string: BitString,
    pub commitment: Vec<BitString>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LeftSecretKey {
    pub sigma: BitString,
    pub seeds: Vec<BitString>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LeftKeyPair {
    pub pk: LeftPublicKey,
    pub sk: LeftSecretKey,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RightPublicKey {
    pub y0: Elem,
    pub y1: Elem,
}

/// One preimage and which image it opens. The other preimage is never kept.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RightSecretKey {
    pub s: Exponent,
    pub side: u8,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RightKeyPair {
    pub pk: RightPublicKey,
    pub sk: RightSecretKey,
}

impl LeftSecretKey {
    /// `sigma || s_sigma`, the string committed to in Stage-5.
    pub fn to_bits(&self) -> BitString {
        self.seeds.iter().fold(self.sigma.clone(), |acc, s| acc.concat(s))
    }

    /// Inverse of [`LeftSecretKey::to_bits`] for a given n.
    pub fn from_bits(bits: &BitString, n: usize) -> Result<Self> {
        if bits.len() != n + n * n {
            return Err(Error::LengthMismatch { expected: n + n * n, got: bits.len() });
        }
        let (sigma, mut rest) = bits.split_at(n);
        let mut seeds = Vec::with_capacity(n);
        for _ in 0..n {
            let (head, tail) = rest.split_at(n);
            seeds.push(head);
            rest = tail;
        }
        Ok(Self { sigma, seeds })
    }
}

pub fn gen_left_key<R: RngCore + ?Sized>(params: &Params, rng: &mut R) -> LeftKeyPair {
    let n = params.n;
    let receiver_string = loop {
        // An all-zero receiver string makes the commitment trivially equivocal.
        let r = BitString::random(3 * n, rng);
        if !r.is_all_zero() {
            break r;
        }
    };
    let sigma = BitString::random(n, rng);
    let seeds: Vec<_> = (0..n).map(|_| BitString::random(n, rng)).collect();
    let commitment = naor_commit_string(&params.prg(), &sigma, &seeds, &receiver_string)
        .expect("lengths fixed above")
        .into_iter()
        .map(|c| c.value)
        .collect();
    LeftKeyPair { pk: LeftPublicKey { receiver_string, commitment }, sk: LeftSecretKey { sigma, seeds } }
}

/// Recomputes the commitment from `(sigma, s_sigma)`.
pub fn validate_left(params: &Params, pk: &LeftPublicKey, sk: &LeftSecretKey) -> bool {
    let n = params.n;
    pk.receiver_string.len() == 3 * n
        && sk.sigma.len() == n
        && sk.seeds.len() == n
        && sk.seeds.iter().all(|s| s.len() == n)
        && naor_verify_string(&params.prg(), &pk.receiver_string, &pk.commitment, &sk.sigma, &sk.seeds)
}

pub fn gen_right_key<R: RngCore + ?Sized>(params: &Params, rng: &mut R) -> RightKeyPair {
    gen_right_key_with_spare(params, rng).0
}

/// Key generation that also hands back the other preimage `s_{1-b}`. Only the
/// simulator uses this, as its independent key for the secret-key
/// independence check.
pub fn gen_right_key_with_spare<R: RngCore + ?Sized>(params: &Params, rng: &mut R) -> (RightKeyPair, Exponent) {
    let bound = params.right_sk_bound();
    let s0 = Exponent::new(random_below(&bound, rng));
    let s1 = Exponent::new(random_below(&bound, rng));
    let side = (rng.next_u32() & 1) as u8;
    let pk = RightPublicKey { y0: params.group.exp_g(&s0), y1: params.group.exp_g(&s1) };
    let (kept, spare) = if side == 0 { (s0, s1) } else { (s1, s0) };
    (RightKeyPair { pk, sk: RightSecretKey { s: kept, side } }, spare)
}

/// Key-validating relation for right keys: `x` opens `y0` or `y1`.
pub fn validate_right(group: &GroupParams, pk: &RightPublicKey, x: &Exponent) -> bool {
    if x.value() >= group.q() {
        return false;
    }
    let y = group.exp_g(x);
    y == pk.y0 || y == pk.y1
}

impl LeftPublicKey {
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = vec![b'L'];
        out.extend(self.receiver_string.encode());
        out.extend((self.commitment.len() as u32).to_be_bytes());
        for v in &self.commitment {
            out.extend(v.encode());
        }
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        let rest = bytes.strip_prefix(b"L").ok_or_else(|| Error::Decode("not a left key".into()))?;
        let (receiver_string, rest) = BitString::decode_prefix(rest)?;
        let (count, mut rest) = read_u32(rest)?;
        let mut commitment = Vec::with_capacity(count.min(4096) as usize);
        for _ in 0..count {
            let (v, tail) = BitString::decode_prefix(rest)?;
            commitment.push(v);
            rest = tail;
        }
        if !rest.is_empty() {
            return Err(Error::Decode("trailing bytes after left key".into()));
        }
        Ok(Self { receiver_string, commitment })
    }
}

impl RightPublicKey {
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = vec![b'R'];
        for y in [&self.y0, &self.y1] {
            let raw = y.value().to_bytes_be();
            out.extend((raw.len() as u32).to_be_bytes());
            out.extend(raw);
        }
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        let rest = bytes.strip_prefix(b"R").ok_or_else(|| Error::Decode("not a right key".into()))?;
        let (y0, rest) = read_elem(rest)?;
        let (y1, rest) = read_elem(rest)?;
        if !rest.is_empty() {
            return Err(Error::Decode("trailing bytes after right key".into()));
        }
        Ok(Self { y0, y1 })
    }
}

fn read_u32(bytes: &[u8]) -> Result<(u32, &[u8])> {
    if bytes.len() < 4 {
        return Err(Error::Decode("truncated length".into()));
    }
    let (head, rest) = bytes.split_at(4);
    Ok((u32::from_be_bytes(head.try_into().expect("4 bytes")), rest))
}

fn read_elem(bytes: &[u8]) -> Result<(Elem, &[u8])> {
    let (len, rest) = read_u32(bytes)?;
    let len = len as usize;
    if rest.len() < len {
        return Err(Error::Decode("truncated element".into()));
    }
    let (raw, rest) = rest.split_at(len);
    Ok((Elem::new(num_bigint::BigUint::from_bytes_be(raw)), rest))
}
