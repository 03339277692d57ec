use std::fmt;

use num_bigint::BigUint;
use num_traits::Zero;
use rand::RngCore;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// An ordered bit sequence.
///
/// Wire form: hex of a 4-byte big-endian bit count followed by the bits
/// packed MSB-first, zero-padded to a whole byte.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct BitString {
    bits: Vec<bool>,
}

impl BitString {
    pub fn new(bits: Vec<bool>) -> Self {
        Self { bits }
    }

    pub fn zeros(len: usize) -> Self {
        Self { bits: vec![false; len] }
    }

    /// The low `len` bits of `value`, most significant first.
    pub fn from_u64(value: u64, len: usize) -> Self {
        let bits = (0..len)
            .rev()
            .map(|i| i < 64 && (value >> i) & 1 == 1)
            .collect();
        Self { bits }
    }

    /// Big-endian encoding of `value` in exactly `len` bits.
    pub fn from_biguint(value: &BigUint, len: usize) -> Result<Self> {
        if value.bits() > len as u64 {
            return Err(Error::Domain(format!("{value} does not fit in {len} bits")));
        }
        let bits = (0..len as u64).rev().map(|i| value.bit(i)).collect();
        Ok(Self { bits })
    }

    pub fn random<R: RngCore + ?Sized>(len: usize, rng: &mut R) -> Self {
        let mut bytes = vec![0u8; len.div_ceil(8)];
        rng.fill_bytes(&mut bytes);
        let bits = (0..len).map(|i| (bytes[i / 8] >> (7 - i % 8)) & 1 == 1).collect();
        Self { bits }
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn bit(&self, i: usize) -> bool {
        self.bits[i]
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        self.bits.iter().copied()
    }

    pub fn is_all_zero(&self) -> bool {
        self.bits.iter().all(|b| !b)
    }

    pub fn to_biguint(&self) -> BigUint {
        let mut v = BigUint::zero();
        for &b in &self.bits {
            v <<= 1u8;
            if b {
                v |= BigUint::from(1u8);
            }
        }
        v
    }

    /// Value of the first 64 bits (or fewer), big-endian.
    pub fn to_u64_lossy(&self) -> u64 {
        self.bits
            .iter()
            .fold(0u64, |acc, &b| (acc << 1) | u64::from(b))
    }

    pub fn xor(&self, other: &BitString) -> Result<BitString> {
        if self.len() != other.len() {
            return Err(Error::LengthMismatch { expected: self.len(), got: other.len() });
        }
        Ok(Self {
            bits: self.bits.iter().zip(&other.bits).map(|(a, b)| a ^ b).collect(),
        })
    }

    pub fn concat(&self, other: &BitString) -> BitString {
        let mut bits = self.bits.clone();
        bits.extend_from_slice(&other.bits);
        Self { bits }
    }

    pub fn split_at(&self, mid: usize) -> (BitString, BitString) {
        let (a, b) = self.bits.split_at(mid);
        (Self::new(a.to_vec()), Self::new(b.to_vec()))
    }

    pub fn with_flipped(&self, i: usize) -> BitString {
        let mut bits = self.bits.clone();
        bits[i] = !bits[i];
        Self { bits }
    }

    /// Bits packed MSB-first, zero-padded on the right.
    pub fn to_packed(&self) -> Vec<u8> {
        let mut out = vec![0u8; self.len().div_ceil(8)];
        for (i, &b) in self.bits.iter().enumerate() {
            if b {
                out[i / 8] |= 0x80 >> (i % 8);
            }
        }
        out
    }

    /// Length-prefixed wire bytes.
    pub fn encode(&self) -> Vec<u8> {
        let mut out = (self.len() as u32).to_be_bytes().to_vec();
        out.extend(self.to_packed());
        out
    }

    /// Parses one encoded string from the front of `bytes`, returning the rest.
    pub fn decode_prefix(bytes: &[u8]) -> Result<(BitString, &[u8])> {
        if bytes.len() < 4 {
            return Err(Error::Decode("bit string header truncated".into()));
        }
        let len = u32::from_be_bytes(bytes[..4].try_into().expect("4 bytes")) as usize;
        let body_len = len.div_ceil(8);
        let rest = &bytes[4..];
        if rest.len() < body_len {
            return Err(Error::Decode("bit string body truncated".into()));
        }
        let body = &rest[..body_len];
        let bits = (0..len).map(|i| (body[i / 8] >> (7 - i % 8)) & 1 == 1).collect();
        let parsed = BitString { bits };
        if parsed.to_packed() != body {
            return Err(Error::Decode("non-zero padding bits".into()));
        }
        Ok((parsed, &rest[body_len..]))
    }

    pub fn decode(bytes: &[u8]) -> Result<BitString> {
        let (s, rest) = Self::decode_prefix(bytes)?;
        if !rest.is_empty() {
            return Err(Error::Decode("trailing bytes after bit string".into()));
        }
        Ok(s)
    }

    pub fn to_hex(&self) -> String {
        hex::encode(self.encode())
    }

    pub fn from_hex(s: &str) -> Result<BitString> {
        let bytes = hex::decode(s).map_err(|e| Error::Decode(e.to_string()))?;
        Self::decode(&bytes)
    }
}

impl fmt::Debug for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: String = self.bits.iter().map(|&b| if b { '1' } else { '0' }).collect();
        write!(f, "BitString({s})")
    }
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_hex())
    }
}

impl FromIterator<bool> for BitString {
    fn from_iter<I: IntoIterator<Item = bool>>(iter: I) -> Self {
        Self::new(iter.into_iter().collect())
    }
}

impl Serialize for BitString {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_hex())
    }
}

impl<'de> Deserialize<'de> for BitString {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        BitString::from_hex(&s).map_err(serde::de::Error::custom)
    }
}
