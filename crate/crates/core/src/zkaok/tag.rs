use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::params::Params;
use crate::primitives::{BitString, Elem};

/// Session tag. Components are length-prefixed and the whole string is
/// right-padded with `0x00` to a length that depends only on the parameters
/// and the left key, so left and right tags over the same `PK_L` have equal
/// length.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Tag(Vec<u8>);

impl Tag {
    /// `(PK_L, r_r, r)`.
    pub fn left(params: &Params, pk_left: &[u8], r_r: &BitString, r: &BitString) -> Tag {
        Self::build(params, pk_left, &[&r_r.encode(), &r.encode()])
    }

    /// `(PK_L, y0, y1)`.
    pub fn right(params: &Params, pk_left: &[u8], y0: &Elem, y1: &Elem) -> Tag {
        let g = &params.group;
        Self::build(params, pk_left, &[&g.elem_to_bytes(y0), &g.elem_to_bytes(y1)])
    }

    pub fn uniform_len(params: &Params, pk_left_len: usize) -> usize {
        let bits_part = 2 * (4 + 4 + params.n.div_ceil(8));
        let elems_part = 2 * (4 + params.group.elem_bytes());
        4 + pk_left_len + bits_part.max(elems_part)
    }

    fn build(params: &Params, pk_left: &[u8], parts: &[&[u8]]) -> Tag {
        let mut out = Vec::with_capacity(Self::uniform_len(params, pk_left.len()));
        for part in std::iter::once(pk_left).chain(parts.iter().copied()) {
            out.extend((part.len() as u32).to_be_bytes());
            out.extend_from_slice(part);
        }
        let target = Self::uniform_len(params, pk_left.len());
        if out.len() < target {
            out.resize(target, 0x00);
        }
        Tag(out)
    }

    pub fn from_bytes(bytes: Vec<u8>) -> Tag {
        Tag(bytes)
    }

    pub fn as_bytes(&self) -> &[u8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn to_hex(&self) -> String {
        hex::encode(&self.0)
    }
}

impl fmt::Debug for Tag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Tag({})", self.to_hex())
    }
}

impl Serialize for Tag {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_hex())
    }
}

impl<'de> Deserialize<'de> for Tag {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        hex::decode(s).map(Tag).map_err(serde::de::Error::custom)
    }
}
