//! Three-move Sigma protocols over [`GroupParams`]: Schnorr discrete-log
//! knowledge, Pedersen-opening knowledge and CDS OR-composition with XOR
//! challenge splitting. Every protocol comes with an SHVZK simulator and a
//! special-soundness extractor.
//!
//! Challenge spaces: a standalone leaf takes any challenge in `[0, q)`; an OR
//! node (and every child below it) takes `t`-bit challenges where `t` is the
//! largest width with `2^t <= q`, so XOR splitting stays inside `Z_q`.

mod coins;
mod protocol;
#[cfg(test)]
mod tests;

pub use coins::{Coins, FixedCoins};
pub use protocol::{
    sigma_commit, sigma_extract, sigma_respond, sigma_simulate, sigma_verify, ProverState, RejectReason,
};

use num_bigint::BigUint;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::primitives::{Challenge, Elem, Exponent, GroupParams};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum SigmaStatement {
    /// Knowledge of `x` with `g^x = y`.
    DLog { y: Elem },
    /// Knowledge of `(m, r)` with `g^m h^r = com`.
    PedersenOpening { h: Elem, com: Elem },
    Or { left: Box<SigmaStatement>, right: Box<SigmaStatement> },
}

impl SigmaStatement {
    pub fn dlog(y: Elem) -> Self {
        SigmaStatement::DLog { y }
    }

    pub fn pedersen(h: Elem, com: Elem) -> Self {
        SigmaStatement::PedersenOpening { h, com }
    }

    pub fn or(left: SigmaStatement, right: SigmaStatement) -> Self {
        SigmaStatement::Or { left: Box::new(left), right: Box::new(right) }
    }

    /// Three-branch OR, nested as `a OR (b OR c)`.
    pub fn or3(a: SigmaStatement, b: SigmaStatement, c: SigmaStatement) -> Self {
        Self::or(a, Self::or(b, c))
    }

    pub fn is_or(&self) -> bool {
        matches!(self, SigmaStatement::Or { .. })
    }

    /// Every element is in `Z_p^*`.
    pub fn is_well_formed(&self, group: &GroupParams) -> bool {
        match self {
            SigmaStatement::DLog { y } => group.in_zp_star(y),
            SigmaStatement::PedersenOpening { h, com } => group.in_zp_star(h) && group.in_zp_star(com),
            SigmaStatement::Or { left, right } => left.is_well_formed(group) && right.is_well_formed(group),
        }
    }

    /// Exclusive upper bound on challenges for this node.
    pub fn challenge_bound(&self, group: &GroupParams) -> BigUint {
        if self.is_or() {
            BigUint::one() << group.challenge_bits()
        } else {
            group.q().clone()
        }
    }

    pub fn is_satisfied_by(&self, group: &GroupParams, w: &SigmaWitness) -> bool {
        match (self, w) {
            (SigmaStatement::DLog { y }, SigmaWitness::DLog { x }) => {
                x.value() < group.q() && &group.exp_g(x) == y
            }
            (SigmaStatement::PedersenOpening { h, com }, SigmaWitness::Pedersen { m, r }) => {
                m.value() < group.q()
                    && r.value() < group.q()
                    && &group.mul(&group.exp_g(m), &group.pow(h, r.value())) == com
            }
            (SigmaStatement::Or { left, .. }, SigmaWitness::Left { inner }) => left.is_satisfied_by(group, inner),
            (SigmaStatement::Or { right, .. }, SigmaWitness::Right { inner }) => right.is_satisfied_by(group, inner),
            _ => false,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum SigmaWitness {
    DLog { x: Exponent },
    Pedersen { m: Exponent, r: Exponent },
    Left { inner: Box<SigmaWitness> },
    Right { inner: Box<SigmaWitness> },
}

impl SigmaWitness {
    pub fn left(inner: SigmaWitness) -> Self {
        SigmaWitness::Left { inner: Box::new(inner) }
    }

    pub fn right(inner: SigmaWitness) -> Self {
        SigmaWitness::Right { inner: Box::new(inner) }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum FirstMessage {
    DLog { a: Elem },
    Pedersen { a: Elem },
    Or { left: Box<FirstMessage>, right: Box<FirstMessage> },
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum Response {
    DLog { z: Exponent },
    Pedersen { z_m: Exponent, z_r: Exponent },
    /// The right child's challenge is implied: `e xor left_challenge`.
    Or { left_challenge: Challenge, left: Box<Response>, right: Box<Response> },
}

/// `(a, e, z)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SigmaTranscript {
    pub a: FirstMessage,
    pub e: Challenge,
    pub z: Response,
}

impl SigmaTranscript {
    pub fn new(a: FirstMessage, e: Challenge, z: Response) -> Self {
        Self { a, e, z }
    }

    /// Joins two child transcripts under an OR node with challenge `e_l xor e_r`.
    pub fn or(left: SigmaTranscript, right: SigmaTranscript) -> Self {
        let e = left.e.xor(&right.e);
        SigmaTranscript {
            a: FirstMessage::Or { left: Box::new(left.a), right: Box::new(right.a) },
            e,
            z: Response::Or { left_challenge: left.e, left: Box::new(left.z), right: Box::new(right.z) },
        }
    }

    /// The two child transcripts of an OR transcript.
    pub fn children(&self) -> Option<(SigmaTranscript, SigmaTranscript)> {
        match (&self.a, &self.z) {
            (FirstMessage::Or { left: al, right: ar }, Response::Or { left_challenge, left, right }) => Some((
                SigmaTranscript::new((**al).clone(), left_challenge.clone(), (**left).clone()),
                SigmaTranscript::new((**ar).clone(), self.e.xor(left_challenge), (**right).clone()),
            )),
            _ => None,
        }
    }

    /// Assembles the nested `a OR (b OR c)` transcript from three branch
    /// transcripts; their challenges must XOR to `e`.
    pub fn assemble_or3(e: &Challenge, a: SigmaTranscript, b: SigmaTranscript, c: SigmaTranscript) -> Result<Self> {
        if &a.e.xor(&b.e).xor(&c.e) != e {
            return Err(Error::Precondition("branch challenges do not XOR to the parent challenge".into()));
        }
        Ok(SigmaTranscript::or(a, SigmaTranscript::or(b, c)))
    }

    /// Inverse of [`SigmaTranscript::assemble_or3`].
    pub fn split_or3(&self) -> Option<[SigmaTranscript; 3]> {
        let (a, rest) = self.children()?;
        let (b, c) = rest.children()?;
        Some([a, b, c])
    }
}
