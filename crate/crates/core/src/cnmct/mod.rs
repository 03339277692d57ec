//! The five-stage coin-tossing protocol as two message-driven state machines.
//!
//! ```text
//! right -> left   Stage-1  c_sk = C(SK_R), AOK of L_SK under tag (PK_L, y0, y1)
//! left  -> right  Stage-2  r'_l
//! right -> left   Stage-3  r_r
//! left  -> right  Stage-4  r = PRF_sigma(r'_l) xor r_r
//! left  -> right  Stage-5  c_crs = C(sigma || s_sigma), AOK of L_CRS under tag (PK_L, r_r, r)
//! ```
//!
//! With the Sigma backend Stage-1 carries two extra moves (challenge and
//! response) before the left player sends Stage-2.

mod channel;
mod honest;
mod left;
mod right;

pub use channel::{AokChannel, LedgerChannel, NotifiedChannel};
pub use honest::{run_honest, HonestRun};
pub use left::{LeftMode, LeftSession, Stage1Proof};
pub use right::{RightMode, RightSession};

use serde::{Deserialize, Serialize};

use crate::bpk::RightPublicKey;
use crate::error::{Error, Result};
use crate::params::Params;
use crate::primitives::BitString;
use crate::zkaok::{AokMsg, Tag};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "stage", rename_all = "kebab-case")]
pub enum Payload {
    Stage1 { c_sk: Vec<BitString>, aok: AokMsg },
    Stage1Challenge { aok: AokMsg },
    Stage1Response { aok: AokMsg },
    Stage2 { r_prime_l: BitString },
    Stage3 { r_r: BitString },
    Stage4 { r: BitString },
    Stage5 { c_crs: Vec<BitString>, aok: AokMsg },
}

impl Payload {
    pub fn stage(&self) -> u8 {
        match self {
            Payload::Stage1 { .. } | Payload::Stage1Challenge { .. } | Payload::Stage1Response { .. } => 1,
            Payload::Stage2 { .. } => 2,
            Payload::Stage3 { .. } => 3,
            Payload::Stage4 { .. } => 4,
            Payload::Stage5 { .. } => 5,
        }
    }

    pub fn aok(&self) -> Option<&AokMsg> {
        match self {
            Payload::Stage1 { aok, .. }
            | Payload::Stage1Challenge { aok }
            | Payload::Stage1Response { aok }
            | Payload::Stage5 { aok, .. } => Some(aok),
            _ => None,
        }
    }

    pub fn aok_mut(&mut self) -> Option<&mut AokMsg> {
        match self {
            Payload::Stage1 { aok, .. }
            | Payload::Stage1Challenge { aok }
            | Payload::Stage1Response { aok }
            | Payload::Stage5 { aok, .. } => Some(aok),
            _ => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Stage {
    S1,
    S2,
    S3,
    S4,
    S5,
    Done,
    Aborted,
}

impl Stage {
    pub fn is_terminal(self) -> bool {
        matches!(self, Stage::Done | Stage::Aborted)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Side {
    Left,
    Right,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Direction {
    In,
    Out,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LoggedMsg {
    pub dir: Direction,
    pub stage: u8,
    pub payload: Payload,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Determination {
    Both,
    Survivor,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoinTossOutput {
    pub r: BitString,
    pub determined_by: Determination,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SessionRecord {
    pub session_id: usize,
    pub side: Side,
    pub peer_pk_id: usize,
    pub stage_cursor: Stage,
    pub messages: Vec<LoggedMsg>,
    pub output: Option<CoinTossOutput>,
    pub tag: Option<Tag>,
    pub abort_reason: Option<String>,
}

impl SessionRecord {
    pub fn new(session_id: usize, side: Side, peer_pk_id: usize) -> Self {
        Self {
            session_id,
            side,
            peer_pk_id,
            stage_cursor: Stage::S1,
            messages: vec![],
            output: None,
            tag: None,
            abort_reason: None,
        }
    }

    pub fn is_done(&self) -> bool {
        self.stage_cursor == Stage::Done
    }

    pub fn output_bits(&self) -> Option<&BitString> {
        self.output.as_ref().map(|o| &o.r)
    }

    fn log(&mut self, dir: Direction, payload: &Payload) {
        self.messages.push(LoggedMsg { dir, stage: payload.stage(), payload: payload.clone() });
    }

    fn advance(&mut self, to: Stage) {
        debug_assert!(to >= self.stage_cursor, "cursor moved backwards");
        self.stage_cursor = to;
    }

    /// First logged payload matching `f`.
    pub fn find<T>(&self, f: impl Fn(&Payload) -> Option<T>) -> Option<T> {
        self.messages.iter().find_map(|m| f(&m.payload))
    }

    /// Stage numbers in log order never decrease.
    pub fn stages_monotone(&self) -> bool {
        self.messages.windows(2).all(|w| w[0].stage <= w[1].stage)
    }
}

/// Tag of a session recomputed from its log: the left tag `(PK_L, r_r, r)` for
/// left sessions, the right tag `(PK_L, y0, y1)` for right sessions.
pub fn derive_tag(params: &Params, record: &SessionRecord, pk_left: &[u8], pk_right: &RightPublicKey) -> Result<Tag> {
    match record.side {
        Side::Left => {
            let r_r = record.find(|p| match p {
                Payload::Stage3 { r_r } => Some(r_r.clone()),
                _ => None,
            });
            let r = record.find(|p| match p {
                Payload::Stage4 { r } => Some(r.clone()),
                _ => None,
            });
            match (r_r, r) {
                (Some(r_r), Some(r)) => Ok(Tag::left(params, pk_left, &r_r, &r)),
                _ => Err(Error::Precondition("left tag needs r_r and r in the log".into())),
            }
        }
        Side::Right => Ok(Tag::right(params, pk_left, &pk_right.y0, &pk_right.y1)),
    }
}

/// Ledger id for a proof sent by an honest party.
pub fn honest_entry_id(side: Side, session: usize, stage: u8) -> String {
    let s = match side {
        Side::Left => 'L',
        Side::Right => 'R',
    };
    format!("h:{s}{session}:S{stage}")
}

#[cfg(test)]
mod tests;
