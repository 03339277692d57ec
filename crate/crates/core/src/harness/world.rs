use rand_chacha::ChaCha20Rng;
use serde::{Deserialize, Serialize};

use super::event_loop::Parties;
use crate::bpk::{gen_left_key, gen_right_key, FileEntry, LeftKeyPair, PublicFile, Registrant, RightKeyPair, Role};
use crate::cnmct::{LedgerChannel, LeftMode, LeftSession, Payload, RightMode, RightSession, SessionRecord};
use crate::params::Params;
use crate::rng::derive_rng;
use crate::zkaok::IdealLedger;

/// What the adversary holds before its first action.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Preamble {
    pub n: usize,
    pub aux: String,
    #[serde(with = "hex")]
    pub pk_left: Vec<u8>,
    #[serde(with = "hex")]
    pub pk_right: Vec<u8>,
    pub file: PublicFile,
}

/// The honest players' key pairs.
#[derive(Clone, Debug)]
pub struct HonestKeys {
    pub left: LeftKeyPair,
    pub right: RightKeyPair,
}

impl HonestKeys {
    pub fn generate(params: &Params, seed: u64) -> Self {
        Self {
            left: gen_left_key(params, &mut derive_rng(seed, "keygen/left", 0)),
            right: gen_right_key(params, &mut derive_rng(seed, "keygen/right", 0)),
        }
    }
}

/// Decides how each honest-side session is built and when a run stops.
pub trait Policy {
    fn left_session(&mut self, params: &Params, session: usize, peer: &FileEntry, rng: ChaCha20Rng) -> Result<LeftSession, String>;
    fn right_session(&mut self, params: &Params, session: usize, peer: &FileEntry, rng: ChaCha20Rng) -> Result<RightSession, String>;

    fn after_left(&mut self, _session: &LeftSession, _file: &PublicFile) {}
    fn after_right(&mut self, _session: &RightSession, _file: &PublicFile) {}

    fn should_halt(&self) -> bool {
        false
    }
}

/// The honest left and right players of the real experiment.
#[derive(Clone, Debug)]
pub struct HonestPolicy {
    pub keys: HonestKeys,
}

pub(crate) fn require_role(peer: &FileEntry, role: Role) -> Result<(), String> {
    if peer.role == role {
        Ok(())
    } else {
        Err(format!("file entry {} is not a {role:?} key", peer.id))
    }
}

impl Policy for HonestPolicy {
    fn left_session(&mut self, params: &Params, session: usize, peer: &FileEntry, rng: ChaCha20Rng) -> Result<LeftSession, String> {
        require_role(peer, Role::R)?;
        let mode = LeftMode::Honest { sk: self.keys.left.sk.clone() };
        Ok(LeftSession::new(params.clone(), self.keys.left.pk.clone(), session, peer.id, &peer.key, mode, rng))
    }

    fn right_session(&mut self, params: &Params, session: usize, peer: &FileEntry, rng: ChaCha20Rng) -> Result<RightSession, String> {
        require_role(peer, Role::L)?;
        Ok(RightSession::new(params.clone(), self.keys.right.clone(), session, peer.id, &peer.key, RightMode::Honest, rng))
    }
}

/// All honest-side state of one run: sessions, ledger and the frozen file.
pub struct World<P> {
    pub params: Params,
    pub file: PublicFile,
    pub ledger: IdealLedger,
    pub left: Vec<LeftSession>,
    pub right: Vec<RightSession>,
    pub policy: P,
    seed: u64,
    label: String,
}

impl<P: Policy> World<P> {
    /// `label` separates the session coin streams of different runs sharing
    /// one seed.
    pub fn new(params: Params, file: PublicFile, policy: P, seed: u64, label: &str) -> Self {
        Self { params, file, ledger: IdealLedger::new(), left: vec![], right: vec![], policy, seed, label: label.to_string() }
    }

    /// Aborts every unfinished session.
    pub fn finalize(&mut self) {
        self.left.iter_mut().for_each(LeftSession::finalize);
        self.right.iter_mut().for_each(RightSession::finalize);
    }

    /// Left records then right records.
    pub fn records(&self) -> Vec<SessionRecord> {
        self.left.iter().map(|s| s.record().clone()).chain(self.right.iter().map(|s| s.record().clone())).collect()
    }

    fn peer(&self, id: usize) -> Result<FileEntry, String> {
        self.file.get(id).cloned().ok_or_else(|| format!("no file entry {id}"))
    }

    /// Adversary proofs go to the ledger under an adversary id before the
    /// honest verifier sees them.
    fn intake(&mut self, prefix: char, session: usize, mut msg: Payload) -> Payload {
        let stage = msg.stage();
        if let Some(aok) = msg.aok_mut() {
            if aok.is_submit() {
                let id = format!("a:{prefix}{session}:S{stage}");
                *aok = self.ledger.intercept(&self.params, &id, Registrant::Adversary, aok.clone());
            }
        }
        msg
    }
}

impl<P: Policy> Parties for World<P> {
    type Msg = Payload;

    fn start_left(&mut self, session: usize, peer: usize) -> Result<Vec<Payload>, String> {
        let peer = self.peer(peer)?;
        let rng = derive_rng(self.seed, &format!("{}/left-session", self.label), session as u64);
        let s = self.policy.left_session(&self.params, session, &peer, rng)?;
        self.left.push(s);
        self.policy.after_left(&self.left[session], &self.file);
        Ok(vec![])
    }

    fn start_right(&mut self, session: usize, peer: usize) -> Result<Vec<Payload>, String> {
        let peer = self.peer(peer)?;
        let rng = derive_rng(self.seed, &format!("{}/right-session", self.label), session as u64);
        let mut s = self.policy.right_session(&self.params, session, &peer, rng)?;
        let out = s.start(&mut LedgerChannel { params: &self.params, ledger: &mut self.ledger });
        self.right.push(s);
        self.policy.after_right(&self.right[session], &self.file);
        Ok(out)
    }

    fn deliver_left(&mut self, session: usize, msg: Payload) -> Result<Vec<Payload>, String> {
        let msg = self.intake('L', session, msg);
        let out = self.left[session].deliver(msg, &mut LedgerChannel { params: &self.params, ledger: &mut self.ledger })?;
        self.policy.after_left(&self.left[session], &self.file);
        Ok(out)
    }

    fn deliver_right(&mut self, session: usize, msg: Payload) -> Result<Vec<Payload>, String> {
        let msg = self.intake('R', session, msg);
        let out = self.right[session].deliver(msg, &mut LedgerChannel { params: &self.params, ledger: &mut self.ledger })?;
        self.policy.after_right(&self.right[session], &self.file);
        Ok(out)
    }

    fn should_halt(&self) -> bool {
        self.policy.should_halt()
    }
}
