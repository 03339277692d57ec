use rand_chacha::ChaCha20Rng;

use super::{honest_entry_id, AokChannel, CoinTossOutput, Determination, Direction, Payload, SessionRecord, Side, Stage};
use crate::bpk::{LeftPublicKey, RightKeyPair};
use crate::params::{AokBackend, Params};
use crate::primitives::{naor_commit_string, BitString};
use crate::sigma::{sigma_commit, ProverState};
use crate::zkaok::{effective_backend, ideal_submit, AokMsg, AokStatement, AokWitness, Tag};

/// How the right player picks `r_r`.
#[derive(Clone, Debug)]
pub enum RightMode {
    Honest,
    /// `r_r = PRF_sigma(r'_l) xor target`, so an honest left peer holding
    /// `sigma` lands on `target`. Used by the simulator.
    Steered { peer_sigma: BitString, target: BitString },
}

#[derive(Clone, Debug)]
pub struct RightSession {
    params: Params,
    keys: RightKeyPair,
    peer: Option<LeftPublicKey>,
    peer_bytes: Vec<u8>,
    mode: RightMode,
    rng: ChaCha20Rng,
    record: SessionRecord,
    sigma_state: Option<ProverState>,
    r_prime_l: Option<BitString>,
    r_r: Option<BitString>,
    r: Option<BitString>,
    stage5_entry: Option<String>,
    survivor: Option<BitString>,
}

impl RightSession {
    pub fn new(
        params: Params,
        keys: RightKeyPair,
        session_id: usize,
        peer_pk_id: usize,
        peer_key: &[u8],
        mode: RightMode,
        rng: ChaCha20Rng,
    ) -> Self {
        Self {
            params,
            keys,
            peer: LeftPublicKey::from_bytes(peer_key).ok(),
            peer_bytes: peer_key.to_vec(),
            mode,
            rng,
            record: SessionRecord::new(session_id, Side::Right, peer_pk_id),
            sigma_state: None,
            r_prime_l: None,
            r_r: None,
            r: None,
            stage5_entry: None,
            survivor: None,
        }
    }

    pub fn set_survivor_output(&mut self, r: BitString) {
        self.survivor = Some(r);
    }

    pub fn record(&self) -> &SessionRecord {
        &self.record
    }

    pub fn into_record(self) -> SessionRecord {
        self.record
    }

    pub fn peer_bytes(&self) -> &[u8] {
        &self.peer_bytes
    }

    /// Ledger id of the accepted Stage-5 proof.
    pub fn stage5_entry(&self) -> Option<&str> {
        self.stage5_entry.as_deref()
    }

    /// Sends Stage-1. A peer entry that is not a left key aborts at once.
    pub fn start(&mut self, chan: &mut dyn AokChannel) -> Vec<Payload> {
        let out = match self.stage1(chan) {
            Ok(out) => out,
            Err(reason) => {
                self.abort(&reason);
                vec![]
            }
        };
        for p in &out {
            self.record.log(Direction::Out, p);
        }
        out
    }

    fn stage1(&mut self, chan: &mut dyn AokChannel) -> Result<Vec<Payload>, String> {
        let n = self.params.n;
        let peer = self.peer.clone().ok_or("peer key is not a left key")?;
        if peer.receiver_string.len() != 3 * n {
            return Err("peer receiver string has the wrong length".into());
        }
        let sk_bits = self.params.sk_to_bits(&self.keys.sk.s).map_err(|e| e.to_string())?;
        let seeds: Vec<_> = (0..n).map(|_| BitString::random(n, &mut self.rng)).collect();
        let c_sk: Vec<_> = naor_commit_string(&self.params.prg(), &sk_bits, &seeds, &peer.receiver_string)
            .map_err(|e| e.to_string())?
            .into_iter()
            .map(|c| c.value)
            .collect();
        let stmt = AokStatement::Sk {
            y0: self.keys.pk.y0.clone(),
            y1: self.keys.pk.y1.clone(),
            receiver_string: peer.receiver_string,
            c_sk: c_sk.clone(),
        };
        let witness = AokWitness::Sk { sk_bits, seeds };
        let tag = Tag::right(&self.params, &self.peer_bytes, &self.keys.pk.y0, &self.keys.pk.y1);
        self.record.tag = Some(tag.clone());
        match effective_backend(self.params.aok_backend, &stmt) {
            AokBackend::Ideal => {
                let submit = ideal_submit(&self.params, tag, stmt, witness).map_err(|e| e.to_string())?;
                let aok = chan.submit(&honest_entry_id(Side::Right, self.record.session_id, 1), submit);
                self.record.advance(Stage::S2);
                Ok(vec![Payload::Stage1 { c_sk, aok }])
            }
            AokBackend::Sigma => {
                let core = stmt.sigma_core().expect("L_SK has a core");
                let w = witness.sigma_core(&self.params, &stmt).expect("L_SK witness");
                let (a, state) = sigma_commit(&self.params.group, &core, &w, &mut self.rng).map_err(|e| e.to_string())?;
                self.sigma_state = Some(state);
                Ok(vec![Payload::Stage1 { c_sk, aok: AokMsg::SigmaCommit { a } }])
            }
        }
    }

    pub fn deliver(&mut self, msg: Payload, chan: &mut dyn AokChannel) -> Result<Vec<Payload>, String> {
        if self.record.stage_cursor.is_terminal() {
            return Err(format!("right session {} already finished", self.record.session_id));
        }
        self.record.log(Direction::In, &msg);
        let out = match self.step(msg, chan) {
            Ok(out) => out,
            Err(reason) => {
                self.abort(&reason);
                vec![]
            }
        };
        for p in &out {
            self.record.log(Direction::Out, p);
        }
        Ok(out)
    }

    fn step(&mut self, msg: Payload, chan: &mut dyn AokChannel) -> Result<Vec<Payload>, String> {
        let n = self.params.n;
        match (self.record.stage_cursor, msg) {
            (Stage::S1, Payload::Stage1Challenge { aok: AokMsg::SigmaChallenge { e } }) if self.sigma_state.is_some() => {
                let mut state = self.sigma_state.take().expect("checked");
                let z = state.respond(&e).map_err(|e| e.to_string())?;
                self.record.advance(Stage::S2);
                Ok(vec![Payload::Stage1Response { aok: AokMsg::SigmaResponse { z } }])
            }
            (Stage::S2, Payload::Stage2 { r_prime_l }) if r_prime_l.len() == n => {
                let r_r = match &self.mode {
                    RightMode::Honest => BitString::random(n, &mut self.rng),
                    RightMode::Steered { peer_sigma, target } => {
                        let prf = self.params.prf().eval(peer_sigma, &r_prime_l).map_err(|e| e.to_string())?;
                        prf.xor(target).map_err(|e| e.to_string())?
                    }
                };
                self.r_prime_l = Some(r_prime_l);
                self.r_r = Some(r_r.clone());
                self.record.advance(Stage::S4);
                Ok(vec![Payload::Stage3 { r_r }])
            }
            (Stage::S4, Payload::Stage4 { r }) if r.len() == n => {
                self.r = Some(r);
                self.record.advance(Stage::S5);
                Ok(vec![])
            }
            (Stage::S5, Payload::Stage5 { c_crs, aok }) => {
                let peer = self.peer.clone().expect("checked at start");
                let r_r = self.r_r.clone().expect("sent in Stage-3");
                let r = self.r.clone().expect("received in Stage-4");
                let stmt = AokStatement::Crs {
                    pk_left: peer,
                    r_prime_l: self.r_prime_l.clone().expect("received in Stage-2"),
                    r_r: r_r.clone(),
                    r: r.clone(),
                    y0: self.keys.pk.y0.clone(),
                    y1: self.keys.pk.y1.clone(),
                    c_crs,
                };
                let tag = Tag::left(&self.params, &self.peer_bytes, &r_r, &r);
                if !chan.accepts(&aok, &tag, &stmt) {
                    return Err("Stage-5 proof rejected".into());
                }
                if let AokMsg::IdealRef { entry, .. } = &aok {
                    self.stage5_entry = Some(entry.clone());
                }
                self.record.output = Some(CoinTossOutput { r, determined_by: Determination::Both });
                self.record.advance(Stage::Done);
                Ok(vec![])
            }
            (cursor, msg) => Err(format!("unexpected stage-{} message at {cursor:?}", msg.stage())),
        }
    }

    fn abort(&mut self, reason: &str) {
        let r = self.survivor.clone().unwrap_or_else(|| BitString::random(self.params.n, &mut self.rng));
        self.record.output = Some(CoinTossOutput { r, determined_by: Determination::Survivor });
        self.record.abort_reason = Some(reason.to_string());
        self.record.advance(Stage::Aborted);
    }

    pub fn finalize(&mut self) {
        if !self.record.stage_cursor.is_terminal() {
            self.abort("end of attack");
        }
    }
}
