use rand::RngCore;
use rand_chacha::ChaCha20Rng;

use super::{honest_entry_id, AokChannel, CoinTossOutput, Determination, Direction, Payload, SessionRecord, Side, Stage};
use crate::bpk::{LeftPublicKey, LeftSecretKey, RightPublicKey};
use crate::params::{AokBackend, Params};
use crate::primitives::{naor_commit_string, BitString, Challenge, Exponent};
use crate::sigma::{sigma_verify, FirstMessage, SigmaTranscript};
use crate::zkaok::{effective_backend, ideal_submit, AokMsg, AokStatement, AokWitness, Tag};

/// How the left player finishes Stage-4 and Stage-5.
#[derive(Clone, Debug)]
pub enum LeftMode {
    /// `r = PRF_sigma(r'_l) xor r_r`, proved with `sigma || s_sigma`.
    Honest { sk: LeftSecretKey },
    /// Sends the preset `r` and proves Stage-5 through the peer's secret key,
    /// committing `SK || 0^{n^2}`. Used by the simulator.
    Preset { r: BitString, peer_sk: Option<Exponent> },
}

/// What the left player accepted in Stage-1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Stage1Proof {
    Ideal { entry: String },
    Sigma { transcript: SigmaTranscript },
}

#[derive(Clone, Debug)]
pub struct LeftSession {
    params: Params,
    pk: LeftPublicKey,
    pk_bytes: Vec<u8>,
    peer: Option<RightPublicKey>,
    mode: LeftMode,
    rng: ChaCha20Rng,
    record: SessionRecord,
    c_sk: Option<Vec<BitString>>,
    sigma_a: Option<FirstMessage>,
    challenge: Option<Challenge>,
    challenge_override: Option<Challenge>,
    r_prime_l: Option<BitString>,
    stage1_proof: Option<Stage1Proof>,
    survivor: Option<BitString>,
}

impl LeftSession {
    /// `peer_key` is the raw file entry; an undecodable key makes every
    /// Stage-1 fail.
    pub fn new(
        params: Params,
        pk: LeftPublicKey,
        session_id: usize,
        peer_pk_id: usize,
        peer_key: &[u8],
        mode: LeftMode,
        rng: ChaCha20Rng,
    ) -> Self {
        let pk_bytes = pk.to_bytes();
        Self {
            params,
            pk,
            pk_bytes,
            peer: RightPublicKey::from_bytes(peer_key).ok(),
            mode,
            rng,
            record: SessionRecord::new(session_id, Side::Left, peer_pk_id),
            c_sk: None,
            sigma_a: None,
            challenge: None,
            challenge_override: None,
            r_prime_l: None,
            stage1_proof: None,
            survivor: None,
        }
    }

    /// Output to use if this session ends without completing.
    pub fn set_survivor_output(&mut self, r: BitString) {
        self.survivor = Some(r);
    }

    /// Sigma backend only: the Stage-1 challenge to send instead of a fresh one.
    pub fn set_challenge_override(&mut self, e: Challenge) {
        self.challenge_override = Some(e);
    }

    pub fn set_mode(&mut self, mode: LeftMode) {
        self.mode = mode;
    }

    pub fn record(&self) -> &SessionRecord {
        &self.record
    }

    pub fn into_record(self) -> SessionRecord {
        self.record
    }

    pub fn peer(&self) -> Option<&RightPublicKey> {
        self.peer.as_ref()
    }

    pub fn stage1_proof(&self) -> Option<&Stage1Proof> {
        self.stage1_proof.as_ref()
    }

    /// The Sigma first message of Stage-1, once received.
    pub fn stage1_commit(&self) -> Option<&FirstMessage> {
        self.sigma_a.as_ref()
    }

    /// Stage-1 statement for the given commitment.
    pub fn sk_statement(&self, c_sk: &[BitString]) -> Option<AokStatement> {
        let peer = self.peer.as_ref()?;
        Some(AokStatement::Sk {
            y0: peer.y0.clone(),
            y1: peer.y1.clone(),
            receiver_string: self.pk.receiver_string.clone(),
            c_sk: c_sk.to_vec(),
        })
    }

    fn expected_right_tag(&self) -> Option<Tag> {
        let peer = self.peer.as_ref()?;
        Some(Tag::right(&self.params, &self.pk_bytes, &peer.y0, &peer.y1))
    }

    /// Feeds one incoming message. Returns the replies; `Err` if the session
    /// has already finished (the message is not logged).
    pub fn deliver(&mut self, msg: Payload, chan: &mut dyn AokChannel) -> Result<Vec<Payload>, String> {
        if self.record.stage_cursor.is_terminal() {
            return Err(format!("left session {} already finished", self.record.session_id));
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
            (Stage::S1, Payload::Stage1 { c_sk, aok }) if self.c_sk.is_none() => {
                let stmt = self.sk_statement(&c_sk).ok_or("peer key is not a right key")?;
                let tag = self.expected_right_tag().ok_or("peer key is not a right key")?;
                self.c_sk = Some(c_sk);
                match effective_backend(self.params.aok_backend, &stmt) {
                    AokBackend::Ideal => {
                        if !chan.accepts(&aok, &tag, &stmt) {
                            return Err("Stage-1 proof rejected".into());
                        }
                        if let AokMsg::IdealRef { entry, .. } = &aok {
                            self.stage1_proof = Some(Stage1Proof::Ideal { entry: entry.clone() });
                        }
                        Ok(vec![self.send_stage2()])
                    }
                    AokBackend::Sigma => {
                        let AokMsg::SigmaCommit { a } = aok else {
                            return Err("expected a Sigma first message".into());
                        };
                        let core = stmt.sigma_core().expect("L_SK has a core");
                        let e = match self.challenge_override.clone() {
                            Some(e) => e,
                            None => crate::sigma::Coins::challenge(&mut self.rng, &core.challenge_bound(&self.params.group)),
                        };
                        self.sigma_a = Some(a);
                        self.challenge = Some(e.clone());
                        Ok(vec![Payload::Stage1Challenge { aok: AokMsg::SigmaChallenge { e } }])
                    }
                }
            }
            (Stage::S1, Payload::Stage1Response { aok: AokMsg::SigmaResponse { z } }) if self.challenge.is_some() => {
                let stmt = self.sk_statement(self.c_sk.as_ref().expect("set with challenge")).expect("peer checked");
                let core = stmt.sigma_core().expect("L_SK has a core");
                let t = SigmaTranscript::new(
                    self.sigma_a.clone().expect("set with challenge"),
                    self.challenge.clone().expect("checked"),
                    z,
                );
                sigma_verify(&self.params.group, &core, &t).map_err(|r| format!("Stage-1 proof rejected: {r}"))?;
                self.stage1_proof = Some(Stage1Proof::Sigma { transcript: t });
                Ok(vec![self.send_stage2()])
            }
            (Stage::S3, Payload::Stage3 { r_r }) if r_r.len() == n => self.finish(r_r, chan),
            (cursor, msg) => Err(format!("unexpected stage-{} message at {cursor:?}", msg.stage())),
        }
    }

    fn send_stage2(&mut self) -> Payload {
        let r_prime_l = BitString::random(self.params.n, &mut self.rng);
        self.r_prime_l = Some(r_prime_l.clone());
        self.record.advance(Stage::S3);
        Payload::Stage2 { r_prime_l }
    }

    fn finish(&mut self, r_r: BitString, chan: &mut dyn AokChannel) -> Result<Vec<Payload>, String> {
        let n = self.params.n;
        let r_prime_l = self.r_prime_l.clone().expect("sent in Stage-2");
        let peer = self.peer.clone().expect("checked in Stage-1");
        let (r, x) = match &self.mode {
            LeftMode::Honest { sk } => {
                let prf = self.params.prf().eval(&sk.sigma, &r_prime_l).map_err(|e| e.to_string())?;
                (prf.xor(&r_r).expect("both n bits"), sk.to_bits())
            }
            LeftMode::Preset { r, peer_sk } => {
                let sk = peer_sk.as_ref().ok_or("no witness for Stage-5")?;
                let head = self.params.sk_to_bits(sk).map_err(|e| e.to_string())?;
                (r.clone(), head.concat(&BitString::zeros(n * n)))
            }
        };
        let seeds: Vec<_> = (0..x.len()).map(|_| BitString::random(n, &mut self.rng)).collect();
        let c_crs: Vec<_> = naor_commit_string(&self.params.prg(), &x, &seeds, &self.pk.receiver_string)
            .map_err(|e| e.to_string())?
            .into_iter()
            .map(|c| c.value)
            .collect();
        let stmt = AokStatement::Crs {
            pk_left: self.pk.clone(),
            r_prime_l,
            r_r: r_r.clone(),
            r: r.clone(),
            y0: peer.y0,
            y1: peer.y1,
            c_crs: c_crs.clone(),
        };
        let tag = Tag::left(&self.params, &self.pk_bytes, &r_r, &r);
        let submit = ideal_submit(&self.params, tag.clone(), stmt, AokWitness::Crs { x, seeds })
            .map_err(|e| format!("Stage-5 witness refused: {e}"))?;
        let id = honest_entry_id(Side::Left, self.record.session_id, 5);
        let aok = chan.submit(&id, submit);
        self.record.tag = Some(tag);
        self.record.output = Some(CoinTossOutput { r: r.clone(), determined_by: Determination::Both });
        self.record.advance(Stage::Done);
        Ok(vec![Payload::Stage4 { r }, Payload::Stage5 { c_crs, aok }])
    }

    fn abort(&mut self, reason: &str) {
        let r = self.survivor.clone().unwrap_or_else(|| BitString::random(self.params.n, &mut self.rng));
        self.record.output = Some(CoinTossOutput { r, determined_by: Determination::Survivor });
        self.record.abort_reason = Some(reason.to_string());
        self.record.advance(Stage::Aborted);
    }

    /// Closes the session at end of attack: anything not Done aborts.
    pub fn finalize(&mut self) {
        if !self.record.stage_cursor.is_terminal() {
            self.abort("end of attack");
        }
    }

    /// Draws from this session's random tape; used by wrappers that need
    /// per-session coins.
    pub fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }
}
