use std::sync::Arc;

use rand::RngCore;
use rand_chacha::ChaCha20Rng;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::bpk::Registrant;
use crate::harness::Parties;
use crate::params::Params;
use crate::primitives::{pedersen_setup, Challenge, Elem, Exponent, GroupParams};
use crate::sigma::{sigma_commit, sigma_verify, FirstMessage, ProverState, Response, SigmaStatement, SigmaTranscript, SigmaWitness};
use crate::zkaok::{AokMsg, AokStatement, AokWitness, IdealLedger, Tag};

/// Which flavour of the protocol the verifier runs.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Ddl06Variant {
    /// Interactive OR proofs in Phase-1 and Phase-3.
    #[default]
    Plain,
    /// Both proofs replaced by ideal arguments bound to a per-session tag.
    Patched,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Ddl06PublicKey {
    pub verk0: Elem,
    pub verk1: Elem,
    /// Second Pedersen base.
    pub h: Elem,
}

/// Verifier keys: `verk_b = g^sk` for the kept side `b`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Ddl06VerifierKey {
    pub pk: Ddl06PublicKey,
    pub sk: Exponent,
    pub side: u8,
}

impl Ddl06VerifierKey {
    pub fn generate<R: RngCore + ?Sized>(group: &GroupParams, rng: &mut R) -> Self {
        let sk = group.random_exponent(rng);
        let other = group.exp_g(&group.random_exponent(rng));
        let side = (rng.next_u32() & 1) as u8;
        let mine = group.exp_g(&sk);
        let (verk0, verk1) = if side == 0 { (mine, other) } else { (other, mine) };
        let h = pedersen_setup(group, rng);
        Self { pk: Ddl06PublicKey { verk0, verk1, h }, sk, side }
    }

    fn witness(&self) -> SigmaWitness {
        let leaf = SigmaWitness::DLog { x: self.sk.clone() };
        if self.side == 0 {
            SigmaWitness::left(leaf)
        } else {
            SigmaWitness::right(leaf)
        }
    }
}

/// `DLog(verk0) OR DLog(verk1)`: what the verifier proves in Phase-1.
pub fn verifier_statement(pk: &Ddl06PublicKey) -> SigmaStatement {
    SigmaStatement::or(SigmaStatement::dlog(pk.verk0.clone()), SigmaStatement::dlog(pk.verk1.clone()))
}

/// `H(vk)` as an exponent.
pub fn vk_hash(group: &GroupParams, vk: &Elem) -> Exponent {
    let digest = Sha256::digest(group.elem_to_bytes(vk));
    group.reduce(&num_bigint::BigUint::from_bytes_be(&digest))
}

/// The commitment branch: an opening of `C * verk_b^{-H(vk)}` for some `b`.
pub fn commitment_statement(group: &GroupParams, pk: &Ddl06PublicKey, c: &Elem, vk: &Elem) -> SigmaStatement {
    let hv = vk_hash(group, vk);
    let bound = |verk: &Elem| SigmaStatement::pedersen(pk.h.clone(), group.mul(c, &group.pow_neg(verk, hv.value())));
    SigmaStatement::or(bound(&pk.verk0), bound(&pk.verk1))
}

/// Phase-3: `x_hat in L_hat OR a verifier secret OR an opening of C bound to vk`.
pub fn phase3_statement(group: &GroupParams, pk: &Ddl06PublicKey, x_hat: &Elem, c: &Elem, vk: &Elem) -> SigmaStatement {
    SigmaStatement::or3(SigmaStatement::dlog(x_hat.clone()), verifier_statement(pk), commitment_statement(group, pk, c, vk))
}

/// Stand-in for the one-time signature: a hash binding `vk` to the Phase-3
/// proof of this session.
pub fn delta(group: &GroupParams, vk: &Elem, a: &FirstMessage, e: &Challenge) -> String {
    let mut h = Sha256::new();
    h.update(b"ddl06/delta");
    h.update(group.elem_to_bytes(vk));
    h.update(serde_json::to_vec(a).expect("serializes"));
    h.update(e.value().to_bytes_be());
    hex::encode(h.finalize())
}

pub fn session_tag(session: usize) -> Tag {
    Tag::from_bytes(format!("ddl06/session/{session}").into_bytes())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "msg", rename_all = "kebab-case")]
pub enum Ddl06Msg {
    Phase1Commit { a: FirstMessage },
    Phase1Challenge { e: Challenge },
    Phase1Response { z: Response },
    Phase1Proof { aok: AokMsg },
    Phase2 { c: Elem, vk: Elem },
    Phase3Commit { a: FirstMessage },
    Phase3Challenge { e: Challenge },
    Phase3Response { z: Response, delta: String },
    Phase3Proof { aok: AokMsg, delta: String },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Phase {
    P1,
    P2,
    P3,
    Done,
    Aborted,
}

/// One verifier session.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Ddl06Session {
    pub id: usize,
    pub phase: Phase,
    pub phase1: Option<SigmaTranscript>,
    pub c: Option<Elem>,
    pub vk: Option<Elem>,
    pub phase3_a: Option<FirstMessage>,
    pub phase3: Option<SigmaTranscript>,
    pub abort_reason: Option<String>,
    #[serde(skip)]
    prover: Option<ProverState>,
    #[serde(skip)]
    phase1_a: Option<FirstMessage>,
    #[serde(skip)]
    e_p: Option<Challenge>,
}

impl Ddl06Session {
    pub fn accepted(&self) -> bool {
        self.phase == Phase::Done
    }
}

/// The honest verifier side: any number of sessions under one key.
pub struct Ddl06World {
    pub group: Arc<GroupParams>,
    params: Params,
    pub variant: Ddl06Variant,
    key: Ddl06VerifierKey,
    pub x_hat: Elem,
    pub sessions: Vec<Ddl06Session>,
    pub ledger: IdealLedger,
    rng: ChaCha20Rng,
}

impl Ddl06World {
    pub fn new(group: GroupParams, variant: Ddl06Variant, key: Ddl06VerifierKey, x_hat: Elem, rng: ChaCha20Rng) -> Self {
        let params = Params::new(group, 8).expect("fixed n");
        Self { group: params.group.clone(), params, variant, key, x_hat, sessions: vec![], ledger: IdealLedger::new(), rng }
    }

    pub fn public_key(&self) -> &Ddl06PublicKey {
        &self.key.pk
    }

    fn step(&mut self, i: usize, msg: Ddl06Msg) -> Result<Vec<Ddl06Msg>, String> {
        let group = self.group.clone();
        let s = &mut self.sessions[i];
        match (s.phase, msg) {
            (Phase::P1, Ddl06Msg::Phase1Challenge { e }) if s.prover.is_some() => {
                let mut state = s.prover.take().expect("checked");
                let z = state.respond(&e).map_err(|e| e.to_string())?;
                s.phase1 = Some(SigmaTranscript::new(s.phase1_a.clone().expect("sent"), e, z.clone()));
                s.phase = Phase::P2;
                Ok(vec![Ddl06Msg::Phase1Response { z }])
            }
            (Phase::P2, Ddl06Msg::Phase2 { c, vk }) => {
                if !group.in_zp_star(&c) || !group.in_zp_star(&vk) {
                    return Err("Phase-2 elements outside the group".into());
                }
                s.c = Some(c);
                s.vk = Some(vk);
                s.phase = Phase::P3;
                Ok(vec![])
            }
            (Phase::P3, Ddl06Msg::Phase3Commit { a }) if self.variant == Ddl06Variant::Plain && s.phase3_a.is_none() => {
                let e = group.random_challenge(&mut self.rng);
                s.phase3_a = Some(a);
                s.e_p = Some(e.clone());
                Ok(vec![Ddl06Msg::Phase3Challenge { e }])
            }
            (Phase::P3, Ddl06Msg::Phase3Response { z, delta: d }) if s.e_p.is_some() => {
                let (c, vk) = (s.c.clone().expect("P3"), s.vk.clone().expect("P3"));
                let stmt = phase3_statement(&group, &self.key.pk, &self.x_hat, &c, &vk);
                let t = SigmaTranscript::new(s.phase3_a.clone().expect("set"), s.e_p.clone().expect("set"), z);
                sigma_verify(&group, &stmt, &t).map_err(|r| format!("Phase-3 rejected: {r}"))?;
                if d != delta(&group, &vk, &t.a, &t.e) {
                    return Err("session binding check failed".into());
                }
                s.phase3 = Some(t);
                s.phase = Phase::Done;
                Ok(vec![])
            }
            (Phase::P3, Ddl06Msg::Phase3Proof { aok, delta: d }) if self.variant == Ddl06Variant::Patched => {
                let (c, vk) = (s.c.clone().expect("P3"), s.vk.clone().expect("P3"));
                let statement = AokStatement::Sigma { statement: phase3_statement(&group, &self.key.pk, &self.x_hat, &c, &vk) };
                if !self.ledger.accepts(&aok, &session_tag(s.id), &statement) {
                    return Err("Phase-3 argument rejected".into());
                }
                if d != patched_delta(&group, s.id, &vk) {
                    return Err("session binding check failed".into());
                }
                s.phase = Phase::Done;
                Ok(vec![])
            }
            (phase, msg) => Err(format!("unexpected {msg:?} in {phase:?}")),
        }
    }
}

/// Binding string for the patched variant: the session tag and `vk`.
pub fn patched_delta(group: &GroupParams, session: usize, vk: &Elem) -> String {
    hex::encode(Sha256::digest([session_tag(session).as_bytes(), &group.elem_to_bytes(vk)].concat()))
}

impl Parties for Ddl06World {
    type Msg = Ddl06Msg;

    fn start_left(&mut self, _session: usize, _peer: usize) -> Result<Vec<Ddl06Msg>, String> {
        Err("this protocol has verifier sessions only".into())
    }

    fn start_right(&mut self, session: usize, peer: usize) -> Result<Vec<Ddl06Msg>, String> {
        if peer != 0 {
            return Err(format!("no verifier key {peer}"));
        }
        let stmt = verifier_statement(&self.key.pk);
        let mut s = Ddl06Session {
            id: session,
            phase: Phase::P1,
            phase1: None,
            c: None,
            vk: None,
            phase3_a: None,
            phase3: None,
            abort_reason: None,
            prover: None,
            phase1_a: None,
            e_p: None,
        };
        let out = match self.variant {
            Ddl06Variant::Plain => {
                let (a, state) = sigma_commit(&self.group, &stmt, &self.key.witness(), &mut self.rng).map_err(|e| e.to_string())?;
                s.prover = Some(state);
                s.phase1_a = Some(a.clone());
                Ddl06Msg::Phase1Commit { a }
            }
            Ddl06Variant::Patched => {
                let aok = self.ledger.submit(
                    &self.params,
                    &format!("h:V{session}:P1"),
                    Registrant::Honest,
                    session_tag(session),
                    AokStatement::Sigma { statement: stmt },
                    AokWitness::Sigma { witness: self.key.witness() },
                );
                s.phase = Phase::P2;
                Ddl06Msg::Phase1Proof { aok }
            }
        };
        self.sessions.push(s);
        Ok(vec![out])
    }

    fn deliver_left(&mut self, _session: usize, _msg: Ddl06Msg) -> Result<Vec<Ddl06Msg>, String> {
        Err("this protocol has verifier sessions only".into())
    }

    fn deliver_right(&mut self, session: usize, mut msg: Ddl06Msg) -> Result<Vec<Ddl06Msg>, String> {
        if self.sessions[session].phase >= Phase::Done {
            return Err(format!("verifier session {session} already finished"));
        }
        if let Ddl06Msg::Phase3Proof { aok, .. } = &mut msg {
            *aok = self.ledger.intercept(&self.params, &format!("a:V{session}:P3"), Registrant::Adversary, aok.clone());
        }
        match self.step(session, msg) {
            Ok(out) => Ok(out),
            Err(reason) => {
                let s = &mut self.sessions[session];
                s.phase = Phase::Aborted;
                s.abort_reason = Some(reason);
                Ok(vec![])
            }
        }
    }
}
