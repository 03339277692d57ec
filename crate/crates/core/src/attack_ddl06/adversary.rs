use std::sync::Arc;

use rand_chacha::ChaCha20Rng;
use serde::{Deserialize, Serialize};

use super::protocol::{
    commitment_statement, delta, patched_delta, phase3_statement, session_tag, verifier_statement, Ddl06Msg,
    Ddl06PublicKey, Ddl06Variant,
};
use crate::cnmct::Side;
use crate::harness::{Action, Adversary, Event, View};
use crate::params::Params;
use crate::primitives::{pedersen_commit, Challenge, Elem, Exponent, GroupParams};
use crate::sigma::{sigma_commit, sigma_simulate, sigma_verify, FirstMessage, ProverState, SigmaStatement, SigmaTranscript, SigmaWitness};
use crate::zkaok::{AokMsg, AokStatement, AokWitness};

/// What a prover sees before the first move.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Ddl06Preamble {
    pub variant: Ddl06Variant,
    pub pk: Ddl06PublicKey,
    pub x_hat: Elem,
}

pub type Ddl06View = View<Ddl06Preamble, Ddl06Msg>;
pub type Ddl06Action = Action<Ddl06Msg>;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AttackStep {
    pub step: u8,
    pub session: usize,
    pub note: String,
}

/// The challenge split of the attack: `e'_V = e_P xor e_xhat xor e_C`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChallengeSplit {
    pub e_p: Challenge,
    pub e_x_hat: Challenge,
    pub e_c: Challenge,
    pub e_v_prime: Challenge,
}

/// Two verifier sessions, one of them used as a Phase-3 oracle for the
/// other. Everything it knows is in its serialized form, apart from coins.
#[derive(Clone, Debug, Serialize)]
pub struct InterleavingAttacker {
    #[serde(skip)]
    group: Arc<GroupParams>,
    #[serde(skip)]
    rng: ChaCha20Rng,
    cursor: usize,
    queue: Vec<Ddl06Action>,
    started: bool,
    pub steps: Vec<AttackStep>,
    a_v_prime: Option<FirstMessage>,
    harvested: Option<AokMsg>,
    c: Option<Elem>,
    vk: Option<Elem>,
    sim_x_hat: Option<SigmaTranscript>,
    sim_c: Option<SigmaTranscript>,
    pub split: Option<ChallengeSplit>,
}

impl InterleavingAttacker {
    pub fn new(group: Arc<GroupParams>, rng: ChaCha20Rng) -> Self {
        Self {
            group,
            rng,
            cursor: 0,
            queue: vec![],
            started: false,
            steps: vec![],
            a_v_prime: None,
            harvested: None,
            c: None,
            vk: None,
            sim_x_hat: None,
            sim_c: None,
            split: None,
        }
    }

    fn note(&mut self, step: u8, session: usize, note: &str) {
        self.steps.push(AttackStep { step, session, note: note.into() });
    }

    /// A commitment whose opening is dropped on the spot, and a fresh `vk`.
    fn phase2(&mut self, pre: &Ddl06Preamble) -> (Elem, Elem) {
        let g = self.group.clone();
        let m = g.random_exponent(&mut self.rng);
        let r = g.random_exponent(&mut self.rng);
        let c = pedersen_commit(&g, &pre.pk.h, &m, &r).expect("exponents in range").value;
        let vk = g.exp_g(&g.random_exponent(&mut self.rng));
        self.c = Some(c.clone());
        self.vk = Some(vk.clone());
        (c, vk)
    }

    fn on_event(&mut self, pre: &Ddl06Preamble, event: &Event<Ddl06Msg>) {
        let g = self.group.clone();
        let Event::Outgoing { side: Side::Right, session, msg } = event else { return };
        match (pre.variant, *session, msg) {
            (Ddl06Variant::Plain, 0, Ddl06Msg::Phase1Commit { a }) => {
                self.a_v_prime = Some(a.clone());
                self.note(2, 1, "open session 2 and play Phase-1 and Phase-2 honestly");
                self.queue.push(Action::StartRight { peer: 0 });
            }
            (Ddl06Variant::Plain, 1, Ddl06Msg::Phase1Commit { .. }) => {
                let bound = verifier_statement(&pre.pk).challenge_bound(&g);
                let e = crate::sigma::Coins::challenge(&mut self.rng, &bound);
                self.queue.push(Action::DeliverRight { session: 1, msg: Ddl06Msg::Phase1Challenge { e } });
            }
            (Ddl06Variant::Plain, 1, Ddl06Msg::Phase1Response { .. }) => {
                let (c, vk) = self.phase2(pre);
                // Simulate the x_hat branch and the commitment branch with
                // challenges of our choice; borrow the verifier's own
                // Phase-1 first message for the middle branch.
                let e_x = g.random_challenge(&mut self.rng);
                let e_c = g.random_challenge(&mut self.rng);
                let t_x = sigma_simulate(&g, &SigmaStatement::dlog(pre.x_hat.clone()), &e_x, &mut self.rng);
                let t_c = sigma_simulate(&g, &commitment_statement(&g, &pre.pk, &c, &vk), &e_c, &mut self.rng);
                let a = FirstMessage::Or {
                    left: Box::new(t_x.a.clone()),
                    right: Box::new(FirstMessage::Or {
                        left: Box::new(self.a_v_prime.clone().expect("harvested")),
                        right: Box::new(t_c.a.clone()),
                    }),
                };
                self.sim_x_hat = Some(t_x);
                self.sim_c = Some(t_c);
                self.note(3, 1, "Phase-3 first message (a_xhat, a'_V, a_C) from the simulator and session 1");
                self.queue.push(Action::DeliverRight { session: 1, msg: Ddl06Msg::Phase2 { c, vk } });
                self.queue.push(Action::DeliverRight { session: 1, msg: Ddl06Msg::Phase3Commit { a } });
            }
            (Ddl06Variant::Plain, 1, Ddl06Msg::Phase3Challenge { e }) => {
                let e_x = self.sim_x_hat.as_ref().expect("simulated").e.clone();
                let e_c = self.sim_c.as_ref().expect("simulated").e.clone();
                let e_v_prime = e.xor(&e_x).xor(&e_c);
                self.split = Some(ChallengeSplit { e_p: e.clone(), e_x_hat: e_x, e_c, e_v_prime: e_v_prime.clone() });
                self.note(4, 0, "resume session 1 with e'_V = e_P xor e_xhat xor e_C");
                self.queue.push(Action::DeliverRight { session: 0, msg: Ddl06Msg::Phase1Challenge { e: e_v_prime } });
            }
            (Ddl06Variant::Plain, 0, Ddl06Msg::Phase1Response { z }) => {
                let split = self.split.clone().expect("split");
                let t_v = SigmaTranscript::new(self.a_v_prime.clone().expect("harvested"), split.e_v_prime, z.clone());
                let t_x = self.sim_x_hat.clone().expect("simulated");
                let t_c = self.sim_c.clone().expect("simulated");
                let t = SigmaTranscript::assemble_or3(&split.e_p, t_x, t_v, t_c).expect("challenges add up");
                let d = delta(&g, self.vk.as_ref().expect("sent"), &t.a, &t.e);
                self.note(5, 1, "answer session 2 with z_P = (z_xhat, z'_V, z_C)");
                self.queue.push(Action::DeliverRight { session: 1, msg: Ddl06Msg::Phase3Response { z: t.z, delta: d } });
            }
            (Ddl06Variant::Patched, 0, Ddl06Msg::Phase1Proof { aok }) => {
                self.harvested = Some(aok.clone());
                self.note(2, 1, "open session 2");
                self.queue.push(Action::StartRight { peer: 0 });
            }
            (Ddl06Variant::Patched, 1, Ddl06Msg::Phase1Proof { .. }) => {
                let (c, vk) = self.phase2(pre);
                let d = patched_delta(&g, 1, &vk);
                self.note(3, 1, "forward the session-1 argument as the Phase-3 argument");
                self.queue.push(Action::DeliverRight { session: 1, msg: Ddl06Msg::Phase2 { c, vk } });
                let aok = self.harvested.clone().expect("harvested");
                self.queue.push(Action::DeliverRight { session: 1, msg: Ddl06Msg::Phase3Proof { aok, delta: d } });
            }
            _ => {}
        }
    }
}

impl Adversary<Ddl06Preamble, Ddl06Msg> for InterleavingAttacker {
    fn act(&mut self, view: &Ddl06View) -> Ddl06Action {
        if !self.started {
            self.started = true;
            self.note(1, 0, "open session 1 and hold its Phase-1 first message");
            return Action::StartRight { peer: 0 };
        }
        for event in &view.events[self.cursor..] {
            self.on_event(&view.preamble, event);
        }
        self.cursor = view.events.len();
        if self.queue.is_empty() {
            self.note(6, 1, "end of attack");
            Action::EndAttack
        } else {
            self.queue.remove(0)
        }
    }
}

/// A prover that knows `w` with `x_hat = g^w` and plays one session
/// honestly.
#[derive(Debug)]
pub struct HonestProver {
    group: Arc<GroupParams>,
    rng: ChaCha20Rng,
    w: Exponent,
    cursor: usize,
    queue: Vec<Ddl06Action>,
    started: bool,
    phase1_a: Option<FirstMessage>,
    phase1_e: Option<Challenge>,
    state: Option<ProverState>,
    a: Option<FirstMessage>,
    vk: Option<Elem>,
}

impl HonestProver {
    pub fn new(group: Arc<GroupParams>, w: Exponent, rng: ChaCha20Rng) -> Self {
        Self { group, rng, w, cursor: 0, queue: vec![], started: false, phase1_a: None, phase1_e: None, state: None, a: None, vk: None }
    }

    fn phase2_and_3(&mut self, pre: &Ddl06Preamble) -> (Elem, Elem, SigmaStatement, SigmaWitness) {
        let g = self.group.clone();
        let c = pedersen_commit(&g, &pre.pk.h, &g.random_exponent(&mut self.rng), &g.random_exponent(&mut self.rng))
            .expect("in range")
            .value;
        let vk = g.exp_g(&g.random_exponent(&mut self.rng));
        self.vk = Some(vk.clone());
        let stmt = phase3_statement(&g, &pre.pk, &pre.x_hat, &c, &vk);
        (c, vk, stmt, SigmaWitness::left(SigmaWitness::DLog { x: self.w.clone() }))
    }
}

impl Adversary<Ddl06Preamble, Ddl06Msg> for HonestProver {
    fn act(&mut self, view: &Ddl06View) -> Ddl06Action {
        if !self.started {
            self.started = true;
            return Action::StartRight { peer: 0 };
        }
        let g = self.group.clone();
        let pre = view.preamble.clone();
        for event in view.events[self.cursor..].iter().cloned() {
            let Event::Outgoing { msg, .. } = event else { continue };
            match msg {
                Ddl06Msg::Phase1Commit { a } => {
                    let e = crate::sigma::Coins::challenge(&mut self.rng, &verifier_statement(&pre.pk).challenge_bound(&g));
                    self.phase1_a = Some(a);
                    self.phase1_e = Some(e.clone());
                    self.queue.push(Action::DeliverRight { session: 0, msg: Ddl06Msg::Phase1Challenge { e } });
                }
                Ddl06Msg::Phase1Response { z } => {
                    let t = SigmaTranscript::new(self.phase1_a.clone().expect("a"), self.phase1_e.clone().expect("e"), z);
                    if sigma_verify(&g, &verifier_statement(&pre.pk), &t).is_err() {
                        return Action::EndAttack;
                    }
                    let (c, vk, stmt, w) = self.phase2_and_3(&pre);
                    let (a, state) = sigma_commit(&g, &stmt, &w, &mut self.rng).expect("valid witness");
                    self.a = Some(a.clone());
                    self.state = Some(state);
                    self.queue.push(Action::DeliverRight { session: 0, msg: Ddl06Msg::Phase2 { c, vk } });
                    self.queue.push(Action::DeliverRight { session: 0, msg: Ddl06Msg::Phase3Commit { a } });
                }
                Ddl06Msg::Phase3Challenge { e } => {
                    let z = self.state.as_mut().expect("committed").respond(&e).expect("fresh state");
                    let d = delta(&g, self.vk.as_ref().expect("sent"), self.a.as_ref().expect("sent"), &e);
                    self.queue.push(Action::DeliverRight { session: 0, msg: Ddl06Msg::Phase3Response { z, delta: d } });
                }
                Ddl06Msg::Phase1Proof { aok } => {
                    let stmt = AokStatement::Sigma { statement: verifier_statement(&pre.pk) };
                    if !aok.notified_accept(&session_tag(0), &stmt) {
                        return Action::EndAttack;
                    }
                    let (c, vk, stmt, w) = self.phase2_and_3(&pre);
                    let params = Params::new((*g).clone(), 8).expect("fixed n");
                    let statement = AokStatement::Sigma { statement: stmt };
                    let aok = crate::zkaok::ideal_submit(&params, session_tag(0), statement, AokWitness::Sigma { witness: w })
                        .expect("valid witness");
                    let d = patched_delta(&g, 0, &vk);
                    self.queue.push(Action::DeliverRight { session: 0, msg: Ddl06Msg::Phase2 { c, vk } });
                    self.queue.push(Action::DeliverRight { session: 0, msg: Ddl06Msg::Phase3Proof { aok, delta: d } });
                }
                _ => {}
            }
        }
        self.cursor = view.events.len();
        if self.queue.is_empty() {
            Action::EndAttack
        } else {
            self.queue.remove(0)
        }
    }
}
