//! A toy instance of the DDL06 protocol and the two-session interleaving
//! attack against it.
//!
//! The verifier proves `DLog(verk0) OR DLog(verk1)` in Phase-1, receives a
//! commitment `C` and a key `vk` in Phase-2, and checks a three-branch OR
//! proof in Phase-3. The attacker runs two verifier sessions: the first
//! one's Phase-1 answers the middle branch of the second one's Phase-3,
//! with the other two branches simulated.
//!
//! Signature keys are discrete-log keys here, the one-time signature is a
//! hash binding, and "C commits to a signature on vk" is knowledge of a
//! Pedersen opening of `C * verk_b^{-H(vk)}`. The OR structure the attack
//! exploits is unchanged.

mod adversary;
mod protocol;
mod scan;
#[cfg(test)]
mod tests;

pub use adversary::{AttackStep, ChallengeSplit, Ddl06Action, Ddl06Preamble, Ddl06View, HonestProver, InterleavingAttacker};
pub use protocol::{
    commitment_statement, delta, patched_delta, phase3_statement, session_tag, verifier_statement, vk_hash, Ddl06Msg,
    Ddl06PublicKey, Ddl06Session, Ddl06Variant, Ddl06VerifierKey, Ddl06World, Phase,
};
pub use scan::{scan_for_witnesses, WitnessScan};

use serde::{Deserialize, Serialize};

use crate::harness::{run_event_loop, Adversary, Limits, View};
use crate::primitives::{Elem, Exponent, GroupParams};
use crate::rng::derive_rng;

pub const ATTACK_SCHEMA: &str = "bpkcnm-ddl06/1";

pub const DEVIATIONS: [&str; 3] = [
    "verifier signature keys replaced by discrete-log keys",
    "one-time signature replaced by a hash binding of vk to the Phase-3 proof",
    "commitment to a signature on vk replaced by knowledge of a Pedersen opening bound to H(vk)",
];

/// An element outside the order-q subgroup: `p - g^h`. For a safe prime
/// `-1` is a non-residue, so no discrete log exists.
pub fn non_member<R: rand::RngCore + ?Sized>(group: &GroupParams, rng: &mut R) -> Elem {
    let y = group.exp_g(&group.random_exponent(rng));
    Elem::new(group.p() - y.value())
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AttackTrace {
    pub schema: String,
    pub variant: Ddl06Variant,
    pub seed: u64,
    pub group: GroupParams,
    pub verifier_pk: Ddl06PublicKey,
    pub x_hat: Elem,
    pub x_hat_in_subgroup: bool,
    pub steps: Vec<AttackStep>,
    pub challenges: Option<ChallengeSplit>,
    pub view: Ddl06View,
    pub actions: Vec<Ddl06Action>,
    pub sessions: Vec<Ddl06Session>,
    pub success: bool,
    pub witness_scan: WitnessScan,
    pub deviations: Vec<String>,
}

impl AttackTrace {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("trace serializes")
    }
}

/// Wraps an adversary and keeps a serialized copy of its state after every
/// move, for the witness scan.
struct Recording<A> {
    inner: A,
    snapshots: Vec<serde_json::Value>,
}

impl<A: Adversary<Ddl06Preamble, Ddl06Msg> + Serialize> Adversary<Ddl06Preamble, Ddl06Msg> for Recording<A> {
    fn act(&mut self, view: &Ddl06View) -> Ddl06Action {
        let a = self.inner.act(view);
        self.snapshots.push(serde_json::to_value(&self.inner).expect("state serializes"));
        a
    }
}

/// Runs the attacker against an honest verifier holding a fresh key, with
/// `x_hat` outside the language. Success means the second session accepted.
pub fn run_interleaving_attack(group: GroupParams, variant: Ddl06Variant, seed: u64) -> AttackTrace {
    let mut keygen = derive_rng(seed, "ddl06/keygen", 0);
    let key = Ddl06VerifierKey::generate(&group, &mut keygen);
    let x_hat = non_member(&group, &mut keygen);
    let preamble = Ddl06Preamble { variant, pk: key.pk.clone(), x_hat: x_hat.clone() };
    let mut world = Ddl06World::new(group, variant, key.clone(), x_hat.clone(), derive_rng(seed, "ddl06/verifier", 0));
    let attacker = InterleavingAttacker::new(world.group.clone(), derive_rng(seed, "ddl06/attacker", 0));
    let mut adversary = Recording { inner: attacker, snapshots: vec![] };
    let mut view = View::new(preamble);
    let outcome = run_event_loop(&mut world, &mut adversary, &mut view, Limits { sessions: 2, max_actions: 64 });
    let witness_scan = scan_for_witnesses(&world.group, &adversary.snapshots, &key, &x_hat);
    let success = world.sessions.get(1).is_some_and(Ddl06Session::accepted);
    AttackTrace {
        schema: ATTACK_SCHEMA.into(),
        variant,
        seed,
        group: (*world.group).clone(),
        verifier_pk: key.pk,
        x_hat_in_subgroup: world.group.is_member(&x_hat),
        x_hat,
        steps: adversary.inner.steps.clone(),
        challenges: adversary.inner.split.clone(),
        view,
        actions: outcome.actions,
        sessions: world.sessions.clone(),
        success,
        witness_scan,
        deviations: DEVIATIONS.iter().map(|s| s.to_string()).collect(),
    }
}

/// One honest session with a prover that knows `w` for `x_hat = g^w`.
/// Returns whether the verifier accepted.
pub fn run_honest_session(group: GroupParams, variant: Ddl06Variant, w: &Exponent, seed: u64) -> bool {
    let mut keygen = derive_rng(seed, "ddl06/keygen", 0);
    let key = Ddl06VerifierKey::generate(&group, &mut keygen);
    let x_hat = group.exp_g(w);
    let preamble = Ddl06Preamble { variant, pk: key.pk.clone(), x_hat: x_hat.clone() };
    let mut world = Ddl06World::new(group, variant, key, x_hat, derive_rng(seed, "ddl06/verifier", 0));
    let mut prover = HonestProver::new(world.group.clone(), w.clone(), derive_rng(seed, "ddl06/prover", 0));
    let mut view = View::new(preamble);
    run_event_loop(&mut world, &mut prover, &mut view, Limits { sessions: 1, max_actions: 16 });
    world.sessions.first().is_some_and(Ddl06Session::accepted)
}
