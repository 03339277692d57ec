use rand_chacha::ChaCha20Rng;
use serde::{Deserialize, Serialize};

use super::covered::{CoveredKeySet, CoveredSecret};
use super::crs::{CrsDraws, CrsVariant};
use crate::bpk::{
    gen_right_key_with_spare, FileEntry, LeftPublicKey, LeftSecretKey, PublicFile, RightKeyPair, RightPublicKey, Role,
};
use crate::cnmct::{LeftMode, LeftSession, RightMode, RightSession, Side, Stage1Proof};
use crate::error::{Error, Result};
use crate::harness::{
    preprocess, require_role, run_event_loop, CnmAdversary, CnmView, ExperimentConfig, ExperimentTrace, LoopOutcome,
    Outputs, Policy, View, World, TRACE_SCHEMA,
};
use crate::params::Params;
use crate::primitives::{BitString, Challenge, Exponent};
use crate::rng::derive_rng;
use crate::sigma::SigmaWitness;
use crate::zkaok::{default_rewind_cap, rewind_extract, AokWitness};

pub const SIM_SCHEMA: &str = "bpkcnm-sim/1";

/// A trapdoor together with the draw it came from.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Trapdoor {
    pub from: Side,
    pub index: usize,
    pub tau: BitString,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum SimFailure {
    /// A right session succeeded under an uncovered key and nothing could be
    /// extracted from its Stage-5 proof.
    CaseR2 { session: usize },
    /// Extraction from an accepted Stage-1 proof failed.
    LeftExtraction { session: usize, reason: String },
    /// `s + 1` repetitions did not reach a run without uncovered keys.
    RepetitionBudget,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimOutput {
    pub schema: String,
    pub crs_variant: CrsVariant,
    pub repetitions: usize,
    #[serde(rename = "str")]
    pub transcript: ExperimentTrace,
    pub sta_l: Vec<Trapdoor>,
    pub sta_r: Vec<Option<Trapdoor>>,
    pub draws: CrsDraws,
    /// Public halves of the covered keys, in the order they were covered.
    #[serde(with = "hex_list")]
    pub covered: Vec<Vec<u8>>,
    pub failure: Option<SimFailure>,
}

mod hex_list {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &[Vec<u8>], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(hex::encode))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Vec<u8>>, D::Error> {
        let v: Vec<String> = Vec::deserialize(d)?;
        v.iter().map(|s| hex::decode(s).map_err(serde::de::Error::custom)).collect()
    }
}

impl SimOutput {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("sim output serializes")
    }
}

/// Everything the simulator itself holds. Exposed so tests can scan it.
#[derive(Clone, Debug, Serialize)]
pub struct SimulatorState {
    pub pk_left: LeftPublicKey,
    pub right_keys: RightKeyPair,
    pub spare: Exponent,
    pub covered: CoveredKeySet,
    pub draws: CrsDraws,
}

/// A finished simulation with the simulator's own secrets alongside.
#[derive(Clone, Debug)]
pub struct SimRun {
    pub output: SimOutput,
    pub state: SimulatorState,
}

impl SimRun {
    /// `SK_R` of the simulated right player.
    pub fn sk_right(&self) -> &Exponent {
        &self.state.right_keys.sk.s
    }

    /// `SK'_R`: the other preimage of `PK_R`, never used in the run.
    pub fn sk_spare(&self) -> &Exponent {
        &self.state.spare
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Halt {
    Left { session: usize },
    Right { session: usize },
}

struct SimPolicy<'a> {
    pk_left: &'a LeftPublicKey,
    pk_left_bytes: Vec<u8>,
    right_keys: &'a RightKeyPair,
    covered: &'a CoveredKeySet,
    draws: &'a CrsDraws,
    challenge_override: Option<(usize, Challenge)>,
    halt: Option<Halt>,
}

impl Policy for SimPolicy<'_> {
    fn left_session(&mut self, params: &Params, session: usize, peer: &FileEntry, rng: ChaCha20Rng) -> Result<LeftSession, String> {
        require_role(peer, Role::R)?;
        let target = self.draws.left[session].r.clone();
        let peer_sk = self.covered.right_secret(&peer.key).cloned();
        let mode = LeftMode::Preset { r: target.clone(), peer_sk };
        let mut s = LeftSession::new(params.clone(), self.pk_left.clone(), session, peer.id, &peer.key, mode, rng);
        s.set_survivor_output(target);
        if let Some((i, e)) = &self.challenge_override {
            if *i == session {
                s.set_challenge_override(e.clone());
            }
        }
        Ok(s)
    }

    fn right_session(&mut self, params: &Params, session: usize, peer: &FileEntry, rng: ChaCha20Rng) -> Result<RightSession, String> {
        require_role(peer, Role::L)?;
        let target = self.draws.right[session].r.clone();
        let mode = match self.covered.left_secret(&peer.key) {
            Some(sk) if peer.key != self.pk_left_bytes => {
                RightMode::Steered { peer_sigma: sk.sigma.clone(), target: target.clone() }
            }
            _ => RightMode::Honest,
        };
        let mut s = RightSession::new(params.clone(), self.right_keys.clone(), session, peer.id, &peer.key, mode, rng);
        s.set_survivor_output(target);
        Ok(s)
    }

    fn after_left(&mut self, session: &LeftSession, file: &PublicFile) {
        let peer = &file.get(session.record().peer_pk_id).expect("peer checked at start").key;
        if session.stage1_proof().is_some() && !self.covered.contains(peer) {
            // Left extraction takes priority over a pending right halt.
            if !matches!(self.halt, Some(Halt::Left { .. })) {
                self.halt = Some(Halt::Left { session: session.record().session_id });
            }
        }
    }

    fn after_right(&mut self, session: &RightSession, _file: &PublicFile) {
        let peer = session.peer_bytes();
        if session.record().is_done() && peer != self.pk_left_bytes && !self.covered.contains(peer) && self.halt.is_none() {
            self.halt = Some(Halt::Right { session: session.record().session_id });
        }
    }

    fn should_halt(&self) -> bool {
        self.halt.is_some()
    }
}

struct Rep<'a> {
    world: World<SimPolicy<'a>>,
    view: CnmView,
    outcome: LoopOutcome<crate::cnmct::Payload>,
}

struct Simulator<'a> {
    config: &'a ExperimentConfig,
    params: Params,
    adversary: Box<dyn CnmAdversary>,
    preamble: crate::harness::Preamble,
    state: SimulatorState,
}

impl Simulator<'_> {
    fn run_rep(&self, rep: usize, challenge_override: Option<(usize, Challenge)>) -> Rep<'_> {
        let policy = SimPolicy {
            pk_left: &self.state.pk_left,
            pk_left_bytes: self.state.pk_left.to_bytes(),
            right_keys: &self.state.right_keys,
            covered: &self.state.covered,
            draws: &self.state.draws,
            challenge_override,
            halt: None,
        };
        let label = format!("sim/rep{rep}");
        let mut world = World::new(self.params.clone(), self.preamble.file.clone(), policy, self.config.seed, &label);
        let mut view = View::new(self.preamble.clone());
        let mut adversary = self.adversary.box_clone();
        let outcome = run_event_loop(&mut world, adversary.as_mut(), &mut view, self.config.limits());
        Rep { world, view, outcome }
    }

    /// Recovers the secret behind the right key a left session accepted a
    /// Stage-1 proof for.
    fn extract_left(&self, rep: usize, first: &Rep<'_>, session: usize) -> std::result::Result<Exponent, String> {
        let left = &first.world.left[session];
        let peer = left.peer().cloned().ok_or("peer is not a right key")?;
        match left.stage1_proof().ok_or("no accepted Stage-1")? {
            Stage1Proof::Ideal { entry } => match first.world.ledger.extract(entry).map_err(|e| e.to_string())? {
                Some(AokWitness::Sk { sk_bits, .. }) => Ok(Exponent::new(sk_bits.to_biguint())),
                Some(_) => Err("wrong relation in ledger entry".into()),
                None => Err("ledger refused extraction".into()),
            },
            Stage1Proof::Sigma { transcript } => {
                let stmt = left
                    .sk_statement(&[])
                    .and_then(|s| s.sigma_core())
                    .ok_or("no Sigma core for Stage-1")?;
                let mut coins = derive_rng(self.config.seed, &format!("sim/rep{rep}/rewind"), session as u64);
                let cap = default_rewind_cap(&self.params.group);
                let rerun = |e: &Challenge| {
                    let again = self.run_rep(rep, Some((session, e.clone())));
                    match again.world.left.get(session)?.stage1_proof()? {
                        Stage1Proof::Sigma { transcript } => Some(transcript.clone()),
                        Stage1Proof::Ideal { .. } => None,
                    }
                };
                let w = rewind_extract(&self.params.group, &stmt, transcript, cap, &mut coins, rerun)
                    .map_err(|e| e.to_string())?
                    .ok_or("rewinding cap reached")?;
                let x = match w {
                    SigmaWitness::Left { inner } | SigmaWitness::Right { inner } => match *inner {
                        SigmaWitness::DLog { x } => x,
                        _ => return Err("unexpected witness shape".into()),
                    },
                    _ => return Err("unexpected witness shape".into()),
                };
                if crate::bpk::validate_right(&self.params.group, &peer, &x) {
                    Ok(x)
                } else {
                    Err("extracted exponent does not open the key".into())
                }
            }
        }
    }

    /// Case-R2: the secret of the left key behind a successful right session.
    fn extract_right(&self, rep: &Rep<'_>, session: usize) -> Option<LeftSecretKey> {
        let right = &rep.world.right[session];
        let entry = right.stage5_entry()?;
        match rep.world.ledger.extract(entry).ok()?? {
            AokWitness::Crs { x, .. } => {
                let sk = LeftSecretKey::from_bits(&x, self.params.n).ok()?;
                let pk = LeftPublicKey::from_bytes(right.peer_bytes()).ok()?;
                crate::bpk::validate_left(&self.params, &pk, &sk).then_some(sk)
            }
            _ => None,
        }
    }

    fn finish(&self, rep: Rep<'_>, repetitions: usize, failure: Option<SimFailure>) -> SimOutput {
        let Rep { mut world, view, outcome } = rep;
        world.finalize();
        let sessions = world.records();
        let outputs = Outputs::from_records(&sessions);
        let draws = &self.state.draws;
        let sta_l = (0..outputs.left.len())
            .map(|i| Trapdoor { from: Side::Left, index: i, tau: draws.left[i].tau.clone() })
            .collect();
        let sta_r = outputs
            .right
            .iter()
            .enumerate()
            .map(|(i, r)| {
                if r == &draws.right[i].r {
                    Some(Trapdoor { from: Side::Right, index: i, tau: draws.right[i].tau.clone() })
                } else {
                    draws
                        .left
                        .iter()
                        .position(|p| &p.r == r)
                        .map(|k| Trapdoor { from: Side::Left, index: k, tau: draws.left[k].tau.clone() })
                }
            })
            .collect();
        let transcript = ExperimentTrace {
            schema: TRACE_SCHEMA.into(),
            config: self.config.clone(),
            adversary: self.adversary.name(),
            public_file: world.file.clone(),
            outputs,
            sessions,
            view,
            actions: outcome.actions,
            end: outcome.end,
            illegal_actions: outcome.illegal,
            ledger: world.ledger.dump(),
        };
        SimOutput {
            schema: SIM_SCHEMA.into(),
            crs_variant: draws.variant,
            repetitions,
            transcript,
            sta_l,
            sta_r,
            draws: draws.clone(),
            covered: self.state.covered.public_keys().map(<[u8]>::to_vec).collect(),
            failure,
        }
    }
}

/// The simulator. It is given `PK_L` only and plays every honest session
/// itself, rerunning the adversary (same coins) whenever it meets a key it
/// has not covered yet.
pub fn simulate(
    config: &ExperimentConfig,
    variant: CrsVariant,
    pk_left: &LeftPublicKey,
    adversary: Box<dyn CnmAdversary>,
) -> Result<SimOutput> {
    simulate_full(config, variant, pk_left, adversary, None).map(|r| r.output)
}

/// [`simulate`] with optional fixed draws, returning the simulator state
/// too.
pub fn simulate_full(
    config: &ExperimentConfig,
    variant: CrsVariant,
    pk_left: &LeftPublicKey,
    mut adversary: Box<dyn CnmAdversary>,
    draws: Option<CrsDraws>,
) -> Result<SimRun> {
    let params = config.params()?;
    let (right_keys, spare) = gen_right_key_with_spare(&params, &mut derive_rng(config.seed, "sim/keygen/right", 0));
    let preamble = preprocess(config, &params, pk_left.to_bytes(), right_keys.pk.to_bytes(), adversary.as_mut())?;
    let draws = match draws {
        Some(d) if d.left.len() >= config.s && d.right.len() >= config.s => d,
        Some(_) => return Err(Error::Precondition("fixed draws must cover s sessions per side".into())),
        None => CrsDraws::sample(&params, variant, config.s, &mut derive_rng(config.seed, "sim/m-crs", 0)),
    };
    let mut covered = CoveredKeySet::new();
    covered.insert(&params, &right_keys.pk.to_bytes(), CoveredSecret::Right { s: right_keys.sk.s.clone() })?;
    let mut sim = Simulator {
        config,
        params,
        adversary,
        preamble,
        state: SimulatorState { pk_left: pk_left.clone(), right_keys, spare, covered, draws },
    };
    let budget = config.s + 1;
    for rep in 0..budget {
        let run = sim.run_rep(rep, None);
        let halt = run.world.policy.halt;
        let newly = match halt {
            None => {
                let output = sim.finish(run, rep + 1, None);
                return Ok(SimRun { output, state: sim.state });
            }
            Some(Halt::Left { session }) => {
                let pk = run.world.file.get(run.world.left[session].record().peer_pk_id).expect("peer").key.clone();
                match sim.extract_left(rep, &run, session) {
                    Ok(s) => (pk, CoveredSecret::Right { s }),
                    Err(reason) => {
                        let output = sim.finish(run, rep + 1, Some(SimFailure::LeftExtraction { session, reason }));
                        return Ok(SimRun { output, state: sim.state });
                    }
                }
            }
            Some(Halt::Right { session }) => match sim.extract_right(&run, session) {
                Some(sk) => (run.world.right[session].peer_bytes().to_vec(), CoveredSecret::Left { sk }),
                None => {
                    let output = sim.finish(run, rep + 1, Some(SimFailure::CaseR2 { session }));
                    return Ok(SimRun { output, state: sim.state });
                }
            },
        };
        drop(run);
        let (pk, secret) = newly;
        sim.state.covered.insert(&sim.params, &pk, secret)?;
    }
    let last = sim.run_rep(budget, None);
    let output = sim.finish(last, budget, Some(SimFailure::RepetitionBudget));
    Ok(SimRun { output, state: sim.state })
}

/// `PK_R` as recorded in a simulated transcript.
pub fn transcript_right_key(out: &SimOutput) -> Option<RightPublicKey> {
    let entry = out.transcript.public_file.get(crate::bpk::HONEST_RIGHT_ID)?;
    RightPublicKey::from_bytes(&entry.key).ok()
}

