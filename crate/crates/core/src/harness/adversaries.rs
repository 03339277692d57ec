use std::collections::VecDeque;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::event_loop::{Action, Adversary, Event, View};
use super::world::Preamble;
use crate::bpk::{gen_left_key, gen_right_key, LeftKeyPair, RightKeyPair, Role, HONEST_LEFT_ID, HONEST_RIGHT_ID};
use crate::cnmct::{LeftMode, LeftSession, NotifiedChannel, Payload, RightMode, RightSession, Side};
use crate::error::{Error, Result};
use crate::params::Params;
use crate::rng::derive_rng;

pub type CnmView = View<Preamble, Payload>;
pub type CnmAction = Action<Payload>;

/// A man-in-the-middle against the coin-tossing protocol.
pub trait CnmAdversary: Adversary<Preamble, Payload> {
    fn name(&self) -> String;

    /// Preprocessing: sees the honest public keys and returns the keys to
    /// register before the file is frozen.
    fn preprocess(&mut self, params: &Params, pk_left: &[u8], pk_right: &[u8]) -> Vec<(Role, Vec<u8>)>;

    /// Snapshot of the current state, coins included.
    fn box_clone(&self) -> Box<dyn CnmAdversary>;
}

impl Clone for Box<dyn CnmAdversary> {
    fn clone(&self) -> Self {
        self.box_clone()
    }
}

/// Ends the attack at once.
#[derive(Clone, Debug, Default)]
pub struct NullAdversary;

impl Adversary<Preamble, Payload> for NullAdversary {
    fn act(&mut self, _view: &CnmView) -> CnmAction {
        Action::EndAttack
    }
}

impl CnmAdversary for NullAdversary {
    fn name(&self) -> String {
        "null".into()
    }

    fn preprocess(&mut self, _: &Params, _: &[u8], _: &[u8]) -> Vec<(Role, Vec<u8>)> {
        vec![]
    }

    fn box_clone(&self) -> Box<dyn CnmAdversary> {
        Box::new(self.clone())
    }
}

/// Pipes every message between left session `i` and right session
/// `pair(i)` unchanged.
#[derive(Clone, Debug)]
pub struct RelayAdversary {
    sessions: usize,
    /// Right session paired with each left session.
    pairing: Vec<usize>,
    /// Deliver the newest pending message first.
    lifo: bool,
    name: &'static str,
    starts: VecDeque<CnmAction>,
    queue: VecDeque<CnmAction>,
    cursor: usize,
    started: bool,
}

impl RelayAdversary {
    pub fn new(sessions: usize) -> Self {
        Self {
            sessions,
            pairing: (0..sessions).collect(),
            lifo: false,
            name: "relay",
            starts: VecDeque::new(),
            queue: VecDeque::new(),
            cursor: 0,
            started: false,
        }
    }

    /// Left `i` talks to right `(i + 1) mod s`, starts alternate sides and
    /// pending messages go out newest first.
    pub fn interleaver(sessions: usize) -> Self {
        Self {
            pairing: (0..sessions).map(|i| (i + 1) % sessions.max(1)).collect(),
            lifo: true,
            name: "interleaver",
            ..Self::new(sessions)
        }
    }

    pub fn right_of(&self, left: usize) -> usize {
        self.pairing[left]
    }

    fn left_of(&self, right: usize) -> Option<usize> {
        self.pairing.iter().position(|&r| r == right)
    }
}

impl Adversary<Preamble, Payload> for RelayAdversary {
    fn act(&mut self, view: &CnmView) -> CnmAction {
        if !self.started {
            self.started = true;
            let left = Action::StartLeft { peer: HONEST_RIGHT_ID };
            let right = Action::StartRight { peer: HONEST_LEFT_ID };
            if self.lifo {
                for _ in 0..self.sessions {
                    self.starts.extend([right.clone(), left.clone()]);
                }
            } else {
                self.starts.extend(std::iter::repeat_n(left, self.sessions));
                self.starts.extend(std::iter::repeat_n(right, self.sessions));
            }
        }
        let mut batch = vec![];
        for event in &view.events[self.cursor..] {
            let forward = match event {
                Event::Outgoing { side: Side::Left, session, msg } => {
                    Some(Action::DeliverRight { session: self.pairing[*session], msg: msg.clone() })
                }
                Event::Outgoing { side: Side::Right, session, msg } => {
                    self.left_of(*session).map(|l| Action::DeliverLeft { session: l, msg: msg.clone() })
                }
                _ => None,
            };
            batch.extend(forward);
        }
        if self.lifo {
            // Newest batch first, but each batch keeps its own order.
            for a in batch.into_iter().rev() {
                self.queue.push_front(a);
            }
        } else {
            self.queue.extend(batch);
        }
        self.cursor = view.events.len();
        self.starts.pop_front().or_else(|| self.queue.pop_front()).unwrap_or(Action::EndAttack)
    }
}

impl CnmAdversary for RelayAdversary {
    fn name(&self) -> String {
        self.name.into()
    }

    fn preprocess(&mut self, _: &Params, _: &[u8], _: &[u8]) -> Vec<(Role, Vec<u8>)> {
        vec![]
    }

    fn box_clone(&self) -> Box<dyn CnmAdversary> {
        Box::new(self.clone())
    }
}

/// Registers its own keys and plays the honest roles itself: an internal
/// right player against every left session and an internal left player
/// against every right session. Nothing is copied.
#[derive(Clone, Debug)]
pub struct IndependentAdversary {
    sessions: usize,
    use_left: bool,
    use_right: bool,
    seed: u64,
    params: Option<Params>,
    left_keys: Option<LeftKeyPair>,
    right_keys: Option<RightKeyPair>,
    pk_left: Vec<u8>,
    pk_right: Vec<u8>,
    /// Internal right players, one per honest left session.
    against_left: Vec<RightSession>,
    against_right: Vec<LeftSession>,
    queue: VecDeque<CnmAction>,
    cursor: usize,
    started: bool,
}

impl IndependentAdversary {
    /// Registers both a left and a right key and runs both sides.
    pub fn new(sessions: usize, seed: u64) -> Self {
        Self::with_sides(sessions, seed, true, true)
    }

    /// Registers one right key and only runs left sessions against it.
    pub fn one_right_key(sessions: usize, seed: u64) -> Self {
        Self::with_sides(sessions, seed, false, true)
    }

    fn with_sides(sessions: usize, seed: u64, use_left: bool, use_right: bool) -> Self {
        Self {
            sessions,
            use_left,
            use_right,
            seed,
            params: None,
            left_keys: None,
            right_keys: None,
            pk_left: vec![],
            pk_right: vec![],
            against_left: vec![],
            against_right: vec![],
            queue: VecDeque::new(),
            cursor: 0,
            started: false,
        }
    }

    pub fn left_keys(&self) -> Option<&LeftKeyPair> {
        self.left_keys.as_ref()
    }

    pub fn right_keys(&self) -> Option<&RightKeyPair> {
        self.right_keys.as_ref()
    }

    fn key_id(view: &CnmView, key: &[u8]) -> usize {
        view.preamble
            .file
            .entries()
            .iter()
            .rev()
            .find(|e| e.key == key)
            .map(|e| e.id)
            .expect("own key was registered")
    }

    fn start(&mut self, view: &CnmView) {
        if self.use_right {
            let id = Self::key_id(view, &self.right_keys.as_ref().expect("preprocessed").pk.to_bytes());
            self.queue.extend((0..self.sessions).map(|_| Action::StartLeft { peer: id }));
        }
        if self.use_left {
            let id = Self::key_id(view, &self.left_keys.as_ref().expect("preprocessed").pk.to_bytes());
            self.queue.extend((0..self.sessions).map(|_| Action::StartRight { peer: id }));
        }
    }
}

impl Adversary<Preamble, Payload> for IndependentAdversary {
    fn act(&mut self, view: &CnmView) -> CnmAction {
        if !self.started {
            self.started = true;
            self.start(view);
        }
        let params = self.params.clone().expect("preprocessed");
        let mut chan = NotifiedChannel;
        for event in &view.events[self.cursor..] {
            match event {
                Event::Started { side: Side::Left, session, .. } => {
                    let mut m = RightSession::new(
                        params.clone(),
                        self.right_keys.clone().expect("preprocessed"),
                        *session,
                        HONEST_LEFT_ID,
                        &self.pk_left,
                        RightMode::Honest,
                        derive_rng(self.seed, "adversary/right", *session as u64),
                    );
                    let out = m.start(&mut chan);
                    self.against_left.push(m);
                    self.queue.extend(out.into_iter().map(|msg| Action::DeliverLeft { session: *session, msg }));
                }
                Event::Started { side: Side::Right, session, .. } => {
                    let keys = self.left_keys.clone().expect("preprocessed");
                    self.against_right.push(LeftSession::new(
                        params.clone(),
                        keys.pk,
                        *session,
                        HONEST_RIGHT_ID,
                        &self.pk_right,
                        LeftMode::Honest { sk: keys.sk },
                        derive_rng(self.seed, "adversary/left", *session as u64),
                    ));
                }
                Event::Outgoing { side: Side::Left, session, msg } => {
                    let out = self.against_left[*session].deliver(msg.clone(), &mut chan).unwrap_or_default();
                    self.queue.extend(out.into_iter().map(|msg| Action::DeliverLeft { session: *session, msg }));
                }
                Event::Outgoing { side: Side::Right, session, msg } => {
                    let out = self.against_right[*session].deliver(msg.clone(), &mut chan).unwrap_or_default();
                    self.queue.extend(out.into_iter().map(|msg| Action::DeliverRight { session: *session, msg }));
                }
                Event::Illegal { .. } => {}
            }
        }
        self.cursor = view.events.len();
        self.queue.pop_front().unwrap_or(Action::EndAttack)
    }
}

impl CnmAdversary for IndependentAdversary {
    fn name(&self) -> String {
        match (self.use_left, self.use_right) {
            (true, true) => "independent".into(),
            _ => "one-right-key".into(),
        }
    }

    fn preprocess(&mut self, params: &Params, pk_left: &[u8], pk_right: &[u8]) -> Vec<(Role, Vec<u8>)> {
        self.params = Some(params.clone());
        self.pk_left = pk_left.to_vec();
        self.pk_right = pk_right.to_vec();
        let mut keys = vec![];
        if self.use_right {
            let k = gen_right_key(params, &mut derive_rng(self.seed, "adversary/keygen/right", 0));
            keys.push((Role::R, k.pk.to_bytes()));
            self.right_keys = Some(k);
        }
        if self.use_left {
            let k = gen_left_key(params, &mut derive_rng(self.seed, "adversary/keygen/left", 0));
            keys.push((Role::L, k.pk.to_bytes()));
            self.left_keys = Some(k);
        }
        keys
    }

    fn box_clone(&self) -> Box<dyn CnmAdversary> {
        Box::new(self.clone())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScriptKey {
    pub role: Role,
    #[serde(with = "hex")]
    pub key: Vec<u8>,
}

/// A fixed list of key registrations and actions, read from JSON.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Script {
    #[serde(default)]
    pub keys: Vec<ScriptKey>,
    pub actions: Vec<CnmAction>,
}

/// Replays a [`Script`], then ends the attack.
#[derive(Clone, Debug)]
pub struct ScriptedAdversary {
    script: Script,
    next: usize,
}

impl ScriptedAdversary {
    pub fn new(script: Script) -> Self {
        Self { script, next: 0 }
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read script {}: {e}", path.display())))?;
        let script = serde_json::from_str(&text).map_err(|e| Error::Config(format!("bad script: {e}")))?;
        Ok(Self::new(script))
    }
}

impl Adversary<Preamble, Payload> for ScriptedAdversary {
    fn act(&mut self, _view: &CnmView) -> CnmAction {
        let a = self.script.actions.get(self.next).cloned().unwrap_or(Action::EndAttack);
        self.next += 1;
        a
    }
}

impl CnmAdversary for ScriptedAdversary {
    fn name(&self) -> String {
        "scripted".into()
    }

    fn preprocess(&mut self, _: &Params, _: &[u8], _: &[u8]) -> Vec<(Role, Vec<u8>)> {
        self.script.keys.iter().map(|k| (k.role, k.key.clone())).collect()
    }

    fn box_clone(&self) -> Box<dyn CnmAdversary> {
        Box::new(self.clone())
    }
}

/// Built-in adversary by name: `null`, `relay`, `interleaver`,
/// `independent`, `one-right-key` or `scripted:<file>`.
pub fn adversary_from_id(id: &str, sessions: usize, seed: u64) -> Result<Box<dyn CnmAdversary>> {
    let adv_seed = crate::rng::derive_u64(seed, "adversary", 0);
    Ok(match id {
        "null" => Box::new(NullAdversary),
        "relay" => Box::new(RelayAdversary::new(sessions)),
        "interleaver" => Box::new(RelayAdversary::interleaver(sessions)),
        "independent" if sessions < 2 => {
            return Err(Error::Config("the independent adversary registers two keys and needs s >= 2".into()))
        }
        "independent" => Box::new(IndependentAdversary::new(sessions, adv_seed)),
        "one-right-key" => Box::new(IndependentAdversary::one_right_key(sessions, adv_seed)),
        other => match other.strip_prefix("scripted:") {
            Some(path) => Box::new(ScriptedAdversary::from_file(Path::new(path))?),
            None => return Err(Error::Config(format!("unknown adversary {other:?}"))),
        },
    })
}
