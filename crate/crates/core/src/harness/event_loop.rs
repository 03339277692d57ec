use serde::{Deserialize, Serialize};

use crate::cnmct::Side;

/// One adversary move.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "action", rename_all = "kebab-case")]
pub enum Action<M> {
    /// Opens the next left session against file entry `peer`.
    StartLeft { peer: usize },
    StartRight { peer: usize },
    DeliverLeft { session: usize, msg: M },
    DeliverRight { session: usize, msg: M },
    EndAttack,
}

/// Something the adversary observes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "event", rename_all = "kebab-case")]
pub enum Event<M> {
    Started { side: Side, session: usize, peer: usize },
    /// A message an honest session sent.
    Outgoing { side: Side, session: usize, msg: M },
    Illegal { action: usize, reason: String },
}

/// The adversary's view: what it was given up front plus every event since.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct View<H, M> {
    pub preamble: H,
    pub events: Vec<Event<M>>,
}

impl<H: Clone, M: Clone> View<H, M> {
    pub fn new(preamble: H) -> Self {
        Self { preamble, events: vec![] }
    }

    /// The view as it stood after the first `upto` events.
    pub fn prefix(&self, upto: usize) -> View<H, M> {
        View { preamble: self.preamble.clone(), events: self.events[..upto.min(self.events.len())].to_vec() }
    }
}

pub trait Adversary<H, M> {
    fn act(&mut self, view: &View<H, M>) -> Action<M>;
}

/// The honest side of an experiment. `Err` means the action was not legal
/// for that party; it is recorded and otherwise ignored.
pub trait Parties {
    type Msg: Clone;

    fn start_left(&mut self, session: usize, peer: usize) -> Result<Vec<Self::Msg>, String>;
    fn start_right(&mut self, session: usize, peer: usize) -> Result<Vec<Self::Msg>, String>;
    fn deliver_left(&mut self, session: usize, msg: Self::Msg) -> Result<Vec<Self::Msg>, String>;
    fn deliver_right(&mut self, session: usize, msg: Self::Msg) -> Result<Vec<Self::Msg>, String>;

    /// Checked after every action; lets a simulator stop a run early.
    fn should_halt(&self) -> bool {
        false
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LoopEnd {
    EndAttack,
    Budget,
    Halted,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Limits {
    /// Sessions per side.
    pub sessions: usize,
    pub max_actions: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LoopOutcome<M> {
    pub end: LoopEnd,
    pub actions: Vec<Action<M>>,
    pub left_started: usize,
    pub right_started: usize,
    pub illegal: usize,
}

/// Feeds the adversary its view, applies its action, repeats.
pub fn run_event_loop<H, P>(
    parties: &mut P,
    adversary: &mut dyn Adversary<H, P::Msg>,
    view: &mut View<H, P::Msg>,
    limits: Limits,
) -> LoopOutcome<P::Msg>
where
    H: Clone,
    P: Parties,
{
    let mut out = LoopOutcome { end: LoopEnd::Budget, actions: vec![], left_started: 0, right_started: 0, illegal: 0 };
    while out.actions.len() < limits.max_actions {
        let action = adversary.act(view);
        let index = out.actions.len();
        out.actions.push(action.clone());
        let result = match action {
            Action::EndAttack => {
                out.end = LoopEnd::EndAttack;
                return out;
            }
            Action::StartLeft { peer } => {
                let session = out.left_started;
                if session >= limits.sessions {
                    Err(format!("left session budget {} exhausted", limits.sessions))
                } else {
                    parties.start_left(session, peer).map(|msgs| {
                        out.left_started += 1;
                        view.events.push(Event::Started { side: Side::Left, session, peer });
                        (Side::Left, session, msgs)
                    })
                }
            }
            Action::StartRight { peer } => {
                let session = out.right_started;
                if session >= limits.sessions {
                    Err(format!("right session budget {} exhausted", limits.sessions))
                } else {
                    parties.start_right(session, peer).map(|msgs| {
                        out.right_started += 1;
                        view.events.push(Event::Started { side: Side::Right, session, peer });
                        (Side::Right, session, msgs)
                    })
                }
            }
            Action::DeliverLeft { session, msg } => {
                if session >= out.left_started {
                    Err(format!("no left session {session}"))
                } else {
                    parties.deliver_left(session, msg).map(|msgs| (Side::Left, session, msgs))
                }
            }
            Action::DeliverRight { session, msg } => {
                if session >= out.right_started {
                    Err(format!("no right session {session}"))
                } else {
                    parties.deliver_right(session, msg).map(|msgs| (Side::Right, session, msgs))
                }
            }
        };
        match result {
            Ok((side, session, msgs)) => {
                view.events.extend(msgs.into_iter().map(|msg| Event::Outgoing { side, session, msg }));
            }
            Err(reason) => {
                out.illegal += 1;
                view.events.push(Event::Illegal { action: index, reason });
            }
        }
        if parties.should_halt() {
            out.end = LoopEnd::Halted;
            return out;
        }
    }
    out
}
