use std::fmt;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use super::coins::Coins;
use super::{FirstMessage, Response, SigmaStatement, SigmaTranscript, SigmaWitness};
use crate::error::{Error, Result};
use crate::primitives::{Challenge, Elem, Exponent, GroupParams};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RejectReason {
    ShapeMismatch,
    ChallengeOutOfRange,
    ResponseOutOfRange,
    ElementOutOfRange,
    EquationFailed,
}

impl fmt::Display for RejectReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            RejectReason::ShapeMismatch => "transcript shape does not match statement",
            RejectReason::ChallengeOutOfRange => "challenge out of range",
            RejectReason::ResponseOutOfRange => "response out of range",
            RejectReason::ElementOutOfRange => "element outside Z_p^*",
            RejectReason::EquationFailed => "verification equation failed",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug)]
enum Node {
    DLog { k: Exponent, x: Exponent },
    Pedersen { k_m: Exponent, k_r: Exponent, m: Exponent, r: Exponent },
    /// Real on the left, right child pre-simulated.
    OrLeft { real: Box<Node>, sim: SigmaTranscript },
    OrRight { real: Box<Node>, sim: SigmaTranscript },
}

/// Single-use prover state between the first message and the response.
#[derive(Clone, Debug)]
pub struct ProverState {
    group: GroupParams,
    bound: BigUint,
    node: Option<Node>,
}

impl ProverState {
    /// Produces `z` for challenge `e`. A second call fails.
    pub fn respond(&mut self, e: &Challenge) -> Result<Response> {
        if self.node.is_none() {
            return Err(Error::StateConsumed);
        }
        if e.value() >= &self.bound {
            return Err(Error::Domain(format!("challenge {e} not below {}", self.bound)));
        }
        let node = self.node.take().expect("checked above");
        Ok(respond_node(&self.group, node, e))
    }

    pub fn is_consumed(&self) -> bool {
        self.node.is_none()
    }
}

/// First move. The witness must satisfy the statement.
pub fn sigma_commit<C: Coins + ?Sized>(
    group: &GroupParams,
    stmt: &SigmaStatement,
    witness: &SigmaWitness,
    coins: &mut C,
) -> Result<(FirstMessage, ProverState)> {
    if !stmt.is_satisfied_by(group, witness) {
        return Err(Error::WitnessMismatch);
    }
    let (a, node) = commit_node(group, stmt, witness, coins);
    let state = ProverState { group: group.clone(), bound: stmt.challenge_bound(group), node: Some(node) };
    Ok((a, state))
}

fn commit_node<C: Coins + ?Sized>(
    group: &GroupParams,
    stmt: &SigmaStatement,
    witness: &SigmaWitness,
    coins: &mut C,
) -> (FirstMessage, Node) {
    match (stmt, witness) {
        (SigmaStatement::DLog { .. }, SigmaWitness::DLog { x }) => {
            let k = coins.exponent(group);
            (FirstMessage::DLog { a: group.exp_g(&k) }, Node::DLog { k, x: x.clone() })
        }
        (SigmaStatement::PedersenOpening { h, .. }, SigmaWitness::Pedersen { m, r }) => {
            let k_m = coins.exponent(group);
            let k_r = coins.exponent(group);
            let a = group.mul(&group.exp_g(&k_m), &group.pow(h, k_r.value()));
            (FirstMessage::Pedersen { a }, Node::Pedersen { k_m, k_r, m: m.clone(), r: r.clone() })
        }
        (SigmaStatement::Or { left, right }, SigmaWitness::Left { inner }) => {
            let (a_l, real) = commit_node(group, left, inner, coins);
            let e_r = coins.challenge(&or_bound(group));
            let sim = sigma_simulate(group, right, &e_r, coins);
            let a = FirstMessage::Or { left: Box::new(a_l), right: Box::new(sim.a.clone()) };
            (a, Node::OrLeft { real: Box::new(real), sim })
        }
        (SigmaStatement::Or { left, right }, SigmaWitness::Right { inner }) => {
            let (a_r, real) = commit_node(group, right, inner, coins);
            let e_l = coins.challenge(&or_bound(group));
            let sim = sigma_simulate(group, left, &e_l, coins);
            let a = FirstMessage::Or { left: Box::new(sim.a.clone()), right: Box::new(a_r) };
            (a, Node::OrRight { real: Box::new(real), sim })
        }
        _ => unreachable!("witness shape checked by is_satisfied_by"),
    }
}

fn respond_node(group: &GroupParams, node: Node, e: &Challenge) -> Response {
    match node {
        Node::DLog { k, x } => Response::DLog { z: group.add(&k, &group.mul_exp(&x, e.value())) },
        Node::Pedersen { k_m, k_r, m, r } => Response::Pedersen {
            z_m: group.add(&k_m, &group.mul_exp(&m, e.value())),
            z_r: group.add(&k_r, &group.mul_exp(&r, e.value())),
        },
        Node::OrLeft { real, sim } => {
            let e_l = e.xor(&sim.e);
            let z_l = respond_node(group, *real, &e_l);
            Response::Or { left_challenge: e_l, left: Box::new(z_l), right: Box::new(sim.z) }
        }
        Node::OrRight { real, sim } => {
            let e_r = e.xor(&sim.e);
            let z_r = respond_node(group, *real, &e_r);
            Response::Or { left_challenge: sim.e, left: Box::new(sim.z), right: Box::new(z_r) }
        }
    }
}

/// Free-function form of [`ProverState::respond`].
pub fn sigma_respond(state: &mut ProverState, e: &Challenge) -> Result<Response> {
    state.respond(e)
}

fn or_bound(group: &GroupParams) -> BigUint {
    BigUint::from(1u8) << group.challenge_bits()
}

/// SHVZK simulator: an accepting transcript for challenge `e`, no witness.
pub fn sigma_simulate<C: Coins + ?Sized>(
    group: &GroupParams,
    stmt: &SigmaStatement,
    e: &Challenge,
    coins: &mut C,
) -> SigmaTranscript {
    match stmt {
        SigmaStatement::DLog { y } => {
            let z = coins.exponent(group);
            let a = group.mul(&group.exp_g(&z), &group.pow_neg(y, e.value()));
            SigmaTranscript::new(FirstMessage::DLog { a }, e.clone(), Response::DLog { z })
        }
        SigmaStatement::PedersenOpening { h, com } => {
            let z_m = coins.exponent(group);
            let z_r = coins.exponent(group);
            let a = group.mul(
                &group.mul(&group.exp_g(&z_m), &group.pow(h, z_r.value())),
                &group.pow_neg(com, e.value()),
            );
            SigmaTranscript::new(FirstMessage::Pedersen { a }, e.clone(), Response::Pedersen { z_m, z_r })
        }
        SigmaStatement::Or { left, right } => {
            let e_l = coins.challenge(&or_bound(group));
            let e_r = e.xor(&e_l);
            let t_l = sigma_simulate(group, left, &e_l, coins);
            let t_r = sigma_simulate(group, right, &e_r, coins);
            SigmaTranscript::or(t_l, t_r)
        }
    }
}

pub fn sigma_verify(group: &GroupParams, stmt: &SigmaStatement, t: &SigmaTranscript) -> Result<(), RejectReason> {
    verify_node(group, stmt, &t.a, &t.e, &t.z, &stmt.challenge_bound(group))
}

fn verify_node(
    group: &GroupParams,
    stmt: &SigmaStatement,
    a: &FirstMessage,
    e: &Challenge,
    z: &Response,
    bound: &BigUint,
) -> Result<(), RejectReason> {
    if e.value() >= bound {
        return Err(RejectReason::ChallengeOutOfRange);
    }
    let q = group.q();
    match (stmt, a, z) {
        (SigmaStatement::DLog { y }, FirstMessage::DLog { a }, Response::DLog { z }) => {
            check_elems(group, &[y, a])?;
            if z.value() >= q {
                return Err(RejectReason::ResponseOutOfRange);
            }
            check_eq(group.exp_g(z), group.mul(a, &group.pow(y, e.value())))
        }
        (SigmaStatement::PedersenOpening { h, com }, FirstMessage::Pedersen { a }, Response::Pedersen { z_m, z_r }) => {
            check_elems(group, &[h, com, a])?;
            if z_m.value() >= q || z_r.value() >= q {
                return Err(RejectReason::ResponseOutOfRange);
            }
            let lhs = group.mul(&group.exp_g(z_m), &group.pow(h, z_r.value()));
            check_eq(lhs, group.mul(a, &group.pow(com, e.value())))
        }
        (
            SigmaStatement::Or { left, right },
            FirstMessage::Or { left: a_l, right: a_r },
            Response::Or { left_challenge, left: z_l, right: z_r },
        ) => {
            let child_bound = or_bound(group);
            let e_r = e.xor(left_challenge);
            verify_node(group, left, a_l, left_challenge, z_l, &child_bound)?;
            verify_node(group, right, a_r, &e_r, z_r, &child_bound)
        }
        _ => Err(RejectReason::ShapeMismatch),
    }
}

fn check_elems(group: &GroupParams, elems: &[&Elem]) -> Result<(), RejectReason> {
    if elems.iter().all(|x| group.in_zp_star(x)) {
        Ok(())
    } else {
        Err(RejectReason::ElementOutOfRange)
    }
}

fn check_eq(lhs: Elem, rhs: Elem) -> Result<(), RejectReason> {
    if lhs == rhs {
        Ok(())
    } else {
        Err(RejectReason::EquationFailed)
    }
}

/// Special-soundness extractor over two accepting transcripts that share a
/// first message and differ in the challenge.
pub fn sigma_extract(
    group: &GroupParams,
    stmt: &SigmaStatement,
    t1: &SigmaTranscript,
    t2: &SigmaTranscript,
) -> Result<SigmaWitness> {
    for t in [t1, t2] {
        sigma_verify(group, stmt, t).map_err(|r| Error::Precondition(format!("transcript rejected: {r}")))?;
    }
    if t1.a != t2.a {
        return Err(Error::Precondition("first messages differ".into()));
    }
    if t1.e == t2.e {
        return Err(Error::Extraction("challenges are equal".into()));
    }
    let w = extract_node(group, stmt, t1, t2)?;
    if !stmt.is_satisfied_by(group, &w) {
        return Err(Error::Extraction("recovered value does not satisfy the statement".into()));
    }
    Ok(w)
}

fn extract_node(
    group: &GroupParams,
    stmt: &SigmaStatement,
    t1: &SigmaTranscript,
    t2: &SigmaTranscript,
) -> Result<SigmaWitness> {
    let de = group.sub(&Exponent::new(t1.e.value().clone()), &Exponent::new(t2.e.value().clone()));
    let inv = group.inv_exp(&de).ok_or_else(|| Error::Extraction("challenges agree mod q".into()))?;
    let solve = |a: &Exponent, b: &Exponent| group.mul_exp(&group.sub(a, b), inv.value());
    match (stmt, &t1.z, &t2.z) {
        (SigmaStatement::DLog { .. }, Response::DLog { z: z1 }, Response::DLog { z: z2 }) => {
            Ok(SigmaWitness::DLog { x: solve(z1, z2) })
        }
        (
            SigmaStatement::PedersenOpening { .. },
            Response::Pedersen { z_m: m1, z_r: r1 },
            Response::Pedersen { z_m: m2, z_r: r2 },
        ) => Ok(SigmaWitness::Pedersen { m: solve(m1, m2), r: solve(r1, r2) }),
        (SigmaStatement::Or { left, right }, _, _) => {
            let shape = || Error::Precondition("transcript shape does not match statement".into());
            let (l1, r1) = t1.children().ok_or_else(shape)?;
            let (l2, r2) = t2.children().ok_or_else(shape)?;
            if l1.e != l2.e {
                Ok(SigmaWitness::left(extract_node(group, left, &l1, &l2)?))
            } else {
                Ok(SigmaWitness::right(extract_node(group, right, &r1, &r2)?))
            }
        }
        _ => Err(Error::Precondition("transcript shape does not match statement".into())),
    }
}
