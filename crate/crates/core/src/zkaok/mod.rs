//! Tag-based arguments of knowledge.
//!
//! Two backends sit behind one message type. The ideal backend is an oracle
//! ledger: the prover hands its witness to the ledger, the verifier learns
//! only `(tag, statement, verdict)`, and extraction is a lookup. The Sigma
//! backend runs real three-move rounds for statements with a Sigma core and
//! extracts by rewinding.

mod ledger;
mod relation;
mod sigma_aok;
mod tag;

pub use ledger::{IdealLedger, LedgerEntry, LedgerRow};
pub use relation::{eval_relation, AokStatement, AokWitness};
pub use sigma_aok::{commit_then_sigma, default_rewind_cap, rewind_extract, witness_bits, CommitThenSigma};
pub use tag::Tag;

use rand::RngCore;
use serde::{Deserialize, Serialize};

use crate::bpk::Registrant;
use crate::error::{Error, Result};
use crate::params::{AokBackend, Params};
use crate::primitives::Challenge;
use crate::sigma::{sigma_commit, sigma_verify, FirstMessage, Response, SigmaTranscript};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum AokMsg {
    /// Prover to functionality. Never reaches a verifier: the event loop
    /// swaps it for the ledger notification.
    IdealSubmit { tag: Tag, statement: AokStatement, witness: AokWitness },
    IdealRef { entry: String, tag: Tag, statement: AokStatement, verdict: bool },
    SigmaCommit { a: FirstMessage },
    SigmaChallenge { e: Challenge },
    SigmaResponse { z: Response },
}

impl AokMsg {
    pub fn is_submit(&self) -> bool {
        matches!(self, AokMsg::IdealSubmit { .. })
    }

    /// Accept test for a verifier without ledger access: it trusts the
    /// notification it was handed.
    pub fn notified_accept(&self, tag: &Tag, statement: &AokStatement) -> bool {
        matches!(self, AokMsg::IdealRef { tag: t, statement: s, verdict: true, .. } if t == tag && s == statement)
    }
}

/// Backend that actually runs for `stmt` under the configured choice.
pub fn effective_backend(configured: AokBackend, stmt: &AokStatement) -> AokBackend {
    match (configured, stmt.sigma_core()) {
        (AokBackend::Sigma, Some(_)) => AokBackend::Sigma,
        _ => AokBackend::Ideal,
    }
}

/// Honest ideal-backend prover: refuses to submit a witness that fails the
/// relation.
pub fn ideal_submit(params: &Params, tag: Tag, statement: AokStatement, witness: AokWitness) -> Result<AokMsg> {
    if !eval_relation(params, &statement, &witness) {
        return Err(Error::WitnessMismatch);
    }
    Ok(AokMsg::IdealSubmit { tag, statement, witness })
}

/// Outcome of a self-contained prover/verifier run.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AokRun {
    pub backend: AokBackend,
    pub accepted: bool,
    pub entry: Option<String>,
    pub transcript: Option<SigmaTranscript>,
}

/// Runs prover and honest verifier back to back over an in-process channel.
#[allow(clippy::too_many_arguments)]
pub fn aok_prove<R: RngCore>(
    params: &Params,
    backend: AokBackend,
    ledger: &mut IdealLedger,
    id: &str,
    tag: Tag,
    statement: AokStatement,
    witness: AokWitness,
    rng: &mut R,
) -> Result<AokRun> {
    match effective_backend(backend, &statement) {
        AokBackend::Ideal => {
            let submit = ideal_submit(params, tag.clone(), statement.clone(), witness)?;
            let notice = ledger.intercept(params, id, Registrant::Honest, submit);
            let accepted = ledger.accepts(&notice, &tag, &statement);
            let entry = match notice {
                AokMsg::IdealRef { entry, .. } => Some(entry),
                _ => None,
            };
            Ok(AokRun { backend: AokBackend::Ideal, accepted, entry, transcript: None })
        }
        AokBackend::Sigma => {
            if !eval_relation(params, &statement, &witness) {
                return Err(Error::WitnessMismatch);
            }
            let stmt = statement.sigma_core().expect("sigma backend implies a core");
            let w = witness.sigma_core(params, &statement).ok_or(Error::WitnessMismatch)?;
            let (a, mut state) = sigma_commit(&params.group, &stmt, &w, rng)?;
            let e = params.group.random_challenge(rng);
            let e = if stmt.is_or() { e } else { Challenge::new(e.into_inner() % params.group.q()) };
            let z = state.respond(&e)?;
            let t = SigmaTranscript::new(a, e, z);
            let accepted = sigma_verify(&params.group, &stmt, &t).is_ok();
            Ok(AokRun { backend: AokBackend::Sigma, accepted, entry: None, transcript: Some(t) })
        }
    }
}

#[cfg(test)]
mod tests;
