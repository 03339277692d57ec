use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{eval_relation, AokMsg, AokStatement, AokWitness, Tag};
use crate::bpk::Registrant;
use crate::error::{Error, Result};
use crate::params::Params;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LedgerEntry {
    pub id: String,
    pub prover: Registrant,
    pub tag: Tag,
    pub statement: AokStatement,
    pub witness: AokWitness,
    pub verdict: bool,
}

/// Public projection of an entry; this is what gets dumped.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LedgerRow {
    pub id: String,
    pub prover: Registrant,
    pub tag: Tag,
    pub relation_id: String,
    pub verdict: bool,
}

/// The ideal argument-of-knowledge functionality. Single writer: the event
/// loop that owns it.
#[derive(Clone, Debug, Default)]
pub struct IdealLedger {
    entries: Vec<LedgerEntry>,
    index: BTreeMap<String, usize>,
}

impl IdealLedger {
    pub fn new() -> Self {
        Self::default()
    }

    /// Records a submission and returns the notification the verifier sees.
    /// A repeated id gets a numeric suffix.
    pub fn submit(
        &mut self,
        params: &Params,
        id: &str,
        prover: Registrant,
        tag: Tag,
        statement: AokStatement,
        witness: AokWitness,
    ) -> AokMsg {
        let mut id = id.to_string();
        let mut k = 1;
        while self.index.contains_key(&id) {
            k += 1;
            id = format!("{}#{k}", id.split('#').next().unwrap_or_default());
        }
        let verdict = eval_relation(params, &statement, &witness);
        let msg = AokMsg::IdealRef { entry: id.clone(), tag: tag.clone(), statement: statement.clone(), verdict };
        self.index.insert(id.clone(), self.entries.len());
        self.entries.push(LedgerEntry { id, prover, tag, statement, witness, verdict });
        msg
    }

    /// Replaces an in-flight `IdealSubmit` by the ledger notification.
    pub fn intercept(&mut self, params: &Params, id: &str, prover: Registrant, msg: AokMsg) -> AokMsg {
        match msg {
            AokMsg::IdealSubmit { tag, statement, witness } => self.submit(params, id, prover, tag, statement, witness),
            other => other,
        }
    }

    pub fn get(&self, id: &str) -> Option<&LedgerEntry> {
        self.index.get(id).map(|&i| &self.entries[i])
    }

    pub fn entries(&self) -> &[LedgerEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Verifier-side check of a notification against the ledger copy.
    pub fn accepts(&self, msg: &AokMsg, tag: &Tag, statement: &AokStatement) -> bool {
        match msg {
            AokMsg::IdealRef { entry, .. } => self
                .get(entry)
                .is_some_and(|e| e.verdict && &e.tag == tag && &e.statement == statement),
            _ => false,
        }
    }

    /// Extraction by lookup. `None` when the entry's tag equals the tag of an
    /// honest prover's entry.
    pub fn extract(&self, id: &str) -> Result<Option<AokWitness>> {
        let entry = self.get(id).ok_or_else(|| Error::Precondition(format!("no ledger entry {id}")))?;
        if !entry.verdict {
            return Err(Error::Precondition(format!("entry {id} was not accepted")));
        }
        let copied = self
            .entries
            .iter()
            .any(|e| e.prover == Registrant::Honest && e.id != entry.id && e.tag == entry.tag);
        if copied || entry.prover == Registrant::Honest {
            return Ok(None);
        }
        Ok(Some(entry.witness.clone()))
    }

    pub fn dump(&self) -> Vec<LedgerRow> {
        self.entries
            .iter()
            .map(|e| LedgerRow {
                id: e.id.clone(),
                prover: e.prover,
                tag: e.tag.clone(),
                relation_id: e.statement.relation_id().to_string(),
                verdict: e.verdict,
            })
            .collect()
    }
}
