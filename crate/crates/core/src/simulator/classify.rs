use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::simulate::SimOutput;
use crate::cnmct::Stage;
use crate::harness::ExperimentTrace;
use crate::primitives::BitString;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "class", rename_all = "kebab-case")]
pub enum RightClass {
    Fresh,
    CopiedFrom { left: usize },
    Aborted,
    /// Neither fresh nor a copy of any left output.
    Violation,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OutputClassification {
    pub sessions: Vec<RightClass>,
    /// How often each left index is copied.
    pub copies: BTreeMap<usize, usize>,
    pub duplicated: Vec<usize>,
    pub violations: Vec<usize>,
    pub valid: bool,
}

impl OutputClassification {
    fn build(sessions: Vec<RightClass>) -> Self {
        let mut copies = BTreeMap::new();
        let mut violations = vec![];
        for (i, c) in sessions.iter().enumerate() {
            match c {
                RightClass::CopiedFrom { left } => *copies.entry(*left).or_insert(0) += 1,
                RightClass::Violation => violations.push(i),
                _ => {}
            }
        }
        let duplicated: Vec<usize> = copies.iter().filter(|(_, &c)| c > 1).map(|(&k, _)| k).collect();
        let valid = duplicated.is_empty() && violations.is_empty();
        Self { sessions, copies, duplicated, violations, valid }
    }

    pub fn all_fresh(&self) -> bool {
        self.sessions.iter().all(|c| *c == RightClass::Fresh)
    }

    pub fn count(&self, f: impl Fn(&RightClass) -> bool) -> usize {
        self.sessions.iter().filter(|c| f(c)).count()
    }
}

/// Matches `r` against `candidates`, preferring an index nobody has claimed.
fn copy_target(r: &BitString, candidates: &[BitString], claimed: &BTreeMap<usize, usize>) -> Option<usize> {
    let mut hits = candidates.iter().enumerate().filter(|(_, c)| *c == r).map(|(k, _)| k);
    let first = hits.next()?;
    if !claimed.contains_key(&first) {
        return Some(first);
    }
    hits.find(|k| !claimed.contains_key(k)).or(Some(first))
}

/// Classifies a simulated run against its draws: `S_R[i]` is fresh, `S_L[k]`
/// is a copy of left session `k`, anything else is a violation.
pub fn classify_sim(out: &SimOutput) -> OutputClassification {
    let left: Vec<BitString> = out.draws.left.iter().map(|p| p.r.clone()).collect();
    let mut claimed = BTreeMap::new();
    let classes = out
        .transcript
        .right_records()
        .enumerate()
        .map(|(i, rec)| {
            let r = rec.output_bits().expect("finalized");
            if rec.stage_cursor == Stage::Aborted {
                RightClass::Aborted
            } else if r == &out.draws.right[i].r {
                RightClass::Fresh
            } else if let Some(k) = copy_target(r, &left, &claimed) {
                *claimed.entry(k).or_insert(0) += 1;
                RightClass::CopiedFrom { left: k }
            } else {
                RightClass::Violation
            }
        })
        .collect();
    OutputClassification::build(classes)
}

/// Classifies a real trace: a right output equal to some left output is a
/// copy, any other completed output is fresh.
pub fn classify_trace(trace: &ExperimentTrace) -> OutputClassification {
    let mut claimed = BTreeMap::new();
    let classes = trace
        .right_records()
        .map(|rec| {
            let r = rec.output_bits().expect("finalized");
            if rec.stage_cursor == Stage::Aborted {
                RightClass::Aborted
            } else if let Some(k) = copy_target(r, &trace.outputs.left, &claimed) {
                *claimed.entry(k).or_insert(0) += 1;
                RightClass::CopiedFrom { left: k }
            } else {
                RightClass::Fresh
            }
        })
        .collect();
    OutputClassification::build(classes)
}
