use std::collections::BTreeSet;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use super::protocol::Ddl06VerifierKey;
use crate::primitives::{Elem, Exponent, GroupParams};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessScan {
    pub snapshots: usize,
    pub values_checked: usize,
    /// `x_hat` has no discrete log at all.
    pub x_hat_outside_subgroup: bool,
    pub findings: Vec<String>,
    pub clean: bool,
}

fn collect(v: &serde_json::Value, out: &mut BTreeSet<BigUint>) {
    match v {
        serde_json::Value::String(s) => {
            if let Ok(n) = s.parse::<BigUint>() {
                out.insert(n);
            }
        }
        serde_json::Value::Number(n) => {
            if let Some(n) = n.as_u64() {
                out.insert(BigUint::from(n));
            }
        }
        serde_json::Value::Array(xs) => xs.iter().for_each(|x| collect(x, out)),
        serde_json::Value::Object(m) => m.values().for_each(|x| collect(x, out)),
        _ => {}
    }
}

/// Every number the adversary ever held is tested as a discrete log of
/// `verk0`, `verk1` and `x_hat`.
pub fn scan_for_witnesses(group: &GroupParams, snapshots: &[serde_json::Value], key: &Ddl06VerifierKey, x_hat: &Elem) -> WitnessScan {
    let mut values = BTreeSet::new();
    snapshots.iter().for_each(|s| collect(s, &mut values));
    let mut findings = vec![];
    for v in &values {
        let y = group.exp_g(&Exponent::new(v % group.q()));
        if y == key.pk.verk0 || y == key.pk.verk1 {
            findings.push(format!("held a verifier secret: {v}"));
        }
        if &y == x_hat {
            findings.push(format!("held a witness for x_hat: {v}"));
        }
    }
    let x_hat_outside_subgroup = !group.is_member(x_hat);
    WitnessScan {
        snapshots: snapshots.len(),
        values_checked: values.len(),
        x_hat_outside_subgroup,
        clean: findings.is_empty() && x_hat_outside_subgroup,
        findings,
    }
}
