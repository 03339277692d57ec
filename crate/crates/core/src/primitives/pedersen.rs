use rand::RngCore;
use serde::{Deserialize, Serialize};

use super::group::{Elem, Exponent, GroupParams};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PedersenCommitment {
    pub h: Elem,
    pub value: Elem,
}

/// Samples the second generator `h = g^t`; `t` is dropped on return.
pub fn pedersen_setup<R: RngCore + ?Sized>(group: &GroupParams, rng: &mut R) -> Elem {
    loop {
        let t = group.random_exponent(rng);
        if !t.is_zero() {
            return group.exp_g(&t);
        }
    }
}

/// `g^m * h^r mod p`.
pub fn pedersen_commit(group: &GroupParams, h: &Elem, m: &Exponent, r: &Exponent) -> Result<PedersenCommitment> {
    if m.value() >= group.q() || r.value() >= group.q() {
        return Err(Error::Domain("Pedersen exponents must lie in [0, q)".into()));
    }
    if !group.is_member(h) {
        return Err(Error::Domain("h is not a subgroup element".into()));
    }
    let value = group.mul(&group.exp_g(m), &group.pow(h, r.value()));
    Ok(PedersenCommitment { h: h.clone(), value })
}

pub fn pedersen_verify(group: &GroupParams, com: &PedersenCommitment, m: &Exponent, r: &Exponent) -> bool {
    pedersen_commit(group, &com.h, m, r)
        .map(|c| c.value == com.value)
        .unwrap_or(false)
}
