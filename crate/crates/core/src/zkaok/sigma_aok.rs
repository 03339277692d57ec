use num_bigint::BigUint;

use crate::error::{Error, Result};
use crate::params::Params;
use crate::primitives::{naor_commit_string, BitString, Challenge, GroupParams};
use crate::sigma::{sigma_commit, sigma_extract, sigma_verify, Coins, SigmaStatement, SigmaTranscript, SigmaWitness};

/// Output of the commit-then-Sigma prover: a bitwise Naor commitment to the
/// witness followed by a Sigma transcript for the statement.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CommitThenSigma {
    pub commitment: Vec<BitString>,
    pub transcript: SigmaTranscript,
}

/// Canonical bit encoding of a Sigma witness: one bit per OR choice (0 left,
/// 1 right) on the path to the leaf, then each leaf exponent in `|q|` bits.
pub fn witness_bits(group: &GroupParams, w: &SigmaWitness) -> BitString {
    let width = group.q().bits() as usize;
    let exp = |v: &BigUint| BitString::from_biguint(v, width).expect("exponent below q");
    match w {
        SigmaWitness::DLog { x } => exp(x.value()),
        SigmaWitness::Pedersen { m, r } => exp(m.value()).concat(&exp(r.value())),
        SigmaWitness::Left { inner } => BitString::from_u64(0, 1).concat(&witness_bits(group, inner)),
        SigmaWitness::Right { inner } => BitString::from_u64(1, 1).concat(&witness_bits(group, inner)),
    }
}

/// Commits to the witness under `receiver` with the given seeds, then runs the
/// Sigma prover against challenge `e`.
pub fn commit_then_sigma<C: Coins + ?Sized>(
    params: &Params,
    receiver: &BitString,
    stmt: &SigmaStatement,
    witness: &SigmaWitness,
    seeds: &[BitString],
    e: &Challenge,
    coins: &mut C,
) -> Result<CommitThenSigma> {
    let bits = witness_bits(&params.group, witness);
    let commitment = naor_commit_string(&params.prg(), &bits, seeds, receiver)?
        .into_iter()
        .map(|c| c.value)
        .collect();
    let (a, mut state) = sigma_commit(&params.group, stmt, witness, coins)?;
    let z = state.respond(e)?;
    Ok(CommitThenSigma { commitment, transcript: SigmaTranscript::new(a, e.clone(), z) })
}

/// Default rewind budget: `64 q` attempts, saturating.
pub fn default_rewind_cap(group: &GroupParams) -> u64 {
    let cap = group.q() * BigUint::from(64u8);
    u64::try_from(&cap).unwrap_or(u64::MAX)
}

/// Rewinding extractor. `rerun` replays the prover from the point just after
/// its first message and answers a fresh challenge; it may return `None` if
/// the prover aborts. Gives up after `cap` attempts.
pub fn rewind_extract<C, F>(
    group: &GroupParams,
    stmt: &SigmaStatement,
    first: &SigmaTranscript,
    cap: u64,
    coins: &mut C,
    mut rerun: F,
) -> Result<Option<SigmaWitness>>
where
    C: Coins + ?Sized,
    F: FnMut(&Challenge) -> Option<SigmaTranscript>,
{
    sigma_verify(group, stmt, first).map_err(|r| Error::Precondition(format!("session not accepted: {r}")))?;
    let bound = stmt.challenge_bound(group);
    for _ in 0..cap {
        let e = coins.challenge(&bound);
        if e == first.e {
            continue;
        }
        let Some(second) = rerun(&e) else { continue };
        if second.a != first.a || second.e != e || sigma_verify(group, stmt, &second).is_err() {
            continue;
        }
        return sigma_extract(group, stmt, first, &second).map(Some);
    }
    Ok(None)
}
