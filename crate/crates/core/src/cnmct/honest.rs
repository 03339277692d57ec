use std::collections::VecDeque;

use super::{LeftMode, LeftSession, LedgerChannel, Payload, RightMode, RightSession, SessionRecord};
use crate::bpk::{gen_left_key, gen_right_key, LeftKeyPair, RightKeyPair};
use crate::params::Params;
use crate::rng::derive_rng;
use crate::zkaok::IdealLedger;

/// One honest left session against one honest right session.
#[derive(Clone, Debug)]
pub struct HonestRun {
    pub left_keys: LeftKeyPair,
    pub right_keys: RightKeyPair,
    pub left: SessionRecord,
    pub right: SessionRecord,
    pub ledger: IdealLedger,
}

impl HonestRun {
    pub fn outputs_agree(&self) -> bool {
        self.left.is_done()
            && self.right.is_done()
            && self.left.output_bits().is_some()
            && self.left.output_bits() == self.right.output_bits()
    }
}

/// Generates both key pairs from `seed` and runs the protocol to completion.
pub fn run_honest(params: &Params, seed: u64) -> HonestRun {
    let left_keys = gen_left_key(params, &mut derive_rng(seed, "keygen/left", 0));
    let right_keys = gen_right_key(params, &mut derive_rng(seed, "keygen/right", 0));
    let mut left = LeftSession::new(
        params.clone(),
        left_keys.pk.clone(),
        0,
        1,
        &right_keys.pk.to_bytes(),
        LeftMode::Honest { sk: left_keys.sk.clone() },
        derive_rng(seed, "session/left", 0),
    );
    let mut right = RightSession::new(
        params.clone(),
        right_keys.clone(),
        0,
        0,
        &left_keys.pk.to_bytes(),
        RightMode::Honest,
        derive_rng(seed, "session/right", 0),
    );
    let mut ledger = IdealLedger::new();
    let mut to_left: VecDeque<Payload> = VecDeque::new();
    let mut to_right: VecDeque<Payload> = VecDeque::new();
    {
        let mut chan = LedgerChannel { params, ledger: &mut ledger };
        to_left.extend(right.start(&mut chan));
        loop {
            if let Some(m) = to_left.pop_front() {
                to_right.extend(left.deliver(m, &mut chan).unwrap_or_default());
            } else if let Some(m) = to_right.pop_front() {
                to_left.extend(right.deliver(m, &mut chan).unwrap_or_default());
            } else {
                break;
            }
        }
    }
    left.finalize();
    right.finalize();
    HonestRun { left_keys, right_keys, left: left.into_record(), right: right.into_record(), ledger }
}
