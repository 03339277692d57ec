use std::collections::VecDeque;

use num_bigint::BigUint;
use rand::RngCore;

use crate::primitives::{random_below, Challenge, Exponent, GroupParams};

/// Source of prover and simulator randomness.
///
/// Any RNG is a coin source. [`FixedCoins`] replays a scripted tape so tests
/// can enumerate every coin value.
pub trait Coins {
    fn exponent(&mut self, group: &GroupParams) -> Exponent;
    fn challenge(&mut self, bound: &BigUint) -> Challenge;
}

impl<R: RngCore> Coins for R {
    fn exponent(&mut self, group: &GroupParams) -> Exponent {
        group.random_exponent(self)
    }

    fn challenge(&mut self, bound: &BigUint) -> Challenge {
        Challenge::new(random_below(bound, self))
    }
}

/// Scripted coins, consumed front to back. Panics when a tape runs dry.
#[derive(Clone, Debug, Default)]
pub struct FixedCoins {
    exponents: VecDeque<Exponent>,
    challenges: VecDeque<Challenge>,
}

impl FixedCoins {
    pub fn new(exponents: impl IntoIterator<Item = u64>, challenges: impl IntoIterator<Item = u64>) -> Self {
        Self {
            exponents: exponents.into_iter().map(Exponent::from).collect(),
            challenges: challenges.into_iter().map(Challenge::from).collect(),
        }
    }

    pub fn exponents(values: impl IntoIterator<Item = u64>) -> Self {
        Self::new(values, [])
    }

    pub fn is_exhausted(&self) -> bool {
        self.exponents.is_empty() && self.challenges.is_empty()
    }
}

impl Coins for FixedCoins {
    fn exponent(&mut self, _group: &GroupParams) -> Exponent {
        self.exponents.pop_front().expect("fixed exponent tape exhausted")
    }

    fn challenge(&mut self, _bound: &BigUint) -> Challenge {
        self.challenges.pop_front().expect("fixed challenge tape exhausted")
    }
}
