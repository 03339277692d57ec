//! GGM pseudorandom function built on [`Prg`].

use super::bits::BitString;
use super::prg::Prg;
use crate::error::{Error, Result};

pub const DEFAULT_INPUT_LEN: usize = 16;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Prf {
    prg: Prg,
    input_len: usize,
}

impl Prf {
    pub fn new(prg: Prg, input_len: usize) -> Self {
        Self { prg, input_len }
    }

    pub fn input_len(&self) -> usize {
        self.input_len
    }

    pub fn prg(&self) -> &Prg {
        &self.prg
    }

    /// Walks the GGM tree from the root `key`: at each level the node is
    /// stretched to twice its length and the input bit picks a half.
    pub fn eval(&self, key: &BitString, input: &BitString) -> Result<BitString> {
        if input.len() != self.input_len {
            return Err(Error::LengthMismatch { expected: self.input_len, got: input.len() });
        }
        let n = key.len();
        let mut node = key.clone();
        for bit in input.iter() {
            let children = self.prg.expand(&node, 2 * n);
            let (left, right) = children.split_at(n);
            node = if bit { right } else { left };
        }
        Ok(node)
    }
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::primitives::{GroupParams, PrgBackend};

    fn prg() -> Prg {
        Prg::new(Arc::new(GroupParams::toy()), PrgBackend::BlumMicali)
    }

    #[test]
    fn hand_unrolled_tree() {
        let prg = prg();
        let prf = Prf::new(prg.clone(), 2);
        for k in 0..16u64 {
            let key = BitString::from_u64(k, 4);
            let level1 = prg.expand(&key, 8).split_at(4).0;
            let level2 = prg.expand(&level1, 8).split_at(4).0;
            assert_eq!(prf.eval(&key, &BitString::from_u64(0b00, 2)).unwrap(), level2);

            let l1 = prg.expand(&key, 8).split_at(4).1;
            let l2 = prg.expand(&l1, 8).split_at(4).0;
            assert_eq!(prf.eval(&key, &BitString::from_u64(0b10, 2)).unwrap(), l2);
        }
    }

    #[test]
    fn deterministic_and_length_checked() {
        let prf = Prf::new(prg(), DEFAULT_INPUT_LEN);
        let key = BitString::from_u64(0x5a5a, 16);
        let x = BitString::from_u64(0x1234, 16);
        assert_eq!(prf.eval(&key, &x).unwrap(), prf.eval(&key, &x).unwrap());
        assert_eq!(prf.eval(&key, &x).unwrap().len(), 16);
        assert!(matches!(
            prf.eval(&key, &BitString::zeros(15)),
            Err(Error::LengthMismatch { expected: 16, got: 15 })
        ));
    }
}
