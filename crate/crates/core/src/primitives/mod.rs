//! Number-theoretic building blocks: the discrete-log group, bit strings,
//! the PRG and GGM PRF on top of it, and the two commitment schemes.

mod bits;
mod group;
mod naor;
mod pedersen;
mod prf;
mod prg;

pub use bits::BitString;
pub use group::{is_probable_prime, random_below, Challenge, Elem, Exponent, GroupParams};
pub use naor::{naor_commit, naor_commit_string, naor_verify, naor_verify_string, NaorCommitment, NaorOpening};
pub use pedersen::{pedersen_commit, pedersen_setup, pedersen_verify, PedersenCommitment};
pub use prf::{Prf, DEFAULT_INPUT_LEN};
pub use prg::{Prg, PrgBackend};
