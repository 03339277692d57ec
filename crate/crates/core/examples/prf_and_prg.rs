//! Blum-Micali stretching and the GGM PRF built on it.

use bpkcnm::primitives::{BitString, GroupParams, Prf, Prg, PrgBackend};
use std::sync::Arc;

fn main() {
    let prg = Prg::new(Arc::new(GroupParams::large()), PrgBackend::BlumMicali);
    let seed = BitString::from_u64(0b1011_0110, 8);
    println!("PRG(seed, 24) = {}", prg.expand(&seed, 24).to_hex());
    let prf = Prf::new(prg, 8);
    for x in [0u64, 1, 2, 255] {
        let y = prf.eval(&seed, &BitString::from_u64(x, 8)).unwrap();
        println!("F_seed({x:3}) = {}", y.to_hex());
    }
}
