//! Brute-force Naor binding at n = 4: which receiver strings let a committer
//! open the same commitment both ways?

use bpkcnm::primitives::{naor_commit, naor_verify, BitString, NaorOpening};
use bpkcnm::Params;

fn main() {
    let params = Params::toy(4);
    let prg = params.prg();
    let seeds: Vec<BitString> = (0..16).map(|s| BitString::from_u64(s, 4)).collect();
    let mut bad = vec![];
    for r in 0..1u64 << 12 {
        let receiver = BitString::from_u64(r, 12);
        let equivocal = seeds.iter().find_map(|s0| {
            let com = naor_commit(&prg, false, s0, &receiver).unwrap();
            seeds
                .iter()
                .find(|s1| naor_verify(&prg, &com, &NaorOpening { committed_bit: true, seed: (*s1).clone() }))
                .map(|s1| (s0.to_hex(), s1.to_hex()))
        });
        if let Some(pair) = equivocal {
            bad.push((receiver.to_hex(), pair));
        }
    }
    for (r, (s0, s1)) in &bad {
        println!("R = {r}: opens as 0 with seed {s0} and as 1 with seed {s1}");
    }
    println!("{}/4096 equivocating (binding bound 2^-4 = 256/4096)", bad.len());
}
