//! The simulator against the independent adversary: it sees only PK_L,
//! covers the adversary's keys one repetition at a time and predefines
//! every output.

use bpkcnm::harness::{adversary_from_id, ExperimentConfig, HonestKeys};
use bpkcnm::simulator::{simulate, CrsVariant};

fn main() -> bpkcnm::Result<()> {
    let cfg = ExperimentConfig { s: 2, seed: 5, adversary: "independent".into(), ..Default::default() };
    let keys = HonestKeys::generate(&cfg.params()?, cfg.seed);
    let adversary = adversary_from_id(&cfg.adversary, cfg.s, cfg.seed)?;
    let out = simulate(&cfg, CrsVariant::PrgSeed, &keys.left.pk, adversary)?;
    println!("repetitions: {}, covered keys: {}, failure: {:?}", out.repetitions, out.covered.len(), out.failure);
    for (i, t) in out.sta_l.iter().enumerate() {
        println!("left[{i}]  r = {}  tau = {}", out.draws.left[i].r.to_hex(), t.tau.to_hex());
    }
    for (i, t) in out.sta_r.iter().enumerate() {
        println!("right[{i}] r = {}  sta = {:?}", out.transcript.outputs.right[i].to_hex(), t.as_ref().map(|t| (t.from, t.index)));
    }
    Ok(())
}
