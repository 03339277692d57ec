//! Fresh / copied / violation classification of simulated right outputs.

use bpkcnm::harness::{adversary_from_id, ExperimentConfig, HonestKeys};
use bpkcnm::simulator::{classify_sim, simulate, CrsVariant};

fn main() -> bpkcnm::Result<()> {
    for adversary in ["relay", "interleaver", "independent", "one-right-key", "null"] {
        let cfg = ExperimentConfig { n: 12, s: 3, seed: 2, adversary: adversary.into(), ..Default::default() };
        let keys = HonestKeys::generate(&cfg.params()?, cfg.seed);
        let out = simulate(&cfg, CrsVariant::Identity, &keys.left.pk, adversary_from_id(adversary, cfg.s, cfg.seed)?)?;
        let c = classify_sim(&out);
        println!("{adversary:>14}: valid {} {:?}", c.valid, c.sessions);
    }
    Ok(())
}
