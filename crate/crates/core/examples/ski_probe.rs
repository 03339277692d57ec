//! Secret-key independence probe with each built-in relation.

use bpkcnm::harness::ExperimentConfig;
use bpkcnm::simulator::{sk_independence_probe_jobs, CrsVariant, SkiRelation};

fn main() -> bpkcnm::Result<()> {
    let trials: usize = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(200);
    let cfg = ExperimentConfig { seed: 11, ..Default::default() };
    for relation in [SkiRelation::ConstTrue, SkiRelation::SkInSta, SkiRelation::SideDetector] {
        let r = sk_independence_probe_jobs(&cfg, CrsVariant::Identity, relation, trials, 4)?;
        println!(
            "{relation:?}: with SK {:.3}, with SK' {:.3}, |diff| {:.3}",
            r.freq_with_sk,
            r.freq_with_spare,
            r.difference()
        );
    }
    Ok(())
}
