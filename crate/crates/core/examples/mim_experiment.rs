//! The man-in-the-middle experiment with the relay and interleaving
//! adversaries.

use bpkcnm::harness::{run_experiment, ExperimentConfig};
use bpkcnm::simulator::classify_trace;

fn main() -> bpkcnm::Result<()> {
    for adversary in ["relay", "interleaver"] {
        let cfg = ExperimentConfig { s: 3, seed: 1, adversary: adversary.into(), ..Default::default() };
        let trace = run_experiment(&cfg)?;
        println!("{adversary}: {} actions, end {:?}", trace.actions.len(), trace.end);
        for (i, r) in trace.outputs.left.iter().enumerate() {
            println!("  left[{i}]  = {}", r.to_hex());
        }
        for (i, r) in trace.outputs.right.iter().enumerate() {
            println!("  right[{i}] = {}", r.to_hex());
        }
        println!("  classes: {:?}", classify_trace(&trace).sessions);
    }
    Ok(())
}
