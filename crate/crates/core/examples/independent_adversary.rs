//! An adversary that registers its own keys and plays every session itself.

use bpkcnm::harness::{run_experiment, ExperimentConfig};

fn main() -> bpkcnm::Result<()> {
    let cfg = ExperimentConfig { s: 2, seed: 3, adversary: "independent".into(), ..Default::default() };
    let trace = run_experiment(&cfg)?;
    for entry in trace.public_file.entries() {
        println!("public file: id {} role {:?} ({} bytes)", entry.id, entry.role, entry.key.len());
    }
    for rec in &trace.sessions {
        println!("{:?}[{}] peer {} -> {:?}", rec.side, rec.session_id, rec.peer_pk_id, rec.stage_cursor);
    }
    Ok(())
}
