//! The two-session interleaving attack: the verifier's own Phase-1 proof
//! answers the middle branch of the second session's Phase-3 proof.

use bpkcnm::attack_ddl06::{run_interleaving_attack, Ddl06Variant};
use bpkcnm::primitives::GroupParams;

fn main() {
    let seed = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(0);
    let t = run_interleaving_attack(GroupParams::large(), Ddl06Variant::Plain, seed);
    for s in &t.steps {
        println!("step {} (session {}): {}", s.step, s.session, s.note);
    }
    println!("x_hat in subgroup: {}", t.x_hat_in_subgroup);
    println!("accepted: {}, witness scan clean: {} ({} values)", t.success, t.witness_scan.clean, t.witness_scan.values_checked);
    let p = run_interleaving_attack(GroupParams::large(), Ddl06Variant::Patched, seed);
    println!("tag-bound variant accepted: {}", p.success);
}
