//! One honest left session against one honest right session.
//!
//! cargo run --example honest_run -- 16 7

use bpkcnm::cnmct::run_honest;
use bpkcnm::Params;

fn main() {
    let mut args = std::env::args().skip(1);
    let n: usize = args.next().and_then(|a| a.parse().ok()).unwrap_or(16);
    let seed: u64 = args.next().and_then(|a| a.parse().ok()).unwrap_or(0);
    let run = run_honest(&Params::toy(n), seed);
    println!("left  output: {}", run.left.output_bits().map(|b| b.to_hex()).unwrap_or_default());
    println!("right output: {}", run.right.output_bits().map(|b| b.to_hex()).unwrap_or_default());
    println!("agree: {}, ledger entries: {}", run.outputs_agree(), run.ledger.len());
}
