//! Schnorr, a CDS OR proof, SHVZK simulation and special-soundness
//! extraction on the toy group.

use bpkcnm::primitives::{Challenge, Exponent, GroupParams};
use bpkcnm::sigma::{
    sigma_commit, sigma_extract, sigma_simulate, sigma_verify, FixedCoins, SigmaStatement, SigmaTranscript, SigmaWitness,
};

fn main() {
    let g = GroupParams::toy();
    let x = Exponent::from(6);
    let stmt = SigmaStatement::dlog(g.exp_g(&x));
    let w = SigmaWitness::DLog { x };

    let prove = |e: u64| {
        let (a, mut st) = sigma_commit(&g, &stmt, &w, &mut FixedCoins::exponents([4])).unwrap();
        let e = Challenge::from(e);
        let z = st.respond(&e).unwrap();
        SigmaTranscript::new(a, e, z)
    };
    let (t1, t2) = (prove(2), prove(9));
    println!("t1 = {}", serde_json::to_string(&t1).unwrap());
    println!("verify t1: {:?}, verify t2: {:?}", sigma_verify(&g, &stmt, &t1), sigma_verify(&g, &stmt, &t2));
    println!("extracted: {:?}", sigma_extract(&g, &stmt, &t1, &t2).unwrap());

    let sim = sigma_simulate(&g, &stmt, &Challenge::from(5), &mut rand::thread_rng());
    println!("simulated transcript verifies: {:?}", sigma_verify(&g, &stmt, &sim));

    let other = SigmaStatement::dlog(g.exp_g(&Exponent::from(3)));
    let or = SigmaStatement::or(other, stmt.clone());
    let (a, mut st) = sigma_commit(&g, &or, &SigmaWitness::right(w.clone()), &mut rand::thread_rng()).unwrap();
    let e = Challenge::from(5);
    let t = SigmaTranscript::new(a, e.clone(), st.respond(&e).unwrap());
    let (l, r) = t.children().unwrap();
    println!("OR proof verifies: {:?}; split {} xor {} = {}", sigma_verify(&g, &or, &t), l.e, r.e, t.e);
}
