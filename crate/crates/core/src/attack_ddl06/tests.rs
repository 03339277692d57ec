use super::*;
use crate::primitives::{Challenge, GroupParams};
use crate::sigma::{sigma_verify, SigmaTranscript};

#[test]
fn challenge_split_arithmetic() {
    let e = Challenge::from(0x5a).xor(&Challenge::from(0x13)).xor(&Challenge::from(0x2f));
    assert_eq!(e, Challenge::from(0x66));
}

#[test]
fn non_member_is_outside_the_subgroup() {
    for g in [GroupParams::toy(), GroupParams::large()] {
        let mut rng = crate::rng::derive_rng(0, "t", 0);
        for _ in 0..20 {
            let x = non_member(&g, &mut rng);
            assert!(g.in_zp_star(&x) && !g.is_member(&x));
        }
    }
}

#[test]
fn honest_prover_is_accepted_in_both_variants() {
    for variant in [Ddl06Variant::Plain, Ddl06Variant::Patched] {
        for seed in 0..10 {
            let g = GroupParams::toy();
            let w = crate::primitives::Exponent::from(seed % 11);
            assert!(run_honest_session(g, variant, &w, seed), "{variant:?} seed {seed}");
        }
    }
    assert!(run_honest_session(GroupParams::large(), Ddl06Variant::Plain, &7u64.into(), 1));
}

#[test]
fn attack_succeeds_on_the_plain_protocol() {
    for seed in 0..20 {
        let t = run_interleaving_attack(GroupParams::toy(), Ddl06Variant::Plain, seed);
        assert!(t.success, "seed {seed}: {:?}", t.sessions.get(1).and_then(|s| s.abort_reason.clone()));
        assert!(!t.x_hat_in_subgroup);
        let c = t.challenges.as_ref().unwrap();
        assert_eq!(c.e_v_prime, c.e_p.xor(&c.e_x_hat).xor(&c.e_c));
        assert_eq!(t.steps.iter().map(|s| s.step).collect::<Vec<_>>(), vec![1, 2, 3, 4, 5, 6]);
    }
}

#[test]
fn accepted_transcript_carries_the_verifier_answer_in_the_middle() {
    let t = run_interleaving_attack(GroupParams::large(), Ddl06Variant::Plain, 3);
    assert!(t.success);
    let s2 = &t.sessions[1];
    let [_, mid, _] = s2.phase3.as_ref().unwrap().split_or3().unwrap();
    let s1 = t.sessions[0].phase1.as_ref().unwrap();
    assert_eq!(&mid, s1);
    assert!(sigma_verify(&t.group, &verifier_statement(&t.verifier_pk), &mid).is_ok());
}

#[test]
fn witness_scan_is_clean_on_the_large_group() {
    for seed in 0..5 {
        let t = run_interleaving_attack(GroupParams::large(), Ddl06Variant::Plain, seed);
        assert!(t.success);
        assert!(t.witness_scan.clean, "{:?}", t.witness_scan.findings);
        assert!(t.witness_scan.values_checked > 10);
    }
}

#[test]
fn scan_flags_a_planted_secret() {
    let g = GroupParams::large();
    let key = Ddl06VerifierKey::generate(&g, &mut crate::rng::derive_rng(1, "k", 0));
    let x = non_member(&g, &mut crate::rng::derive_rng(1, "x", 0));
    let snap = serde_json::json!({ "loot": key.sk.value().to_string() });
    let scan = scan_for_witnesses(&g, &[snap], &key, &x);
    assert!(!scan.clean);
    assert_eq!(scan.findings.len(), 1);
}

#[test]
fn patched_variant_defeats_the_attack() {
    for seed in 0..20 {
        let t = run_interleaving_attack(GroupParams::toy(), Ddl06Variant::Patched, seed);
        assert!(!t.success);
        assert_eq!(t.sessions[1].phase, Phase::Aborted);
    }
}

#[test]
fn garbage_phase3_response_is_rejected() {
    let t = run_interleaving_attack(GroupParams::toy(), Ddl06Variant::Plain, 0);
    let good = t.sessions[1].phase3.clone().unwrap();
    let g = &t.group;
    let (c, vk) = (t.sessions[1].c.clone().unwrap(), t.sessions[1].vk.clone().unwrap());
    let stmt = phase3_statement(g, &t.verifier_pk, &t.x_hat, &c, &vk);
    assert!(sigma_verify(g, &stmt, &good).is_ok());
    let other_e = SigmaTranscript { e: good.e.xor(&Challenge::from(1)), ..good };
    assert!(sigma_verify(g, &stmt, &other_e).is_err());
}

#[test]
fn attack_trace_is_deterministic() {
    let a = run_interleaving_attack(GroupParams::toy(), Ddl06Variant::Plain, 9).to_json();
    let b = run_interleaving_attack(GroupParams::toy(), Ddl06Variant::Plain, 9).to_json();
    assert_eq!(a, b);
    assert!(a.contains("hash binding"));
}
