use super::*;
use crate::bpk::{gen_left_key, gen_right_key_with_spare};
use crate::params::AokBackend;
use crate::primitives::Exponent;
use crate::rng::derive_rng;
use crate::zkaok::{AokStatement, IdealLedger};

type Pair = (LeftSession, RightSession, crate::bpk::LeftKeyPair, crate::bpk::RightKeyPair, Exponent);

fn pair(params: &Params, seed: u64, left_mode: Option<LeftMode>, right_mode: RightMode) -> Pair {
    let lk = gen_left_key(params, &mut derive_rng(seed, "l", 0));
    let (rk, spare) = gen_right_key_with_spare(params, &mut derive_rng(seed, "r", 0));
    let mode = left_mode.unwrap_or(LeftMode::Honest { sk: lk.sk.clone() });
    let left = LeftSession::new(params.clone(), lk.pk.clone(), 0, 1, &rk.pk.to_bytes(), mode, derive_rng(seed, "ls", 0));
    let right = RightSession::new(params.clone(), rk.clone(), 0, 0, &lk.pk.to_bytes(), right_mode, derive_rng(seed, "rs", 0));
    (left, right, lk, rk, spare)
}

fn pump(left: &mut LeftSession, right: &mut RightSession, ledger: &mut IdealLedger, params: &Params) {
    let mut chan = LedgerChannel { params, ledger };
    let mut to_left: Vec<Payload> = right.start(&mut chan);
    let mut to_right: Vec<Payload> = vec![];
    while !to_left.is_empty() || !to_right.is_empty() {
        for m in std::mem::take(&mut to_left) {
            to_right.extend(left.deliver(m, &mut chan).unwrap());
        }
        for m in std::mem::take(&mut to_right) {
            to_left.extend(right.deliver(m, &mut chan).unwrap());
        }
    }
}

#[test]
fn honest_runs_complete_with_equal_outputs() {
    let params = Params::toy(8);
    for seed in 0..20 {
        let run = run_honest(&params, seed);
        assert!(run.outputs_agree(), "seed {seed}");
        assert_eq!(run.left.output.as_ref().unwrap().determined_by, Determination::Both);
        assert!(run.left.stages_monotone() && run.right.stages_monotone());
    }
}

#[test]
fn output_is_prf_xor_r_r() {
    let params = Params::toy(8);
    let run = run_honest(&params, 7);
    let r_prime_l = run.left.find(|p| match p {
        Payload::Stage2 { r_prime_l } => Some(r_prime_l.clone()),
        _ => None,
    });
    let r_r = run.left.find(|p| match p {
        Payload::Stage3 { r_r } => Some(r_r.clone()),
        _ => None,
    });
    let prf = params.prf().eval(&run.left_keys.sk.sigma, &r_prime_l.unwrap()).unwrap();
    assert_eq!(run.left.output_bits().unwrap(), &prf.xor(&r_r.unwrap()).unwrap());
}

#[test]
fn zero_r_r_gives_the_prf_value() {
    let params = Params::toy(6);
    let (mut left, _, lk, _, _) = pair(&params, 3, None, RightMode::Honest);
    let rk2 = crate::bpk::gen_right_key(&params, &mut derive_rng(3, "r", 0));
    let mut right = RightSession::new(params.clone(), rk2, 0, 0, &lk.pk.to_bytes(), RightMode::Honest, derive_rng(3, "rs", 0));
    let mut ledger = IdealLedger::new();
    let mut chan = LedgerChannel { params: &params, ledger: &mut ledger };
    let s1 = right.start(&mut chan);
    let s2 = left.deliver(s1[0].clone(), &mut chan).unwrap();
    let Payload::Stage2 { r_prime_l } = &s2[0] else { panic!() };
    let out = left.deliver(Payload::Stage3 { r_r: BitString::zeros(6) }, &mut chan).unwrap();
    let Payload::Stage4 { r } = &out[0] else { panic!() };
    assert_eq!(r, &params.prf().eval(&lk.sk.sigma, r_prime_l).unwrap());
}

#[test]
fn silent_peer_leaves_a_survivor_output() {
    let params = Params::toy(8);
    let (mut left, mut right, ..) = pair(&params, 1, None, RightMode::Honest);
    let mut ledger = IdealLedger::new();
    let mut chan = LedgerChannel { params: &params, ledger: &mut ledger };
    let s1 = right.start(&mut chan);
    left.deliver(s1[0].clone(), &mut chan).unwrap();
    left.set_survivor_output(BitString::from_u64(0xab, 8));
    left.finalize();
    right.finalize();
    assert_eq!(left.record().stage_cursor, Stage::Aborted);
    assert_eq!(left.record().output.as_ref().unwrap().r, BitString::from_u64(0xab, 8));
    assert_eq!(right.record().output.as_ref().unwrap().determined_by, Determination::Survivor);
    assert!(left.deliver(Payload::Stage3 { r_r: BitString::zeros(8) }, &mut chan).is_err());
}

#[test]
fn stage1_under_a_foreign_tag_is_rejected() {
    let params = Params::toy(8);
    let (mut left, mut right, ..) = pair(&params, 2, None, RightMode::Honest);
    let other = gen_left_key(&params, &mut derive_rng(99, "l", 0));
    let mut ledger = IdealLedger::new();
    let mut chan = LedgerChannel { params: &params, ledger: &mut ledger };
    right.start(&mut chan);
    let mut relabelled = RightSession::new(
        params.clone(),
        gen_right_key_with_spare(&params, &mut derive_rng(2, "r", 0)).0,
        1,
        0,
        &other.pk.to_bytes(),
        RightMode::Honest,
        derive_rng(2, "rs2", 0),
    );
    let foreign = relabelled.start(&mut chan);
    // Same right key, but the proof was made for a different left key.
    let out = left.deliver(foreign[0].clone(), &mut chan).unwrap();
    assert!(out.is_empty());
    assert_eq!(left.record().stage_cursor, Stage::Aborted);
}

#[test]
fn out_of_order_messages_abort() {
    let params = Params::toy(8);
    let (mut left, ..) = pair(&params, 4, None, RightMode::Honest);
    let mut ledger = IdealLedger::new();
    let mut chan = LedgerChannel { params: &params, ledger: &mut ledger };
    left.deliver(Payload::Stage3 { r_r: BitString::zeros(8) }, &mut chan).unwrap();
    assert_eq!(left.record().stage_cursor, Stage::Aborted);
}

#[test]
fn preset_mode_proves_through_the_key_branch() {
    let params = Params::toy(8);
    let target = BitString::from_u64(0x3c, 8);
    let lk = gen_left_key(&params, &mut derive_rng(5, "l", 0));
    let (rk, _) = gen_right_key_with_spare(&params, &mut derive_rng(5, "r", 0));
    let mode = LeftMode::Preset { r: target.clone(), peer_sk: Some(rk.sk.s.clone()) };
    let mut left = LeftSession::new(params.clone(), lk.pk.clone(), 0, 1, &rk.pk.to_bytes(), mode, derive_rng(5, "ls", 0));
    let mut right = RightSession::new(params.clone(), rk, 0, 0, &lk.pk.to_bytes(), RightMode::Honest, derive_rng(5, "rs", 0));
    let mut ledger = IdealLedger::new();
    pump(&mut left, &mut right, &mut ledger, &params);
    assert!(right.record().is_done());
    assert_eq!(right.record().output_bits(), Some(&target));
}

#[test]
fn steered_right_lands_on_target() {
    let params = Params::toy(8);
    let target = BitString::from_u64(0x81, 8);
    let lk = gen_left_key(&params, &mut derive_rng(6, "l", 0));
    let (rk, _) = gen_right_key_with_spare(&params, &mut derive_rng(6, "r", 0));
    let mut left = LeftSession::new(params.clone(), lk.pk.clone(), 0, 1, &rk.pk.to_bytes(), LeftMode::Honest { sk: lk.sk.clone() }, derive_rng(6, "ls", 0));
    let mode = RightMode::Steered { peer_sigma: lk.sk.sigma.clone(), target: target.clone() };
    let mut right = RightSession::new(params.clone(), rk, 0, 0, &lk.pk.to_bytes(), mode, derive_rng(6, "rs", 0));
    let mut ledger = IdealLedger::new();
    pump(&mut left, &mut right, &mut ledger, &params);
    assert_eq!(left.record().output_bits(), Some(&target));
    assert_eq!(right.record().output_bits(), Some(&target));
}

#[test]
fn sigma_backend_completes() {
    let params = Params::toy(8).with_aok(AokBackend::Sigma);
    for seed in 0..5 {
        let run = run_honest(&params, seed);
        assert!(run.outputs_agree(), "seed {seed}");
        assert!(run.left.messages.iter().any(|m| matches!(m.payload, Payload::Stage1Challenge { .. })));
        assert!(matches!(
            run.ledger.get("h:L0:S5").map(|e| &e.statement),
            Some(AokStatement::Crs { .. })
        ));
    }
}

#[test]
fn derived_tags_match_the_recorded_ones() {
    let params = Params::toy(8);
    let run = run_honest(&params, 11);
    let pk_l = run.left_keys.pk.to_bytes();
    assert_eq!(Some(derive_tag(&params, &run.left, &pk_l, &run.right_keys.pk).unwrap()), run.left.tag);
    assert_eq!(Some(derive_tag(&params, &run.right, &pk_l, &run.right_keys.pk).unwrap()), run.right.tag);
    assert_ne!(run.left.tag, run.right.tag);
}

#[test]
fn payload_json_round_trips() {
    let run = run_honest(&Params::toy(4), 0);
    for m in &run.left.messages {
        let s = serde_json::to_string(&m.payload).unwrap();
        assert_eq!(serde_json::from_str::<Payload>(&s).unwrap(), m.payload);
    }
}
