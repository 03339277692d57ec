use std::collections::BTreeSet;

use super::*;
use crate::cnmct::{Payload, Stage};
use crate::harness::{adversary_from_id, run_experiment_with_keys, ExperimentConfig, HonestKeys};
use crate::params::{AokBackend, Params};
use crate::primitives::BitString;
use crate::rng::derive_rng;

fn config(adversary: &str, s: usize, seed: u64) -> ExperimentConfig {
    ExperimentConfig { n: 8, s, seed, adversary: adversary.into(), ..Default::default() }
}

fn run(cfg: &ExperimentConfig) -> (SimRun, HonestKeys) {
    let params = cfg.params().unwrap();
    let keys = HonestKeys::generate(&params, cfg.seed);
    let adv = adversary_from_id(&cfg.adversary, cfg.s, cfg.seed).unwrap();
    (simulate_full(cfg, CrsVariant::Identity, &keys.left.pk, adv, None).unwrap(), keys)
}

fn left_outputs_are_the_draws(out: &SimOutput, params: &Params) -> bool {
    out.transcript.outputs.left.iter().enumerate().all(|(i, r)| {
        r == &out.draws.left[i].r && r_crs(params, out.crs_variant, r, &out.sta_l[i].tau)
    })
}

#[test]
fn identity_draws_satisfy_r_crs() {
    let params = Params::toy(8);
    let d = CrsDraws::sample(&params, CrsVariant::Identity, 5, &mut derive_rng(0, "d", 0));
    assert!(d.all_valid(&params));
    assert!(d.left.iter().all(|p| p.r == p.tau));
}

#[test]
fn prg_seed_draws_cover_the_prg_image() {
    let params = Params::toy(4);
    let image: BTreeSet<_> = (0..16u64).map(|t| params.prg().expand(&BitString::from_u64(t, 4), 4)).collect();
    let d = CrsDraws::sample(&params, CrsVariant::PrgSeed, 64, &mut derive_rng(1, "d", 0));
    assert!(d.all_valid(&params));
    assert!(d.left.iter().all(|p| image.contains(&p.r)));
    assert!(!r_crs(&params, CrsVariant::PrgSeed, &BitString::zeros(4), &BitString::zeros(3)));
}

#[test]
fn relay_takes_one_repetition_and_copies_pairwise() {
    let cfg = config("relay", 3, 2);
    let (sim, _) = run(&cfg);
    let out = &sim.output;
    assert_eq!(out.failure, None);
    assert_eq!(out.repetitions, 1);
    assert!(left_outputs_are_the_draws(out, &cfg.params().unwrap()));
    let c = classify_sim(out);
    assert!(c.valid);
    for i in 0..3 {
        assert_eq!(c.sessions[i], RightClass::CopiedFrom { left: i });
        let t = out.sta_r[i].as_ref().unwrap();
        assert_eq!((t.from, t.index), (crate::cnmct::Side::Left, i));
        assert_eq!(t.tau, out.sta_l[i].tau);
    }
}

#[test]
fn interleaver_copies_along_its_pairing() {
    let (sim, _) = run(&config("interleaver", 3, 4));
    let c = classify_sim(&sim.output);
    assert!(c.valid);
    for i in 0..3 {
        assert_eq!(c.sessions[(i + 1) % 3], RightClass::CopiedFrom { left: i });
    }
}

#[test]
fn null_adversary_gives_an_empty_transcript() {
    let (sim, _) = run(&config("null", 2, 0));
    assert_eq!(sim.output.repetitions, 1);
    assert!(sim.output.transcript.sessions.is_empty());
    assert!(sim.output.sta_l.is_empty() && sim.output.sta_r.is_empty());
    assert!(classify_sim(&sim.output).valid);
}

#[test]
fn independent_adversary_is_all_fresh_after_three_repetitions() {
    for seed in 0..5 {
        let cfg = config("independent", 2, seed);
        let (sim, _) = run(&cfg);
        let out = &sim.output;
        assert_eq!(out.failure, None, "seed {seed}");
        assert_eq!(out.repetitions, 3);
        assert_eq!(sim.state.covered.len(), 3);
        assert!(left_outputs_are_the_draws(out, &cfg.params().unwrap()));
        let c = classify_sim(out);
        assert!(c.valid && c.all_fresh(), "{c:?}");
        assert!(out.transcript.sessions.iter().all(|r| r.is_done()));
    }
}

#[test]
fn one_right_key_takes_two_repetitions() {
    let cfg = config("one-right-key", 2, 7);
    let (sim, _) = run(&cfg);
    assert_eq!(sim.output.repetitions, 2);
    assert_eq!(sim.state.covered.len(), 2);
    let adv_key = &sim.output.transcript.public_file.get(2).unwrap().key;
    assert!(sim.state.covered.right_secret(adv_key).is_some());
    assert!(sim.output.transcript.left_records().all(|r| r.is_done()));
}

#[test]
fn sigma_backend_extracts_by_rewinding() {
    let cfg = ExperimentConfig { backend: AokBackend::Sigma, ..config("one-right-key", 2, 3) };
    let (sim, _) = run(&cfg);
    assert_eq!(sim.output.failure, None);
    assert_eq!(sim.output.repetitions, 2);
    let cfg = ExperimentConfig { backend: AokBackend::Sigma, ..config("independent", 2, 3) };
    let (sim, _) = run(&cfg);
    assert_eq!(sim.output.failure, None);
    assert!(classify_sim(&sim.output).all_fresh());
}

#[test]
fn steered_right_sessions_land_on_their_draws() {
    let (sim, _) = run(&config("independent", 2, 11));
    for (i, r) in sim.output.transcript.outputs.right.iter().enumerate() {
        assert_eq!(r, &sim.output.draws.right[i].r);
        assert_eq!(sim.output.sta_r[i].as_ref().unwrap().tau, sim.output.draws.right[i].tau);
    }
}

#[test]
fn simulator_state_never_holds_sk_left() {
    for adv in ["relay", "independent", "interleaver"] {
        let (sim, keys) = run(&config(adv, 2, 5));
        let scan = format!("{}{}", sim.output.to_json(), serde_json::to_string(&sim.state).unwrap());
        assert!(!scan.contains(&keys.left.sk.to_bits().to_hex()), "{adv}");
        assert!(!scan.contains(&serde_json::to_string(&keys.left.sk.seeds).unwrap()), "{adv}");
    }
}

#[test]
fn simulation_is_deterministic() {
    for adv in ["relay", "independent"] {
        let a = run(&config(adv, 2, 8)).0.output.to_json();
        let b = run(&config(adv, 2, 8)).0.output.to_json();
        assert_eq!(a, b);
    }
}

#[test]
fn duplicated_copy_target_is_invalid() {
    let (sim, _) = run(&config("relay", 2, 1));
    let mut out = sim.output.clone();
    let target = out.draws.left[1].r.clone();
    for rec in out.transcript.sessions.iter_mut().filter(|r| r.side == crate::cnmct::Side::Right) {
        rec.output.as_mut().unwrap().r = target.clone();
    }
    if out.draws.left[0].r != target {
        let c = classify_sim(&out);
        assert!(!c.valid);
        assert_eq!(c.duplicated, vec![1]);
    }
    out.transcript.sessions.last_mut().unwrap().output.as_mut().unwrap().r = BitString::from_u64(0, 7);
    assert_eq!(classify_sim(&out).violations, vec![1]);
}

#[test]
fn real_trace_classification() {
    let cfg = config("relay", 3, 0);
    let params = cfg.params().unwrap();
    let keys = HonestKeys::generate(&params, 0);
    let mut adv = adversary_from_id("relay", 3, 0).unwrap();
    let trace = run_experiment_with_keys(&cfg, &keys, adv.as_mut()).unwrap();
    let c = classify_trace(&trace);
    assert!(c.valid);
    assert_eq!(c.count(|c| matches!(c, RightClass::CopiedFrom { .. })), 3);
    let mut adv = adversary_from_id("independent", 2, 0).unwrap();
    let trace = run_experiment_with_keys(&config("independent", 2, 0), &keys, adv.as_mut()).unwrap();
    assert!(classify_trace(&trace).all_fresh());
}

#[test]
fn probe_const_true_and_sk_in_sta() {
    let cfg = config("relay", 2, 0);
    let r = sk_independence_probe(&cfg, CrsVariant::Identity, SkiRelation::ConstTrue, 10).unwrap();
    assert_eq!((r.freq_with_sk, r.freq_with_spare), (1.0, 1.0));
    let cfg = ExperimentConfig { n: 16, ..cfg };
    let r = sk_independence_probe(&cfg, CrsVariant::Identity, SkiRelation::SkInSta, 20).unwrap();
    assert_eq!((r.hits_with_sk, r.hits_with_spare), (0, 0));
}

#[test]
fn relation_ids_parse() {
    for id in ["const-true", "sk-in-sta", "side-detector"] {
        let r: SkiRelation = id.parse().unwrap();
        assert_eq!(serde_json::to_string(&r).unwrap(), format!("\"{id}\""));
    }
    assert!("nope".parse::<SkiRelation>().is_err());
}

#[test]
fn aborted_left_sessions_still_output_their_draw() {
    use crate::harness::{Action, Script, ScriptedAdversary};
    let cfg = config("scripted", 2, 0);
    let params = cfg.params().unwrap();
    let keys = HonestKeys::generate(&params, 0);
    let script = Script {
        keys: vec![],
        actions: vec![
            Action::StartLeft { peer: 1 },
            Action::DeliverLeft { session: 0, msg: Payload::Stage4 { r: BitString::zeros(8) } },
        ],
    };
    let out = simulate(&cfg, CrsVariant::Identity, &keys.left.pk, Box::new(ScriptedAdversary::new(script))).unwrap();
    let rec = out.transcript.left_records().next().unwrap();
    assert_eq!(rec.stage_cursor, Stage::Aborted);
    assert_eq!(&out.transcript.outputs.left[0], &out.draws.left[0].r);
}

/// At n = 4 with one relayed pair: over every value of the left draw the
/// simulated Stage-4 message takes each 4-bit value once, as the real one
/// does over every value of `r_r`.
#[test]
fn substituted_stage4_is_uniform_at_n4() {
    let cfg = ExperimentConfig { n: 4, ..config("relay", 1, 0) };
    let params = cfg.params().unwrap();
    let keys = HonestKeys::generate(&params, 0);
    let mut sim_values = BTreeSet::new();
    for v in 0..16u64 {
        let pair = CrsPair { r: BitString::from_u64(v, 4), tau: BitString::from_u64(v, 4) };
        let draws = CrsDraws { variant: CrsVariant::Identity, left: vec![pair.clone()], right: vec![pair] };
        let adv = adversary_from_id("relay", 1, 0).unwrap();
        let run = simulate_full(&cfg, CrsVariant::Identity, &keys.left.pk, adv, Some(draws)).unwrap();
        let rec = run.output.transcript.left_records().next().unwrap();
        sim_values.insert(rec.find(|p| match p {
            Payload::Stage4 { r } => Some(r.clone()),
            _ => None,
        }).unwrap());
    }
    assert_eq!(sim_values.len(), 16);
    let prf = params.prf();
    let r_prime_l = BitString::from_u64(5, 4);
    let real: BTreeSet<_> = (0..16u64)
        .map(|v| prf.eval(&keys.left.sk.sigma, &r_prime_l).unwrap().xor(&BitString::from_u64(v, 4)).unwrap())
        .collect();
    assert_eq!(real, sim_values);
}
