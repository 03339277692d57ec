use super::*;
use crate::bpk::{gen_right_key, Role, HONEST_LEFT_ID, HONEST_RIGHT_ID};
use crate::cnmct::{Payload, Side, Stage};
use crate::params::AokBackend;
use crate::rng::derive_rng;

fn config(adversary: &str, s: usize, seed: u64) -> ExperimentConfig {
    ExperimentConfig { n: 8, s, seed, adversary: adversary.into(), ..Default::default() }
}

#[test]
fn relay_copies_every_left_output() {
    let trace = run_experiment(&config("relay", 3, 1)).unwrap();
    assert_eq!(trace.end, LoopEnd::EndAttack);
    assert_eq!(trace.illegal_actions, 0);
    assert_eq!(trace.outputs.left.len(), 3);
    assert_eq!(trace.outputs.left, trace.outputs.right);
    assert!(trace.sessions.iter().all(|r| r.is_done()));
}

#[test]
fn interleaver_copies_along_its_pairing() {
    let trace = run_experiment(&config("interleaver", 3, 2)).unwrap();
    assert_eq!(trace.illegal_actions, 0);
    for i in 0..3 {
        assert_eq!(trace.outputs.right[(i + 1) % 3], trace.outputs.left[i]);
    }
}

#[test]
fn null_adversary_leaves_no_sessions() {
    let trace = run_experiment(&config("null", 2, 0)).unwrap();
    assert!(trace.sessions.is_empty());
    assert!(trace.view.events.is_empty());
    assert_eq!(trace.actions, vec![Action::EndAttack]);
}

#[test]
fn independent_adversary_completes_all_sessions() {
    let trace = run_experiment(&config("independent", 2, 3)).unwrap();
    assert_eq!(trace.sessions.len(), 4);
    assert!(trace.sessions.iter().all(|r| r.is_done()), "{:?}", trace.sessions.iter().map(|r| &r.abort_reason).collect::<Vec<_>>());
    assert_eq!(trace.public_file.adversary_count(), 2);
    assert!(trace.ledger.iter().any(|row| row.id.starts_with("a:L0:S1")));
    assert!(trace.ledger.iter().any(|row| row.id.starts_with("a:R0:S5")));
}

#[test]
fn independent_needs_two_sessions() {
    assert!(run_experiment(&config("independent", 1, 0)).is_err());
}

#[test]
fn sigma_backend_relay_and_independent() {
    for adv in ["relay", "independent"] {
        let cfg = ExperimentConfig { backend: AokBackend::Sigma, ..config(adv, 2, 4) };
        let trace = run_experiment(&cfg).unwrap();
        assert!(trace.sessions.iter().all(|r| r.is_done()), "{adv}");
    }
}

#[test]
fn identical_configs_give_identical_traces() {
    for adv in ["relay", "independent", "interleaver"] {
        let a = run_experiment(&config(adv, 2, 9)).unwrap().to_json();
        let b = run_experiment(&config(adv, 2, 9)).unwrap().to_json();
        assert_eq!(a, b);
    }
    let c = run_experiment(&config("relay", 2, 10)).unwrap().to_json();
    assert_ne!(run_experiment(&config("relay", 2, 9)).unwrap().to_json(), c);
}

#[test]
fn view_starts_with_the_preamble_and_grows_by_prefix() {
    let trace = run_experiment(&config("relay", 2, 5)).unwrap();
    let v0 = adversary_view(&trace, 0).unwrap();
    assert!(v0.events.is_empty());
    assert_eq!(v0.preamble.n, 8);
    assert_eq!(v0.preamble.file.len(), 2);
    assert_eq!(v0.preamble.pk_left, trace.public_file.get(HONEST_LEFT_ID).unwrap().key);
    for k in 0..trace.view.events.len() {
        let a = adversary_view(&trace, k).unwrap();
        let b = adversary_view(&trace, k + 1).unwrap();
        assert_eq!(&b.events[..k], &a.events[..]);
    }
    assert!(adversary_view(&trace, trace.view.events.len() + 1).is_err());
}

#[test]
fn honest_secret_keys_never_reach_the_view() {
    for seed in 0..4 {
        let cfg = config("independent", 2, seed);
        let params = cfg.params().unwrap();
        let keys = HonestKeys::generate(&params, seed);
        let mut adv = adversary_from_id("independent", 2, seed).unwrap();
        let trace = run_experiment_with_keys(&cfg, &keys, adv.as_mut()).unwrap();
        let view = serde_json::to_string(&trace.view).unwrap();
        let sk_l = keys.left.sk.to_bits().to_hex();
        assert!(!view.contains(&sk_l));
        assert!(!view.contains(&serde_json::to_string(&keys.left.sk).unwrap()));
        let sk_r = params.sk_to_bits(&keys.right.sk.s).unwrap().concat(&keys.left.sk.sigma).to_hex();
        assert!(!view.contains(&sk_r));
    }
}

#[test]
fn illegal_actions_are_recorded_and_ignored() {
    let script = Script {
        keys: vec![],
        actions: vec![
            Action::DeliverLeft { session: 0, msg: Payload::Stage3 { r_r: crate::primitives::BitString::zeros(8) } },
            Action::StartLeft { peer: HONEST_LEFT_ID },
            Action::StartRight { peer: 7 },
            Action::StartLeft { peer: HONEST_RIGHT_ID },
            Action::StartLeft { peer: HONEST_RIGHT_ID },
            Action::EndAttack,
        ],
    };
    let cfg = config("scripted", 1, 0);
    let trace = run_experiment_with(&cfg, &mut ScriptedAdversary::new(script)).unwrap();
    assert_eq!(trace.illegal_actions, 4);
    assert_eq!(trace.left_records().count(), 1);
    assert_eq!(trace.right_records().count(), 0);
    let illegal: Vec<usize> = trace
        .view
        .events
        .iter()
        .filter_map(|e| match e {
            Event::Illegal { action, .. } => Some(*action),
            _ => None,
        })
        .collect();
    assert_eq!(illegal, vec![0, 1, 2, 4]);
    assert_eq!(trace.left_records().next().unwrap().stage_cursor, Stage::Aborted);
}

#[test]
fn replaying_recorded_actions_reproduces_the_trace() {
    let trace = run_experiment(&config("independent", 2, 6)).unwrap();
    let keys = trace
        .public_file
        .entries()
        .iter()
        .skip(2)
        .map(|e| ScriptKey { role: e.role, key: e.key.clone() })
        .collect();
    let script = Script { keys, actions: trace.actions.clone() };
    let replay = run_experiment_with(&trace.config, &mut ScriptedAdversary::new(script)).unwrap();
    assert_eq!(replay.sessions, trace.sessions);
    assert_eq!(replay.view, trace.view);
}

#[test]
fn session_logs_do_not_depend_on_interleaving() {
    // Two relayed pairs; run them one after the other versus interleaved.
    let cfg = config("relay", 2, 8);
    let base = run_experiment(&cfg).unwrap();
    let mut sequential = vec![];
    let mut by_pair: Vec<Vec<CnmAction>> = vec![vec![], vec![]];
    for a in &base.actions {
        match a {
            Action::DeliverLeft { session, .. } | Action::DeliverRight { session, .. } => by_pair[*session].push(a.clone()),
            Action::EndAttack => {}
            start => sequential.push(start.clone()),
        }
    }
    sequential.extend(by_pair.concat());
    let script = Script { keys: vec![], actions: sequential };
    let reordered = run_experiment_with(&cfg, &mut ScriptedAdversary::new(script)).unwrap();
    assert_eq!(reordered.sessions, base.sessions);
    assert_ne!(reordered.actions, base.actions);
}

#[test]
fn session_budget_is_enforced() {
    let script = Script {
        keys: vec![],
        actions: (0..4).map(|_| Action::StartRight { peer: HONEST_LEFT_ID }).collect(),
    };
    let trace = run_experiment_with(&config("scripted", 2, 0), &mut ScriptedAdversary::new(script)).unwrap();
    assert_eq!(trace.right_records().count(), 2);
    assert_eq!(trace.illegal_actions, 2);
}

#[test]
fn action_budget_stops_the_loop() {
    let cfg = ExperimentConfig { max_actions: 3, ..config("relay", 2, 0) };
    let trace = run_experiment(&cfg).unwrap();
    assert_eq!(trace.end, LoopEnd::Budget);
    assert_eq!(trace.actions.len(), 3);
}

#[test]
fn adversary_cannot_forge_a_notification() {
    // A right key registered by the adversary, a Stage-1 message carrying a
    // made-up accepted notification.
    let params = crate::params::Params::toy(8);
    let rk = gen_right_key(&params, &mut derive_rng(0, "x", 0));
    let keys = HonestKeys::generate(&params, 0);
    let stmt = crate::zkaok::AokStatement::Sk {
        y0: rk.pk.y0.clone(),
        y1: rk.pk.y1.clone(),
        receiver_string: keys.left.pk.receiver_string.clone(),
        c_sk: vec![],
    };
    let tag = crate::zkaok::Tag::right(&params, &keys.left.pk.to_bytes(), &rk.pk.y0, &rk.pk.y1);
    let forged = crate::zkaok::AokMsg::IdealRef { entry: "h:R0:S1".into(), tag, statement: stmt, verdict: true };
    let script = Script {
        keys: vec![ScriptKey { role: Role::R, key: rk.pk.to_bytes() }],
        actions: vec![
            Action::StartLeft { peer: 2 },
            Action::DeliverLeft { session: 0, msg: Payload::Stage1 { c_sk: vec![], aok: forged } },
        ],
    };
    let trace = run_experiment_with(&config("scripted", 1, 0), &mut ScriptedAdversary::new(script)).unwrap();
    let rec = trace.left_records().next().unwrap();
    assert_eq!(rec.stage_cursor, Stage::Aborted);
    assert!(!trace.view.events.iter().any(|e| matches!(e, Event::Outgoing { side: Side::Left, .. })));
}

#[test]
fn config_json_defaults() {
    let cfg: ExperimentConfig = serde_json::from_str(r#"{"s": 3, "adversary": "null"}"#).unwrap();
    assert_eq!(cfg.n, 16);
    assert_eq!(cfg.s, 3);
    assert!(serde_json::from_str::<ExperimentConfig>(r#"{"bogus": 1}"#).is_err());
    assert!(ExperimentConfig { s: 0, ..Default::default() }.params().is_err());
}
