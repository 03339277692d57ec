//! The invariant suite behind `bpkcnm selftest`, one check per acceptance
//! criterion.

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::attack_ddl06::{run_interleaving_attack, Ddl06Variant};
use crate::cnmct::run_honest;
use crate::harness::{adversary_from_id, ExperimentConfig, HonestKeys};
use crate::params::Params;
use crate::primitives::{naor_commit, naor_verify, BitString, Challenge, Elem, Exponent, GroupParams, NaorOpening};
use crate::rng::{derive_rng, derive_u64};
use crate::sigma::{
    sigma_commit, sigma_extract, sigma_simulate, sigma_verify, FixedCoins, SigmaStatement, SigmaTranscript, SigmaWitness,
};
use crate::simulator::{
    classify_sim, r_crs, simulate_full, sk_independence_probe_jobs, CrsVariant, RightClass, SimRun, SkiRelation,
};
use crate::zkaok::commit_then_sigma;

/// Runs a command line in-process and returns its artifact.
pub type Runner = fn(&[&str]) -> Result<String, String>;

#[derive(Clone, Debug)]
pub struct SuiteOptions {
    /// Security parameter for the protocol-level criteria.
    pub n: usize,
    pub seed: u64,
    pub jobs: usize,
    /// Hook for criterion 7: runs a command line and returns its artifact.
    pub rerun: Option<Runner>,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        Self { n: 16, seed: 0, jobs: 1, rerun: None }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CriterionResult {
    pub id: u8,
    pub name: String,
    pub pass: bool,
    pub detail: String,
    #[serde(skip)]
    pub elapsed: Duration,
}

type Check = (u8, &'static str, fn(&SuiteOptions) -> (bool, String));

const CHECKS: [Check; 8] = [
    (1, "cnmct completeness", completeness),
    (2, "ddl06 attack reproduction", attack),
    (3, "sigma exactness (toy group)", sigma_exactness),
    (4, "naor binding at n=4", naor_binding),
    (5, "simulator structure", simulator_structure),
    (6, "secret-key independence", ski_probe),
    (7, "determinism", determinism),
    (8, "commit-then-sigma WI", commit_then_sigma_wi),
];

pub fn run_suite(opts: &SuiteOptions) -> Vec<CriterionResult> {
    CHECKS
        .iter()
        .map(|(id, name, f)| {
            let start = Instant::now();
            let (pass, detail) = f(opts);
            CriterionResult { id: *id, name: (*name).into(), pass, detail, elapsed: start.elapsed() }
        })
        .collect()
}

pub fn render_table(results: &[CriterionResult]) -> String {
    let mut out = String::from("id  result  time      criterion\n");
    for r in results {
        out.push_str(&format!(
            "{:<3} {:<7} {:>7.2}s  {}: {}\n",
            r.id,
            if r.pass { "PASS" } else { "FAIL" },
            r.elapsed.as_secs_f64(),
            r.name,
            r.detail
        ));
    }
    out
}

fn completeness(o: &SuiteOptions) -> (bool, String) {
    let params = Params::toy(o.n);
    let runs = 1000;
    let bad: Vec<u64> = (0..runs)
        .map(|i| derive_u64(o.seed, "selftest/completeness", i))
        .filter(|&s| !run_honest(&params, s).outputs_agree())
        .collect();
    (bad.is_empty(), format!("{}/{runs} honest runs agree (n={})", runs - bad.len() as u64, o.n))
}

fn attack(o: &SuiteOptions) -> (bool, String) {
    let mut broken = 0;
    let mut blocked = 0;
    for i in 0..100 {
        let seed = derive_u64(o.seed, "selftest/attack", i);
        let t = run_interleaving_attack(GroupParams::large(), Ddl06Variant::Plain, seed);
        broken += usize::from(t.success && t.witness_scan.clean && !t.x_hat_in_subgroup);
        blocked += usize::from(!run_interleaving_attack(GroupParams::large(), Ddl06Variant::Patched, seed).success);
    }
    (broken == 100 && blocked == 100, format!("plain broken {broken}/100 with clean scan, patched held {blocked}/100"))
}

fn toy_dlog(g: &GroupParams, x: u64) -> (SigmaStatement, SigmaWitness) {
    let x = Exponent::from(x);
    (SigmaStatement::dlog(g.exp_g(&x)), SigmaWitness::DLog { x })
}

fn sigma_exactness(_: &SuiteOptions) -> (bool, String) {
    let g = GroupParams::toy();
    let (mut accepted, mut shvzk, mut extracted) = (0, 0, 0);
    for x in 0..11u64 {
        let (stmt, w) = toy_dlog(&g, x);
        for k in 0..11u64 {
            let ts: Vec<SigmaTranscript> = (0..11u64)
                .map(|e| {
                    let (a, mut st) = sigma_commit(&g, &stmt, &w, &mut FixedCoins::exponents([k])).expect("valid witness");
                    let e = Challenge::from(e);
                    let z = st.respond(&e).expect("fresh state");
                    SigmaTranscript::new(a, e, z)
                })
                .collect();
            accepted += ts.iter().filter(|t| sigma_verify(&g, &stmt, t).is_ok()).count();
            for (i, t1) in ts.iter().enumerate() {
                for t2 in &ts[i + 1..] {
                    extracted += usize::from(sigma_extract(&g, &stmt, t1, t2).as_ref() == Ok(&w));
                }
            }
        }
        for e in 0..11u64 {
            let e = Challenge::from(e);
            let mut real = BTreeMap::new();
            let mut sim = BTreeMap::new();
            for coin in 0..11u64 {
                let (a, mut st) = sigma_commit(&g, &stmt, &w, &mut FixedCoins::exponents([coin])).expect("valid witness");
                let z = st.respond(&e).expect("fresh state");
                *real.entry(SigmaTranscript::new(a, e.clone(), z)).or_insert(0u32) += 1;
                *sim.entry(sigma_simulate(&g, &stmt, &e, &mut FixedCoins::exponents([coin]))).or_insert(0u32) += 1;
            }
            shvzk += usize::from(real == sim);
        }
    }
    let pass = accepted == 11 * 11 * 11 && shvzk == 11 * 11 && extracted == 11 * 11 * 55;
    (pass, format!("accept {accepted}/1331, shvzk {shvzk}/121, extract {extracted}/6655"))
}

fn naor_binding(_: &SuiteOptions) -> (bool, String) {
    let params = Params::toy(4);
    let prg = params.prg();
    let seeds: Vec<BitString> = (0..16).map(|s| BitString::from_u64(s, 4)).collect();
    let mut equivocating = 0u32;
    for r in 0..1u64 << 12 {
        let receiver = BitString::from_u64(r, 12);
        let opens_both = seeds.iter().any(|s0| {
            let com = naor_commit(&prg, false, s0, &receiver).expect("lengths match");
            seeds.iter().any(|s1| naor_verify(&prg, &com, &NaorOpening { committed_bit: true, seed: s1.clone() }))
        });
        equivocating += u32::from(opens_both);
    }
    (equivocating * 16 <= 4096, format!("{equivocating}/4096 receiver strings equivocate (bound 256/4096)"))
}

fn sk_left_leaks(run: &SimRun, keys: &HonestKeys) -> bool {
    let scan = format!("{}{}", run.output.to_json(), serde_json::to_string(&run.state).expect("state serializes"));
    scan.contains(&keys.left.sk.to_bits().to_hex())
        || scan.contains(&serde_json::to_string(&keys.left.sk.seeds).expect("seeds serialize"))
}

/// The classification the relay adversary must produce. A copied value that
/// happens to equal the session's own draw is reported as fresh.
fn relay_pattern_holds(run: &SimRun, classes: &[RightClass]) -> bool {
    let d = &run.output.draws;
    classes.iter().enumerate().all(|(i, c)| match c {
        RightClass::CopiedFrom { left } => *left == i,
        RightClass::Fresh => d.right[i].r == d.left[i].r,
        _ => false,
    })
}

fn simulator_structure(o: &SuiteOptions) -> (bool, String) {
    let seeds = 200;
    let mut failures: Vec<String> = vec![];
    let mut ambiguous = 0;
    for adv in ["relay", "independent", "null"] {
        let (mut a, mut b, mut c, mut d) = (0, 0, 0, 0);
        for i in 0..seeds {
            let seed = derive_u64(o.seed, "selftest/sim", i);
            let cfg = ExperimentConfig { n: o.n, s: 2, seed, adversary: adv.into(), ..Default::default() };
            let params = match cfg.params() {
                Ok(p) => p,
                Err(e) => return (false, e.to_string()),
            };
            let keys = HonestKeys::generate(&params, seed);
            let run = match adversary_from_id(adv, cfg.s, seed)
                .and_then(|adversary| simulate_full(&cfg, CrsVariant::Identity, &keys.left.pk, adversary, None))
            {
                Ok(r) => r,
                Err(e) => return (false, format!("{adv}: {e}")),
            };
            let out = &run.output;
            let left = &out.transcript.outputs.left;
            a += usize::from(
                left.len() == out.sta_l.len()
                    && left.iter().enumerate().all(|(k, r)| {
                        r == &out.draws.left[k].r && r_crs(&params, out.crs_variant, r, &out.sta_l[k].tau)
                    }),
            );
            let cls = classify_sim(out);
            let pattern = match adv {
                "relay" => {
                    ambiguous += cls.count(|c| *c == RightClass::Fresh);
                    cls.sessions.len() == 2 && relay_pattern_holds(&run, &cls.sessions)
                }
                "independent" => cls.sessions.len() == 2 && cls.all_fresh(),
                _ => cls.sessions.is_empty(),
            };
            b += usize::from(cls.valid && pattern);
            c += usize::from(out.failure.is_none());
            d += usize::from(!sk_left_leaks(&run, &keys));
        }
        let n = seeds as usize;
        if (a, b, c, d) != (n, n, n, n) {
            failures.push(format!("{adv}: draws {a}, pattern {b}, no-failure {c}, no-leak {d} of {n}"));
        }
    }
    if failures.is_empty() {
        (true, format!("relay/independent/null x {seeds} seeds exact ({ambiguous} relay copies coincide with own draw)"))
    } else {
        (false, failures.join("; "))
    }
}

fn ski_probe(o: &SuiteOptions) -> (bool, String) {
    let cfg = ExperimentConfig { n: o.n, s: 2, seed: o.seed, ..Default::default() };
    match sk_independence_probe_jobs(&cfg, CrsVariant::Identity, SkiRelation::SideDetector, 400, o.jobs) {
        Ok(r) => (
            r.difference() <= 0.10,
            format!("freq sk {:.3}, spare {:.3}, |diff| {:.3} (tolerance 0.10)", r.freq_with_sk, r.freq_with_spare, r.difference()),
        ),
        Err(e) => (false, e.to_string()),
    }
}

fn determinism(o: &SuiteOptions) -> (bool, String) {
    let Some(rerun) = o.rerun else {
        return (false, "no command runner supplied".into());
    };
    let n = o.n.to_string();
    let seed = o.seed.to_string();
    let commands: Vec<Vec<&str>> = vec![
        vec!["run", "--adversary", "relay"],
        vec!["run", "--adversary", "independent", "--backend", "sigma"],
        vec!["simulate", "--adversary", "independent"],
        vec!["simulate", "--adversary", "relay", "--crs", "prg-seed"],
        vec!["attack"],
        vec!["attack", "--variant", "patched", "--group", "toy"],
        vec!["probe-ski", "--trials", "20", "--relation", "side-detector"],
    ];
    let mut same = 0;
    let mut diffs = vec![];
    for cmd in &commands {
        let mut argv = cmd.clone();
        if cmd[0] != "attack" {
            argv.extend(["--n", &n]);
        }
        argv.extend(["--seed", &seed]);
        match (rerun(&argv), rerun(&argv)) {
            (Ok(a), Ok(b)) if a == b => same += 1,
            (Ok(_), Ok(_)) => diffs.push(cmd.join(" ")),
            (Err(e), _) | (_, Err(e)) => diffs.push(format!("{}: {e}", cmd.join(" "))),
        }
    }
    let detail = format!("{same}/{} commands byte-identical", commands.len());
    if diffs.is_empty() {
        (true, detail)
    } else {
        (false, format!("{detail}; differing: {}", diffs.join(", ")))
    }
}

fn commit_then_sigma_wi(o: &SuiteOptions) -> (bool, String) {
    let params = Params::toy(4);
    let g = &params.group;
    let mut rng = derive_rng(o.seed, "selftest/wi", 0);
    let receiver = BitString::random(12, &mut rng);
    let seeds: Vec<BitString> = (0..5).map(|_| BitString::random(4, &mut rng)).collect();
    let (x0, x1) = (3u64, 7u64);
    let y = |x: u64| -> Elem { g.exp_g(&Exponent::from(x)) };
    let stmt = SigmaStatement::or(SigmaStatement::dlog(y(x0)), SigmaStatement::dlog(y(x1)));
    let wl = SigmaWitness::left(SigmaWitness::DLog { x: Exponent::from(x0) });
    let wr = SigmaWitness::right(SigmaWitness::DLog { x: Exponent::from(x1) });
    let multiset = |w: &SigmaWitness, e: u64| {
        let mut out = BTreeMap::new();
        for k in 0..11u64 {
            for c in 0..8u64 {
                for zs in 0..11u64 {
                    let p = commit_then_sigma(
                        &params,
                        &receiver,
                        &stmt,
                        w,
                        &seeds,
                        &Challenge::from(e),
                        &mut FixedCoins::new([k, zs], [c]),
                    )
                    .expect("valid witness");
                    *out.entry(p.transcript).or_insert(0u32) += 1;
                }
            }
        }
        out
    };
    let equal = (0..8u64).filter(|&e| multiset(&wl, e) == multiset(&wr, e)).count();
    (equal == 8, format!("{equal}/8 challenges give equal transcript multisets"))
}
