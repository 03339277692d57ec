use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::crs::CrsVariant;
use super::simulate::{simulate_full, transcript_right_key, SimOutput};
use crate::error::{Error, Result};
use crate::harness::{adversary_from_id, ExperimentConfig, HonestKeys};
use crate::params::Params;
use crate::primitives::Exponent;
use crate::rng::derive_u64;

/// Predicates `R(sk, str, sta)` for the secret-key independence probe.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SkiRelation {
    ConstTrue,
    /// The n-bit encoding of `sk` occurs in the serialized trapdoors.
    SkInSta,
    /// `g^sk = y0` for the `PK_R` in the transcript.
    SideDetector,
}

impl FromStr for SkiRelation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "const-true" => Ok(SkiRelation::ConstTrue),
            "sk-in-sta" => Ok(SkiRelation::SkInSta),
            "side-detector" => Ok(SkiRelation::SideDetector),
            other => Err(Error::Config(format!("unknown relation {other:?}"))),
        }
    }
}

impl SkiRelation {
    pub fn eval(self, params: &Params, sk: &Exponent, out: &SimOutput) -> bool {
        match self {
            SkiRelation::ConstTrue => true,
            SkiRelation::SkInSta => {
                let Ok(bits) = params.sk_to_bits(sk) else { return false };
                let sta = serde_json::to_string(&(&out.sta_l, &out.sta_r)).expect("serializes");
                sta.contains(&bits.to_hex())
            }
            SkiRelation::SideDetector => {
                transcript_right_key(out).is_some_and(|pk| params.group.exp_g(sk) == pk.y0)
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SkiReport {
    pub relation: SkiRelation,
    pub adversary: String,
    pub trials: usize,
    pub hits_with_sk: usize,
    pub hits_with_spare: usize,
    pub freq_with_sk: f64,
    pub freq_with_spare: f64,
}

impl SkiReport {
    pub fn difference(&self) -> f64 {
        (self.freq_with_sk - self.freq_with_spare).abs()
    }
}

/// Runs `trials` simulations with independent seeds and evaluates the
/// relation on the used `SK_R` and on the unused `SK'_R`.
pub fn sk_independence_probe(
    config: &ExperimentConfig,
    variant: CrsVariant,
    relation: SkiRelation,
    trials: usize,
) -> Result<SkiReport> {
    sk_independence_probe_jobs(config, variant, relation, trials, 1)
}

/// Same as [`sk_independence_probe`], with trials spread over `jobs` threads.
/// The report does not depend on `jobs`.
pub fn sk_independence_probe_jobs(
    config: &ExperimentConfig,
    variant: CrsVariant,
    relation: SkiRelation,
    trials: usize,
    jobs: usize,
) -> Result<SkiReport> {
    let params = config.params()?;
    let jobs = jobs.clamp(1, trials.max(1));
    let trial = |t: usize| -> Result<(usize, usize)> {
        let seed = derive_u64(config.seed, "ski/trial", t as u64);
        let cfg = ExperimentConfig { seed, ..config.clone() };
        let keys = HonestKeys::generate(&params, seed);
        let adversary = adversary_from_id(&cfg.adversary, cfg.s, seed)?;
        let run = simulate_full(&cfg, variant, &keys.left.pk, adversary, None)?;
        Ok((
            usize::from(relation.eval(&params, run.sk_right(), &run.output)),
            usize::from(relation.eval(&params, run.sk_spare(), &run.output)),
        ))
    };
    let parts: Vec<Result<(usize, usize)>> = std::thread::scope(|scope| {
        let handles: Vec<_> = (0..jobs)
            .map(|j| {
                let trial = &trial;
                scope.spawn(move || {
                    let mut acc = (0, 0);
                    for t in (j..trials).step_by(jobs) {
                        let (a, b) = trial(t)?;
                        acc.0 += a;
                        acc.1 += b;
                    }
                    Ok(acc)
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("probe worker panicked")).collect()
    });
    let (mut with_sk, mut with_spare) = (0, 0);
    for part in parts {
        let (a, b) = part?;
        with_sk += a;
        with_spare += b;
    }
    let freq = |h: usize| if trials == 0 { 0.0 } else { h as f64 / trials as f64 };
    Ok(SkiReport {
        relation,
        adversary: config.adversary.clone(),
        trials,
        hits_with_sk: with_sk,
        hits_with_spare: with_spare,
        freq_with_sk: freq(with_sk),
        freq_with_spare: freq(with_spare),
    })
}
