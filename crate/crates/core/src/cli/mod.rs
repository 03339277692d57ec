//! Batch front end behind the `bpkcnm` binary. Every command writes one JSON
//! artifact (to `--out` or stdout) and a short summary to stderr.

pub mod manifest;
pub mod selftest;

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::attack_ddl06::{run_interleaving_attack, Ddl06Variant};
use crate::error::Error;
use crate::harness::{
    run_experiment_with_keys, adversary_from_id, ExperimentConfig, ExperimentTrace, GroupChoice, HonestKeys, TRACE_SCHEMA,
};
use crate::params::AokBackend;
use crate::primitives::PrgBackend;
use crate::simulator::{
    classify_sim, classify_trace, simulate_full, sk_independence_probe_jobs, CrsVariant, OutputClassification, SimOutput,
    SkiRelation, SIM_SCHEMA,
};
pub use manifest::{Artifact, Deviations, RunManifest};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 1;
pub const EXIT_VIOLATION: i32 = 2;
pub const EXIT_INVARIANT: i32 = 3;

pub const SEED_ENV: &str = "BPKCNM_SEED";

#[derive(Debug, Parser)]
#[command(name = "bpkcnm", version, about = "Concurrent non-malleable coin tossing workbench")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run the man-in-the-middle experiment and emit its trace.
    Run {
        #[command(flatten)]
        exp: ExperimentArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the simulator against an adversary, given only the left public key.
    Simulate {
        #[command(flatten)]
        exp: ExperimentArgs,
        #[arg(long, default_value = "identity", value_parser = ["identity", "prg-seed"])]
        crs: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the two-session interleaving attack on the DDL06 protocol.
    Attack {
        #[arg(long, default_value = "large", value_parser = ["toy", "large"])]
        group: String,
        #[arg(long, default_value = "plain", value_parser = ["plain", "patched"])]
        variant: String,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Classify the right-session outputs of a run or simulate artifact.
    Classify {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Secret-key independence probe over independent simulations.
    ProbeSki {
        #[command(flatten)]
        exp: ExperimentArgs,
        #[arg(long, default_value = "identity", value_parser = ["identity", "prg-seed"])]
        crs: String,
        #[arg(long, default_value = "side-detector", value_parser = ["const-true", "sk-in-sta", "side-detector"])]
        relation: String,
        #[arg(long, default_value_t = 400)]
        trials: usize,
        /// Largest accepted |freq_with_sk - freq_with_spare|.
        #[arg(long, default_value_t = 0.10)]
        tolerance: f64,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the invariant suite and print a pass/fail table.
    Selftest {
        #[arg(long, default_value_t = 16)]
        n: usize,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Experiment knobs. Flags override the config file, `BPKCNM_SEED`
/// overrides both for the seed.
#[derive(Clone, Debug, Default, Args)]
pub struct ExperimentArgs {
    /// JSON file with any subset of the experiment configuration.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub s: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, value_parser = ["toy", "large"])]
    pub group: Option<String>,
    #[arg(long, value_parser = ["ideal", "sigma"])]
    pub backend: Option<String>,
    /// null, relay, interleaver, independent, one-right-key or scripted:<file>.
    #[arg(long)]
    pub adversary: Option<String>,
    /// Use the fast non-cryptographic PRG.
    #[arg(long)]
    pub insecure_prg: bool,
    #[arg(long)]
    pub max_actions: Option<usize>,
}

#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    fn config(message: impl Into<String>) -> Self {
        Self { code: EXIT_CONFIG, message: message.into() }
    }

    fn invariant(message: impl Into<String>) -> Self {
        Self { code: EXIT_INVARIANT, message: message.into() }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::Config(_) | Error::Decode(_) => CliError::config(e.to_string()),
            other => CliError::invariant(other.to_string()),
        }
    }
}

/// What a command produced.
#[derive(Clone, Debug)]
pub struct Outcome {
    pub artifact: String,
    pub summary: String,
    pub code: i32,
}

fn kebab<T: DeserializeOwned>(s: &str) -> Result<T, CliError> {
    serde_json::from_value(serde_json::Value::String(s.into())).map_err(|e| CliError::config(format!("{s:?}: {e}")))
}

fn env_seed() -> Result<Option<u64>, CliError> {
    match std::env::var(SEED_ENV) {
        Ok(v) => v.trim().parse().map(Some).map_err(|_| CliError::config(format!("{SEED_ENV}={v:?} is not a u64"))),
        Err(_) => Ok(None),
    }
}

fn resolve_seed(flag: Option<u64>, fallback: u64) -> Result<u64, CliError> {
    Ok(env_seed()?.or(flag).unwrap_or(fallback))
}

impl ExperimentArgs {
    pub fn resolve(&self) -> Result<ExperimentConfig, CliError> {
        let mut cfg: ExperimentConfig = match &self.config {
            Some(path) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| CliError::config(format!("{}: {e}", path.display())))?;
                serde_json::from_str(&text).map_err(|e| CliError::config(format!("{}: {e}", path.display())))?
            }
            None => ExperimentConfig::default(),
        };
        if let Some(n) = self.n {
            cfg.n = n;
        }
        if let Some(s) = self.s {
            cfg.s = s;
        }
        if let Some(g) = &self.group {
            cfg.group = kebab::<GroupChoice>(g)?;
        }
        if let Some(b) = &self.backend {
            cfg.backend = kebab::<AokBackend>(b)?;
        }
        if let Some(a) = &self.adversary {
            cfg.adversary = a.clone();
        }
        if self.insecure_prg {
            cfg.prg = PrgBackend::InsecureFast;
        }
        if let Some(m) = self.max_actions {
            cfg.max_actions = m;
        }
        cfg.seed = resolve_seed(self.seed, cfg.seed)?;
        cfg.validate()?;
        Ok(cfg)
    }
}

fn paths(out: &Option<PathBuf>) -> Vec<String> {
    out.iter().map(|p| p.display().to_string()).collect()
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SimulateReport {
    pub sim: SimOutput,
    pub classification: OutputClassification,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ClassifyReport {
    pub source_schema: String,
    pub classification: OutputClassification,
}

fn cmd_run(exp: &ExperimentArgs, out: &Option<PathBuf>) -> Result<Outcome, CliError> {
    let cfg = exp.resolve()?;
    let params = cfg.params()?;
    let keys = HonestKeys::generate(&params, cfg.seed);
    let mut adversary = adversary_from_id(&cfg.adversary, cfg.s, cfg.seed)?;
    let trace = run_experiment_with_keys(&cfg, &keys, adversary.as_mut())?;
    let done = trace.sessions.iter().filter(|r| r.is_done()).count();
    let summary = format!(
        "run: adversary {}, {} sessions ({} done), {} actions, end {:?}, {} illegal",
        trace.adversary,
        trace.sessions.len(),
        done,
        trace.actions.len(),
        trace.end,
        trace.illegal_actions
    );
    let code = if trace.illegal_actions > 0 { EXIT_VIOLATION } else { EXIT_OK };
    let mut manifest = RunManifest::for_experiment("run", &cfg);
    manifest.artifacts = paths(out);
    Ok(Outcome { artifact: Artifact { manifest, payload: trace }.to_json(), summary, code })
}

fn cmd_simulate(exp: &ExperimentArgs, crs: &str, out: &Option<PathBuf>) -> Result<Outcome, CliError> {
    let cfg = exp.resolve()?;
    let variant: CrsVariant = kebab(crs)?;
    let params = cfg.params()?;
    let keys = HonestKeys::generate(&params, cfg.seed);
    let adversary = adversary_from_id(&cfg.adversary, cfg.s, cfg.seed)?;
    let run = simulate_full(&cfg, variant, &keys.left.pk, adversary, None)?;
    let classification = classify_sim(&run.output);
    let summary = format!(
        "simulate: adversary {}, {} repetitions, {} covered keys, failure {:?}, classification {:?} (valid {})",
        cfg.adversary,
        run.output.repetitions,
        run.output.covered.len(),
        run.output.failure,
        classification.sessions,
        classification.valid
    );
    let code = if run.output.failure.is_some() || !classification.valid { EXIT_INVARIANT } else { EXIT_OK };
    let mut manifest = RunManifest::for_experiment("simulate", &cfg);
    manifest.artifacts = paths(out);
    let payload = SimulateReport { sim: run.output, classification };
    Ok(Outcome { artifact: Artifact { manifest, payload }.to_json(), summary, code })
}

fn cmd_attack(group: &str, variant: &str, seed: Option<u64>, out: &Option<PathBuf>) -> Result<Outcome, CliError> {
    let choice: GroupChoice = kebab(group)?;
    let variant: Ddl06Variant = kebab(variant)?;
    let seed = resolve_seed(seed, 0)?;
    let trace = run_interleaving_attack(choice.params(), variant, seed);
    // The scan is only meaningful when exponents are too large to collide.
    let scan_ok = choice == GroupChoice::Toy || trace.witness_scan.clean;
    let expected = match variant {
        Ddl06Variant::Plain => trace.success && scan_ok,
        Ddl06Variant::Patched => !trace.success,
    };
    let summary = format!(
        "attack: {variant:?} on {group} group, success {}, witness scan {} ({} values), x_hat in subgroup {}",
        trace.success,
        if trace.witness_scan.clean { "clean" } else { "flagged" },
        trace.witness_scan.values_checked,
        trace.x_hat_in_subgroup
    );
    let config = serde_json::json!({ "group": choice, "variant": variant, "seed": seed });
    let backend = (variant == Ddl06Variant::Patched).then_some(AokBackend::Ideal);
    let deviations = Deviations {
        ideal_backend: backend.is_some(),
        toy_group: choice == GroupChoice::Toy,
        insecure_prg: false,
    };
    let mut manifest = RunManifest::new("attack", config, seed, backend, deviations);
    manifest.artifacts = paths(out);
    let code = if expected { EXIT_OK } else { EXIT_INVARIANT };
    Ok(Outcome { artifact: Artifact { manifest, payload: trace }.to_json(), summary, code })
}

fn parse_json<T: DeserializeOwned>(v: serde_json::Value, what: &str) -> Result<T, CliError> {
    serde_json::from_value(v).map_err(|e| CliError::config(format!("not a valid {what}: {e}")))
}

fn cmd_classify(input: &Path, out: &Option<PathBuf>) -> Result<Outcome, CliError> {
    let text = std::fs::read_to_string(input).map_err(|e| CliError::config(format!("{}: {e}", input.display())))?;
    let mut value: serde_json::Value =
        serde_json::from_str(&text).map_err(|e| CliError::config(format!("{}: {e}", input.display())))?;
    if let Some(payload) = value.get_mut("payload") {
        value = payload.take();
    }
    if let Some(sim) = value.get_mut("sim") {
        value = sim.take();
    }
    let schema = value.get("schema").and_then(|s| s.as_str()).unwrap_or_default().to_string();
    let (classification, base) = match schema.as_str() {
        TRACE_SCHEMA => {
            let trace: ExperimentTrace = parse_json(value, "trace")?;
            (classify_trace(&trace), trace.config)
        }
        SIM_SCHEMA => {
            let sim: SimOutput = parse_json(value, "simulation")?;
            (classify_sim(&sim), sim.transcript.config)
        }
        other => return Err(CliError::config(format!("unsupported artifact schema {other:?}"))),
    };
    let summary = format!("classify: {schema}, classes {:?}, valid {}", classification.sessions, classification.valid);
    let config = serde_json::json!({ "in": input.display().to_string(), "source": base });
    let mut manifest = RunManifest::new("classify", config, base.seed, Some(base.backend), Deviations::of(&base));
    manifest.artifacts = paths(out);
    let code = if classification.valid { EXIT_OK } else { EXIT_INVARIANT };
    let payload = ClassifyReport { source_schema: schema, classification };
    Ok(Outcome { artifact: Artifact { manifest, payload }.to_json(), summary, code })
}

#[allow(clippy::too_many_arguments)]
fn cmd_probe(
    exp: &ExperimentArgs,
    crs: &str,
    relation: &str,
    trials: usize,
    tolerance: f64,
    jobs: usize,
    out: &Option<PathBuf>,
) -> Result<Outcome, CliError> {
    let cfg = exp.resolve()?;
    let variant: CrsVariant = kebab(crs)?;
    let relation: SkiRelation = relation.parse()?;
    if trials == 0 {
        return Err(CliError::config("--trials must be positive"));
    }
    let report = sk_independence_probe_jobs(&cfg, variant, relation, trials, jobs)?;
    let summary = format!(
        "probe-ski: {relation:?} over {trials} trials, freq with sk {:.3}, with spare {:.3}, |diff| {:.3} (tolerance {tolerance})",
        report.freq_with_sk,
        report.freq_with_spare,
        report.difference()
    );
    let mut manifest = RunManifest::for_experiment("probe-ski", &cfg);
    manifest.artifacts = paths(out);
    let code = if report.difference() <= tolerance { EXIT_OK } else { EXIT_INVARIANT };
    Ok(Outcome { artifact: Artifact { manifest, payload: report }.to_json(), summary, code })
}

/// Runs a command line in-process and returns its artifact.
fn rerun(argv: &[&str]) -> Result<String, String> {
    let cli = Cli::try_parse_from(std::iter::once("bpkcnm").chain(argv.iter().copied())).map_err(|e| e.to_string())?;
    execute(&cli).map(|o| o.artifact).map_err(|e| e.message)
}

fn cmd_selftest(n: usize, seed: Option<u64>, jobs: usize, out: &Option<PathBuf>) -> Result<Outcome, CliError> {
    if !(1..=256).contains(&n) {
        return Err(CliError::config(format!("n = {n} outside [1, 256]")));
    }
    let seed = resolve_seed(seed, 0)?;
    let opts = selftest::SuiteOptions { n, seed, jobs, rerun: Some(rerun) };
    let results = selftest::run_suite(&opts);
    let failed = results.iter().filter(|r| !r.pass).count();
    let summary = format!("{}{} of {} criteria failed", selftest::render_table(&results), failed, results.len());
    let config = serde_json::json!({ "n": n, "seed": seed, "jobs": jobs });
    let mut manifest = RunManifest::new("selftest", config, seed, Some(AokBackend::Ideal), Deviations {
        ideal_backend: true,
        toy_group: true,
        insecure_prg: false,
    });
    manifest.artifacts = paths(out);
    let code = if failed == 0 { EXIT_OK } else { EXIT_INVARIANT };
    Ok(Outcome { artifact: Artifact { manifest, payload: results }.to_json(), summary, code })
}

pub fn execute(cli: &Cli) -> Result<Outcome, CliError> {
    match &cli.command {
        Command::Run { exp, out } => cmd_run(exp, out),
        Command::Simulate { exp, crs, out } => cmd_simulate(exp, crs, out),
        Command::Attack { group, variant, seed, out } => cmd_attack(group, variant, *seed, out),
        Command::Classify { input, out } => cmd_classify(input, out),
        Command::ProbeSki { exp, crs, relation, trials, tolerance, jobs, out } => {
            cmd_probe(exp, crs, relation, *trials, *tolerance, *jobs, out)
        }
        Command::Selftest { n, seed, jobs, out } => cmd_selftest(*n, *seed, *jobs, out),
    }
}

fn out_path(cli: &Cli) -> Option<&Path> {
    match &cli.command {
        Command::Run { out, .. }
        | Command::Simulate { out, .. }
        | Command::Attack { out, .. }
        | Command::Classify { out, .. }
        | Command::ProbeSki { out, .. }
        | Command::Selftest { out, .. } => out.as_deref(),
    }
}

/// Parses `args` (program name first), runs the command and returns the
/// process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
        }
    };
    let outcome = match execute(&cli) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {}", e.message);
            return e.code;
        }
    };
    match out_path(&cli) {
        Some(path) => {
            if let Err(e) = std::fs::write(path, format!("{}\n", outcome.artifact)) {
                eprintln!("error: {}: {e}", path.display());
                return EXIT_CONFIG;
            }
        }
        None => println!("{}", outcome.artifact),
    }
    eprintln!("{}", outcome.summary);
    outcome.code
}
