//! A hand-written action script. Its third action exceeds the right-session
//! budget; the harness records it as illegal and moves on.

use bpkcnm::bpk::{HONEST_LEFT_ID, HONEST_RIGHT_ID};
use bpkcnm::harness::{run_experiment_with, Action, Event, ExperimentConfig, Script, ScriptedAdversary};

fn main() -> bpkcnm::Result<()> {
    let script = Script {
        keys: vec![],
        actions: vec![
            Action::StartLeft { peer: HONEST_RIGHT_ID },
            Action::StartRight { peer: HONEST_LEFT_ID },
            Action::StartRight { peer: 42 },
            Action::EndAttack,
        ],
    };
    println!("{}", serde_json::to_string_pretty(&script).expect("serializes"));
    let cfg = ExperimentConfig { s: 1, adversary: "scripted".into(), ..Default::default() };
    let trace = run_experiment_with(&cfg, &mut ScriptedAdversary::new(script))?;
    for e in &trace.view.events {
        if let Event::Illegal { action, reason } = e {
            println!("illegal action #{action}: {reason}");
        }
    }
    println!("illegal actions: {}", trace.illegal_actions);
    Ok(())
}
