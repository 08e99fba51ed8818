//! `eval-action`: compares placement policies on a shared set of initial
//! towers. Each policy selects once per tower from the same noisy
//! observation, then its action is executed in `trials` independent
//! worlds. Trial worlds are seeded identically across policies, so both
//! face the same actuation noise draws (paired trials).

use std::path::Path;

use rayon::prelude::*;
use serde::Serialize;

use blocktower_core::episode::{choose_action, PolicyKind};
use blocktower_core::ppl::rng::mix_seed;
use blocktower_core::world::{queued_cubes, random_tower, World};
use blocktower_core::{Action, TaskState};

use crate::config::ExperimentConfig;
use crate::error::CliError;
use crate::report::{OutDir, Report};
use crate::seeds;

#[derive(Debug, Serialize)]
struct ActionData {
    towers: u32,
    trials_per_tower: u32,
    offset_range: f64,
    policies: Vec<PolicySummary>,
    per_tower: Vec<TowerRecord>,
}

#[derive(Debug, Serialize)]
struct PolicySummary {
    policy: PolicyKind,
    successes: u32,
    failures: u32,
    trials: u32,
    success_rate: f64,
    low_confidence_selections: u32,
}

#[derive(Debug, Serialize)]
struct TowerRecord {
    tower: u32,
    selections: Vec<TowerSelection>,
}

#[derive(Debug, Serialize)]
struct TowerSelection {
    policy: PolicyKind,
    chosen: Action,
    best_phi: Option<f64>,
    low_confidence: bool,
    successes: u32,
}

pub fn run(
    config: &ExperimentConfig,
    out: &Path,
    seed: u64,
    towers: Option<u32>,
    trials: Option<u32>,
    policies: Vec<PolicyKind>,
) -> Result<(), CliError> {
    let towers = towers.unwrap_or(config.datasets.action_towers);
    let trials = trials.unwrap_or(config.datasets.action_trials);
    let out = OutDir::create(out, "eval-action")?;
    let spec = config.block_spec();
    let world_noise = config.world_noise();
    let root = mix_seed(seed, seeds::ACTION);

    let per_tower: Vec<TowerRecord> = (0..towers)
        .into_par_iter()
        .map(|t| -> Result<TowerRecord, CliError> {
            let tower_seed = mix_seed(root, t as u64);
            let base = random_tower(
                &spec,
                2,
                config.datasets.offset_range,
                true,
                mix_seed(tower_seed, seeds::GEN),
            )?;
            let state = TaskState::new(base.tower, queued_cubes(&spec, 2, 1))
                .map_err(|e| CliError::Generation(e.to_string()))?;
            let queue_front = state.queue[0];

            let mut world =
                World::new(state.clone(), world_noise, mix_seed(tower_seed, seeds::OBS))?;
            let observation = world.observe();

            let mut selections = Vec::with_capacity(policies.len());
            for &policy in &policies {
                let (chosen, selection) = choose_action(
                    policy,
                    &observation,
                    &queue_front,
                    &config.episode_params(policy),
                    mix_seed(tower_seed, seeds::SELECT),
                )?;
                let mut successes = 0;
                for j in 0..trials {
                    let trial_seed = mix_seed(mix_seed(tower_seed, seeds::TRIAL), j as u64);
                    let mut trial_world =
                        World::new(state.clone(), world_noise, trial_seed)?;
                    let placement = trial_world.execute_place(chosen)?;
                    if placement.verdict.stable {
                        successes += 1;
                    }
                }
                selections.push(TowerSelection {
                    policy,
                    chosen,
                    best_phi: selection.as_ref().map(|s| s.best_phi),
                    low_confidence: selection.as_ref().is_some_and(|s| {
                        s.confidence == blocktower_core::policy::Confidence::FallbackLowConfidence
                    }),
                    successes,
                });
            }
            Ok(TowerRecord { tower: t, selections })
        })
        .collect::<Result<_, _>>()?;

    let policies_summary: Vec<PolicySummary> = policies
        .iter()
        .map(|&policy| {
            let mut successes = 0;
            let mut low_confidence = 0;
            for record in &per_tower {
                for s in record.selections.iter().filter(|s| s.policy == policy) {
                    successes += s.successes;
                    low_confidence += u32::from(s.low_confidence);
                }
            }
            let total = towers * trials;
            PolicySummary {
                policy,
                successes,
                failures: total - successes,
                trials: total,
                success_rate: f64::from(successes) / f64::from(total),
                low_confidence_selections: low_confidence,
            }
        })
        .collect();

    let data = ActionData {
        towers,
        trials_per_tower: trials,
        offset_range: config.datasets.offset_range,
        policies: policies_summary,
        per_tower,
    };
    out.write_json("action_report.json", &Report::new("eval-action", seed, config, data))?;
    out.write_meta()?;
    Ok(())
}
