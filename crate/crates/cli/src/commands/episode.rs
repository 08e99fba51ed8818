//! `episode`: K-step sequential stacking. Starts from a single aligned
//! base block with K cubes queued, then repeats observe → select → place
//! until the queue is empty or the tower falls. Policies run against
//! identically seeded worlds, so their first-step noise draws match.

use std::path::Path;

use serde::Serialize;

use blocktower_core::episode::{run_episode, EpisodeRecord, PolicyKind};
use blocktower_core::physics::settle;
use blocktower_core::ppl::rng::mix_seed;
use blocktower_core::world::{queued_cubes, World};
use blocktower_core::{TaskState, TowerState, Vec3};

use crate::config::ExperimentConfig;
use crate::error::CliError;
use crate::report::{OutDir, Report};
use crate::seeds;

#[derive(Debug, Serialize)]
struct EpisodeData {
    k_steps: u32,
    episodes: Vec<EpisodeRecord>,
}

pub fn run(
    config: &ExperimentConfig,
    out: &Path,
    seed: u64,
    steps: Option<u32>,
    policies: Vec<PolicyKind>,
) -> Result<(), CliError> {
    let k_steps = steps.unwrap_or(config.episode.k_steps);
    let out = OutDir::create(out, "episode")?;
    let spec = config.block_spec();
    let world_noise = config.world_noise();

    let base = settle(
        &TowerState::new(vec![spec.block(0, Vec3::default())])
            .map_err(|e| CliError::Config(e.to_string()))?,
    )
    .map_err(|e| CliError::Config(e.to_string()))?;
    let state = TaskState::new(base, queued_cubes(&spec, 1, k_steps))
        .map_err(|e| CliError::Config(e.to_string()))?;

    let episodes: Vec<EpisodeRecord> = policies
        .iter()
        .map(|&policy| -> Result<EpisodeRecord, CliError> {
            let mut world = World::new(
                state.clone(),
                world_noise,
                mix_seed(seed, seeds::EPISODE_WORLD),
            )?;
            let record = run_episode(
                &mut world,
                &config.episode_params(policy),
                mix_seed(seed, seeds::EPISODE_POLICY),
            )?;
            Ok(record)
        })
        .collect::<Result<_, _>>()?;

    let data = EpisodeData { k_steps, episodes };
    out.write_json("episode.json", &Report::new("episode", seed, config, data))?;
    out.write_meta()?;
    Ok(())
}
