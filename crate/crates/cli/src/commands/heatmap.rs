//! `heatmap`: scores the full candidate grid over a tower described in a
//! TOML file and reports which candidates clear the acceptance threshold,
//! which pool into the near-best set, and the selected action. The file's
//! block positions are taken as the observation; the model's observation
//! noise supplies the uncertainty.

use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use blocktower_core::physics::settle;
use blocktower_core::policy::{
    baseline_action, candidate_grid, score_candidate, select_action, CandidateScore,
    SelectionResult,
};
use blocktower_core::ppl::rng::mix_seed;
use blocktower_core::{Observation, TowerState, Vec3};

use crate::config::ExperimentConfig;
use crate::error::CliError;
use crate::report::{fmt_f64, OutDir, Report};

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct TowerFile {
    blocks: Vec<TowerFileBlock>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct TowerFileBlock {
    x: f64,
    y: f64,
}

#[derive(Debug, Serialize)]
struct HeatmapData {
    rows: u32,
    cols: u32,
    /// Settled block poses the candidates were scored against.
    observation: Observation,
    selection: SelectionResult,
}

pub fn run(config: &ExperimentConfig, out: &Path, seed: u64, tower: &Path) -> Result<(), CliError> {
    let text = std::fs::read_to_string(tower).map_err(|e| CliError::io(tower, e))?;
    let file: TowerFile = toml::from_str(&text)
        .map_err(|e| CliError::Config(format!("{}: {e}", tower.display())))?;
    if file.blocks.is_empty() {
        return Err(CliError::Config(format!(
            "{}: tower file needs at least one block",
            tower.display()
        )));
    }
    let out = OutDir::create(out, "heatmap")?;
    let spec = config.block_spec();

    let blocks = file
        .blocks
        .iter()
        .enumerate()
        .map(|(i, b)| spec.block(i as u32, Vec3::new(b.x, b.y, 0.0)))
        .collect();
    let stacked = TowerState::new(blocks).map_err(|e| CliError::Config(e.to_string()))?;
    let settled = settle(&stacked).map_err(|e| CliError::Config(e.to_string()))?;
    let observation = Observation { blocks: settled.blocks().to_vec() };
    let queue_front = spec.block(file.blocks.len() as u32, Vec3::default());

    let top = *observation.blocks.last().expect("non-empty tower");
    let rows = config.heatmap.rows;
    let cols = config.heatmap.cols;
    let grid = candidate_grid(&top, rows, cols);
    let model_noise = config.model_noise();
    let n_samples = config.inference.n_samples;
    let scores: Vec<CandidateScore> = grid
        .par_iter()
        .enumerate()
        .map(|(index, &action)| -> Result<CandidateScore, CliError> {
            let phi = score_candidate(
                &observation,
                &queue_front,
                action,
                model_noise,
                n_samples,
                mix_seed(seed, index as u64),
            )?;
            Ok(CandidateScore { action, phi, in_tau_set: false, in_stable_set: false })
        })
        .collect::<Result<_, _>>()?;

    let selection = select_action(
        scores,
        baseline_action(&top),
        config.policy.tau_stable_a,
        config.policy.tau_cluster,
    );

    let rows_csv: Vec<String> = selection
        .scores
        .iter()
        .map(|s| {
            format!(
                "{},{},{},{},{}",
                fmt_f64(s.action.x),
                fmt_f64(s.action.y),
                fmt_f64(s.phi),
                s.in_tau_set,
                s.in_stable_set
            )
        })
        .collect();
    out.write_csv("heatmap.csv", config, "x,y,phi,in_tau_set,in_stable_set", &rows_csv)?;

    let data = HeatmapData { rows, cols, observation, selection };
    out.write_json("heatmap.json", &Report::new("heatmap", seed, config, data))?;
    out.write_meta()?;
    Ok(())
}
