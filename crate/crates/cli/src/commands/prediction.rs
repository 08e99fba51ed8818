//! `eval-prediction`: generates a dataset of random towers, labels each
//! with the ground-truth oracle, scores each from one noisy observation,
//! and evaluates the resulting classifier at the configured threshold and
//! at the Youden-optimal one.

use std::path::Path;

use rayon::prelude::*;
use serde::Serialize;

use blocktower_core::metrics::{
    evaluate_classifier, predict_stability, youden_threshold, ClassifierReport, MetricsError,
    ScoredSample,
};
use blocktower_core::physics::is_stable;
use blocktower_core::ppl::rng::mix_seed;
use blocktower_core::world::{random_tower, World};

use crate::config::ExperimentConfig;
use crate::error::CliError;
use crate::report::{fmt_f64, OutDir, Report};
use crate::seeds;

#[derive(Debug, Serialize)]
struct PredictionData {
    towers: u32,
    blocks_per_tower: u32,
    offset_range: f64,
    positives: usize,
    negatives: usize,
    report: ClassifierReport,
    /// Metrics at the Youden-optimal threshold; absent when the dataset is
    /// single-class and no threshold exists.
    youden: Option<YoudenSummary>,
}

#[derive(Debug, Serialize)]
struct YoudenSummary {
    threshold: f64,
    accuracy: f64,
    precision: f64,
    recall: f64,
    f1: f64,
}

pub fn run(
    config: &ExperimentConfig,
    out: &Path,
    seed: u64,
    towers: Option<u32>,
) -> Result<(), CliError> {
    let towers = towers.unwrap_or(config.datasets.prediction_towers);
    let blocks = config.datasets.prediction_blocks;
    let offset_range = config.datasets.offset_range;
    let out = OutDir::create(out, "eval-prediction")?;
    let spec = config.block_spec();
    let world_noise = config.world_noise();
    let model_noise = config.model_noise();
    let n_samples = config.inference.n_samples;
    let root = mix_seed(seed, seeds::PRED);

    let samples: Vec<ScoredSample> = (0..towers)
        .into_par_iter()
        .map(|t| -> Result<ScoredSample, CliError> {
            let tower_seed = mix_seed(root, t as u64);
            let state =
                random_tower(&spec, blocks, offset_range, false, mix_seed(tower_seed, seeds::GEN))?;
            let label = is_stable(&state.tower)
                .map_err(|e| CliError::Generation(e.to_string()))?
                .stable;
            let mut world =
                World::new(state, world_noise, mix_seed(tower_seed, seeds::OBS))?;
            let observation = world.observe();
            let phi = predict_stability(
                &observation,
                model_noise,
                n_samples,
                mix_seed(tower_seed, seeds::SELECT),
            )?;
            Ok(ScoredSample { phi, label })
        })
        .collect::<Result<_, _>>()?;

    let report = evaluate_classifier(&samples, config.policy.tau_stable_z)?;
    let youden = match youden_threshold(&samples) {
        Ok(threshold) => {
            let at = evaluate_classifier(&samples, threshold)?;
            Some(YoudenSummary {
                threshold,
                accuracy: at.accuracy,
                precision: at.precision,
                recall: at.recall,
                f1: at.f1,
            })
        }
        Err(MetricsError::NoThreshold) => None,
        Err(e) => return Err(e.into()),
    };

    let positives = samples.iter().filter(|s| s.label).count();
    let data = PredictionData {
        towers,
        blocks_per_tower: blocks,
        offset_range,
        positives,
        negatives: samples.len() - positives,
        report,
        youden,
    };

    let roc_rows: Vec<String> = data
        .report
        .roc_points
        .iter()
        .map(|p| format!("{},{},{}", fmt_f64(p.threshold), fmt_f64(p.fpr), fmt_f64(p.tpr)))
        .collect();
    out.write_csv("roc.csv", config, "threshold,fpr,tpr", &roc_rows)?;
    let pr_rows: Vec<String> = data
        .report
        .pr_points
        .iter()
        .map(|p| format!("{},{},{}", fmt_f64(p.threshold), fmt_f64(p.recall), fmt_f64(p.precision)))
        .collect();
    out.write_csv("pr.csv", config, "threshold,recall,precision", &pr_rows)?;
    out.write_json("prediction_report.json", &Report::new("eval-prediction", seed, config, data))?;
    out.write_meta()?;
    Ok(())
}
