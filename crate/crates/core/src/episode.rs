//! Sequential stacking episodes.
//!
//! An episode drains the world's queue one placement at a time: observe the
//! tower, choose where to aim, execute, repeat. A topple ends the episode
//! immediately — the remaining queue is never placed — and the record keeps
//! the full per-step history (observation, chosen action, realized
//! placement, verdict) so runs can be replayed and audited offline.

use alloc::vec::Vec;

use thiserror::Error;

use crate::physics::Block;
use crate::policy::{self, Confidence, SelectionResult};
use crate::ppl::rng::mix_seed;
use crate::ppl::PplError;
use crate::task::{Action, NoiseParams, Observation};
use crate::world::{Placement, World, WorldError};

#[cfg(feature = "serde")]
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum PolicyKind {
    /// Interventional scoring over a candidate grid, stable-set centroid.
    Cobra,
    /// Always the centre of the observed top face.
    Baseline,
}

/// Everything a policy needs to turn an observation into an action.
#[derive(Clone, Copy, PartialEq, Debug)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct EpisodeParams {
    pub policy: PolicyKind,
    pub noise: NoiseParams,
    pub n_samples: usize,
    pub grid_rows: u32,
    pub grid_cols: u32,
    pub tau_stable_a: f64,
    pub tau_cluster: f64,
}

#[derive(Clone, PartialEq, Debug)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct StepRecord {
    pub step: usize,
    pub observation: Observation,
    pub chosen: Action,
    /// Best candidate score; absent for the baseline policy.
    pub best_phi: Option<f64>,
    pub low_confidence: bool,
    pub placement: Placement,
}

#[derive(Clone, Copy, PartialEq, Debug)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct Outcome {
    pub success: bool,
    pub failed_at_step: Option<usize>,
}

#[derive(Clone, PartialEq, Debug)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct EpisodeRecord {
    pub policy: PolicyKind,
    pub seed: u64,
    pub steps: Vec<StepRecord>,
    pub outcome: Outcome,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EpisodeError {
    #[error(transparent)]
    Inference(#[from] PplError),
    #[error(transparent)]
    World(#[from] WorldError),
}

/// One decision: the chosen aim point plus the full selection detail when
/// the policy scored candidates.
pub fn choose_action(
    policy: PolicyKind,
    observation: &Observation,
    queue_front: &Block,
    params: &EpisodeParams,
    seed: u64,
) -> Result<(Action, Option<SelectionResult>), PplError> {
    let top = observation.blocks.last().expect("observation has no blocks");
    match policy {
        PolicyKind::Baseline => Ok((policy::baseline_action(top), None)),
        PolicyKind::Cobra => {
            let grid = policy::candidate_grid(top, params.grid_rows, params.grid_cols);
            let scores = policy::score_candidates(
                observation,
                queue_front,
                &grid,
                params.noise,
                params.n_samples,
                seed,
            )?;
            let result = policy::select_action(
                scores,
                policy::baseline_action(top),
                params.tau_stable_a,
                params.tau_cluster,
            );
            Ok((result.chosen, Some(result)))
        }
    }
}

/// Runs the episode until the queue is empty or the tower topples. Step `k`
/// scores candidates with a seed derived from `(seed, k)`; the world's own
/// RNG drives observation and actuation noise.
pub fn run_episode(
    world: &mut World,
    params: &EpisodeParams,
    seed: u64,
) -> Result<EpisodeRecord, EpisodeError> {
    let total = world.state().queue.len();
    let mut steps = Vec::with_capacity(total);
    let mut outcome = Outcome { success: true, failed_at_step: None };
    for step in 0..total {
        let observation = world.observe();
        let queue_front = *world.state().queue.first().expect("queue length was checked");
        let (chosen, selection) = choose_action(
            params.policy,
            &observation,
            &queue_front,
            params,
            mix_seed(seed, step as u64),
        )?;
        let placement = world.execute_place(chosen)?;
        let stable = placement.verdict.stable;
        steps.push(StepRecord {
            step,
            observation,
            chosen,
            best_phi: selection.as_ref().map(|s| s.best_phi),
            low_confidence: selection
                .as_ref()
                .is_some_and(|s| s.confidence == Confidence::FallbackLowConfidence),
            placement,
        });
        if !stable {
            outcome = Outcome { success: false, failed_at_step: Some(step) };
            break;
        }
    }
    Ok(EpisodeRecord { policy: params.policy, seed, steps, outcome })
}
