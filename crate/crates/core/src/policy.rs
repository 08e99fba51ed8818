//! Greedy next-best placement selection.
//!
//! Candidates form a grid over the top face of the observed tower. Each is
//! scored with an interventional query — the placement-target site is forced
//! to the candidate with the do-operator, so the score reads "what if the
//! robot aimed here", not "in which worlds did it happen to aim here". The
//! selection rule then keeps candidates above an acceptance threshold,
//! finds the best, pools everything within a probability margin of it, and
//! places at the pooled centroid: a flat of near-best actions is more
//! forgiving to actuation error than a lone peak.

use alloc::vec::Vec;

use crate::physics::Block;
use crate::ppl::rng::mix_seed;
use crate::ppl::{importance_query, ConditionSet, InterventionSet, PplError, Value};
use crate::task::{full_step_model, sites, Action, NoiseParams, Observation, StepOutcome};

#[cfg(feature = "serde")]
use serde::{Deserialize, Serialize};

/// A candidate action with its interventional stability score. The set
/// memberships are filled in by [`select_action`]; membership in the stable
/// set implies membership in the accepted set.
#[derive(Clone, Copy, PartialEq, Debug)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct CandidateScore {
    pub action: Action,
    pub phi: f64,
    pub in_tau_set: bool,
    pub in_stable_set: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum Confidence {
    Normal,
    /// No candidate reached the acceptance threshold; the returned action
    /// is the bare argmax and should be trusted accordingly.
    FallbackLowConfidence,
}

#[derive(Clone, PartialEq, Debug)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct SelectionResult {
    pub chosen: Action,
    pub best: Action,
    pub best_phi: f64,
    pub confidence: Confidence,
    pub scores: Vec<CandidateScore>,
}

/// Cell-centred `rows x cols` grid over the top face of `top_block`, inset
/// half a cell from each edge, in row-major order (y varies slowest).
pub fn candidate_grid(top_block: &Block, rows: u32, cols: u32) -> Vec<Action> {
    assert!(rows >= 1 && cols >= 1, "grid needs at least one cell");
    let cell_x = top_block.dims.x / cols as f64;
    let cell_y = top_block.dims.y / rows as f64;
    let x0 = top_block.center.x - top_block.dims.x / 2.0;
    let y0 = top_block.center.y - top_block.dims.y / 2.0;
    let mut actions = Vec::with_capacity((rows * cols) as usize);
    for row in 0..rows {
        let y = y0 + (row as f64 + 0.5) * cell_y;
        for col in 0..cols {
            let x = x0 + (col as f64 + 0.5) * cell_x;
            actions.push(Action::new(x, y));
        }
    }
    actions
}

/// The naive policy: always aim at the centre of the observed top face.
pub fn baseline_action(top_block: &Block) -> Action {
    Action::new(top_block.center.x, top_block.center.y)
}

/// Scores one candidate as P(stable | do(action = candidate)) under the
/// full observation-to-outcome model.
pub fn score_candidate(
    observation: &Observation,
    queue_front: &Block,
    action: Action,
    noise: NoiseParams,
    n_samples: usize,
    seed: u64,
) -> Result<f64, PplError> {
    let top = observation.blocks.last().expect("observation has no blocks");
    let model = full_step_model(observation, queue_front, baseline_action(top), noise);
    let iv = InterventionSet::single(sites::action(), Value::Vec2([action.x, action.y]));
    let est = importance_query(
        &model,
        &iv,
        &ConditionSet::new(),
        |out: &StepOutcome, _| if out.stable { 1.0 } else { 0.0 },
        n_samples,
        seed,
    )?;
    Ok(est.value)
}

/// Scores every candidate with [`score_candidate`], `n_samples` per query.
/// Candidate `i` uses a seed derived from `(seed, i)`, so scoring is
/// deterministic and order-independent; set memberships come back unset.
pub fn score_candidates(
    observation: &Observation,
    queue_front: &Block,
    candidates: &[Action],
    noise: NoiseParams,
    n_samples: usize,
    seed: u64,
) -> Result<Vec<CandidateScore>, PplError> {
    assert!(!candidates.is_empty(), "no candidates to score");
    let mut scores = Vec::with_capacity(candidates.len());
    for (index, action) in candidates.iter().enumerate() {
        let phi = score_candidate(
            observation,
            queue_front,
            *action,
            noise,
            n_samples,
            mix_seed(seed, index as u64),
        )?;
        scores.push(CandidateScore {
            action: *action,
            phi,
            in_tau_set: false,
            in_stable_set: false,
        });
    }
    Ok(scores)
}

fn dist_sq(a: Action, b: Action) -> f64 {
    (a.x - b.x) * (a.x - b.x) + (a.y - b.y) * (a.y - b.y)
}

/// Index of the best score among `indices`: highest phi, ties broken by
/// distance to `face_center`, then by scan order.
fn argmax(scores: &[CandidateScore], indices: &[usize], face_center: Action) -> usize {
    let mut best = indices[0];
    for &i in &indices[1..] {
        let better = scores[i].phi > scores[best].phi
            || (scores[i].phi == scores[best].phi
                && dist_sq(scores[i].action, face_center) < dist_sq(scores[best].action, face_center));
        if better {
            best = i;
        }
    }
    best
}

/// Applies the acceptance threshold and the stable-set pooling rule.
///
/// Accepted set: `phi >= tau_stable_a`. Best: argmax over the accepted set
/// (ties toward `face_center`, then scan order). Stable set: accepted
/// candidates within `tau_cluster` of the best score. The chosen action is
/// the stable set's centroid. With nothing accepted, falls back to the
/// global argmax and flags low confidence.
pub fn select_action(
    scores: Vec<CandidateScore>,
    face_center: Action,
    tau_stable_a: f64,
    tau_cluster: f64,
) -> SelectionResult {
    assert!(!scores.is_empty(), "no scores to select from");
    let mut scores = scores;
    let accepted: Vec<usize> =
        (0..scores.len()).filter(|&i| scores[i].phi >= tau_stable_a).collect();

    if accepted.is_empty() {
        for s in &mut scores {
            s.in_tau_set = false;
            s.in_stable_set = false;
        }
        let all: Vec<usize> = (0..scores.len()).collect();
        let best = argmax(&scores, &all, face_center);
        return SelectionResult {
            chosen: scores[best].action,
            best: scores[best].action,
            best_phi: scores[best].phi,
            confidence: Confidence::FallbackLowConfidence,
            scores,
        };
    }

    let best = argmax(&scores, &accepted, face_center);
    let best_phi = scores[best].phi;
    let mut sum_x = 0.0;
    let mut sum_y = 0.0;
    let mut count = 0.0;
    for &i in &accepted {
        scores[i].in_tau_set = true;
        if best_phi - scores[i].phi <= tau_cluster {
            scores[i].in_stable_set = true;
            sum_x += scores[i].action.x;
            sum_y += scores[i].action.y;
            count += 1.0;
        }
    }
    SelectionResult {
        chosen: Action::new(sum_x / count, sum_y / count),
        best: scores[best].action,
        best_phi,
        confidence: Confidence::Normal,
        scores,
    }
}
