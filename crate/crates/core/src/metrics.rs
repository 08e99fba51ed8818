//! Stability prediction and its evaluation.
//!
//! [`predict_stability`] turns a noisy observation into a probability that
//! the true tower is stable; the rest of the module grades such scores
//! against ground truth: confusion-matrix metrics at a threshold, ROC and
//! precision-recall curves, trapezoidal AUC, Youden-index threshold
//! selection, and the paired-measurement noise characterization used to fit
//! model noise to an environment.

use alloc::vec::Vec;

use thiserror::Error;

use crate::math;
use crate::physics::{is_stable, TowerState};
use crate::ppl::{importance_query, ConditionSet, InterventionSet, PplError};
use crate::task::{latent_state_model, NoiseParams, Observation};

#[cfg(feature = "serde")]
use serde::{Deserialize, Serialize};

/// One scored dataset entry: predicted stability probability and the
/// ground-truth label. `phi` must lie in `[0, 1]`.
#[derive(Clone, Copy, PartialEq, Debug)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct ScoredSample {
    pub phi: f64,
    pub label: bool,
}

#[derive(Clone, Copy, PartialEq, Debug)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct RocPoint {
    pub threshold: f64,
    pub fpr: f64,
    pub tpr: f64,
}

#[derive(Clone, Copy, PartialEq, Debug)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct PrPoint {
    pub threshold: f64,
    pub recall: f64,
    pub precision: f64,
}

/// Threshold of the all-negative ROC anchor point. Any value above every
/// admissible `phi` works; 2.0 stays JSON-representable, unlike infinity.
pub const ROC_ANCHOR_THRESHOLD: f64 = 2.0;

/// Classification metrics at one operating threshold plus the
/// threshold-swept curves. `auc` is absent when the labels are single-class.
#[derive(Clone, PartialEq, Debug)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct ClassifierReport {
    pub threshold: f64,
    pub accuracy: f64,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    pub auc: Option<f64>,
    pub true_positives: usize,
    pub false_positives: usize,
    pub true_negatives: usize,
    pub false_negatives: usize,
    pub roc_points: Vec<RocPoint>,
    pub pr_points: Vec<PrPoint>,
}

/// Per-axis error statistics of paired (estimate, truth) measurements.
/// `sigma_avg` is the arithmetic mean of the three per-axis sigmas.
#[derive(Clone, Copy, PartialEq, Debug)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct NoiseCharacterization {
    pub mean: [f64; 3],
    pub sigma: [f64; 3],
    pub sigma_avg: f64,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MetricsError {
    #[error("need at least {needed} samples, got {got}")]
    InsufficientData { needed: usize, got: usize },
    #[error("threshold selection needs both classes present")]
    NoThreshold,
    #[error("score {0} outside [0, 1]")]
    InvalidScore(f64),
}

/// Probability that the latent tower behind `observation` is stable,
/// estimated with `n_samples` posterior draws.
pub fn predict_stability(
    observation: &Observation,
    noise: NoiseParams,
    n_samples: usize,
    seed: u64,
) -> Result<f64, PplError> {
    let model = latent_state_model(observation, noise);
    let est = importance_query(
        &model,
        &InterventionSet::new(),
        &ConditionSet::new(),
        |tower: &TowerState, _| {
            if is_stable(tower).expect("latent towers are non-empty").stable {
                1.0
            } else {
                0.0
            }
        },
        n_samples,
        seed,
    )?;
    Ok(est.value)
}

/// Threshold rule: predicted stable iff `phi >= tau_stable_z` (inclusive).
pub fn classify(phi: f64, tau_stable_z: f64) -> bool {
    phi >= tau_stable_z
}

struct Confusion {
    tp: usize,
    fp: usize,
    tn: usize,
    fne: usize,
}

fn confusion(samples: &[ScoredSample], tau: f64) -> Confusion {
    let mut c = Confusion { tp: 0, fp: 0, tn: 0, fne: 0 };
    for s in samples {
        match (classify(s.phi, tau), s.label) {
            (true, true) => c.tp += 1,
            (true, false) => c.fp += 1,
            (false, false) => c.tn += 1,
            (false, true) => c.fne += 1,
        }
    }
    c
}

fn ratio(num: usize, den: usize) -> f64 {
    if den == 0 {
        0.0
    } else {
        num as f64 / den as f64
    }
}

fn check_scores(samples: &[ScoredSample]) -> Result<(), MetricsError> {
    for s in samples {
        if !(s.phi >= 0.0 && s.phi <= 1.0) {
            return Err(MetricsError::InvalidScore(s.phi));
        }
    }
    Ok(())
}

/// Sorted descending distinct phi values.
fn distinct_phis_desc(samples: &[ScoredSample]) -> Vec<f64> {
    let mut phis: Vec<f64> = samples.iter().map(|s| s.phi).collect();
    phis.sort_by(|a, b| b.partial_cmp(a).expect("scores are finite"));
    phis.dedup();
    phis
}

/// Grades `samples` at the operating threshold `tau` and sweeps all
/// distinct scores for the ROC / precision-recall curves. AUC is the
/// trapezoidal integral of the ROC, which resolves tied scores by the
/// straight segment through the tie.
pub fn evaluate_classifier(
    samples: &[ScoredSample],
    tau: f64,
) -> Result<ClassifierReport, MetricsError> {
    if samples.is_empty() {
        return Err(MetricsError::InsufficientData { needed: 1, got: 0 });
    }
    check_scores(samples)?;

    let c = confusion(samples, tau);
    let precision = ratio(c.tp, c.tp + c.fp);
    let recall = ratio(c.tp, c.tp + c.fne);
    let f1 = if precision + recall == 0.0 {
        0.0
    } else {
        2.0 * precision * recall / (precision + recall)
    };

    let pos = samples.iter().filter(|s| s.label).count();
    let neg = samples.len() - pos;

    let (auc, roc_points, pr_points) = if pos == 0 || neg == 0 {
        (None, Vec::new(), Vec::new())
    } else {
        let mut roc = Vec::new();
        let mut pr = Vec::new();
        roc.push(RocPoint { threshold: ROC_ANCHOR_THRESHOLD, fpr: 0.0, tpr: 0.0 });
        let mut tp = 0usize;
        let mut fp = 0usize;
        let mut sorted: Vec<&ScoredSample> = samples.iter().collect();
        sorted.sort_by(|a, b| b.phi.partial_cmp(&a.phi).expect("scores are finite"));
        let mut i = 0;
        while i < sorted.len() {
            let t = sorted[i].phi;
            while i < sorted.len() && sorted[i].phi == t {
                if sorted[i].label {
                    tp += 1;
                } else {
                    fp += 1;
                }
                i += 1;
            }
            roc.push(RocPoint {
                threshold: t,
                fpr: fp as f64 / neg as f64,
                tpr: tp as f64 / pos as f64,
            });
            pr.push(PrPoint {
                threshold: t,
                recall: tp as f64 / pos as f64,
                precision: tp as f64 / (tp + fp) as f64,
            });
        }
        let mut area = 0.0;
        for w in roc.windows(2) {
            area += (w[1].fpr - w[0].fpr) * (w[1].tpr + w[0].tpr) / 2.0;
        }
        (Some(area), roc, pr)
    };

    Ok(ClassifierReport {
        threshold: tau,
        accuracy: ratio(c.tp + c.tn, samples.len()),
        precision,
        recall,
        f1,
        auc,
        true_positives: c.tp,
        false_positives: c.fp,
        true_negatives: c.tn,
        false_negatives: c.fne,
        roc_points,
        pr_points,
    })
}

/// Threshold maximizing Youden's J = TPR - FPR over the midpoints of
/// adjacent distinct scores plus {0, 1}. Ties resolve toward the larger
/// threshold (fewer false positives).
pub fn youden_threshold(samples: &[ScoredSample]) -> Result<f64, MetricsError> {
    check_scores(samples)?;
    let pos = samples.iter().filter(|s| s.label).count();
    if pos == 0 || pos == samples.len() {
        return Err(MetricsError::NoThreshold);
    }

    let mut candidates = Vec::new();
    candidates.push(0.0);
    let mut phis = distinct_phis_desc(samples);
    phis.reverse();
    for w in phis.windows(2) {
        candidates.push((w[0] + w[1]) / 2.0);
    }
    candidates.push(1.0);

    let neg = samples.len() - pos;
    let mut best_tau = 0.0;
    let mut best_j = f64::NEG_INFINITY;
    for tau in candidates {
        let c = confusion(samples, tau);
        let j = c.tp as f64 / pos as f64 - c.fp as f64 / neg as f64;
        if j >= best_j {
            best_j = j;
            best_tau = tau;
        }
    }
    Ok(best_tau)
}

/// Per-axis mean and sample standard deviation (n - 1 denominator) of the
/// errors `estimate - truth`, plus their arithmetic average.
pub fn characterize_noise(
    pairs: &[([f64; 3], [f64; 3])],
) -> Result<NoiseCharacterization, MetricsError> {
    if pairs.len() < 2 {
        return Err(MetricsError::InsufficientData { needed: 2, got: pairs.len() });
    }
    let n = pairs.len() as f64;
    let mut mean = [0.0; 3];
    let mut sigma = [0.0; 3];
    for axis in 0..3 {
        let errors: Vec<f64> = pairs.iter().map(|(est, truth)| est[axis] - truth[axis]).collect();
        let m = errors.iter().sum::<f64>() / n;
        let var = errors.iter().map(|e| (e - m) * (e - m)).sum::<f64>() / (n - 1.0);
        mean[axis] = m;
        sigma[axis] = math::sqrt(var);
    }
    let sigma_avg = (sigma[0] + sigma[1] + sigma[2]) / 3.0;
    Ok(NoiseCharacterization { mean, sigma, sigma_avg })
}
