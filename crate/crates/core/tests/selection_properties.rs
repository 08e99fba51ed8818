//! Invariants of the selection rule on randomized score lists.

use blocktower_core::policy::{select_action, CandidateScore, Confidence};
use blocktower_core::task::Action;
use proptest::prelude::*;

fn scores_strategy() -> impl Strategy<Value = Vec<CandidateScore>> {
    // Scores on a 1/32 lattice so exact float comparisons stay meaningful.
    prop::collection::vec(0u32..=32, 1..=30).prop_map(|grades| {
        grades
            .iter()
            .enumerate()
            .map(|(i, g)| CandidateScore {
                action: Action::new((i % 6) as f64 * 1.5, (i / 6) as f64 * 1.5),
                phi: *g as f64 / 32.0,
                in_tau_set: false,
                in_stable_set: false,
            })
            .collect()
    })
}

fn threshold() -> impl Strategy<Value = f64> {
    (0u32..=8).prop_map(|t| t as f64 / 8.0)
}

proptest! {
    #[test]
    fn memberships_and_centroid_are_consistent(
        scores in scores_strategy(),
        tau_a in threshold(),
        tau_c in threshold(),
    ) {
        let face = Action::new(0.0, 0.0);
        let result = select_action(scores.clone(), face, tau_a, tau_c);

        let accepted_exists = scores.iter().any(|s| s.phi >= tau_a);
        prop_assert_eq!(
            result.confidence == Confidence::FallbackLowConfidence,
            !accepted_exists
        );

        for s in &result.scores {
            prop_assert!(!s.in_stable_set || s.in_tau_set);
            prop_assert_eq!(s.in_tau_set, accepted_exists && s.phi >= tau_a);
            if s.in_tau_set {
                prop_assert_eq!(s.in_stable_set, result.best_phi - s.phi <= tau_c);
            }
        }

        if accepted_exists {
            let best_expected =
                scores.iter().filter(|s| s.phi >= tau_a).map(|s| s.phi).fold(0.0, f64::max);
            prop_assert_eq!(result.best_phi, best_expected);

            let stable: Vec<&CandidateScore> =
                result.scores.iter().filter(|s| s.in_stable_set).collect();
            prop_assert!(!stable.is_empty());
            for coord in [|a: Action| a.x, |a: Action| a.y] {
                let lo = stable.iter().map(|s| coord(s.action)).fold(f64::INFINITY, f64::min);
                let hi = stable.iter().map(|s| coord(s.action)).fold(f64::NEG_INFINITY, f64::max);
                let c = coord(result.chosen);
                prop_assert!(c >= lo - 1e-12 && c <= hi + 1e-12);
            }
        } else {
            let top = scores.iter().map(|s| s.phi).fold(0.0, f64::max);
            prop_assert_eq!(result.best_phi, top);
            prop_assert_eq!(result.chosen, result.best);
        }
    }

    #[test]
    fn argmax_identity_survives_monotone_score_maps(
        scores in scores_strategy(),
        tau_a in threshold(),
    ) {
        let face = Action::new(0.0, 0.0);
        let halved: Vec<CandidateScore> = scores
            .iter()
            .map(|s| CandidateScore { phi: s.phi / 2.0, ..*s })
            .collect();
        let a = select_action(scores, face, tau_a, 0.0);
        let b = select_action(halved, face, 0.0, 0.0);
        prop_assert_eq!(a.best, b.best);
    }
}
