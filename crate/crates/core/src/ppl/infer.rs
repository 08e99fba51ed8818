use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use super::error::PplError;
use super::exec::{run_enumerated, run_sampled, ConditionSet, InterventionSet, ModelCtx};
use super::rng::rng_stream;
use super::trace::Trace;
use crate::math;

/// Importance-sampling estimate of a posterior expectation.
#[derive(Clone, Copy, PartialEq, Debug)]
pub struct Estimate {
    pub value: f64,
    /// Effective sample size `(sum w)^2 / sum w^2`; equals `n` when no site
    /// is conditioned.
    pub ess: f64,
    pub n: usize,
}

/// Estimates `E[query]` under the model modified by `interventions` and
/// conditioned on `conditions`, using `n_samples` likelihood-weighted
/// samples with the (post-intervention) prior as proposal.
///
/// Sample `i` draws from stream `i` of `seed`, so the estimate is
/// bit-reproducible and independent of evaluation order.
pub fn importance_query<T, M, Q>(
    model: M,
    interventions: &InterventionSet,
    conditions: &ConditionSet,
    query: Q,
    n_samples: usize,
    seed: u64,
) -> Result<Estimate, PplError>
where
    M: Fn(&mut ModelCtx) -> Result<T, PplError>,
    Q: Fn(&T, &Trace) -> f64,
{
    let mut log_weights = Vec::with_capacity(n_samples);
    let mut values = Vec::with_capacity(n_samples);
    for i in 0..n_samples {
        let (out, trace) = run_sampled(&model, interventions, conditions, rng_stream(seed, i as u64))?;
        log_weights.push(trace.log_weight);
        values.push(query(&out, &trace));
    }

    let max_lw = log_weights
        .iter()
        .copied()
        .filter(|lw| lw.is_finite())
        .fold(f64::NEG_INFINITY, math::max);
    if !max_lw.is_finite() {
        return Err(PplError::DegenerateWeights { n: n_samples, ess: 0.0 });
    }

    let mut sum_w = 0.0;
    let mut sum_w2 = 0.0;
    let mut sum_wq = 0.0;
    for (lw, q) in log_weights.iter().zip(values.iter()) {
        let w = math::exp(lw - max_lw);
        sum_w += w;
        sum_w2 += w * w;
        sum_wq += w * q;
    }
    let ess = sum_w * sum_w / sum_w2;
    // More than one sample but effectively one survivor: conditioning is
    // (numerically) impossible almost everywhere, so refuse the estimate.
    if n_samples > 1 && ess < 1.0 + 1e-9 {
        return Err(PplError::DegenerateWeights { n: n_samples, ess });
    }
    Ok(Estimate { value: sum_wq / sum_w, ess, n: n_samples })
}

/// Computes `E[query]` exactly by enumerating every assignment of the
/// model's finite-support sample sites. Continuous sample sites yield
/// [`PplError::NotEnumerable`]; continuous *handled* (intervened or
/// conditioned) sites are fine. This is the exact oracle the importance
/// sampler is validated against.
pub fn enumerate_query<T, M, Q>(
    model: M,
    interventions: &InterventionSet,
    conditions: &ConditionSet,
    query: Q,
) -> Result<f64, PplError>
where
    M: Fn(&mut ModelCtx) -> Result<T, PplError>,
    Q: Fn(&T, &Trace) -> f64,
{
    let mut pending: Vec<BTreeMap<_, _>> = vec![BTreeMap::new()];
    let mut total_w = 0.0;
    let mut total_wq = 0.0;
    let mut leaves = 0usize;

    while let Some(assignment) = pending.pop() {
        let (out, trace, frontier) = run_enumerated(&model, interventions, conditions, &assignment)?;
        match frontier {
            Some(frontier) => {
                // The run used a placeholder at the frontier site; discard
                // it and requeue one assignment per support value.
                for (value, _) in frontier.support {
                    let mut extended = assignment.clone();
                    extended.insert(frontier.site.clone(), value);
                    pending.push(extended);
                }
            }
            None => {
                leaves += 1;
                let w = math::exp(trace.log_weight);
                total_w += w;
                total_wq += w * query(&out, &trace);
            }
        }
    }

    if total_w <= 0.0 {
        return Err(PplError::DegenerateWeights { n: leaves, ess: 0.0 });
    }
    Ok(total_wq / total_w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ppl::{Distribution, Value};
    use crate::site;

    /// Collider: `u ~ Bernoulli(0.5)`, `x := u`, `y := xor(x, u)`.
    ///
    /// Conditioning on `x = true` forces `u = true`, hence `y = false`
    /// always; `do(x = true)` leaves `u` free, hence `y ~ Bernoulli(0.5)`.
    /// The gap separates the two operations.
    fn xor_collider(ctx: &mut ModelCtx) -> Result<bool, PplError> {
        let u = ctx.sample_bool(site!["u"], Distribution::Bernoulli { p: 0.5 })?;
        let x = ctx.sample_bool(site!["x"], Distribution::delta(Value::Bool(u)))?;
        let y = ctx.sample_bool(site!["y"], Distribution::delta(Value::Bool(x ^ u)))?;
        Ok(y)
    }

    fn indicator(y: &bool, _: &Trace) -> f64 {
        if *y {
            1.0
        } else {
            0.0
        }
    }

    #[test]
    fn conditioning_the_collider_pins_y_to_zero() {
        let cond = ConditionSet::single(site!["x"], Value::Bool(true));
        let exact = enumerate_query(xor_collider, &InterventionSet::new(), &cond, indicator).unwrap();
        assert_eq!(exact, 0.0);
        let est = importance_query(
            xor_collider,
            &InterventionSet::new(),
            &cond,
            indicator,
            10_000,
            2024,
        )
        .unwrap();
        assert!((est.value - 0.0).abs() <= 0.02);
    }

    #[test]
    fn intervening_on_the_collider_frees_y() {
        let iv = InterventionSet::single(site!["x"], Value::Bool(true));
        let exact = enumerate_query(xor_collider, &iv, &ConditionSet::new(), indicator).unwrap();
        assert_eq!(exact, 0.5);
        let est =
            importance_query(xor_collider, &iv, &ConditionSet::new(), indicator, 10_000, 2024)
                .unwrap();
        assert!((est.value - 0.5).abs() <= 0.02);
        assert!((est.ess - 10_000.0).abs() < 1e-6);
    }

    #[test]
    fn constant_query_estimates_one_for_any_seed_and_count() {
        for (n, seed) in [(1usize, 0u64), (7, 1), (100, 99)] {
            let est = importance_query(
                xor_collider,
                &InterventionSet::new(),
                &ConditionSet::new(),
                |_, _| 1.0,
                n,
                seed,
            )
            .unwrap();
            assert_eq!(est.value, 1.0);
        }
    }

    #[test]
    fn enumeration_without_handlers_matches_the_prior() {
        let mean = enumerate_query(
            |ctx: &mut ModelCtx| ctx.sample_bool(site!["u"], Distribution::Bernoulli { p: 0.5 }),
            &InterventionSet::new(),
            &ConditionSet::new(),
            |u, _| if *u { 1.0 } else { 0.0 },
        )
        .unwrap();
        assert_eq!(mean, 0.5);
    }

    #[test]
    fn impossible_conditioning_degenerates() {
        // `u` is always true, so observing `x = u` as false kills every run.
        let model = |ctx: &mut ModelCtx| {
            let u = ctx.sample_bool(site!["u"], Distribution::Bernoulli { p: 1.0 })?;
            ctx.sample_bool(site!["x"], Distribution::delta(Value::Bool(u)))
        };
        let cond = ConditionSet::single(site!["x"], Value::Bool(false));
        let err = importance_query(model, &InterventionSet::new(), &cond, indicator, 100, 5)
            .unwrap_err();
        assert!(matches!(err, PplError::DegenerateWeights { n: 100, .. }));
        let err = enumerate_query(model, &InterventionSet::new(), &cond, indicator).unwrap_err();
        assert!(matches!(err, PplError::DegenerateWeights { .. }));
    }

    #[test]
    fn ess_collapse_to_one_survivor_degenerates() {
        // Nearly-impossible conditioning: observe a tight Gaussian far from
        // all but (in practice) one sampled location.
        let model = |ctx: &mut ModelCtx| {
            let x = ctx.sample_real(
                site!["x"],
                Distribution::UniformContinuous { lo: 0.0, hi: 1.0 },
            )?;
            ctx.sample_real(
                site!["obs"],
                Distribution::GaussianScalar { mean: x, sigma: 1e-9 },
            )
        };
        let cond = ConditionSet::single(site!["obs"], Value::Real(0.5));
        let err = importance_query(model, &InterventionSet::new(), &cond, |_, _| 1.0, 50, 8)
            .unwrap_err();
        match err {
            PplError::DegenerateWeights { n, ess } => {
                assert_eq!(n, 50);
                assert!(ess < 1.0 + 1e-9);
            }
            other => panic!("expected DegenerateWeights, got {other:?}"),
        }
    }

    #[test]
    fn half_surviving_weights_are_not_degenerate() {
        let model = |ctx: &mut ModelCtx| {
            let u = ctx.sample_bool(site!["u"], Distribution::Bernoulli { p: 0.5 })?;
            ctx.sample_bool(site!["v"], Distribution::delta(Value::Bool(u)))?;
            Ok(u)
        };
        let cond = ConditionSet::single(site!["v"], Value::Bool(true));
        let est = importance_query(model, &InterventionSet::new(), &cond, indicator, 1000, 5)
            .unwrap();
        assert_eq!(est.value, 1.0);
        assert!(est.ess > 400.0 && est.ess < 600.0);
    }

    #[test]
    fn continuous_sample_sites_refuse_enumeration() {
        let model = |ctx: &mut ModelCtx| {
            ctx.sample_real(
                site!["x"],
                Distribution::GaussianScalar { mean: 0.0, sigma: 1.0 },
            )
        };
        let err = enumerate_query(model, &InterventionSet::new(), &ConditionSet::new(), |_, _| 1.0)
            .unwrap_err();
        assert_eq!(err, PplError::NotEnumerable(site!["x"]));
    }

    #[test]
    fn continuous_handled_sites_enumerate_fine() {
        // The continuous site is conditioned, so enumeration only branches
        // over the Bernoulli.
        let model = |ctx: &mut ModelCtx| {
            let b = ctx.sample_bool(site!["b"], Distribution::Bernoulli { p: 0.5 })?;
            let mean = if b { 2.0 } else { 0.0 };
            ctx.sample_real(site!["z"], Distribution::GaussianScalar { mean, sigma: 1.0 })?;
            Ok(b)
        };
        let cond = ConditionSet::single(site!["z"], Value::Real(2.0));
        let exact = enumerate_query(model, &InterventionSet::new(), &cond, indicator).unwrap();
        // Posterior odds of b: density ratio exp(0) : exp(-2).
        let expect = 1.0 / (1.0 + (-2.0f64).exp());
        assert!((exact - expect).abs() < 1e-12);
    }

    #[test]
    fn sampler_tracks_the_enumerator_on_a_conditioned_chain() {
        let model = |ctx: &mut ModelCtx| {
            let a = ctx.sample_bool(site!["a"], Distribution::Bernoulli { p: 0.3 })?;
            let b = ctx.sample_bool(
                site!["b"],
                Distribution::Bernoulli { p: if a { 0.7 } else { 0.25 } },
            )?;
            ctx.sample_bool(
                site!["c"],
                Distribution::Bernoulli { p: if b { 0.65 } else { 0.3 } },
            )?;
            Ok(a)
        };
        let cond = ConditionSet::single(site!["c"], Value::Bool(true));
        let exact = enumerate_query(model, &InterventionSet::new(), &cond, indicator).unwrap();
        let n = 10_000;
        let est = importance_query(model, &InterventionSet::new(), &cond, indicator, n, 31)
            .unwrap();
        let tol = 3.0 / (n as f64).sqrt();
        assert!(
            (est.value - exact).abs() <= tol,
            "sampler {} vs exact {exact}",
            est.value
        );
    }

    #[test]
    fn intervention_beats_the_prior_in_a_chain() {
        // y depends on x only through the sampled site, so forcing the site
        // changes y's marginal.
        let model = |ctx: &mut ModelCtx| {
            let x = ctx.sample_bool(site!["x"], Distribution::Bernoulli { p: 0.1 })?;
            ctx.sample_bool(
                site!["y"],
                Distribution::Bernoulli { p: if x { 0.9 } else { 0.2 } },
            )
        };
        let iv = InterventionSet::single(site!["x"], Value::Bool(true));
        let exact = enumerate_query(model, &iv, &ConditionSet::new(), indicator).unwrap();
        assert!((exact - 0.9).abs() < 1e-12);
        let prior = enumerate_query(model, &InterventionSet::new(), &ConditionSet::new(), indicator)
            .unwrap();
        assert!((prior - (0.1 * 0.9 + 0.9 * 0.2)).abs() < 1e-12);
    }

    #[test]
    fn estimates_are_bit_identical_across_runs() {
        let cond = ConditionSet::single(site!["x"], Value::Bool(true));
        let run = || {
            importance_query(
                xor_collider,
                &InterventionSet::new(),
                &cond,
                indicator,
                256,
                7,
            )
            .unwrap()
        };
        assert_eq!(run(), run());
    }
}
