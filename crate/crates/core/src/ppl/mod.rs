//! Trace-based probabilistic-program runtime.
//!
//! A model is an ordinary function that draws named random values through a
//! [`ModelCtx`]. Running a model produces a [`Trace`]: the map from site
//! name to the distribution used, the realised value, the role the site
//! played, and its log-weight contribution.
//!
//! Two handler sets modify how a named site resolves:
//!
//! - [`InterventionSet`] (the do-operator): the site's distribution is
//!   replaced by a point mass on the given value. The site contributes
//!   nothing to the trace weight and, because the model reads the injected
//!   value, any dependence on the site's parents is severed.
//! - [`ConditionSet`]: the site takes the observed value and contributes the
//!   log-density of that value under the model's distribution, which is
//!   exactly likelihood weighting with the (post-intervention) prior as
//!   proposal.
//!
//! A name present in both sets is an error; interventions and conditions on
//! names the model never reaches are recorded as warnings on the trace.
//!
//! [`importance_query`] estimates a posterior expectation from `n` weighted
//! samples and reports the effective sample size. [`enumerate_query`]
//! computes the same expectation exactly by exhausting every assignment of
//! the finite-support sample sites; it is the oracle the sampler is tested
//! against and refuses models with continuous sample sites.

mod dist;
mod error;
mod exec;
mod infer;
pub mod rng;
mod site;
mod trace;

pub use dist::{Distribution, Value};
pub use error::PplError;
pub use exec::{run_model, ConditionSet, InterventionSet, ModelCtx};
pub use infer::{enumerate_query, importance_query, Estimate};
pub use site::SiteName;
pub use trace::{SiteRecord, SiteRole, Trace, TraceWarning};
