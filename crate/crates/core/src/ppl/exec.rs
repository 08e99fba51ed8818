use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use rand_chacha::ChaCha8Rng;

use super::dist::{Distribution, Value};
use super::error::PplError;
use super::rng;
use super::site::SiteName;
use super::trace::{SiteRecord, SiteRole, Trace, TraceWarning};

/// Sites forced to a value by the do-operator.
#[derive(Clone, PartialEq, Debug, Default)]
pub struct InterventionSet {
    map: BTreeMap<SiteName, Value>,
}

impl InterventionSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn single(name: impl Into<SiteName>, value: Value) -> Self {
        let mut set = Self::new();
        set.insert(name, value);
        set
    }

    pub fn insert(&mut self, name: impl Into<SiteName>, value: Value) -> &mut Self {
        self.map.insert(name.into(), value);
        self
    }

    pub fn get(&self, name: &SiteName) -> Option<&Value> {
        self.map.get(name)
    }

    pub fn contains(&self, name: &SiteName) -> bool {
        self.map.contains_key(name)
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&SiteName, &Value)> {
        self.map.iter()
    }
}

impl FromIterator<(SiteName, Value)> for InterventionSet {
    fn from_iter<I: IntoIterator<Item = (SiteName, Value)>>(iter: I) -> Self {
        InterventionSet { map: iter.into_iter().collect() }
    }
}

/// Sites clamped to an observed value; each contributes the log-density of
/// the observation under the model's distribution (likelihood weighting).
#[derive(Clone, PartialEq, Debug, Default)]
pub struct ConditionSet {
    map: BTreeMap<SiteName, Value>,
}

impl ConditionSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn single(name: impl Into<SiteName>, value: Value) -> Self {
        let mut set = Self::new();
        set.insert(name, value);
        set
    }

    pub fn insert(&mut self, name: impl Into<SiteName>, value: Value) -> &mut Self {
        self.map.insert(name.into(), value);
        self
    }

    pub fn get(&self, name: &SiteName) -> Option<&Value> {
        self.map.get(name)
    }

    pub fn contains(&self, name: &SiteName) -> bool {
        self.map.contains_key(name)
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&SiteName, &Value)> {
        self.map.iter()
    }
}

impl FromIterator<(SiteName, Value)> for ConditionSet {
    fn from_iter<I: IntoIterator<Item = (SiteName, Value)>>(iter: I) -> Self {
        ConditionSet { map: iter.into_iter().collect() }
    }
}

/// First unassigned finite-support sample site met during an enumeration
/// pass, together with its support.
pub(crate) struct Frontier {
    pub site: SiteName,
    pub support: Vec<(Value, f64)>,
}

// One Driver lives per model execution; inlining the RNG outweighs boxing
// it in the per-sample hot path.
#[allow(clippy::large_enum_variant)]
enum Driver {
    /// Draw sample sites from this stream.
    Sample(ChaCha8Rng),
    /// Resolve sample sites from a fixed assignment; their prior log-mass
    /// goes into the trace weight. The first site missing from the
    /// assignment becomes the frontier and the rest of the run is throwaway.
    Enumerate {
        assignment: BTreeMap<SiteName, Value>,
        frontier: Option<Frontier>,
    },
}

/// Execution context a model draws through; created by [`run_model`] and
/// the query functions.
pub struct ModelCtx<'h> {
    interventions: &'h InterventionSet,
    conditions: &'h ConditionSet,
    trace: Trace,
    driver: Driver,
}

impl<'h> ModelCtx<'h> {
    fn new(
        interventions: &'h InterventionSet,
        conditions: &'h ConditionSet,
        driver: Driver,
    ) -> Result<Self, PplError> {
        for (name, _) in interventions.iter() {
            if conditions.contains(name) {
                return Err(PplError::ConflictingHandler(name.clone()));
            }
        }
        Ok(ModelCtx {
            interventions,
            conditions,
            trace: Trace::new(),
            driver,
        })
    }

    /// Resolves one named site: intervention wins over condition wins over
    /// sampling. Returns the value the model should use downstream.
    pub fn sample(&mut self, name: SiteName, dist: Distribution) -> Result<Value, PplError> {
        if let Err(reason) = dist.validate() {
            return Err(PplError::InvalidDistribution { site: name, reason });
        }
        if self.trace.contains(&name) {
            return Err(PplError::DuplicateSite(name));
        }

        let (value, role, log_weight) = if let Some(v) = self.interventions.get(&name) {
            (v.clone(), SiteRole::Intervened, 0.0)
        } else if let Some(v) = self.conditions.get(&name) {
            let lw = dist.log_density(v).map_err(|expected| PplError::TypeMismatch {
                site: name.clone(),
                expected,
                found: v.kind(),
            })?;
            (v.clone(), SiteRole::Observed, lw)
        } else {
            match &mut self.driver {
                Driver::Sample(rng) => (dist.sample(rng), SiteRole::Sampled, 0.0),
                Driver::Enumerate { assignment, frontier } => {
                    let support = dist
                        .finite_support()
                        .ok_or_else(|| PplError::NotEnumerable(name.clone()))?;
                    let value = match assignment.get(&name) {
                        Some(v) => v.clone(),
                        None => {
                            let first = support[0].0.clone();
                            if frontier.is_none() {
                                *frontier = Some(Frontier {
                                    site: name.clone(),
                                    support: support.clone(),
                                });
                            }
                            first
                        }
                    };
                    let mass = support
                        .iter()
                        .find(|(v, _)| *v == value)
                        .map(|(_, p)| *p)
                        .unwrap_or(0.0);
                    (value, SiteRole::Sampled, crate::math::ln(mass))
                }
            }
        };

        self.trace.insert(
            name,
            SiteRecord { distribution: dist, value: value.clone(), role, log_weight },
        );
        Ok(value)
    }

    pub fn sample_real(&mut self, name: SiteName, dist: Distribution) -> Result<f64, PplError> {
        let v = self.sample(name.clone(), dist)?;
        v.as_real().ok_or(PplError::TypeMismatch {
            site: name,
            expected: "real",
            found: kind_of(&v),
        })
    }

    pub fn sample_bool(&mut self, name: SiteName, dist: Distribution) -> Result<bool, PplError> {
        let v = self.sample(name.clone(), dist)?;
        v.as_bool().ok_or(PplError::TypeMismatch {
            site: name,
            expected: "bool",
            found: kind_of(&v),
        })
    }

    pub fn sample_index(&mut self, name: SiteName, dist: Distribution) -> Result<usize, PplError> {
        let v = self.sample(name.clone(), dist)?;
        v.as_index().ok_or(PplError::TypeMismatch {
            site: name,
            expected: "index",
            found: kind_of(&v),
        })
    }

    pub fn sample_vec2(&mut self, name: SiteName, dist: Distribution) -> Result<[f64; 2], PplError> {
        let v = self.sample(name.clone(), dist)?;
        v.as_vec2().ok_or(PplError::TypeMismatch {
            site: name,
            expected: "vec2",
            found: kind_of(&v),
        })
    }

    pub fn sample_vec3(&mut self, name: SiteName, dist: Distribution) -> Result<[f64; 3], PplError> {
        let v = self.sample(name.clone(), dist)?;
        v.as_vec3().ok_or(PplError::TypeMismatch {
            site: name,
            expected: "vec3",
            found: kind_of(&v),
        })
    }

    /// Read-only view of the trace built so far.
    pub fn trace(&self) -> &Trace {
        &self.trace
    }

    fn finish(mut self) -> (Trace, Option<Frontier>) {
        for (name, _) in self.interventions.iter() {
            if !self.trace.contains(name) {
                self.trace
                    .warnings
                    .push(TraceWarning::UnusedIntervention(name.clone()));
            }
        }
        for (name, _) in self.conditions.iter() {
            if !self.trace.contains(name) {
                self.trace
                    .warnings
                    .push(TraceWarning::UnusedCondition(name.clone()));
            }
        }
        let frontier = match self.driver {
            Driver::Sample(_) => None,
            Driver::Enumerate { frontier, .. } => frontier,
        };
        (self.trace, frontier)
    }
}

fn kind_of(v: &Value) -> &'static str {
    v.kind()
}

/// Runs `model` once under the given handlers with a stream seeded by
/// `seed`, returning the model's value and the complete trace.
pub fn run_model<T, M>(
    model: M,
    interventions: &InterventionSet,
    conditions: &ConditionSet,
    seed: u64,
) -> Result<(T, Trace), PplError>
where
    M: Fn(&mut ModelCtx) -> Result<T, PplError>,
{
    run_sampled(&model, interventions, conditions, rng::rng_stream(seed, 0))
}

pub(crate) fn run_sampled<T, M>(
    model: &M,
    interventions: &InterventionSet,
    conditions: &ConditionSet,
    rng: ChaCha8Rng,
) -> Result<(T, Trace), PplError>
where
    M: Fn(&mut ModelCtx) -> Result<T, PplError>,
{
    let mut ctx = ModelCtx::new(interventions, conditions, Driver::Sample(rng))?;
    let value = model(&mut ctx)?;
    let (trace, _) = ctx.finish();
    Ok((value, trace))
}

pub(crate) fn run_enumerated<T, M>(
    model: &M,
    interventions: &InterventionSet,
    conditions: &ConditionSet,
    assignment: &BTreeMap<SiteName, Value>,
) -> Result<(T, Trace, Option<Frontier>), PplError>
where
    M: Fn(&mut ModelCtx) -> Result<T, PplError>,
{
    let driver = Driver::Enumerate { assignment: assignment.clone(), frontier: None };
    let mut ctx = ModelCtx::new(interventions, conditions, driver)?;
    let value = model(&mut ctx)?;
    let (trace, frontier) = ctx.finish();
    Ok((value, trace, frontier))
}
