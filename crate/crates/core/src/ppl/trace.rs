use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use super::dist::{Distribution, Value};
use super::site::SiteName;

/// How a site's value was obtained.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum SiteRole {
    Sampled,
    Observed,
    Intervened,
}

/// One resolved site of a model run.
#[derive(Clone, PartialEq, Debug)]
pub struct SiteRecord {
    /// The distribution the model declared at this site (the pre-handler
    /// one; an intervention replaces it for sampling purposes but the
    /// declaration is kept for inspection).
    pub distribution: Distribution,
    pub value: Value,
    pub role: SiteRole,
    /// This site's contribution to the trace log-weight. Zero for sampled
    /// and intervened sites under likelihood weighting.
    pub log_weight: f64,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum TraceWarning {
    /// An intervention named a site the model never reached.
    UnusedIntervention(SiteName),
    /// A condition named a site the model never reached.
    UnusedCondition(SiteName),
}

/// Complete record of one model run.
#[derive(Clone, PartialEq, Debug, Default)]
pub struct Trace {
    sites: BTreeMap<SiteName, SiteRecord>,
    /// Sum of per-site contributions (log importance weight of the run).
    pub log_weight: f64,
    pub warnings: Vec<TraceWarning>,
}

impl Trace {
    pub(crate) fn new() -> Self {
        Trace::default()
    }

    pub(crate) fn insert(&mut self, name: SiteName, record: SiteRecord) {
        self.log_weight += record.log_weight;
        let prev = self.sites.insert(name, record);
        debug_assert!(prev.is_none(), "duplicate site insert");
    }

    pub fn contains(&self, name: &SiteName) -> bool {
        self.sites.contains_key(name)
    }

    pub fn get(&self, name: &SiteName) -> Option<&SiteRecord> {
        self.sites.get(name)
    }

    pub fn value(&self, name: &SiteName) -> Option<&Value> {
        self.sites.get(name).map(|r| &r.value)
    }

    pub fn real(&self, name: &SiteName) -> Option<f64> {
        self.value(name).and_then(Value::as_real)
    }

    pub fn boolean(&self, name: &SiteName) -> Option<bool> {
        self.value(name).and_then(Value::as_bool)
    }

    /// Sites in name order.
    pub fn sites(&self) -> impl Iterator<Item = (&SiteName, &SiteRecord)> {
        self.sites.iter()
    }

    pub fn len(&self) -> usize {
        self.sites.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sites.is_empty()
    }
}
