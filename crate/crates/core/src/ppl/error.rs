use super::site::SiteName;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PplError {
    /// The model drew a value at a name that already appeared in the trace.
    #[error("duplicate site name `{0}` in one model run")]
    DuplicateSite(SiteName),

    /// The same name appears in both the intervention and the condition set.
    #[error("site `{0}` is both intervened and conditioned")]
    ConflictingHandler(SiteName),

    /// A distribution parameter is outside its domain.
    #[error("invalid distribution at site `{site}`: {reason}")]
    InvalidDistribution { site: SiteName, reason: &'static str },

    /// A handler injected (or a density was requested for) a value of the
    /// wrong kind for the site's distribution.
    #[error("type mismatch at site `{site}`: expected {expected}, got {found}")]
    TypeMismatch {
        site: SiteName,
        expected: &'static str,
        found: &'static str,
    },

    /// All importance weights vanished, or the effective sample size
    /// collapsed to a single sample; the conditioning is (numerically)
    /// impossible under the model.
    #[error("degenerate importance weights: ess {ess} of {n} samples")]
    DegenerateWeights { n: usize, ess: f64 },

    /// Exact enumeration reached a sample site with continuous support.
    #[error("site `{0}` has continuous support and cannot be enumerated")]
    NotEnumerable(SiteName),
}
