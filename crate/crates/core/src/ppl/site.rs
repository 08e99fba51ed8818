use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

/// Structured name of a random-choice site: an ordered list of string
/// segments, e.g. `["wz", "2", "x"]`. Segment lists compare
/// lexicographically, which gives traces a stable site order.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct SiteName(Vec<String>);

impl SiteName {
    /// Builds a name from its segments. Names must have at least one segment.
    pub fn new<I, S>(segments: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let segs: Vec<String> = segments.into_iter().map(Into::into).collect();
        debug_assert!(!segs.is_empty(), "site name needs at least one segment");
        SiteName(segs)
    }

    pub fn segments(&self) -> &[String] {
        &self.0
    }
}

impl fmt::Display for SiteName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, seg) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, "/")?;
            }
            write!(f, "{seg}")?;
        }
        Ok(())
    }
}

impl From<&str> for SiteName {
    fn from(s: &str) -> Self {
        SiteName(alloc::vec![s.to_string()])
    }
}

/// Builds a [`SiteName`] from a comma-separated list of segments; each
/// segment can be anything with a `Display` impl: `site!["wz", idx, "x"]`.
#[macro_export]
macro_rules! site {
    ($($seg:expr),+ $(,)?) => {
        $crate::ppl::SiteName::new([$($crate::__private::format!("{}", $seg)),+])
    };
}
