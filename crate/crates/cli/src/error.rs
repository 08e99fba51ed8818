use blocktower_core::episode::EpisodeError;
use blocktower_core::metrics::MetricsError;
use blocktower_core::ppl::PplError;
use blocktower_core::world::WorldError;
use thiserror::Error;

/// Command failures, each mapped to a process exit code: 2 for bad
/// configuration or inputs, 3 for dataset generation failures, 4 for
/// degenerate inference, 1 for anything else.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("config: {0}")]
    Config(String),
    #[error("generation: {0}")]
    Generation(String),
    #[error("inference: {0}")]
    Inference(String),
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::Generation(_) => 3,
            CliError::Inference(_) => 4,
            CliError::Io { .. } => 1,
        }
    }

    pub fn io(path: &std::path::Path, source: std::io::Error) -> Self {
        CliError::Io { path: path.display().to_string(), source }
    }
}

impl From<WorldError> for CliError {
    fn from(err: WorldError) -> Self {
        match err {
            WorldError::GenerationFailed { .. } => CliError::Generation(err.to_string()),
            _ => CliError::Config(err.to_string()),
        }
    }
}

impl From<PplError> for CliError {
    fn from(err: PplError) -> Self {
        CliError::Inference(err.to_string())
    }
}

impl From<MetricsError> for CliError {
    fn from(err: MetricsError) -> Self {
        CliError::Config(err.to_string())
    }
}

impl From<EpisodeError> for CliError {
    fn from(err: EpisodeError) -> Self {
        match err {
            EpisodeError::Inference(e) => e.into(),
            EpisodeError::World(e) => e.into(),
        }
    }
}
