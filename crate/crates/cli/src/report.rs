//! Output writers. Every artifact except `meta.json` is a pure function of
//! (command, seed, config): JSON reports carry all three so a run can be
//! reproduced from the artifact alone, and CSV files echo the resolved
//! config as leading comment lines. `meta.json` holds the wall-clock time
//! and is the one file that differs between identical runs.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::Serialize;

use crate::config::ExperimentConfig;
use crate::error::CliError;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Serialize)]
pub struct Report<'a, T: Serialize> {
    pub schema_version: u32,
    pub command: &'a str,
    pub seed: u64,
    pub config: &'a ExperimentConfig,
    pub data: T,
}

impl<'a, T: Serialize> Report<'a, T> {
    pub fn new(command: &'a str, seed: u64, config: &'a ExperimentConfig, data: T) -> Self {
        Report { schema_version: SCHEMA_VERSION, command, seed, config, data }
    }
}

pub struct OutDir {
    root: PathBuf,
    command: String,
    started: Instant,
}

impl OutDir {
    pub fn create(root: &Path, command: &str) -> Result<Self, CliError> {
        fs::create_dir_all(root).map_err(|e| CliError::io(root, e))?;
        Ok(OutDir { root: root.to_path_buf(), command: command.to_string(), started: Instant::now() })
    }

    pub fn path(&self, name: &str) -> PathBuf {
        self.root.join(name)
    }

    pub fn write_json<T: Serialize>(&self, name: &str, report: &Report<T>) -> Result<(), CliError> {
        let path = self.path(name);
        let mut text = serde_json::to_string_pretty(report)
            .map_err(|e| CliError::Config(format!("serializing {name}: {e}")))?;
        text.push('\n');
        fs::write(&path, text).map_err(|e| CliError::io(&path, e))?;
        Ok(())
    }

    /// CSV with the resolved config echoed as `# `-prefixed TOML, then a
    /// header line, then one line per row.
    pub fn write_csv(
        &self,
        name: &str,
        config: &ExperimentConfig,
        header: &str,
        rows: &[String],
    ) -> Result<(), CliError> {
        let path = self.path(name);
        let config_toml = toml::to_string(config)
            .map_err(|e| CliError::Config(format!("serializing config: {e}")))?;
        let mut text = String::new();
        for line in config_toml.lines() {
            if line.is_empty() {
                text.push_str("#\n");
            } else {
                text.push_str("# ");
                text.push_str(line);
                text.push('\n');
            }
        }
        text.push_str(header);
        text.push('\n');
        for row in rows {
            text.push_str(row);
            text.push('\n');
        }
        fs::write(&path, text).map_err(|e| CliError::io(&path, e))?;
        Ok(())
    }

    /// The only artifact that varies between identical runs.
    pub fn write_meta(&self) -> Result<(), CliError> {
        #[derive(Serialize)]
        struct Meta<'a> {
            command: &'a str,
            wall_clock_ms: u128,
        }
        let meta = Meta { command: &self.command, wall_clock_ms: self.started.elapsed().as_millis() };
        let path = self.path("meta.json");
        let mut text = serde_json::to_string_pretty(&meta)
            .map_err(|e| CliError::Config(format!("serializing meta: {e}")))?;
        text.push('\n');
        fs::write(&path, text).map_err(|e| CliError::io(&path, e))?;
        Ok(())
    }
}

/// Formats a float for CSV/report output: shortest representation that
/// round-trips, so rerunning a seed yields byte-identical artifacts.
pub fn fmt_f64(v: f64) -> String {
    let mut s = format!("{v}");
    if s == "-0" {
        s = "0".to_string();
    }
    s
}
