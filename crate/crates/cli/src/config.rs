//! Experiment configuration: a TOML file with every knob optional, falling
//! back to the defaults below. Unknown keys are rejected so typos surface
//! as config errors instead of silently running the defaults.

use std::path::Path;

use serde::{Deserialize, Serialize};

use blocktower_core::episode::{EpisodeParams, PolicyKind};
use blocktower_core::task::NoiseParams;
use blocktower_core::world::{AxisNoise, BlockSpec, WorldNoise};
use blocktower_core::Vec3;

use crate::error::CliError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub block: BlockConfig,
    pub world_noise: WorldNoiseConfig,
    pub model_noise: ModelNoiseConfig,
    pub inference: InferenceConfig,
    pub policy: PolicyConfig,
    pub datasets: DatasetConfig,
    pub episode: EpisodeConfig,
    pub heatmap: HeatmapConfig,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BlockConfig {
    /// Cube side, cm.
    pub side: f64,
    pub mass: f64,
}

impl Default for BlockConfig {
    fn default() -> Self {
        BlockConfig { side: 7.5, mass: 100.0 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct WorldNoiseConfig {
    pub observation: ChannelConfig,
    pub actuation: ChannelConfig,
}

/// Per-axis Gaussian noise of one channel; axis order x, y, z.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChannelConfig {
    pub mean: [f64; 3],
    pub sigma: [f64; 3],
}

impl Default for WorldNoiseConfig {
    fn default() -> Self {
        WorldNoiseConfig {
            observation: ChannelConfig { mean: [0.0; 3], sigma: [0.906, 0.216, 0.284] },
            actuation: ChannelConfig { mean: [0.0; 3], sigma: [1.790, 2.770, 0.146] },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ModelNoiseConfig {
    pub sigma_z: f64,
    pub sigma_a: f64,
}

impl Default for ModelNoiseConfig {
    fn default() -> Self {
        ModelNoiseConfig { sigma_z: 0.469, sigma_a: 1.570 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct InferenceConfig {
    /// Posterior samples per stability query.
    pub n_samples: usize,
}

impl Default for InferenceConfig {
    fn default() -> Self {
        InferenceConfig { n_samples: 50 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PolicyConfig {
    pub grid_rows: u32,
    pub grid_cols: u32,
    /// Prediction threshold on phi.
    pub tau_stable_z: f64,
    /// Candidate acceptance threshold.
    pub tau_stable_a: f64,
    /// Probability margin pooling near-best candidates.
    pub tau_cluster: f64,
}

impl Default for PolicyConfig {
    fn default() -> Self {
        PolicyConfig {
            grid_rows: 5,
            grid_cols: 5,
            tau_stable_z: 0.40,
            tau_stable_a: 0.8,
            tau_cluster: 0.2,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DatasetConfig {
    pub prediction_towers: u32,
    pub prediction_blocks: u32,
    pub action_towers: u32,
    pub action_trials: u32,
    /// Per-block uniform offset range for generated towers, cm.
    pub offset_range: f64,
    pub characterize_pairs: u32,
}

impl Default for DatasetConfig {
    fn default() -> Self {
        DatasetConfig {
            prediction_towers: 1000,
            prediction_blocks: 3,
            action_towers: 50,
            action_trials: 10,
            offset_range: 5.0,
            characterize_pairs: 250,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EpisodeConfig {
    pub k_steps: u32,
}

impl Default for EpisodeConfig {
    fn default() -> Self {
        EpisodeConfig { k_steps: 2 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct HeatmapConfig {
    pub rows: u32,
    pub cols: u32,
}

impl Default for HeatmapConfig {
    fn default() -> Self {
        HeatmapConfig { rows: 21, cols: 21 }
    }
}

impl ExperimentConfig {
    pub fn load(path: Option<&Path>) -> Result<Self, CliError> {
        let config = match path {
            None => ExperimentConfig::default(),
            Some(path) => {
                let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
                toml::from_str(&text)
                    .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?
            }
        };
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        let fail = |msg: &str| Err(CliError::Config(msg.into()));
        let finite_nonneg = |s: f64| s.is_finite() && s >= 0.0;
        if !self.block.side.is_finite()
            || self.block.side <= 0.0
            || !self.block.mass.is_finite()
            || self.block.mass <= 0.0
        {
            return fail("block side and mass must be finite and > 0");
        }
        for (name, channel) in [
            ("world_noise.observation", &self.world_noise.observation),
            ("world_noise.actuation", &self.world_noise.actuation),
        ] {
            if !channel.sigma.iter().all(|s| finite_nonneg(*s)) {
                return fail(&format!("{name}.sigma must be finite and >= 0 per axis"));
            }
            if !channel.mean.iter().all(|v| v.is_finite()) {
                return fail(&format!("{name}.mean must be finite"));
            }
        }
        if !finite_nonneg(self.model_noise.sigma_z) || !finite_nonneg(self.model_noise.sigma_a) {
            return fail("model_noise sigmas must be finite and >= 0");
        }
        if self.inference.n_samples < 1 {
            return fail("inference.n_samples must be >= 1");
        }
        if self.policy.grid_rows < 1 || self.policy.grid_cols < 1 {
            return fail("policy grid must be at least 1x1");
        }
        for (name, tau) in [
            ("tau_stable_z", self.policy.tau_stable_z),
            ("tau_stable_a", self.policy.tau_stable_a),
            ("tau_cluster", self.policy.tau_cluster),
        ] {
            if !(0.0..=1.0).contains(&tau) {
                return fail(&format!("policy.{name} must lie in [0, 1]"));
            }
        }
        let d = &self.datasets;
        if d.prediction_towers < 1
            || d.prediction_blocks < 1
            || d.action_towers < 1
            || d.action_trials < 1
            || d.characterize_pairs < 2
        {
            return fail("dataset counts must be >= 1 (characterize_pairs >= 2)");
        }
        if !finite_nonneg(d.offset_range) {
            return fail("datasets.offset_range must be finite and >= 0");
        }
        if self.episode.k_steps < 1 {
            return fail("episode.k_steps must be >= 1");
        }
        if self.heatmap.rows < 1 || self.heatmap.cols < 1 {
            return fail("heatmap grid must be at least 1x1");
        }
        Ok(())
    }

    pub fn block_spec(&self) -> BlockSpec {
        BlockSpec { dims: Vec3::new(self.block.side, self.block.side, self.block.side), mass: self.block.mass }
    }

    pub fn world_noise(&self) -> WorldNoise {
        let channel = |c: &ChannelConfig| {
            [
                AxisNoise::new(c.mean[0], c.sigma[0]),
                AxisNoise::new(c.mean[1], c.sigma[1]),
                AxisNoise::new(c.mean[2], c.sigma[2]),
            ]
        };
        WorldNoise {
            obs: channel(&self.world_noise.observation),
            act: channel(&self.world_noise.actuation),
        }
    }

    pub fn model_noise(&self) -> NoiseParams {
        NoiseParams { sigma_z: self.model_noise.sigma_z, sigma_a: self.model_noise.sigma_a }
    }

    pub fn episode_params(&self, policy: PolicyKind) -> EpisodeParams {
        EpisodeParams {
            policy,
            noise: self.model_noise(),
            n_samples: self.inference.n_samples,
            grid_rows: self.policy.grid_rows,
            grid_cols: self.policy.grid_cols,
            tau_stable_a: self.policy.tau_stable_a,
            tau_cluster: self.policy.tau_cluster,
        }
    }

    /// Zeroes actuation noise in both the world and the model.
    pub fn without_actuation_noise(mut self) -> Self {
        self.world_noise.actuation = ChannelConfig { mean: [0.0; 3], sigma: [0.0; 3] };
        self.model_noise.sigma_a = 0.0;
        self
    }
}
