//! Ground-truth environment simulator.
//!
//! A [`World`] owns the latent true task state and an RNG. It emits noisy
//! observations and executes noisy placements; both noise channels are
//! per-axis Gaussian with their own mean and spread, so the environment can
//! be anisotropic and biased even when the model assumes isotropic zero-mean
//! noise. Outcome labels always come from the quasi-static oracle applied to
//! the latent state; model parameters never touch them.

use alloc::vec::Vec;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use thiserror::Error;

use crate::physics::{self, Block, PhysicsError, StabilityVerdict, TowerState, Vec3};
use crate::ppl::rng::rng_stream;
use crate::task::{Action, Observation, TaskState};

#[cfg(feature = "serde")]
use serde::{Deserialize, Serialize};

/// Gaussian noise on one axis.
#[derive(Clone, Copy, PartialEq, Debug, Default)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct AxisNoise {
    pub mean: f64,
    pub sigma: f64,
}

impl AxisNoise {
    pub const NONE: AxisNoise = AxisNoise { mean: 0.0, sigma: 0.0 };

    pub fn new(mean: f64, sigma: f64) -> Self {
        AxisNoise { mean, sigma }
    }

    fn sample(&self, rng: &mut ChaCha8Rng) -> f64 {
        self.mean + self.sigma * rng.sample::<f64, _>(StandardNormal)
    }
}

/// Environment noise: `obs` perturbs each observed block position, `act`
/// perturbs each executed placement. Axis order is x, y, z.
#[derive(Clone, Copy, PartialEq, Debug)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct WorldNoise {
    pub obs: [AxisNoise; 3],
    pub act: [AxisNoise; 3],
}

impl WorldNoise {
    pub fn none() -> Self {
        WorldNoise { obs: [AxisNoise::NONE; 3], act: [AxisNoise::NONE; 3] }
    }

    /// Zero-mean noise with the given per-axis spreads.
    pub fn with_sigmas(obs: [f64; 3], act: [f64; 3]) -> Self {
        WorldNoise {
            obs: obs.map(|s| AxisNoise::new(0.0, s)),
            act: act.map(|s| AxisNoise::new(0.0, s)),
        }
    }

    fn validate(&self) -> Result<(), WorldError> {
        for (channel, axes) in [("obs", &self.obs), ("act", &self.act)] {
            for (axis, noise) in ["x", "y", "z"].iter().zip(axes.iter()) {
                if noise.sigma < 0.0 || !noise.sigma.is_finite() || !noise.mean.is_finite() {
                    return Err(WorldError::InvalidNoise { channel, axis });
                }
            }
        }
        Ok(())
    }
}

/// Shape and mass shared by every generated block.
#[derive(Clone, Copy, PartialEq, Debug)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct BlockSpec {
    pub dims: Vec3,
    pub mass: f64,
}

impl BlockSpec {
    pub fn cube(side: f64, mass: f64) -> Self {
        BlockSpec { dims: Vec3::new(side, side, side), mass }
    }

    pub fn block(&self, id: u32, center: Vec3) -> Block {
        Block::new(id, center, self.dims, self.mass)
    }
}

impl Default for BlockSpec {
    fn default() -> Self {
        BlockSpec::cube(7.5, 100.0)
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum WorldError {
    #[error("no block left in the queue")]
    EmptyQueue,
    #[error("no stable tower found in {attempts} attempts")]
    GenerationFailed { attempts: u32 },
    #[error("invalid {channel} noise on axis {axis}")]
    InvalidNoise { channel: &'static str, axis: &'static str },
    #[error(transparent)]
    Physics(#[from] PhysicsError),
}

/// One executed placement: where the robot aimed, where the block actually
/// ended up before settling, and the resulting ground-truth verdict.
#[derive(Clone, Copy, PartialEq, Debug)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct Placement {
    pub intended: Action,
    /// Realized block centre including the actuation error on all three
    /// axes; the z error is visible here even though settling removes it
    /// from the tower.
    pub realized: Vec3,
    pub verdict: StabilityVerdict,
}

/// The environment: latent true state, noise channels, RNG.
#[derive(Clone, Debug)]
pub struct World {
    state: TaskState,
    noise: WorldNoise,
    rng: ChaCha8Rng,
}

impl World {
    pub fn new(state: TaskState, noise: WorldNoise, seed: u64) -> Result<Self, WorldError> {
        noise.validate()?;
        Ok(World { state, noise, rng: rng_stream(seed, 0) })
    }

    /// Ground-truth state, for labelling and tests only; policies must go
    /// through [`World::observe`].
    pub fn state(&self) -> &TaskState {
        &self.state
    }

    pub fn noise(&self) -> &WorldNoise {
        &self.noise
    }

    /// Replaces the latent state without touching the RNG stream. Used by
    /// repeated-measurement protocols that re-arm the same setup.
    pub fn reset_state(&mut self, state: TaskState) {
        self.state = state;
    }

    /// Noisy view of the current tower. Blocks come out in stacking order;
    /// noise draws are consumed per block in x, y, z order.
    pub fn observe(&mut self) -> Observation {
        let mut blocks = Vec::with_capacity(self.state.tower.len());
        for block in self.state.tower.blocks() {
            let mut noisy = *block;
            noisy.center.x = block.center.x + self.noise.obs[0].sample(&mut self.rng);
            noisy.center.y = block.center.y + self.noise.obs[1].sample(&mut self.rng);
            noisy.center.z = block.center.z + self.noise.obs[2].sample(&mut self.rng);
            blocks.push(noisy);
        }
        Observation { blocks }
    }

    /// Places the queue front at `action` plus actuation noise, settles the
    /// tower, and labels the result on the true state. The queue is popped
    /// whether or not the tower survives.
    pub fn execute_place(&mut self, action: Action) -> Result<Placement, WorldError> {
        if self.state.queue.is_empty() {
            return Err(WorldError::EmptyQueue);
        }
        let front = self.state.queue.remove(0);
        let drop_z = self.state.tower.top().map_or(0.0, Block::top_z) + front.dims.z / 2.0;
        let realized = Vec3::new(
            action.x + self.noise.act[0].sample(&mut self.rng),
            action.y + self.noise.act[1].sample(&mut self.rng),
            drop_z + self.noise.act[2].sample(&mut self.rng),
        );

        let mut placed = front;
        placed.center = realized;
        self.state.tower.push(placed).expect("queue ids are disjoint from tower ids");
        let settled = physics::settle(&self.state.tower)?;
        let verdict = physics::is_stable(&settled)?;
        self.state.tower = settled;
        Ok(Placement { intended: action, realized, verdict })
    }
}

/// Rejection budget for [`random_tower`].
pub const GENERATION_ATTEMPTS: u32 = 10_000;

/// Samples a settled tower of `n_blocks` cubes: the base sits at the origin
/// and each further block is offset from the one below by per-axis uniform
/// draws from `[-offset_range, offset_range]`. With `require_stable`,
/// rejection-samples until the ground-truth oracle accepts, up to
/// [`GENERATION_ATTEMPTS`] attempts. The queue starts empty.
pub fn random_tower(
    spec: &BlockSpec,
    n_blocks: u32,
    offset_range: f64,
    require_stable: bool,
    seed: u64,
) -> Result<TaskState, WorldError> {
    assert!(n_blocks >= 1, "towers need at least one block");
    assert!(offset_range >= 0.0, "offset_range must be >= 0");
    let mut rng = rng_stream(seed, 0);
    for _ in 0..GENERATION_ATTEMPTS {
        let mut blocks = Vec::with_capacity(n_blocks as usize);
        let (mut x, mut y) = (0.0, 0.0);
        for id in 0..n_blocks {
            if id > 0 {
                x += rng.gen_range(-offset_range..=offset_range);
                y += rng.gen_range(-offset_range..=offset_range);
            }
            blocks.push(spec.block(id, Vec3::new(x, y, 0.0)));
        }
        let tower = physics::settle(&TowerState::new(blocks)?)?;
        if !require_stable || physics::is_stable(&tower)?.stable {
            return Ok(TaskState { tower, queue: Vec::new() });
        }
    }
    Err(WorldError::GenerationFailed { attempts: GENERATION_ATTEMPTS })
}

/// Cubes to feed the placement queue, ids continuing after the tower's.
pub fn queued_cubes(spec: &BlockSpec, first_id: u32, count: u32) -> Vec<Block> {
    (0..count)
        .map(|i| spec.block(first_id + i, Vec3::default()))
        .collect()
}
