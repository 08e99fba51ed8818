//! Generative models of the stack-a-block task.
//!
//! The task state is a settled tower plus a queue of blocks waiting to be
//! placed. The robot never sees the true tower: it receives per-block
//! position estimates and acts through a noisy placement. Three model
//! builders cover the pipeline:
//!
//! - [`latent_state_model`]: posterior over the true tower given an
//!   observation, as independent per-axis Gaussian noise around the
//!   estimates,
//! - [`transition_model`]: noisy placement of the next queued block onto a
//!   known tower,
//! - [`full_step_model`]: the two composed in a single trace, emitting
//!   whether the successor tower is stable.
//!
//! Every random quantity lives at a named site (see [`sites`]), so queries
//! can condition on or intervene at any of them. The placement target site
//! ([`sites::action`]) is declared as a point mass on the intended action
//! precisely so the do-operator can substitute candidate actions without
//! touching the rest of the program.

use alloc::vec::Vec;

use crate::physics::{self, Block, TowerState, Vec3};
use crate::ppl::{Distribution, ModelCtx, PplError, Value};

#[cfg(feature = "serde")]
use serde::{Deserialize, Serialize};

/// Isotropic model noise: `sigma_z` on each axis of each observed block
/// position, `sigma_a` on each axis of a placement.
#[derive(Clone, Copy, PartialEq, Debug)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct NoiseParams {
    pub sigma_z: f64,
    pub sigma_a: f64,
}

/// Placement target in the horizontal plane.
#[derive(Clone, Copy, PartialEq, Debug)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct Action {
    pub x: f64,
    pub y: f64,
}

impl Action {
    pub fn new(x: f64, y: f64) -> Self {
        Action { x, y }
    }
}

/// Per-block position estimates. Block identities, dimensions and masses
/// are assumed known exactly; only the centres are noisy.
#[derive(Clone, PartialEq, Debug)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct Observation {
    pub blocks: Vec<Block>,
}

/// Full task state: the standing tower and the queue of blocks still to be
/// placed, front first. Ids across tower and queue are disjoint.
#[derive(Clone, PartialEq, Debug)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct TaskState {
    pub tower: TowerState,
    pub queue: Vec<Block>,
}

impl TaskState {
    pub fn new(tower: TowerState, queue: Vec<Block>) -> Result<Self, physics::PhysicsError> {
        let mut seen = tower.clone();
        for block in &queue {
            seen.push(*block)?;
        }
        Ok(TaskState { tower, queue })
    }
}

/// Site-name constructors shared by the models, the policies and the tests.
pub mod sites {
    use crate::ppl::SiteName;
    use crate::site;

    #[derive(Clone, Copy, PartialEq, Eq, Debug)]
    pub enum Axis {
        X,
        Y,
        Z,
    }

    impl Axis {
        pub const ALL: [Axis; 3] = [Axis::X, Axis::Y, Axis::Z];

        pub fn as_str(self) -> &'static str {
            match self {
                Axis::X => "x",
                Axis::Y => "y",
                Axis::Z => "z",
            }
        }
    }

    /// Observation input for one axis of one block.
    pub fn observed(block_id: u32, axis: Axis) -> SiteName {
        site!["z", block_id, axis.as_str()]
    }

    /// Observation-noise draw for one axis of one block.
    pub fn obs_noise(block_id: u32, axis: Axis) -> SiteName {
        site!["wz", block_id, axis.as_str()]
    }

    /// Latent (true) position of one axis of one block.
    pub fn latent(block_id: u32, axis: Axis) -> SiteName {
        site!["s", block_id, axis.as_str()]
    }

    /// Placement target of the current step.
    pub fn action() -> SiteName {
        site!["a"]
    }

    /// Actuation-noise draw of the current step.
    pub fn act_noise() -> SiteName {
        site!["wa"]
    }

    /// Post-step position of one axis of one block.
    pub fn successor(block_id: u32, axis: Axis) -> SiteName {
        site!["s_next", block_id, axis.as_str()]
    }

    /// Whether the post-step tower is stable.
    pub fn outcome() -> SiteName {
        site!["stable"]
    }
}

use sites::Axis;

/// Outcome of one modelled placement step.
#[derive(Clone, PartialEq, Debug)]
pub struct StepOutcome {
    pub successor: TowerState,
    pub stable: bool,
}

/// Draws one latent tower consistent with `observation`: per block and axis,
/// latent = estimate + Gaussian(0, sigma_z) noise, then the tower is
/// settled. The observation must contain at least one block.
pub fn sample_latent_tower(
    ctx: &mut ModelCtx,
    observation: &Observation,
    noise: &NoiseParams,
) -> Result<TowerState, PplError> {
    assert!(!observation.blocks.is_empty(), "observation has no blocks");
    let mut latent_blocks = Vec::with_capacity(observation.blocks.len());
    for block in &observation.blocks {
        let estimate = [block.center.x, block.center.y, block.center.z];
        let mut latent = [0.0; 3];
        for (axis, (est, out)) in Axis::ALL.iter().zip(estimate.iter().zip(latent.iter_mut())) {
            let z = ctx.sample_real(
                sites::observed(block.id, *axis),
                Distribution::delta(Value::Real(*est)),
            )?;
            let wz = ctx.sample_real(
                sites::obs_noise(block.id, *axis),
                Distribution::GaussianScalar { mean: 0.0, sigma: noise.sigma_z },
            )?;
            *out = ctx.sample_real(
                sites::latent(block.id, *axis),
                Distribution::delta(Value::Real(z + wz)),
            )?;
        }
        let mut b = *block;
        b.center = Vec3::new(latent[0], latent[1], latent[2]);
        latent_blocks.push(b);
    }
    let tower = TowerState::new(latent_blocks).expect("observation block ids are unique");
    Ok(physics::settle(&tower).expect("observation is non-empty"))
}

/// Places `queue_front` on `tower` at `action` plus isotropic actuation
/// noise, settles, and records the successor positions and the stability
/// outcome at named sites.
pub fn sample_transition(
    ctx: &mut ModelCtx,
    tower: &TowerState,
    queue_front: &Block,
    action: Action,
    noise: &NoiseParams,
) -> Result<StepOutcome, PplError> {
    let a = ctx.sample_vec2(
        sites::action(),
        Distribution::delta(Value::Vec2([action.x, action.y])),
    )?;
    let wa = ctx.sample_vec3(
        sites::act_noise(),
        Distribution::GaussianIsotropic3 { mean: [0.0; 3], sigma: noise.sigma_a },
    )?;

    let drop_z = tower.top().map_or(0.0, Block::top_z) + queue_front.dims.z / 2.0;
    let mut placed = *queue_front;
    placed.center = Vec3::new(a[0] + wa[0], a[1] + wa[1], drop_z + wa[2]);

    let mut successor = tower.clone();
    successor
        .push(placed)
        .expect("queue ids are disjoint from tower ids");
    let settled = physics::settle(&successor).expect("successor is non-empty");

    // Read the successor positions back through their sites so that
    // interventions on them propagate into the recorded outcome.
    let mut final_blocks = Vec::with_capacity(settled.len());
    for block in settled.blocks() {
        let coords = [block.center.x, block.center.y, block.center.z];
        let mut out = [0.0; 3];
        for (axis, (c, o)) in Axis::ALL.iter().zip(coords.iter().zip(out.iter_mut())) {
            *o = ctx.sample_real(
                sites::successor(block.id, *axis),
                Distribution::delta(Value::Real(*c)),
            )?;
        }
        let mut b = *block;
        b.center = Vec3::new(out[0], out[1], out[2]);
        final_blocks.push(b);
    }
    let final_tower = TowerState::new(final_blocks).expect("successor block ids are unique");
    let verdict = physics::is_stable(&final_tower).expect("successor is non-empty");

    let stable = ctx.sample_bool(
        sites::outcome(),
        Distribution::delta(Value::Bool(verdict.stable)),
    )?;
    Ok(StepOutcome { successor: final_tower, stable })
}

/// Posterior over the true tower given `observation`.
pub fn latent_state_model(
    observation: &Observation,
    noise: NoiseParams,
) -> impl Fn(&mut ModelCtx) -> Result<TowerState, PplError> + '_ {
    move |ctx| sample_latent_tower(ctx, observation, &noise)
}

/// Noisy placement of `queue_front` onto the known tower `tower`.
pub fn transition_model<'a>(
    tower: &'a TowerState,
    queue_front: &'a Block,
    action: Action,
    noise: NoiseParams,
) -> impl Fn(&mut ModelCtx) -> Result<StepOutcome, PplError> + 'a {
    move |ctx| sample_transition(ctx, tower, queue_front, action, &noise)
}

/// One full step: latent tower from the observation, then a noisy placement
/// of `queue_front` at `action`.
pub fn full_step_model<'a>(
    observation: &'a Observation,
    queue_front: &'a Block,
    action: Action,
    noise: NoiseParams,
) -> impl Fn(&mut ModelCtx) -> Result<StepOutcome, PplError> + 'a {
    move |ctx| {
        let latent = sample_latent_tower(ctx, observation, &noise)?;
        sample_transition(ctx, &latent, queue_front, action, &noise)
    }
}
