//! Core library for stacking blocks under uncertainty.
//!
//! The crate is organised around a small trace-based probabilistic-program
//! runtime ([`ppl`]) and a deterministic quasi-static stability oracle
//! ([`physics`]). On top of those sit:
//!
//! - [`task`]: the block-stacking generative models (latent state from a
//!   noisy observation, noisy placement transition, and their composition),
//! - [`world`]: a ground-truth simulator with anisotropic, biased sensor and
//!   actuation noise,
//! - [`metrics`]: stability prediction and binary-classifier evaluation,
//! - [`policy`]: candidate placement scoring via interventional queries and
//!   greedy stable-set selection,
//! - [`episode`]: multi-step place-block episodes driving a policy against
//!   the simulator.
//!
//! Everything is deterministic given a `u64` seed. Per-unit random streams
//! are derived with a counter/split scheme ([`ppl::rng`]), so results do not
//! depend on evaluation order or worker count.
//!
//! The crate is `no_std`-compatible (`alloc` required): disable the default
//! `std` feature to build without the standard library. The `serde` feature
//! adds `Serialize`/`Deserialize` derives to the data types that appear in
//! reports.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub(crate) mod math;

pub mod episode;
pub mod metrics;
pub mod physics;
pub mod policy;
pub mod ppl;
pub mod task;
pub mod world;

#[doc(hidden)]
pub mod __private {
    pub use alloc::format;
}

pub use physics::{Block, StabilityVerdict, TowerState, Vec3};
pub use ppl::{ConditionSet, Distribution, InterventionSet, SiteName, Trace, Value};
pub use task::{Action, NoiseParams, Observation, TaskState};
pub use world::{World, WorldNoise};
