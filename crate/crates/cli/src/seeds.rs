//! Seed derivation tags. Every random decision in a run is reached through
//! `mix_seed` chains rooted at the user-facing `--seed`, so each tower,
//! trial, and policy draws from an independent, reproducible stream.

/// Observation-noise stream of a generated tower.
pub const OBS: u64 = 0x6f62_7365;
/// Tower-geometry generation.
pub const GEN: u64 = 0x6765_6e00;
/// Candidate scoring and action selection.
pub const SELECT: u64 = 0x7365_6c65;
/// Per-trial actuation world (shared across policies for paired trials).
pub const TRIAL: u64 = 0x7472_6961;
/// Prediction-dataset root.
pub const PRED: u64 = 0x7072_6564;
/// Action-dataset root.
pub const ACTION: u64 = 0x6163_7469;
/// Episode world stream.
pub const EPISODE_WORLD: u64 = 0x6570_7764;
/// Episode per-step scoring root.
pub const EPISODE_POLICY: u64 = 0x6570_706f;
/// Characterization observation stream.
pub const CHAR_OBS: u64 = 0x6368_6f62;
/// Characterization placement stream.
pub const CHAR_ACT: u64 = 0x6368_6163;
