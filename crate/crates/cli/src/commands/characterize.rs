//! `characterize`: estimates the simulator's observation and placement
//! error the way one would on hardware — repeated measurements of blocks
//! at known poses, and repeated drops onto a known target — then reports
//! per-axis mean/sigma for both channels.

use std::path::Path;

use serde::Serialize;

use blocktower_core::metrics::{characterize_noise, NoiseCharacterization};
use blocktower_core::physics::settle;
use blocktower_core::ppl::rng::mix_seed;
use blocktower_core::world::World;
use blocktower_core::{Action, TaskState, TowerState, Vec3};

use crate::config::ExperimentConfig;
use crate::error::CliError;
use crate::report::{fmt_f64, OutDir, Report};
use crate::seeds;

#[derive(Debug, Serialize)]
struct CharacterizationData {
    pairs: u32,
    /// Observed pose minus true pose, per axis.
    measurement: NoiseCharacterization,
    /// Realized drop position minus commanded target, per axis.
    placement: NoiseCharacterization,
}

pub fn run(
    config: &ExperimentConfig,
    out: &Path,
    seed: u64,
    pairs: Option<u32>,
) -> Result<(), CliError> {
    let pairs = pairs.unwrap_or(config.datasets.characterize_pairs);
    if pairs < 2 {
        return Err(CliError::Config("characterize needs at least 2 pairs".into()));
    }
    let out = OutDir::create(out, "characterize")?;
    let spec = config.block_spec();
    let noise = config.world_noise();

    // Measurement channel: one block per resting pose on a known lattice,
    // observed once each. The lattice spans a desk-scale patch so any
    // position dependence would show up as inflated sigma.
    let single = |x: f64, y: f64| {
        let tower = settle(&TowerState::new(vec![spec.block(0, Vec3::new(x, y, 0.0))])
            .expect("single block"))
        .expect("non-empty");
        let truth = tower.blocks()[0].center;
        (TaskState::new(tower, Vec::new()).expect("no queue"), truth)
    };
    let lattice = |i: u32| {
        let col = (i % 5) as f64;
        let row = ((i / 5) % 5) as f64;
        ((col - 2.0) * 6.0, (row - 2.0) * 6.0)
    };
    let mut world =
        World::new(single(0.0, 0.0).0, noise, mix_seed(seed, seeds::CHAR_OBS))?;
    let mut measurement_pairs = Vec::with_capacity(pairs as usize);
    for i in 0..pairs {
        let (x, y) = lattice(i);
        let (state, truth) = single(x, y);
        world.reset_state(state);
        let observed = world.observe().blocks[0].center;
        measurement_pairs
            .push(([observed.x, observed.y, observed.z], [truth.x, truth.y, truth.z]));
    }
    let measurement = characterize_noise(&measurement_pairs)?;

    // Placement channel: drop a cube onto the centre of a fixed base and
    // compare the realized pre-settle position against the commanded one.
    let base = {
        let tower = settle(&TowerState::new(vec![spec.block(0, Vec3::default())])
            .expect("single block"))
        .expect("non-empty");
        TaskState::new(tower, vec![spec.block(1, Vec3::default())]).expect("disjoint ids")
    };
    let drop_z = spec.dims.z + spec.dims.z / 2.0;
    let mut world = World::new(base.clone(), noise, mix_seed(seed, seeds::CHAR_ACT))?;
    let mut placement_pairs = Vec::with_capacity(pairs as usize);
    for _ in 0..pairs {
        world.reset_state(base.clone());
        let placement = world.execute_place(Action::new(0.0, 0.0))?;
        let r = placement.realized;
        placement_pairs.push(([r.x, r.y, r.z], [0.0, 0.0, drop_z]));
    }
    let placement = characterize_noise(&placement_pairs)?;

    let data = CharacterizationData { pairs, measurement, placement };
    let rows = [("measurement", &data.measurement), ("placement", &data.placement)]
        .map(|(name, c)| {
            let cells: Vec<String> = c
                .mean
                .iter()
                .chain(c.sigma.iter())
                .chain(std::iter::once(&c.sigma_avg))
                .map(|v| fmt_f64(*v))
                .collect();
            format!("{name},{}", cells.join(","))
        });
    out.write_csv(
        "characterization.csv",
        config,
        "channel,mean_x,mean_y,mean_z,sigma_x,sigma_y,sigma_z,sigma_avg",
        &rows,
    )?;
    out.write_json("characterization.json", &Report::new("characterize", seed, config, data))?;
    out.write_meta()?;
    Ok(())
}
