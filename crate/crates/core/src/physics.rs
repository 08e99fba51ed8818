//! Quasi-static stability of axis-aligned block towers.
//!
//! A tower is a bottom-to-top list of cuboids resting on an unbounded flat
//! ground. The model is purely geometric: a tower is stable when, for every
//! support interface, the combined centre of mass of everything carried by
//! that interface projects into the interface's contact region. Interface 0
//! is the ground contact (its region is the base block's own footprint);
//! interface `j >= 1` sits between block `j - 1` and block `j`.
//!
//! Contact regions are closed: a centre of mass exactly on the boundary
//! still counts as supported. A region that degenerates to a single point
//! (zero extent on both axes) is treated as no contact; a line contact
//! (zero extent on one axis) is kept.
//!
//! No friction, inertia, or torque propagation beyond the recursive
//! centre-of-mass rule; outcomes are exact functions of the geometry.

use alloc::vec::Vec;

use thiserror::Error;

use crate::math;

#[cfg(feature = "serde")]
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, PartialEq, Debug, Default)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct Vec3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Vec3 {
    pub fn new(x: f64, y: f64, z: f64) -> Self {
        Vec3 { x, y, z }
    }
}

/// Axis-aligned cuboid. `dims` are full extents along x, y, z.
#[derive(Clone, Copy, PartialEq, Debug)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct Block {
    pub id: u32,
    pub center: Vec3,
    pub dims: Vec3,
    pub mass: f64,
}

impl Block {
    pub fn new(id: u32, center: Vec3, dims: Vec3, mass: f64) -> Self {
        Block { id, center, dims, mass }
    }

    /// A cube of the given side length.
    pub fn cube(id: u32, center: Vec3, side: f64, mass: f64) -> Self {
        Block::new(id, center, Vec3::new(side, side, side), mass)
    }

    pub fn top_z(&self) -> f64 {
        self.center.z + self.dims.z / 2.0
    }

    pub fn bottom_z(&self) -> f64 {
        self.center.z - self.dims.z / 2.0
    }

    /// Footprint in the x-y plane.
    pub fn footprint(&self) -> ContactRegion {
        ContactRegion {
            x: [self.center.x - self.dims.x / 2.0, self.center.x + self.dims.x / 2.0],
            y: [self.center.y - self.dims.y / 2.0, self.center.y + self.dims.y / 2.0],
        }
    }

    fn validate(&self) -> Result<(), PhysicsError> {
        let finite = self.center.x.is_finite()
            && self.center.y.is_finite()
            && self.center.z.is_finite()
            && self.dims.x.is_finite()
            && self.dims.y.is_finite()
            && self.dims.z.is_finite()
            && self.mass.is_finite();
        if !finite {
            return Err(PhysicsError::InvalidBlock { id: self.id, reason: "non-finite field" });
        }
        if self.dims.x <= 0.0 || self.dims.y <= 0.0 || self.dims.z <= 0.0 {
            return Err(PhysicsError::InvalidBlock { id: self.id, reason: "dims must be > 0" });
        }
        if self.mass <= 0.0 {
            return Err(PhysicsError::InvalidBlock { id: self.id, reason: "mass must be > 0" });
        }
        Ok(())
    }
}

/// Closed axis-aligned rectangle in the x-y plane.
#[derive(Clone, Copy, PartialEq, Debug)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct ContactRegion {
    pub x: [f64; 2],
    pub y: [f64; 2],
}

impl ContactRegion {
    pub fn contains(&self, x: f64, y: f64) -> bool {
        x >= self.x[0] && x <= self.x[1] && y >= self.y[0] && y <= self.y[1]
    }
}

/// Tower of blocks ordered bottom to top. Ids are unique, dims and masses
/// positive; both are enforced at construction.
#[derive(Clone, PartialEq, Debug, Default)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct TowerState {
    blocks: Vec<Block>,
}

impl TowerState {
    pub fn new(blocks: Vec<Block>) -> Result<Self, PhysicsError> {
        let mut tower = TowerState { blocks: Vec::new() };
        for block in blocks {
            tower.push(block)?;
        }
        Ok(tower)
    }

    /// Appends a block on top of the stacking order.
    pub fn push(&mut self, block: Block) -> Result<(), PhysicsError> {
        block.validate()?;
        if self.blocks.iter().any(|b| b.id == block.id) {
            return Err(PhysicsError::DuplicateId(block.id));
        }
        self.blocks.push(block);
        Ok(())
    }

    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    pub fn top(&self) -> Option<&Block> {
        self.blocks.last()
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct StabilityVerdict {
    pub stable: bool,
    /// Lowest interface whose support condition fails (0 = ground contact).
    pub first_failing_interface: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PhysicsError {
    #[error("operation needs a non-empty tower")]
    EmptyTower,
    #[error("duplicate block id {0}")]
    DuplicateId(u32),
    #[error("invalid block {id}: {reason}")]
    InvalidBlock { id: u32, reason: &'static str },
}

/// Rests each block on the one below (the base block on the ground),
/// keeping x and y untouched. Input z values are ignored.
pub fn settle(tower: &TowerState) -> Result<TowerState, PhysicsError> {
    if tower.is_empty() {
        return Err(PhysicsError::EmptyTower);
    }
    let mut settled = tower.clone();
    let mut support_z = 0.0;
    for block in &mut settled.blocks {
        block.center.z = support_z + block.dims.z / 2.0;
        support_z = block.top_z();
    }
    Ok(settled)
}

/// Overlap of `lower`'s top face with `upper`'s bottom face, projected to
/// the x-y plane. `None` when the faces do not overlap or touch only in a
/// single point.
pub fn contact_region(lower: &Block, upper: &Block) -> Option<ContactRegion> {
    let a = lower.footprint();
    let b = upper.footprint();
    let x = [math::max(a.x[0], b.x[0]), math::min(a.x[1], b.x[1])];
    let y = [math::max(a.y[0], b.y[0]), math::min(a.y[1], b.y[1])];
    if x[0] > x[1] || y[0] > y[1] {
        return None;
    }
    if x[0] == x[1] && y[0] == y[1] {
        return None;
    }
    Some(ContactRegion { x, y })
}

/// Checks every interface bottom-up and reports the lowest failure.
///
/// Interface `j` must exist (non-degenerate contact) and the mass-weighted
/// centre of the blocks at index `j` and above must project into it. Block
/// z-coordinates play no role; the verdict only depends on the stacking
/// order and x-y geometry, so unsettled towers give the same answer as
/// their settled versions.
pub fn is_stable(tower: &TowerState) -> Result<StabilityVerdict, PhysicsError> {
    if tower.is_empty() {
        return Err(PhysicsError::EmptyTower);
    }
    let blocks = tower.blocks();
    for j in 0..blocks.len() {
        let region = if j == 0 {
            Some(blocks[0].footprint())
        } else {
            contact_region(&blocks[j - 1], &blocks[j])
        };
        let supported = match region {
            None => false,
            Some(region) => {
                let (cx, cy) = center_of_mass_xy(&blocks[j..]);
                region.contains(cx, cy)
            }
        };
        if !supported {
            return Ok(StabilityVerdict { stable: false, first_failing_interface: Some(j) });
        }
    }
    Ok(StabilityVerdict { stable: true, first_failing_interface: None })
}

fn center_of_mass_xy(blocks: &[Block]) -> (f64, f64) {
    let mut mx = 0.0;
    let mut my = 0.0;
    let mut m = 0.0;
    for b in blocks {
        mx += b.mass * b.center.x;
        my += b.mass * b.center.y;
        m += b.mass;
    }
    (mx / m, my / m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    const SIDE: f64 = 7.5;

    fn cube(id: u32, x: f64, y: f64, z: f64) -> Block {
        Block::cube(id, Vec3::new(x, y, z), SIDE, 100.0)
    }

    fn tower(offsets: &[(f64, f64)]) -> TowerState {
        let blocks: Vec<Block> = offsets
            .iter()
            .enumerate()
            .map(|(i, (x, y))| cube(i as u32, *x, *y, 0.0))
            .collect();
        settle(&TowerState::new(blocks).unwrap()).unwrap()
    }

    #[test]
    fn settle_rests_blocks_on_each_other() {
        let single = TowerState::new(vec![cube(0, 0.0, 0.0, 9.0)]).unwrap();
        let settled = settle(&single).unwrap();
        assert_eq!(settled.blocks()[0].center.z, 3.75);

        let two = TowerState::new(vec![cube(0, 0.0, 0.0, -3.0), cube(1, 1.0, 0.0, 42.0)]).unwrap();
        let settled = settle(&two).unwrap();
        assert_eq!(settled.blocks()[0].center.z, 3.75);
        assert_eq!(settled.blocks()[1].center.z, 11.25);
        assert_eq!(settled.blocks()[1].center.x, 1.0);

        let three = tower(&[(0.0, 0.0), (2.0, 0.0), (5.0, 0.0)]);
        assert_eq!(three.blocks()[2].center.z, 18.75);
    }

    #[test]
    fn settle_needs_a_block() {
        assert_eq!(settle(&TowerState::default()).unwrap_err(), PhysicsError::EmptyTower);
        assert_eq!(is_stable(&TowerState::default()).unwrap_err(), PhysicsError::EmptyTower);
    }

    #[test]
    fn contact_region_of_offset_cubes() {
        let lower = cube(0, 0.0, 0.0, 3.75);
        let upper = cube(1, 3.0, 0.0, 11.25);
        let region = contact_region(&lower, &upper).unwrap();
        assert_eq!(region.x, [-0.75, 3.75]);
        assert_eq!(region.y, [-3.75, 3.75]);
    }

    #[test]
    fn contact_region_absent_when_faces_clear() {
        let lower = cube(0, 0.0, 0.0, 3.75);
        let upper = cube(1, 8.0, 0.0, 11.25);
        assert_eq!(contact_region(&lower, &upper), None);
    }

    #[test]
    fn corner_point_touch_is_no_contact_but_line_touch_is() {
        let lower = cube(0, 0.0, 0.0, 3.75);
        let corner = cube(1, 7.5, 7.5, 11.25);
        assert_eq!(contact_region(&lower, &corner), None);

        let edge = cube(1, 7.5, 0.0, 11.25);
        let region = contact_region(&lower, &edge).unwrap();
        assert_eq!(region.x, [3.75, 3.75]);
        assert_eq!(region.y, [-3.75, 3.75]);
    }

    #[test]
    fn two_cube_offsets_around_the_half_width() {
        let stable = tower(&[(0.0, 0.0), (3.0, 0.0)]);
        assert_eq!(
            is_stable(&stable).unwrap(),
            StabilityVerdict { stable: true, first_failing_interface: None }
        );

        // Centre of mass exactly on the support edge still counts.
        let edge = tower(&[(0.0, 0.0), (3.75, 0.0)]);
        assert!(is_stable(&edge).unwrap().stable);

        let toppled = tower(&[(0.0, 0.0), (4.0, 0.0)]);
        assert_eq!(
            is_stable(&toppled).unwrap(),
            StabilityVerdict { stable: false, first_failing_interface: Some(1) }
        );
    }

    #[test]
    fn three_cube_staircase_within_margins_is_stable() {
        // Cumulative offsets 0, 2, 5: interface 2 carries the top block
        // (offset 3 <= 3.75), interface 1 carries the top two (combined
        // centre 3.5 inside [-1.75, 3.75]), ground carries all three
        // (centre 2.33 inside [-3.75, 3.75]).
        let t = tower(&[(0.0, 0.0), (2.0, 0.0), (5.0, 0.0)]);
        assert!(is_stable(&t).unwrap().stable);
    }

    #[test]
    fn three_cube_staircase_fails_at_the_carrying_interface() {
        // Cumulative offsets 0, 3, 6: every pairwise offset is fine, but
        // the top two blocks' centre (4.5) leaves interface 1's region
        // [-0.75, 3.75]. The failure is at the lower interface, not the top.
        let t = tower(&[(0.0, 0.0), (3.0, 0.0), (6.0, 0.0)]);
        assert_eq!(
            is_stable(&t).unwrap(),
            StabilityVerdict { stable: false, first_failing_interface: Some(2 - 1) }
        );
    }

    #[test]
    fn missing_contact_fails_that_interface() {
        // A heavy base keeps the ground interface satisfied, so the first
        // failure is the absent contact between the blocks.
        let heavy = Block::cube(0, Vec3::new(0.0, 0.0, 3.75), SIDE, 900.0);
        let off = cube(1, 8.0, 0.0, 11.25);
        let t = TowerState::new(vec![heavy, off]).unwrap();
        assert_eq!(
            is_stable(&t).unwrap(),
            StabilityVerdict { stable: false, first_failing_interface: Some(1) }
        );

        // With equal masses the shared centre already leaves the base
        // footprint, so the ground interface gives out first.
        let t = tower(&[(0.0, 0.0), (8.0, 0.0)]);
        assert_eq!(
            is_stable(&t).unwrap(),
            StabilityVerdict { stable: false, first_failing_interface: Some(0) }
        );
    }

    #[test]
    fn verdict_ignores_z_positions() {
        let unsettled =
            TowerState::new(vec![cube(0, 0.0, 0.0, 88.0), cube(1, 3.0, 0.0, -100.0)]).unwrap();
        let settled = settle(&unsettled).unwrap();
        assert_eq!(is_stable(&unsettled).unwrap(), is_stable(&settled).unwrap());
    }

    #[test]
    fn duplicate_ids_are_rejected() {
        let err = TowerState::new(vec![cube(0, 0.0, 0.0, 0.0), cube(0, 1.0, 0.0, 0.0)]).unwrap_err();
        assert_eq!(err, PhysicsError::DuplicateId(0));
    }

    #[test]
    fn degenerate_blocks_are_rejected() {
        let flat = Block::new(0, Vec3::default(), Vec3::new(7.5, 0.0, 7.5), 100.0);
        assert!(matches!(
            TowerState::new(vec![flat]).unwrap_err(),
            PhysicsError::InvalidBlock { id: 0, .. }
        ));
        let weightless = Block::cube(1, Vec3::default(), 7.5, 0.0);
        assert!(matches!(
            TowerState::new(vec![weightless]).unwrap_err(),
            PhysicsError::InvalidBlock { id: 1, .. }
        ));
    }

    #[test]
    fn mirroring_x_is_bit_exact() {
        let t = tower(&[(0.4, -1.2), (2.9, 0.7), (-0.9, 2.2)]);
        let mirrored = TowerState::new(
            t.blocks()
                .iter()
                .map(|b| {
                    let mut m = *b;
                    m.center.x = -m.center.x;
                    m
                })
                .collect(),
        )
        .unwrap();
        assert_eq!(is_stable(&t).unwrap(), is_stable(&mirrored).unwrap());
    }
}
