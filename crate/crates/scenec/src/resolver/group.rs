//! Grouped layouts: frozen offsets, rigid copies, and mirrored poses.

use crate::geometry::{Orientation, Vec3};

/// A registered group: an anchor point plus member offsets frozen at
/// registration time.
#[derive(Debug, Clone, PartialEq)]
pub struct GroupDef {
    pub anchor: Vec3,
    pub members: Vec<(String, Vec3)>,
}

/// Freeze the relative offsets of `members` under `anchor`.
pub fn freeze_group(anchor: Vec3, members: &[(String, Vec3)]) -> GroupDef {
    GroupDef {
        anchor,
        members: members
            .iter()
            .map(|(name, pos)| (name.clone(), *pos - anchor))
            .collect(),
    }
}

/// Re-instantiate a group at `new_anchor`, preserving offsets. Original
/// member poses are untouched.
pub fn copy_group(def: &GroupDef, new_anchor: Vec3) -> Vec<(String, Vec3)> {
    def.members
        .iter()
        .map(|(name, offset)| (name.clone(), new_anchor + *offset))
        .collect()
}

/// The mirror axis in the working plane: mirroring "along x" reflects
/// across the xz-plane (y flips), "along y" reflects across the yz-plane
/// (x flips).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MirrorAxis {
    X,
    Y,
}

/// Mirror a position about the plane at `plane_offset` on the flipped
/// coordinate.
pub fn mirror_position(axis: MirrorAxis, plane_offset: f64, pos: Vec3) -> Vec3 {
    match axis {
        MirrorAxis::X => Vec3::new(pos.x, 2.0 * plane_offset - pos.y, pos.z),
        MirrorAxis::Y => Vec3::new(2.0 * plane_offset - pos.x, pos.y, pos.z),
    }
}

/// Reflect a yaw by mirroring its heading vector, not the angle value:
/// flipping y negates the heading's y component, flipping x negates the
/// x component.
pub fn mirror_yaw(axis: MirrorAxis, yaw_deg: f64) -> f64 {
    let heading = Orientation::yaw(yaw_deg).heading();
    let mirrored = match axis {
        MirrorAxis::X => Vec3::new(heading.x, -heading.y, heading.z),
        MirrorAxis::Y => Vec3::new(-heading.x, heading.y, heading.z),
    };
    if mirrored.x == 0.0 && mirrored.y == 0.0 {
        return yaw_deg;
    }
    mirrored.y.atan2(mirrored.x).to_degrees()
}
