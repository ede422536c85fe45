//! Yaw resolution beyond the plain facing rules: seeded random draws and
//! side-derived orientation.

use crate::geometry::{CardinalDir, WorldAabb};
use crate::rng::SplitMix64;

/// Uniform yaw in `[0, 360)` from an explicit seed. Same seed, same yaw.
pub fn random_yaw(seed: u64) -> f64 {
    SplitMix64::new(seed).range_f64(0.0, 360.0)
}

/// FNV-1a, used to derive per-object seeds from a shared default seed.
pub fn name_hash(name: &str) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in name.as_bytes() {
        h ^= u64::from(*b);
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h
}

/// Face back toward the side of the reference the subject was placed on:
/// the dominant axis of the subject-to-reference offset picks the side,
/// and the yaw is the cardinal direction pointing at the reference.
pub fn relative_side_yaw(subject_x: f64, subject_y: f64, reference: &WorldAabb) -> f64 {
    let dx = subject_x - reference.center_x();
    let dy = subject_y - reference.center_y();
    let side = if dx.abs() >= dy.abs() {
        if dx >= 0.0 {
            CardinalDir::PlusX
        } else {
            CardinalDir::MinusX
        }
    } else if dy >= 0.0 {
        CardinalDir::PlusY
    } else {
        CardinalDir::MinusY
    };
    side.opposite().yaw_deg()
}
