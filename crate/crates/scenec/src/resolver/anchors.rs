//! Anchor arithmetic for the planar, alignment, support, adjacency, and
//! bridge families.
//!
//! Every function here is pure: it takes the reference bounds, the
//! subject's world-frame extents (its tight AABB size under the final
//! yaw), and parameters, and returns the subject's centre coordinates.
//! Positions fall back to the plan pose on axes a template leaves
//! unconstrained.

use crate::constants::{COPLANARITY_TOL, SPAWN_CLEARANCE};
use crate::geometry::{Axis3, CardinalDir, Vec3, WorldAabb};
use crate::relation::VerticalAlign;

use super::ResolveError;

/// Side predicates: place the subject outside the reference in the
/// working plane. The unconstrained planar axis defaults to centre
/// alignment with the reference; the vertical axis is untouched.
pub fn resolve_planar(
    reference: &WorldAabb,
    world_size: Vec3,
    side: CardinalDir,
    gap: f64,
    fallback: Vec3,
) -> Vec3 {
    let mut pos = fallback;
    match side {
        CardinalDir::PlusY => {
            // left_of: subject.min_y = reference.max_y + gap
            pos.y = reference.max_y() + gap + world_size.y / 2.0;
            pos.x = reference.center_x();
        }
        CardinalDir::MinusY => {
            pos.y = reference.min_y() - gap - world_size.y / 2.0;
            pos.x = reference.center_x();
        }
        CardinalDir::PlusX => {
            // front_of: subject.min_x = reference.max_x + gap
            pos.x = reference.max_x() + gap + world_size.x / 2.0;
            pos.y = reference.center_y();
        }
        CardinalDir::MinusX => {
            pos.x = reference.min_x() - gap - world_size.x / 2.0;
            pos.y = reference.center_y();
        }
    }
    pos
}

/// Rest the subject's bottom on a horizontal plane.
pub fn resolve_on_plane(plane_z: f64, world_size: Vec3, fallback: Vec3) -> Vec3 {
    Vec3::new(fallback.x, fallback.y, plane_z + world_size.z / 2.0)
}

/// Face/centre alignments. Each variant constrains exactly one planar
/// coordinate and never changes the orthogonal axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Alignment {
    /// Equate the +Y faces.
    Left,
    /// Equate the -Y faces.
    Right,
    /// Equate the +X faces.
    Front,
    /// Equate the -X faces.
    Back,
    /// Equate centres on the left-right (Y) axis.
    CenterLr,
    /// Equate centres on the front-back (X) axis.
    CenterFb,
}

pub fn resolve_alignment(
    reference: &WorldAabb,
    world_size: Vec3,
    alignment: Alignment,
    fallback: Vec3,
) -> Vec3 {
    let mut pos = fallback;
    match alignment {
        Alignment::Left => pos.y = reference.max_y() - world_size.y / 2.0,
        Alignment::Right => pos.y = reference.min_y() + world_size.y / 2.0,
        Alignment::Front => pos.x = reference.max_x() - world_size.x / 2.0,
        Alignment::Back => pos.x = reference.min_x() + world_size.x / 2.0,
        Alignment::CenterLr => pos.y = reference.center_y(),
        Alignment::CenterFb => pos.x = reference.center_x(),
    }
    pos
}

/// On-top support variants.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Support {
    /// Static contact with the reference top face.
    Placed,
    /// Contact plus a spawn clearance so the body settles under gravity.
    Spawned,
    /// Contact with both planar centres pinned (offsets ignored).
    Centered,
}

/// Place the subject on the reference top face. Planar centres default to
/// the reference centre, shifted by `offset` except for
/// [`Support::Centered`]. The caller checks footprint containment on the
/// final bounds.
pub fn resolve_support(
    reference: &WorldAabb,
    world_size: Vec3,
    support: Support,
    offset: (f64, f64),
) -> Vec3 {
    let clearance = match support {
        Support::Spawned => SPAWN_CLEARANCE,
        Support::Placed | Support::Centered => 0.0,
    };
    let (dx, dy) = match support {
        Support::Centered => (0.0, 0.0),
        _ => offset,
    };
    Vec3::new(
        reference.center_x() + dx,
        reference.center_y() + dy,
        reference.top_z() + clearance + world_size.z / 2.0,
    )
}

/// Containment placement: bottom resting on the interior floor, centred
/// in plan view (plus offsets). Fit is strict; the caller verifies the
/// final bounds stay strictly inside.
pub fn resolve_inside(
    reference: &WorldAabb,
    world_size: Vec3,
    offset: (f64, f64),
) -> Result<Vec3, ResolveError> {
    let ref_size = reference.size();
    if world_size.x >= ref_size.x || world_size.y >= ref_size.y || world_size.z >= ref_size.z {
        return Err(ResolveError::DoesNotFit {
            object: String::new(),
            message: format!(
                "extents ({}, {}, {}) do not fit strictly inside ({}, {}, {})",
                world_size.x, world_size.y, world_size.z, ref_size.x, ref_size.y, ref_size.z
            ),
        });
    }
    Ok(Vec3::new(
        reference.center_x() + offset.0,
        reference.center_y() + offset.1,
        reference.bottom_z() + world_size.z / 2.0,
    ))
}

/// Adjacency templates: flush against one side face, centred on the
/// orthogonal planar axis, with one of three vertical alignments.
pub fn resolve_adjacent(
    reference: &WorldAabb,
    world_size: Vec3,
    side: CardinalDir,
    valign: VerticalAlign,
    gap: f64,
) -> Vec3 {
    let x;
    let y;
    match side {
        CardinalDir::PlusX => {
            x = reference.max_x() + gap + world_size.x / 2.0;
            y = reference.center_y();
        }
        CardinalDir::MinusX => {
            x = reference.min_x() - gap - world_size.x / 2.0;
            y = reference.center_y();
        }
        CardinalDir::PlusY => {
            y = reference.max_y() + gap + world_size.y / 2.0;
            x = reference.center_x();
        }
        CardinalDir::MinusY => {
            y = reference.min_y() - gap - world_size.y / 2.0;
            x = reference.center_x();
        }
    }
    let z = match valign {
        VerticalAlign::TopFlush => reference.top_z() - world_size.z / 2.0,
        VerticalAlign::BottomFlush => reference.bottom_z() + world_size.z / 2.0,
        VerticalAlign::Centers => reference.center_z(),
    };
    Vec3::new(x, y, z)
}

/// Bridge placement between two references.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BridgeSolution {
    pub center: Vec3,
    pub span_axis: Axis3,
    /// Width of the facing gap; becomes the subject's span-axis extent
    /// unless the plan sizes the span explicitly.
    pub gap: f64,
}

/// Centre a spanning body in the gap between `a` and `b`, top flush with
/// their (coplanar) top faces.
pub fn resolve_bridge(
    a: &WorldAabb,
    b: &WorldAabb,
    world_height: f64,
) -> Result<BridgeSolution, ResolveError> {
    let dx = (a.center_x() - b.center_x()).abs();
    let dy = (a.center_y() - b.center_y()).abs();
    let span_axis = if dx >= dy { Axis3::X } else { Axis3::Y };

    let top_delta = (a.top_z() - b.top_z()).abs();
    if top_delta > COPLANARITY_TOL {
        return Err(ResolveError::NonCoplanarTops { delta: top_delta });
    }

    let (lo, hi) = match span_axis {
        Axis3::X => {
            if a.center_x() <= b.center_x() {
                (a, b)
            } else {
                (b, a)
            }
        }
        _ => {
            if a.center_y() <= b.center_y() {
                (a, b)
            } else {
                (b, a)
            }
        }
    };
    let (gap_lo, gap_hi, ortho_center) = match span_axis {
        Axis3::X => (lo.max_x(), hi.min_x(), (a.center_y() + b.center_y()) / 2.0),
        _ => (lo.max_y(), hi.min_y(), (a.center_x() + b.center_x()) / 2.0),
    };
    let gap = gap_hi - gap_lo;
    if gap <= 0.0 {
        return Err(ResolveError::NoGap { overlap: -gap });
    }
    let span_center = (gap_lo + gap_hi) / 2.0;
    let z = a.top_z() - world_height / 2.0;
    let center = match span_axis {
        Axis3::X => Vec3::new(span_center, ortho_center, z),
        _ => Vec3::new(ortho_center, span_center, z),
    };
    Ok(BridgeSolution { center, span_axis, gap })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Vec3;

    fn aabb(min: (f64, f64, f64), max: (f64, f64, f64)) -> WorldAabb {
        WorldAabb::new(Vec3::new(min.0, min.1, min.2), Vec3::new(max.0, max.1, max.2))
    }

    // Reference footprint x in [-1, 1], y in [-1, 1], top at 1.
    fn reference() -> WorldAabb {
        aabb((-1.0, -1.0, 0.0), (1.0, 1.0, 1.0))
    }

    #[test]
    fn front_of_flush_contact() {
        // Anchor oracle: min_x = ref.max_x + gap, so centre is 1 + 0.25.
        let pos = resolve_planar(
            &reference(),
            Vec3::new(0.5, 0.5, 0.5),
            CardinalDir::PlusX,
            0.0,
            Vec3::ZERO,
        );
        assert_eq!(pos.x, 1.25);
        assert_eq!(pos.y, 0.0);
    }

    #[test]
    fn left_and_right_children_mirror_about_reference() {
        let size = Vec3::new(0.4, 0.6, 0.5);
        let left = resolve_planar(&reference(), size, CardinalDir::PlusY, 0.1, Vec3::ZERO);
        let right = resolve_planar(&reference(), size, CardinalDir::MinusY, 0.1, Vec3::ZERO);
        assert_eq!(left.y, -right.y);
        assert_eq!(left.x, right.x);
    }

    #[test]
    fn place_on_base_rests_bottom_on_plane() {
        // bottom flush: centre_z = plane + sz/2 = 0.2.
        let pos = resolve_on_plane(0.0, Vec3::new(1.0, 1.0, 0.4), Vec3::new(3.0, -2.0, 9.0));
        assert_eq!(pos, Vec3::new(3.0, -2.0, 0.2));
    }

    #[test]
    fn align_front_equates_plus_x_faces() {
        // Face-equality oracle: ref.max_x = 2, sx = 1 -> centre 1.5.
        let reference = aabb((0.0, 0.0, 0.0), (2.0, 2.0, 1.0));
        let pos =
            resolve_alignment(&reference, Vec3::new(1.0, 1.0, 1.0), Alignment::Front, Vec3::ZERO);
        assert_eq!(pos.x, 1.5);
        assert_eq!(pos.y, 0.0); // orthogonal axis untouched
    }

    #[test]
    fn center_alignments_compose_to_full_centering() {
        let reference = aabb((1.0, 2.0, 0.0), (5.0, 8.0, 1.0));
        let size = Vec3::new(1.0, 1.0, 1.0);
        let p1 = resolve_alignment(&reference, size, Alignment::CenterLr, Vec3::ZERO);
        let p2 = resolve_alignment(&reference, size, Alignment::CenterFb, p1);
        assert_eq!(p2.x, reference.center_x());
        assert_eq!(p2.y, reference.center_y());
    }

    #[test]
    fn align_left_equates_plus_y_faces() {
        let pos = resolve_alignment(
            &reference(),
            Vec3::new(0.5, 0.5, 0.5),
            Alignment::Left,
            Vec3::ZERO,
        );
        // subject.max_y == ref.max_y == 1
        assert_eq!(pos.y + 0.25, 1.0);
    }

    #[test]
    fn placed_on_top_flush_contact() {
        // Flush-contact oracle: ref.top_z = 1, sz = 0.4 -> centre_z 1.2.
        let pos = resolve_support(
            &reference(),
            Vec3::new(0.5, 0.5, 0.4),
            Support::Placed,
            (0.0, 0.0),
        );
        assert_eq!(pos.z, 1.2);
        assert_eq!((pos.x, pos.y), (0.0, 0.0));
    }

    #[test]
    fn spawned_on_top_adds_clearance() {
        let pos = resolve_support(
            &reference(),
            Vec3::new(0.5, 0.5, 0.4),
            Support::Spawned,
            (0.0, 0.0),
        );
        // bottom_z = top_z + 0.02
        assert_eq!(pos.z - 0.2, 1.0 + SPAWN_CLEARANCE);
    }

    #[test]
    fn centered_on_ref_ignores_offsets() {
        let pos = resolve_support(
            &reference(),
            Vec3::new(0.5, 0.5, 0.4),
            Support::Centered,
            (0.3, -0.2),
        );
        assert_eq!((pos.x, pos.y), (0.0, 0.0));
    }

    #[test]
    fn place_in_rests_on_interior_floor() {
        // Containment oracle: cube 0.5 in a 4 x 2 x 1.5 tank at z = 0.
        let tank = aabb((-2.0, -1.0, 0.0), (2.0, 1.0, 1.5));
        let pos = resolve_inside(&tank, Vec3::new(0.5, 0.5, 0.5), (0.0, 0.0)).unwrap();
        assert_eq!(pos, Vec3::new(0.0, 0.0, 0.25));
        let bounds = WorldAabb::from_center_size(pos, Vec3::new(0.5, 0.5, 0.5));
        assert!(tank.contains_aabb(&bounds, 0.0));
        assert!(bounds.min.x > tank.min.x && bounds.max.x < tank.max.x);
        assert!(bounds.min.y > tank.min.y && bounds.max.y < tank.max.y);
    }

    #[test]
    fn place_in_rejects_oversized_bodies() {
        let tank = aabb((-2.0, -1.0, 0.0), (2.0, 1.0, 1.5));
        let err = resolve_inside(&tank, Vec3::new(4.0, 0.5, 0.5), (0.0, 0.0));
        assert!(matches!(err, Err(ResolveError::DoesNotFit { .. })));
    }

    #[test]
    fn adjacent_plus_x_top_flush_example() {
        // ref x in [-2, 2], top_z 1.5; subject (1, 1, 0.5)
        // -> centre (2.5, ref.center_y, 1.25).
        let reference = aabb((-2.0, -1.0, 0.0), (2.0, 1.0, 1.5));
        let pos = resolve_adjacent(
            &reference,
            Vec3::new(1.0, 1.0, 0.5),
            CardinalDir::PlusX,
            VerticalAlign::TopFlush,
            0.0,
        );
        assert_eq!(pos, Vec3::new(2.5, 0.0, 1.25));
    }

    #[test]
    fn adjacent_minus_y_centers_mirrors_plus_y() {
        let reference = reference();
        let size = Vec3::new(0.5, 0.5, 0.5);
        let plus = resolve_adjacent(&reference, size, CardinalDir::PlusY, VerticalAlign::Centers, 0.0);
        let minus =
            resolve_adjacent(&reference, size, CardinalDir::MinusY, VerticalAlign::Centers, 0.0);
        assert_eq!(plus.y - reference.center_y(), reference.center_y() - minus.y);
        assert_eq!(plus.z, reference.center_z());
    }

    #[test]
    fn adjacent_bottom_flush_equal_heights_share_top() {
        let reference = reference(); // height 1
        let size = Vec3::new(0.5, 0.5, 1.0);
        let pos = resolve_adjacent(
            &reference,
            size,
            CardinalDir::PlusX,
            VerticalAlign::BottomFlush,
            0.0,
        );
        let bounds = WorldAabb::from_center_size(pos, size);
        assert_eq!(bounds.bottom_z(), reference.bottom_z());
        assert_eq!(bounds.top_z(), reference.top_z());
    }

    #[test]
    fn bridge_centers_in_gap() {
        // Gap-midpoint oracle: A x in [-3, -1], B x in [1, 3], tops 1.0;
        // sz 0.1 -> centre_x 0, span 2, top_z 1.
        let a = aabb((-3.0, -0.5, 0.0), (-1.0, 0.5, 1.0));
        let b = aabb((1.0, -0.5, 0.0), (3.0, 0.5, 1.0));
        let solution = resolve_bridge(&a, &b, 0.1).unwrap();
        assert_eq!(solution.span_axis, Axis3::X);
        assert_eq!(solution.gap, 2.0);
        assert_eq!(solution.center, Vec3::new(0.0, 0.0, 0.95));
    }

    #[test]
    fn bridge_symmetric_under_ref_swap() {
        let a = aabb((-3.0, -0.5, 0.0), (-1.0, 0.5, 1.0));
        let b = aabb((1.0, -0.5, 0.0), (3.0, 0.5, 1.0));
        assert_eq!(
            resolve_bridge(&a, &b, 0.1).unwrap(),
            resolve_bridge(&b, &a, 0.1).unwrap()
        );
    }

    #[test]
    fn bridge_rejects_overlapping_refs() {
        let a = aabb((-3.0, -0.5, 0.0), (0.5, 0.5, 1.0));
        let b = aabb((-0.5, -0.5, 0.0), (3.0, 0.5, 1.0));
        assert!(matches!(
            resolve_bridge(&a, &b, 0.1),
            Err(ResolveError::NoGap { .. })
        ));
    }

    #[test]
    fn bridge_rejects_non_coplanar_tops() {
        let a = aabb((-3.0, -0.5, 0.0), (-1.0, 0.5, 1.0));
        let b = aabb((1.0, -0.5, 0.0), (3.0, 0.5, 1.001));
        assert!(matches!(
            resolve_bridge(&a, &b, 0.1),
            Err(ResolveError::NonCoplanarTops { .. })
        ));
    }
}
