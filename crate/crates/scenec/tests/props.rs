//! Property tests for the invariants that hold over whole value spaces:
//! serialization round trips, anchor consistency, and flush contact.

mod common;

use proptest::prelude::*;

use common::{base_object, child_object, plan_from_objects};
use scenec::catalog::AssetCatalog;
use scenec::constants::{ANCHOR_TOL, FLUSH_TOL};
use scenec::geometry::{
    compose_rotation, world_aabb, AabbConvention, BoxExtent, CardinalDir, Vec3,
};
use scenec::plan::{parse_plan, serialize_plan, Gravity, ParamValue, RecordingMode};
use scenec::relation::{Relation, VerticalAlign};
use scenec::resolver::resolve_scene;

fn finite_coord() -> impl Strategy<Value = f64> {
    // Mix the awkward ranges: tiny, everyday, and large magnitudes.
    prop_oneof![
        -1.0e-6..1.0e-6_f64,
        -100.0..100.0_f64,
        -1.0e9..1.0e9_f64,
    ]
}

fn positive_size() -> impl Strategy<Value = f64> {
    prop_oneof![1.0e-3..1.0_f64, 1.0..50.0_f64]
}

fn ident() -> impl Strategy<Value = String> {
    "[a-z][a-z0-9_]{0,12}"
}

fn free_text() -> impl Strategy<Value = String> {
    // Plain prose without structural characters or a key-like shape.
    // Trimmed, because the line grammar cannot represent trailing
    // whitespace (parsed plans never contain it either).
    "[A-Za-z][A-Za-z0-9 .]{0,40}".prop_map(|s| s.trim_end().to_string())
}

proptest! {
    /// Round trip: serialize then parse returns an equal plan, for
    /// arbitrary names, text, poses, and parameter values.
    #[test]
    fn serialized_plans_reparse_equal(
        object_name in ident(),
        objective in free_text(),
        note in free_text(),
        description in free_text(),
        px in finite_coord(),
        py in finite_coord(),
        pz in finite_coord(),
        yaw in -720.0..720.0_f64,
        sx in positive_size(),
        sy in positive_size(),
        sz in positive_size(),
        density in 1.0..5000.0_f64,
        time_step in 1.0e-6..0.1_f64,
        gravity_vector in prop::bool::ANY,
        gap in 0.0..3.0_f64,
        sensors in prop::bool::ANY,
    ) {
        let mut anchor = base_object("anchor", Vec3::new(sx, sy, sz), Vec3::new(px, py, pz));
        anchor.pose.rotation_deg.z = yaw;
        anchor.description = Some(description);
        let mut child = child_object(
            "subject",
            Vec3::new(sx.min(sy), sy.min(sx), sz),
            "anchor",
            Relation::LeftOf,
            &[("gap", ParamValue::Number(gap))],
        );
        child.name = object_name.clone();
        if child.name == "anchor" {
            child.name.push_str("_b");
        }
        child.construction.density = Some(density);
        child.topology.refs = vec!["anchor".into()];
        let mut plan = plan_from_objects(vec![anchor, child]);
        plan.simulation_parameters.time_step = Some(time_step);
        plan.simulation_parameters.gravity = Some(if gravity_vector {
            Gravity::Vector(Vec3::new(0.0, 0.0, -9.81))
        } else {
            Gravity::Scalar(9.81)
        });
        plan.recording_mode =
            Some(if sensors { RecordingMode::SensorCams } else { RecordingMode::VsgOnly });
        plan.objectives = vec![objective];
        plan.clarifications_needed = vec![note];

        let rendered = serialize_plan(&plan);
        let reparsed = parse_plan(&rendered)
            .map_err(|e| TestCaseError::fail(format!("{e}\n{rendered}")))?
            .plan;
        prop_assert_eq!(reparsed, plan);
    }

    /// Anchor consistency: centres equal the min/max midpoints for any
    /// box under any yaw and either position convention.
    #[test]
    fn aabb_anchors_stay_consistent(
        sx in positive_size(),
        sy in positive_size(),
        sz in positive_size(),
        px in finite_coord(),
        py in finite_coord(),
        pz in finite_coord(),
        yaw in -1080.0..1080.0_f64,
        tilt in -45.0..45.0_f64,
        boundary in prop::bool::ANY,
    ) {
        let convention =
            if boundary { AabbConvention::BoundaryFloor } else { AabbConvention::Center };
        let aabb = world_aabb(
            BoxExtent::new(sx, sy, sz).unwrap(),
            Vec3::new(px, py, pz),
            compose_rotation(yaw, tilt),
            convention,
        );
        let scale = aabb.max.x.abs().max(aabb.min.x.abs()).max(1.0);
        prop_assert!((aabb.center_x() - (aabb.min_x() + aabb.max_x()) / 2.0).abs() <= ANCHOR_TOL * scale);
        let scale_y = aabb.max.y.abs().max(aabb.min.y.abs()).max(1.0);
        prop_assert!((aabb.center_y() - (aabb.min_y() + aabb.max_y()) / 2.0).abs() <= ANCHOR_TOL * scale_y);
        prop_assert!(aabb.min.x <= aabb.max.x && aabb.min.y <= aabb.max.y && aabb.min.z <= aabb.max.z);
    }

    /// Flushness: every adjacency template puts the named faces within
    /// 1e-9 m of each other, for any sizes, gap, and cardinal yaw.
    #[test]
    fn adjacency_faces_stay_flush(
        ref_sx in 0.5..4.0_f64,
        ref_sy in 0.5..4.0_f64,
        ref_sz in 0.5..3.0_f64,
        child_sx in 0.1..2.0_f64,
        child_sy in 0.1..2.0_f64,
        child_sz in 0.1..2.0_f64,
        gap in 0.0..1.0_f64,
        side_pick in 0..4usize,
        valign_pick in 0..3usize,
        quarter_turns in 0..4u8,
    ) {
        let side = [CardinalDir::PlusX, CardinalDir::MinusX, CardinalDir::PlusY, CardinalDir::MinusY][side_pick];
        let valign = [VerticalAlign::TopFlush, VerticalAlign::BottomFlush, VerticalAlign::Centers][valign_pick];
        let facing = ["front", "left", "back", "right"][quarter_turns as usize];
        let reference = base_object(
            "ref_obj",
            Vec3::new(ref_sx, ref_sy, ref_sz),
            Vec3::new(0.0, 0.0, ref_sz / 2.0 + 1.0),
        );
        let child = child_object(
            "subject",
            Vec3::new(child_sx, child_sy, child_sz),
            "ref_obj",
            Relation::Adjacent(side, valign),
            &[
                ("gap", ParamValue::Number(gap)),
                ("facing", ParamValue::Text(facing.into())),
            ],
        );
        let plan = plan_from_objects(vec![reference, child]);
        let scene = resolve_scene(&plan, &AssetCatalog::empty())
            .map_err(|e| TestCaseError::fail(e.to_string()))?;
        let r = scene.body("ref_obj").unwrap().aabb;
        let c = scene.body("subject").unwrap().aabb;
        let face_delta = match side {
            CardinalDir::PlusX => (c.min_x() - (r.max_x() + gap)).abs(),
            CardinalDir::MinusX => (c.max_x() - (r.min_x() - gap)).abs(),
            CardinalDir::PlusY => (c.min_y() - (r.max_y() + gap)).abs(),
            CardinalDir::MinusY => (c.max_y() - (r.min_y() - gap)).abs(),
        };
        prop_assert!(face_delta <= FLUSH_TOL, "face delta {face_delta}");
        let v_delta = match valign {
            VerticalAlign::TopFlush => (c.top_z() - r.top_z()).abs(),
            VerticalAlign::BottomFlush => (c.bottom_z() - r.bottom_z()).abs(),
            VerticalAlign::Centers => (c.center_z() - r.center_z()).abs(),
        };
        prop_assert!(v_delta <= FLUSH_TOL, "vertical delta {v_delta}");
    }
}
