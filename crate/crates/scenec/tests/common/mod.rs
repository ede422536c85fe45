//! Shared helpers for the integration suites: a seeded generator for
//! schema-valid plans and a seeded scene-mutation harness.

#![allow(dead_code)]

use std::collections::BTreeMap;

use scenec::geometry::{world_aabb, AabbConvention, BoxExtent, Orientation, Vec3};
use scenec::plan::{
    CameraSpec, Construction, ConstructionKind, FsiRegistration, Gravity, ObjectSpec, ParamValue,
    PlanType, Pose, Primitive, RecordingMode, SimulationParameters, SimulationPlan, StepSpec,
    Topology, TopologyRole,
};
use scenec::relation::{CameraTemplate, Relation, VerticalAlign};
use scenec::resolver::ResolvedScene;
use scenec::rng::SplitMix64;

pub fn golden_path(name: &str) -> std::path::PathBuf {
    std::path::Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/golden")
        .join(name)
}

pub fn load_golden_plan(name: &str) -> SimulationPlan {
    let text = std::fs::read_to_string(golden_path(name)).expect("golden plan readable");
    scenec::plan::parse_plan(&text).expect("golden plan parses").plan
}

pub fn load_golden_catalog() -> scenec::catalog::AssetCatalog {
    let text = std::fs::read_to_string(golden_path("catalog.json")).expect("catalog readable");
    scenec::catalog::load_catalog(&text).expect("catalog loads")
}

pub fn proc_box(size: Vec3, density: Option<f64>) -> Construction {
    Construction {
        kind: ConstructionKind::Procedural,
        primitive: Some(Primitive::Box),
        size: Some(size),
        density,
        catalog: None,
        asset_type: None,
        filename: None,
        factory: None,
    }
}

pub fn base_object(name: &str, size: Vec3, position: Vec3) -> ObjectSpec {
    ObjectSpec {
        name: name.into(),
        construction: proc_box(size, None),
        topology: Topology::base(),
        pose: Pose { position, rotation_deg: Vec3::ZERO },
        fixed: true,
        is_dynamic: false,
        fsi_registration: FsiRegistration::None,
        description: None,
    }
}

pub fn child_object(
    name: &str,
    size: Vec3,
    reference: &str,
    relation: Relation,
    params: &[(&str, ParamValue)],
) -> ObjectSpec {
    ObjectSpec {
        name: name.into(),
        construction: proc_box(size, Some(500.0)),
        topology: Topology {
            role: TopologyRole::Child,
            refs: vec![reference.into()],
            relation: Some(relation),
            params: params
                .iter()
                .map(|(k, v)| (k.to_string(), v.clone()))
                .collect::<BTreeMap<_, _>>(),
        },
        pose: Pose::default(),
        fixed: false,
        is_dynamic: true,
        fsi_registration: FsiRegistration::None,
        description: None,
    }
}

pub fn plan_from_objects(objects: Vec<ObjectSpec>) -> SimulationPlan {
    SimulationPlan {
        plan_type: PlanType::Scene,
        simulation_parameters: SimulationParameters {
            time_step: Some(0.001),
            simulation_duration: Some(5.0),
            gravity: Some(Gravity::Scalar(9.81)),
        },
        objectives: vec![],
        recording_mode: Some(RecordingMode::VsgOnly),
        objects,
        implementation_steps: vec![],
        clarifications_needed: vec![],
    }
}

/// Generate a random schema-valid plan. The layout is collision-free by
/// construction: table clusters sit on a coarse grid with bounded reach,
/// the tank cluster and mirror/copy regions live in disjoint areas, and
/// on-surface bodies in the tank get disjoint planar offsets.
pub fn random_plan(seed: u64) -> SimulationPlan {
    let mut rng = SplitMix64::new(seed);
    let mut objects: Vec<ObjectSpec> = Vec::new();

    let ground_half = 8.0;
    objects.push(base_object(
        "ground",
        Vec3::new(2.0 * ground_half, 2.0 * ground_half, 0.2),
        Vec3::new(0.0, 0.0, -0.1),
    ));

    // Table clusters on a 3x3 grid of 5 m slots; max reach per slot is
    // table half (1.0) + gap (<=0.2) + side-child diagonal (<=1.2).
    let slots = [-5.0, 0.0, 5.0];
    let n_tables = 1 + rng.below(3);
    let mut slot_indices: Vec<(usize, usize)> = Vec::new();
    while slot_indices.len() < n_tables {
        let candidate = (rng.below(3), rng.below(3));
        if !slot_indices.contains(&candidate) {
            slot_indices.push(candidate);
        }
    }
    for (t, (sx_i, sy_i)) in slot_indices.iter().enumerate() {
        let slot = Vec3::new(slots[*sx_i], slots[*sy_i], 0.0);
        let table_size = Vec3::new(
            rng.range_f64(1.2, 2.0),
            rng.range_f64(1.0, 2.0),
            rng.range_f64(0.5, 1.0),
        );
        let table_name = format!("table_{t}");
        let mut table = base_object(
            &table_name,
            table_size,
            Vec3::new(slot.x, slot.y, table_size.z / 2.0),
        );
        table.fixed = true;
        objects.push(table);

        // At most one on-top child and one side child per table.
        if rng.below(10) < 8 {
            let min_dim = table_size.x.min(table_size.y);
            let top_size = Vec3::new(
                rng.range_f64(0.1, 0.4 * min_dim),
                rng.range_f64(0.1, 0.4 * min_dim),
                rng.range_f64(0.05, 0.4),
            );
            let relation = match rng.below(4) {
                0 => Relation::SpawnedOnTop,
                1 => Relation::PlacedOnTop,
                2 => Relation::CenteredOnRef,
                _ => Relation::PlaceOn,
            };
            let mut params: Vec<(&str, ParamValue)> = Vec::new();
            match rng.below(4) {
                0 => params.push(("facing", ParamValue::Text("left".into()))),
                1 => {
                    params.push(("facing", ParamValue::Text("random".into())));
                    params.push(("seed", ParamValue::Number(rng.below(10_000) as f64)));
                }
                2 => params.push(("facing", ParamValue::Text("by_relative_side".into()))),
                _ => {}
            }
            objects.push(child_object(
                &format!("top_{t}"),
                top_size,
                &table_name,
                relation,
                &params,
            ));
        }
        if rng.below(10) < 8 {
            // Height capped by the table so top-flush/centre alignment
            // never sinks the child into the ground slab.
            let side_size = Vec3::new(
                rng.range_f64(0.2, 0.8),
                rng.range_f64(0.2, 0.8),
                rng.range_f64(0.15, table_size.z * 0.95),
            );
            let gap = rng.range_f64(0.0, 0.2);
            let (relation, needs_z): (Relation, bool) = match rng.below(4) {
                0 => (Relation::LeftOf, true),
                1 => (Relation::RightOf, true),
                2 => (Relation::FrontOf, true),
                _ => {
                    let side = match rng.below(4) {
                        0 => scenec::geometry::CardinalDir::PlusX,
                        1 => scenec::geometry::CardinalDir::MinusX,
                        2 => scenec::geometry::CardinalDir::PlusY,
                        _ => scenec::geometry::CardinalDir::MinusY,
                    };
                    let valign = match rng.below(3) {
                        0 => VerticalAlign::TopFlush,
                        1 => VerticalAlign::BottomFlush,
                        _ => VerticalAlign::Centers,
                    };
                    (Relation::Adjacent(side, valign), false)
                }
            };
            let mut side_child = child_object(
                &format!("side_{t}"),
                side_size,
                &table_name,
                relation,
                &[("gap", ParamValue::Number(gap))],
            );
            if needs_z {
                side_child.pose.position =
                    Vec3::new(slot.x, slot.y, side_size.z / 2.0);
            }
            objects.push(side_child);
        }
        if rng.below(10) < 3 {
            // Alignment child hovering above the table top: alignment
            // constrains one planar axis only, the rest comes from the
            // plan pose.
            let size = Vec3::new(0.3, 0.3, 0.2);
            let alignment = match rng.below(6) {
                0 => Relation::AlignLeft,
                1 => Relation::AlignRight,
                2 => Relation::AlignFront,
                3 => Relation::AlignBack,
                4 => Relation::AlignCenterLr,
                _ => Relation::AlignCenterFb,
            };
            let mut hover = child_object(
                &format!("hover_{t}"),
                size,
                &table_name,
                alignment,
                &[],
            );
            // Clear of anything spawned on the table (max reach 0.44 m).
            hover.pose.position =
                Vec3::new(slot.x, slot.y, table_size.z + size.z / 2.0 + 0.5);
            objects.push(hover);
        }
    }

    // Tank cluster, well away from the ground slab. With a spanning
    // deck, the fill level and in-tank body heights are capped so
    // nothing can reach the deck's underside (deck bottom = H - 0.15;
    // worst top = 0.5 H + 0.2 H, safely below for any H >= 1).
    let with_tank = rng.below(10) < 6;
    if with_tank {
        let tank_size = Vec3::new(
            rng.range_f64(3.0, 5.0),
            rng.range_f64(1.5, 2.5),
            rng.range_f64(1.0, 2.0),
        );
        let with_deck = rng.below(2) == 0;
        let mut tank = base_object("tank", tank_size, Vec3::new(30.0, 0.0, 0.0));
        tank.construction.primitive = Some(Primitive::GeneratedBoundary);
        tank.fsi_registration = FsiRegistration::Boundary;
        objects.push(tank);

        let fraction = if with_deck {
            rng.range_f64(0.3, 0.5)
        } else {
            rng.range_f64(0.4, 0.9)
        };
        let (fill_relation, params): (Relation, Vec<(&str, ParamValue)>) =
            if !with_deck && rng.below(4) == 0 {
                (Relation::FillsContainerToTop, vec![])
            } else {
                (
                    Relation::FillsContainerLowerHalf,
                    vec![("fraction", ParamValue::Number(fraction))],
                )
            };
        let effective_fraction =
            if fill_relation == Relation::FillsContainerToTop { 1.0 } else { fraction };
        let mut water =
            child_object("water", Vec3::new(1.0, 1.0, 1.0), "tank", fill_relation, &params);
        water.construction.primitive = Some(Primitive::FluidDomain);
        water.construction.size = None;
        water.construction.density = Some(1000.0);
        water.fsi_registration = FsiRegistration::Fluid;
        objects.push(water);

        let depth = effective_fraction * tank_size.z;
        let max_body_height = if with_deck {
            0.2 * tank_size.z
        } else {
            (0.8 * depth).min(0.4)
        };
        let quarter_x = tank_size.x / 4.0;
        let quarter_y = tank_size.y / 4.0;
        let fp = (tank_size.x.min(tank_size.y) / 8.0).min(0.4);

        // Floating plate, west slot.
        let plate_height = rng.range_f64(0.05, max_body_height.min(0.8 * depth));
        let ratio = rng.range_f64(0.1, 0.9);
        let mut plate = child_object(
            "plate",
            Vec3::new(fp, fp, plate_height),
            "water",
            Relation::FloatsAtSurface,
            &[("offset_x", ParamValue::Number(-quarter_x))],
        );
        plate.construction.density = Some(1000.0 * ratio);
        plate.fsi_registration = FsiRegistration::FsiSolid;
        objects.push(plate);

        if rng.below(2) == 0 {
            // Surface-anchored block, east slot.
            let anchor = match rng.below(3) {
                0 => Relation::BottomFlushWaterSurface,
                1 => Relation::CenterAtWaterSurface,
                _ => Relation::TopFlushWaterSurface,
            };
            let h = rng.range_f64(0.05, max_body_height.min(0.8 * depth));
            let mut bob = child_object(
                "bob",
                Vec3::new(fp, fp, h),
                "water",
                anchor,
                &[("offset_x", ParamValue::Number(quarter_x))],
            );
            bob.fsi_registration = FsiRegistration::FsiSolid;
            objects.push(bob);
        }
        if rng.below(2) == 0 {
            // Sunken block resting inside, north slot.
            let h = rng.range_f64(0.05, max_body_height.max(0.2));
            let mut pebble = child_object(
                "pebble",
                Vec3::new(fp, fp, h),
                "tank",
                Relation::PlaceIn,
                &[("offset_y", ParamValue::Number(quarter_y))],
            );
            pebble.fsi_registration = FsiRegistration::FsiSolid;
            objects.push(pebble);
        }
        if with_deck {
            // Platforms flanking the tank, with a spanning deck.
            let platform_size = Vec3::new(rng.range_f64(2.0, 3.0), tank_size.y, tank_size.z);
            for (name, side) in [
                ("platform_w", scenec::geometry::CardinalDir::MinusX),
                ("platform_e", scenec::geometry::CardinalDir::PlusX),
            ] {
                let mut platform = child_object(
                    name,
                    platform_size,
                    "tank",
                    Relation::Adjacent(side, VerticalAlign::TopFlush),
                    &[],
                );
                platform.fixed = true;
                platform.is_dynamic = false;
                objects.push(platform);
            }
            let mut deck = ObjectSpec {
                name: "deck".into(),
                construction: proc_box(
                    Vec3::new(1.0, rng.range_f64(0.8, tank_size.y * 0.9), 0.15),
                    Some(400.0),
                ),
                topology: Topology {
                    role: TopologyRole::Child,
                    refs: vec!["platform_w".into(), "platform_e".into()],
                    relation: Some(Relation::BridgeBetweenAAndB),
                    params: BTreeMap::new(),
                },
                pose: Pose::default(),
                fixed: true,
                is_dynamic: false,
                fsi_registration: FsiRegistration::NonFsi,
                description: None,
            };
            if rng.below(2) == 0 {
                deck.topology.relation = Some(Relation::FlushWithPlatformTop);
            }
            objects.push(deck);
        }
    }

    // Mirror pair in its own region (sources at y >= 8, mirrors land at
    // y <= -8).
    if rng.below(2) == 0 {
        let source_pos = Vec3::new(rng.range_f64(-22.0, -18.0), rng.range_f64(8.0, 10.0), 0.4);
        let size = Vec3::new(0.6, 0.5, 0.8);
        let mut source = base_object("mirror_src", size, source_pos);
        source.fixed = false;
        source.is_dynamic = true;
        source.pose.rotation_deg.z = rng.range_f64(-180.0, 180.0);
        objects.push(source);
        objects.push(child_object(
            "mirror_dst",
            size,
            "mirror_src",
            Relation::SymmetryAlong,
            &[
                ("axis", ParamValue::Text("x".into())),
                ("no_overlap", ParamValue::Flag(true)),
            ],
        ));
    }

    // Copied pair translated into an empty strip.
    if rng.below(10) < 4 {
        let origin = Vec3::new(-30.0, 5.0, 0.45);
        objects.push(base_object("seat_a", Vec3::new(0.5, 0.5, 0.9), origin));
        objects.push(base_object(
            "seat_b",
            Vec3::new(0.5, 0.5, 0.9),
            origin + Vec3::new(0.0, 2.0, 0.0),
        ));
        let dy = -rng.range_f64(12.0, 16.0);
        for (copy, source) in [("seat_a_copy", "seat_a"), ("seat_b_copy", "seat_b")] {
            objects.push(child_object(
                copy,
                Vec3::new(0.5, 0.5, 0.9),
                source,
                Relation::CopyGroup,
                &[("dy", ParamValue::Number(dy))],
            ));
        }
        if rng.below(2) == 0 {
            let mut anchor = base_object(
                "seating",
                Vec3::new(0.1, 0.1, 0.1),
                origin + Vec3::new(1.5, 1.0, -0.4),
            );
            anchor.topology.relation = Some(Relation::Group);
            anchor.topology.params.insert(
                "members".into(),
                ParamValue::List(vec!["seat_a".into(), "seat_b".into()]),
            );
            objects.push(anchor);
        }
    }

    // Rocks by deterministic free-spot scanning.
    for r in 0..rng.below(3) {
        objects.push(child_object(
            &format!("rock_{r}"),
            Vec3::new(
                rng.range_f64(0.2, 0.6),
                rng.range_f64(0.2, 0.6),
                rng.range_f64(0.2, 0.5),
            ),
            "ground",
            Relation::PlaceAnywhere,
            &[
                ("facing", ParamValue::Text("random".into())),
                ("seed", ParamValue::Number(rng.below(100_000) as f64)),
            ],
        ));
    }

    // A pole declared by its height, clear of the table grid.
    if rng.below(10) < 4 {
        let mut pole = child_object(
            "pole",
            Vec3::new(0.2, 0.2, 1.0),
            "ground",
            Relation::Height,
            &[("height", ParamValue::Number(rng.range_f64(1.0, 4.0)))],
        );
        pole.pose.position = Vec3::new(0.3, 7.3, 0.0);
        pole.fixed = true;
        pole.is_dynamic = false;
        objects.push(pole);
    }

    // A rotation-only sign facing the first table.
    if rng.below(2) == 0 {
        let mut sign = child_object(
            "sign",
            Vec3::new(0.1, 0.6, 1.4),
            "table_0",
            match rng.below(3) {
                0 => Relation::FacingTo,
                1 => Relation::FacingOppositeTo,
                _ => Relation::FacingSameAs,
            },
            &[],
        );
        sign.pose.position = Vec3::new(20.0, -10.0, 0.7);
        sign.fixed = true;
        sign.is_dynamic = false;
        objects.push(sign);
    }

    // Cameras.
    let mut cameras = vec![CameraSpec::Explicit {
        position: Vec3::new(0.0, -20.0, 6.0),
        target: Vec3::new(0.0, 0.0, 0.5),
        up: Vec3::new(0.0, 0.0, 1.0),
    }];
    let template = match rng.below(4) {
        0 => CameraTemplate::Side(scenec::geometry::CardinalDir::PlusX),
        1 => CameraTemplate::Side(scenec::geometry::CardinalDir::MinusY),
        2 => CameraTemplate::TopDown,
        _ => CameraTemplate::Perspective,
    };
    cameras.push(CameraSpec::Template { template, container: None });
    if with_tank && rng.below(2) == 0 {
        cameras.push(CameraSpec::Template {
            template: CameraTemplate::InsideWall(scenec::geometry::CardinalDir::MinusX),
            container: Some("tank".into()),
        });
    }

    let parameters = SimulationParameters {
        time_step: if rng.below(4) == 0 { None } else { Some(0.001) },
        simulation_duration: if rng.below(4) == 0 { None } else { Some(10.0) },
        gravity: if rng.below(4) == 0 { None } else { Some(Gravity::Scalar(9.81)) },
    };

    SimulationPlan {
        plan_type: if with_tank { PlanType::FsiInScene } else { PlanType::Scene },
        simulation_parameters: parameters,
        objectives: vec!["generated layout sanity run".into()],
        recording_mode: if rng.below(4) == 0 { None } else { Some(RecordingMode::SensorCams) },
        objects,
        implementation_steps: vec![StepSpec {
            description: "assemble the generated layout".into(),
            objects: vec![],
            cameras,
            motion_expectations: vec![],
        }],
        clarifications_needed: vec![],
    }
}

/// The kinds of seeded mutation the completeness suite applies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MutationKind {
    PositionNudge,
    ExtentScale,
    YawNudge,
    SurfaceNudge,
    AabbShift,
}

/// Apply one seeded mutation (> 10x any check tolerance). Returns a
/// description of what was mutated, or `None` when the scene offers no
/// target for the drawn kind.
pub fn mutate_scene(
    scene: &mut ResolvedScene,
    plan: &SimulationPlan,
    rng: &mut SplitMix64,
) -> Option<String> {
    let names: Vec<String> = scene.bodies.keys().cloned().collect();
    if names.is_empty() {
        return None;
    }
    let kind = match rng.below(5) {
        0 => MutationKind::PositionNudge,
        1 => MutationKind::ExtentScale,
        2 => MutationKind::YawNudge,
        3 => MutationKind::SurfaceNudge,
        _ => MutationKind::AabbShift,
    };
    let name = names[rng.below(names.len())].clone();
    let convention = match plan.object(&name) {
        Some(obj) if obj.is_boundary_container() => AabbConvention::BoundaryFloor,
        _ => AabbConvention::Center,
    };
    let recompute = |body: &mut scenec::resolver::ResolvedBody| {
        body.aabb = world_aabb(body.extent, body.position, body.orientation, convention);
    };
    match kind {
        MutationKind::PositionNudge => {
            let body = scene.bodies.get_mut(&name)?;
            let delta = rng.range_f64(0.001, 0.05) * if rng.below(2) == 0 { 1.0 } else { -1.0 };
            match rng.below(3) {
                0 => body.position.x += delta,
                1 => body.position.y += delta,
                _ => body.position.z += delta,
            }
            recompute(body);
            Some(format!("position nudge on {name} by {delta}"))
        }
        MutationKind::ExtentScale => {
            let body = scene.bodies.get_mut(&name)?;
            let factor = rng.range_f64(1.02, 1.2);
            let size = body.extent.size() * factor;
            body.extent = BoxExtent::from_vec(size).ok()?;
            recompute(body);
            Some(format!("extent scale on {name} by {factor}"))
        }
        MutationKind::YawNudge => {
            let body = scene.bodies.get_mut(&name)?;
            let delta = rng.range_f64(2.0, 40.0);
            body.orientation =
                Orientation { deg_x: body.orientation.deg_x, deg_z: body.orientation.deg_z + delta };
            recompute(body);
            Some(format!("yaw nudge on {name} by {delta} deg"))
        }
        MutationKind::SurfaceNudge => {
            let fluids: Vec<String> = scene.free_surfaces.keys().cloned().collect();
            if fluids.is_empty() {
                return None;
            }
            let fluid = fluids[rng.below(fluids.len())].clone();
            let delta = rng.range_f64(0.01, 0.2);
            *scene.free_surfaces.get_mut(&fluid)? += delta;
            Some(format!("free-surface nudge on {fluid} by {delta}"))
        }
        MutationKind::AabbShift => {
            let body = scene.bodies.get_mut(&name)?;
            let delta = rng.range_f64(0.001, 0.05);
            body.aabb.min.x += delta;
            body.aabb.max.x += delta;
            Some(format!("raw bounds shift on {name} by {delta}"))
        }
    }
}
