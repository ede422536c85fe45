//! Geometric self-checks over a resolved scene.
//!
//! Two layers of checking. The placement replay recomputes every
//! object's expected pose from the stored scene through the same
//! placement rules the resolver used, so any drift from the rules —
//! including a perturbed stored pose — surfaces as a violation. On top
//! of that sit the independent quantitative checks: spanning bodies lie
//! between their flanks, flank pairs oppose each other across their
//! shared neighbour, floating bodies satisfy the Archimedes draft,
//! solids do not interpenetrate, contained bodies stay inside their
//! containers, and camera up vectors stay anti-parallel to gravity.
//!
//! Violations are data, not errors; an empty list is the pass verdict.

use serde::Serialize;

use std::collections::BTreeMap;

use crate::catalog::AssetCatalog;
use crate::constants::{
    BUOYANCY_TOL, CONTAINMENT_TOL, DEFAULT_FLUID_DENSITY, FLUSH_TOL, INTERPENETRATION_TOL,
};
use crate::geometry::Axis3;
use crate::plan::{ObjectSpec, SimulationPlan};
use crate::relation::Relation;
use crate::resolver::{dependency_order, replay_object, ResolveOptions, ResolvedScene};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckId {
    PoseFinite,
    PlacementReplay,
    SurfaceConsistency,
    BridgeBetween,
    FlankOpposition,
    FlankOppositionPlanar,
    ArchimedesDraft,
    Interpenetration,
    Containment,
    CameraUp,
}

/// One failed check, with the measured quantity and its limit for every
/// quantitative check.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Violation {
    pub check_id: CheckId,
    pub subjects: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub measured: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub limit: Option<f64>,
    pub units: &'static str,
    pub message: String,
    /// Advisory findings do not fail a scene.
    pub advisory: bool,
}

impl Violation {
    fn new(
        check_id: CheckId,
        subjects: Vec<String>,
        measured: f64,
        limit: f64,
        units: &'static str,
        message: String,
    ) -> Self {
        Violation {
            check_id,
            subjects,
            measured: Some(measured),
            limit: Some(limit),
            units,
            message,
            advisory: false,
        }
    }
}

/// Which objects participate in a check pass.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CheckMode {
    /// Everything: the scene must be exactly what the rules dictate.
    Full,
    /// Final-frame replay after a simulation: dynamic bodies have
    /// legitimately moved, so placement replay and pairwise checks are
    /// restricted to non-dynamic bodies; containment still applies to
    /// everything.
    FinalFrame,
}

/// Run the full check suite.
pub fn check_scene(
    scene: &ResolvedScene,
    plan: &SimulationPlan,
    catalog: &AssetCatalog,
) -> Vec<Violation> {
    check_scene_mode(scene, plan, catalog, CheckMode::Full)
}

/// True when no non-advisory violation is present.
pub fn is_clean(violations: &[Violation]) -> bool {
    violations.iter().all(|v| v.advisory)
}

pub fn check_scene_mode(
    scene: &ResolvedScene,
    plan: &SimulationPlan,
    catalog: &AssetCatalog,
    mode: CheckMode,
) -> Vec<Violation> {
    let mut out = Vec::new();
    check_poses_finite(scene, plan, &mut out);
    if mode == CheckMode::Full {
        check_placement_replay(scene, plan, catalog, &mut out);
        check_surfaces(scene, plan, &mut out);
    }
    check_bridges(scene, plan, mode, &mut out);
    check_flanks(scene, plan, mode, &mut out);
    check_archimedes(scene, plan, mode, &mut out);
    check_interpenetration(scene, plan, mode, &mut out);
    check_containment(scene, plan, &mut out);
    check_cameras(scene, &mut out);
    out
}

fn active(obj: &ObjectSpec, mode: CheckMode) -> bool {
    mode == CheckMode::Full || !obj.is_dynamic
}

fn check_poses_finite(scene: &ResolvedScene, plan: &SimulationPlan, out: &mut Vec<Violation>) {
    for obj in &plan.objects {
        match scene.bodies.get(&obj.name) {
            None => out.push(Violation {
                check_id: CheckId::PoseFinite,
                subjects: vec![obj.name.clone()],
                measured: None,
                limit: None,
                units: "",
                message: "object is missing from the resolved scene".into(),
                advisory: false,
            }),
            Some(body) => {
                let finite = body.position.is_finite()
                    && body.orientation.deg_x.is_finite()
                    && body.orientation.deg_z.is_finite()
                    && body.aabb.min.is_finite()
                    && body.aabb.max.is_finite();
                if !finite {
                    out.push(Violation {
                        check_id: CheckId::PoseFinite,
                        subjects: vec![obj.name.clone()],
                        measured: None,
                        limit: None,
                        units: "",
                        message: "pose contains non-finite components".into(),
                        advisory: false,
                    });
                }
            }
        }
    }
}

fn check_placement_replay(
    scene: &ResolvedScene,
    plan: &SimulationPlan,
    catalog: &AssetCatalog,
    out: &mut Vec<Violation>,
) {
    let Ok(order) = dependency_order(plan) else {
        out.push(Violation {
            check_id: CheckId::PlacementReplay,
            subjects: vec![],
            measured: None,
            limit: None,
            units: "",
            message: "plan topology is cyclic; cannot replay placements".into(),
            advisory: false,
        });
        return;
    };
    let options = ResolveOptions { default_seed: scene.default_seed };
    let mut prefix: Vec<String> = Vec::with_capacity(order.len());
    for index in order {
        let obj = &plan.objects[index];
        let replayed = match replay_object(plan, catalog, &options, scene, &prefix, obj) {
            Ok(body) => body,
            Err(err) => {
                out.push(Violation {
                    check_id: CheckId::PlacementReplay,
                    subjects: vec![obj.name.clone()],
                    measured: None,
                    limit: None,
                    units: "",
                    message: format!("placement replay failed: {err}"),
                    advisory: false,
                });
                prefix.push(obj.name.clone());
                continue;
            }
        };
        prefix.push(obj.name.clone());
        let Some(stored) = scene.bodies.get(&obj.name) else {
            continue; // reported by the finiteness pass
        };
        let deviation = [
            (stored.position - replayed.position).norm(),
            (stored.extent.size() - replayed.extent.size()).norm(),
            (stored.aabb.min - replayed.aabb.min).norm(),
            (stored.aabb.max - replayed.aabb.max).norm(),
            heading_distance(stored.orientation.deg_z, replayed.orientation.deg_z),
            (stored.orientation.deg_x - replayed.orientation.deg_x).abs(),
        ]
        .into_iter()
        .fold(0.0f64, f64::max);
        if deviation > FLUSH_TOL {
            out.push(Violation::new(
                CheckId::PlacementReplay,
                vec![obj.name.clone()],
                deviation,
                FLUSH_TOL,
                "m",
                format!("stored pose deviates from the placement rules by {deviation:.3e} m"),
            ));
        }
    }
}

/// Compare yaws through their headings so 360-degree wraps do not count.
fn heading_distance(a_deg: f64, b_deg: f64) -> f64 {
    let a = crate::geometry::Orientation::yaw(a_deg).heading();
    let b = crate::geometry::Orientation::yaw(b_deg).heading();
    (a - b).norm()
}

fn check_surfaces(scene: &ResolvedScene, plan: &SimulationPlan, out: &mut Vec<Violation>) {
    for obj in &plan.objects {
        if !obj.is_fluid() {
            continue;
        }
        let Some(body) = scene.bodies.get(&obj.name) else {
            continue;
        };
        match scene.free_surfaces.get(&obj.name) {
            Some(&height) => {
                let delta = (height - body.aabb.top_z()).abs();
                if delta > FLUSH_TOL {
                    out.push(Violation::new(
                        CheckId::SurfaceConsistency,
                        vec![obj.name.clone()],
                        delta,
                        FLUSH_TOL,
                        "m",
                        format!(
                            "registered free surface {height} does not match the fluid top {}",
                            body.aabb.top_z()
                        ),
                    ));
                }
            }
            None => out.push(Violation {
                check_id: CheckId::SurfaceConsistency,
                subjects: vec![obj.name.clone()],
                measured: None,
                limit: None,
                units: "",
                message: "fluid volume has no registered free surface".into(),
                advisory: false,
            }),
        }
    }
}

fn check_bridges(
    scene: &ResolvedScene,
    plan: &SimulationPlan,
    mode: CheckMode,
    out: &mut Vec<Violation>,
) {
    for obj in &plan.objects {
        if obj.topology.relation != Some(Relation::BridgeBetweenAAndB) || !active(obj, mode) {
            continue;
        }
        let refs = &obj.topology.refs;
        let (Some(body), Some(a), Some(b)) = (
            scene.bodies.get(&obj.name),
            refs.first().and_then(|n| scene.bodies.get(n)),
            refs.get(1).and_then(|n| scene.bodies.get(n)),
        ) else {
            continue;
        };
        let dx = (a.aabb.center_x() - b.aabb.center_x()).abs();
        let dy = (a.aabb.center_y() - b.aabb.center_y()).abs();
        let axis = if dx >= dy { Axis3::X } else { Axis3::Y };
        let (lo, hi, mid) = match axis {
            Axis3::X => (
                a.aabb.center_x().min(b.aabb.center_x()),
                a.aabb.center_x().max(b.aabb.center_x()),
                body.aabb.center_x(),
            ),
            _ => (
                a.aabb.center_y().min(b.aabb.center_y()),
                a.aabb.center_y().max(b.aabb.center_y()),
                body.aabb.center_y(),
            ),
        };
        if !(mid > lo && mid < hi) {
            out.push(Violation::new(
                CheckId::BridgeBetween,
                vec![obj.name.clone(), refs[0].clone(), refs[1].clone()],
                mid,
                lo,
                "m",
                format!(
                    "spanning body centre {mid} is not strictly between its flanks ({lo}, {hi})"
                ),
            ));
        }
    }
}

/// Flank pairs: two children flush against opposite faces of the same
/// reference must sit on opposite sides of it. Adjacency templates are
/// normative; left_of/right_of pairings are advisory.
/// Child name, side sign, and whether the pairing is advisory.
type FlankEntry = (String, f64, bool);

fn check_flanks(
    scene: &ResolvedScene,
    plan: &SimulationPlan,
    mode: CheckMode,
    out: &mut Vec<Violation>,
) {
    // (reference, axis) -> flank entries
    let mut sides: BTreeMap<(String, char), Vec<FlankEntry>> = BTreeMap::new();
    for obj in &plan.objects {
        if !active(obj, mode) {
            continue;
        }
        let Some(reference) = obj.topology.refs.first() else {
            continue;
        };
        match obj.topology.relation {
            Some(Relation::Adjacent(side, _)) => {
                let axis = match side.axis() {
                    Axis3::X => 'x',
                    _ => 'y',
                };
                sides
                    .entry((reference.clone(), axis))
                    .or_default()
                    .push((obj.name.clone(), side.sign(), false));
            }
            Some(Relation::LeftOf) => sides
                .entry((reference.clone(), 'y'))
                .or_default()
                .push((obj.name.clone(), 1.0, true)),
            Some(Relation::RightOf) => sides
                .entry((reference.clone(), 'y'))
                .or_default()
                .push((obj.name.clone(), -1.0, true)),
            _ => {}
        }
    }
    for ((reference, axis), children) in sides {
        let Some(ref_body) = scene.bodies.get(&reference) else {
            continue;
        };
        for i in 0..children.len() {
            for j in (i + 1)..children.len() {
                let (ref a_name, a_sign, a_advisory) = children[i];
                let (ref b_name, b_sign, b_advisory) = children[j];
                if a_sign == b_sign {
                    continue; // same side, not a flank pair
                }
                let (Some(a), Some(b)) = (scene.bodies.get(a_name), scene.bodies.get(b_name))
                else {
                    continue;
                };
                let ref_center = match axis {
                    'x' => ref_body.aabb.center_x(),
                    _ => ref_body.aabb.center_y(),
                };
                let (da, db) = match axis {
                    'x' => (a.aabb.center_x() - ref_center, b.aabb.center_x() - ref_center),
                    _ => (a.aabb.center_y() - ref_center, b.aabb.center_y() - ref_center),
                };
                if da * db >= 0.0 {
                    let advisory = a_advisory || b_advisory;
                    out.push(Violation {
                        check_id: if advisory {
                            CheckId::FlankOppositionPlanar
                        } else {
                            CheckId::FlankOpposition
                        },
                        subjects: vec![a_name.clone(), b_name.clone(), reference.clone()],
                        measured: Some(da * db),
                        limit: Some(0.0),
                        units: "m^2",
                        message: format!(
                            "flank pair sits on the same side of `{reference}` on the {axis} axis"
                        ),
                        advisory,
                    });
                }
            }
        }
    }
}

fn check_archimedes(
    scene: &ResolvedScene,
    plan: &SimulationPlan,
    mode: CheckMode,
    out: &mut Vec<Violation>,
) {
    for obj in &plan.objects {
        if obj.topology.relation != Some(Relation::FloatsAtSurface) || !active(obj, mode) {
            continue;
        }
        let Some(rho_obj) = obj.construction.density else {
            continue; // density-free floats centre at the surface instead
        };
        let (Some(body), Some(reference)) =
            (scene.bodies.get(&obj.name), obj.topology.refs.first())
        else {
            continue;
        };
        let Some(surface) = scene.surface_for(reference) else {
            continue; // reported by surface consistency
        };
        let rho_fluid = fluid_density_for(scene, plan, reference);
        let height = body.aabb.size().z;
        if height <= 0.0 || rho_obj >= rho_fluid {
            continue;
        }
        let submerged = ((surface - body.aabb.bottom_z()) / height).clamp(0.0, 1.0);
        let expected = rho_obj / rho_fluid;
        let delta = (submerged - expected).abs();
        if delta > BUOYANCY_TOL {
            out.push(Violation::new(
                CheckId::ArchimedesDraft,
                vec![obj.name.clone()],
                delta,
                BUOYANCY_TOL,
                "",
                format!(
                    "submerged fraction {submerged:.6} differs from density ratio {expected:.6}"
                ),
            ));
        }
    }
}

fn fluid_density_for(scene: &ResolvedScene, plan: &SimulationPlan, reference: &str) -> f64 {
    let fluid_name = if scene.free_surfaces.contains_key(reference) {
        Some(reference.to_string())
    } else {
        scene.surface_of_container.get(reference).cloned()
    };
    fluid_name
        .and_then(|name| plan.object(&name).and_then(|o| o.construction.density))
        .unwrap_or(DEFAULT_FLUID_DENSITY)
}

fn check_interpenetration(
    scene: &ResolvedScene,
    plan: &SimulationPlan,
    mode: CheckMode,
    out: &mut Vec<Violation>,
) {
    let solids: Vec<&ObjectSpec> = plan
        .objects
        .iter()
        .filter(|o| !o.is_fluid() && !o.is_boundary_container() && active(o, mode))
        .collect();
    for i in 0..solids.len() {
        for j in (i + 1)..solids.len() {
            let a = solids[i];
            let b = solids[j];
            if contained_pair(scene, a, b) {
                continue;
            }
            let (Some(body_a), Some(body_b)) =
                (scene.bodies.get(&a.name), scene.bodies.get(&b.name))
            else {
                continue;
            };
            if let Some(depths) = body_a.aabb.overlap_depths(&body_b.aabb) {
                let depth = depths[0].min(depths[1]).min(depths[2]);
                if depth > INTERPENETRATION_TOL {
                    out.push(Violation::new(
                        CheckId::Interpenetration,
                        vec![a.name.clone(), b.name.clone()],
                        depth,
                        INTERPENETRATION_TOL,
                        "m",
                        format!("solid bodies overlap by {depth:.3e} m"),
                    ));
                }
            }
        }
    }
}

/// One of the pair encloses the other by relation (containers are hollow
/// from the collision point of view).
fn contained_pair(scene: &ResolvedScene, a: &ObjectSpec, b: &ObjectSpec) -> bool {
    let encloses = |outer: &ObjectSpec, inner: &ObjectSpec| {
        container_name_of(scene, inner)
            .map(|c| c == outer.name)
            .unwrap_or(false)
    };
    encloses(a, b) || encloses(b, a)
}

/// Container an object is geometrically bound to, when its relation
/// implies one.
fn container_name_of(scene: &ResolvedScene, obj: &ObjectSpec) -> Option<String> {
    use Relation::*;
    let reference = obj.topology.refs.first()?;
    match obj.topology.relation? {
        PlaceIn | FillsContainerToTop | FillsContainerLowerHalf => Some(reference.clone()),
        FreeSurfaceAt => Some(reference.clone()),
        FloatsAtSurface | Submerged | BottomFlushWaterSurface | CenterAtWaterSurface
        | TopFlushWaterSurface => {
            if scene.surface_of_container.contains_key(reference) {
                Some(reference.clone())
            } else {
                scene.container_of.get(reference).cloned()
            }
        }
        _ => None,
    }
}

fn check_containment(scene: &ResolvedScene, plan: &SimulationPlan, out: &mut Vec<Violation>) {
    for obj in &plan.objects {
        let Some(container_name) = container_name_of(scene, obj) else {
            continue;
        };
        let (Some(body), Some(container)) =
            (scene.bodies.get(&obj.name), scene.bodies.get(&container_name))
        else {
            continue;
        };
        // Floating bodies may break the surface but must stay inside the
        // container footprint and above its floor.
        let inside = container.aabb.contains_footprint(&body.aabb, CONTAINMENT_TOL)
            && body.aabb.bottom_z() >= container.aabb.bottom_z() - CONTAINMENT_TOL;
        if !inside {
            let overhang = [
                container.aabb.min.x - body.aabb.min.x,
                body.aabb.max.x - container.aabb.max.x,
                container.aabb.min.y - body.aabb.min.y,
                body.aabb.max.y - container.aabb.max.y,
                container.aabb.bottom_z() - body.aabb.bottom_z(),
            ]
            .into_iter()
            .fold(0.0f64, f64::max);
            out.push(Violation::new(
                CheckId::Containment,
                vec![obj.name.clone(), container_name.clone()],
                overhang,
                CONTAINMENT_TOL,
                "m",
                format!("body extends {overhang:.3e} m outside its container `{container_name}`"),
            ));
        }
    }
}

fn check_cameras(scene: &ResolvedScene, out: &mut Vec<Violation>) {
    let gravity_dir = scene.frame.gravity_dir();
    for (i, camera) in scene.cameras.iter().enumerate() {
        let up_norm = camera.up.norm();
        if up_norm == 0.0 {
            out.push(Violation {
                check_id: CheckId::CameraUp,
                subjects: vec![format!("camera {i}")],
                measured: Some(0.0),
                limit: None,
                units: "",
                message: "camera up vector is zero".into(),
                advisory: false,
            });
            continue;
        }
        let view = camera.target - camera.position;
        let view_norm = view.norm();
        let up_dot = camera.up.dot(gravity_dir) / up_norm;
        let view_along_gravity =
            view_norm > 0.0 && (view.dot(gravity_dir) / view_norm).abs() > 1.0 - 1e-9;
        let ok = if view_along_gravity {
            // Top-down views: up must be perpendicular to gravity.
            up_dot.abs() <= 1e-9
        } else {
            up_dot <= -1.0 + 1e-9
        };
        if !ok {
            out.push(Violation::new(
                CheckId::CameraUp,
                vec![format!("camera {i}")],
                up_dot,
                -1.0,
                "",
                "camera up is not anti-parallel to gravity".into(),
            ));
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{BoxExtent, Orientation, Vec3};
    use crate::plan::parse_plan;
    use crate::resolver::resolve_scene;

    const TANK_PLAN: &str = "\
plan_type
  fsi_in_scene

simulation_parameters
  time_step: 0.001
  simulation_duration: 5
  gravity: 9.81

objects
  - name: tank
    construction:
      kind: procedural
      primitive: generated_boundary
      size: {x: 4, y: 2, z: 1.5}
    topology:
      role: base
    pose:
      position: {x: 0, y: 0, z: 0}
      rotation_deg: {x: 0, y: 0, z: 0}
    fixed: true
    is_dynamic: false
    fsi_registration: boundary
  - name: water
    construction:
      kind: procedural
      primitive: fluid_domain
      density: 1000
    topology:
      role: child
      ref: tank
      relation: fills_container_lower_half
    fixed: false
    is_dynamic: true
    fsi_registration: fluid
  - name: plate
    construction:
      kind: procedural
      primitive: box
      size: {x: 0.8, y: 0.6, z: 0.2}
      density: 500
    topology:
      role: child
      ref: water
      relation: floats_at_surface
    fixed: false
    is_dynamic: true
    fsi_registration: fsi_solid

clarifications_needed
  []
";

    fn tank_scene() -> (crate::plan::SimulationPlan, ResolvedScene) {
        let plan = parse_plan(TANK_PLAN).unwrap().plan;
        let scene = resolve_scene(&plan, &AssetCatalog::empty()).unwrap();
        (plan, scene)
    }

    #[test]
    fn resolver_output_passes_all_checks() {
        let (plan, scene) = tank_scene();
        let violations = check_scene(&scene, &plan, &AssetCatalog::empty());
        assert!(violations.is_empty(), "unexpected violations: {violations:?}");
    }

    #[test]
    fn perturbed_float_breaks_archimedes() {
        let (plan, mut scene) = tank_scene();
        // Push the plate up so only a sliver stays submerged.
        let body = scene.bodies.get_mut("plate").unwrap();
        let lifted = Vec3::new(body.position.x, body.position.y, body.position.z + 0.06);
        body.position = lifted;
        body.aabb = crate::geometry::world_aabb(
            body.extent,
            lifted,
            Orientation::identity(),
            crate::geometry::AabbConvention::Center,
        );
        let violations = check_scene(&scene, &plan, &AssetCatalog::empty());
        let archimedes = violations
            .iter()
            .find(|v| v.check_id == CheckId::ArchimedesDraft)
            .expect("archimedes violation");
        // 0.06 m lift on a 0.2 m plate: fraction error = 0.3.
        assert!((archimedes.measured.unwrap() - 0.3).abs() < 1e-9);
        assert_eq!(archimedes.limit.unwrap(), BUOYANCY_TOL);
        // The replay also notices the pose drift.
        assert!(violations.iter().any(|v| v.check_id == CheckId::PlacementReplay));
    }

    #[test]
    fn perturbed_surface_is_inconsistent() {
        let (plan, mut scene) = tank_scene();
        scene.free_surfaces.insert("water".into(), 0.9);
        let violations = check_scene(&scene, &plan, &AssetCatalog::empty());
        assert!(violations.iter().any(|v| v.check_id == CheckId::SurfaceConsistency));
    }

    #[test]
    fn escaped_body_trips_containment() {
        let (plan, mut scene) = tank_scene();
        // Shrink the tank so the plate pokes out of the footprint.
        let tank = scene.bodies.get_mut("tank").unwrap();
        tank.extent = BoxExtent::new(0.5, 0.5, 1.5).unwrap();
        tank.aabb = crate::geometry::world_aabb(
            tank.extent,
            tank.position,
            Orientation::identity(),
            crate::geometry::AabbConvention::BoundaryFloor,
        );
        let violations = check_scene(&scene, &plan, &AssetCatalog::empty());
        assert!(violations.iter().any(|v| v.check_id == CheckId::Containment));
    }

    #[test]
    fn non_finite_pose_is_flagged() {
        let (plan, mut scene) = tank_scene();
        scene.bodies.get_mut("plate").unwrap().position.z = f64::NAN;
        let violations = check_scene(&scene, &plan, &AssetCatalog::empty());
        assert!(violations.iter().any(|v| v.check_id == CheckId::PoseFinite));
    }

    #[test]
    fn bad_camera_up_is_flagged() {
        let (plan, mut scene) = tank_scene();
        scene.cameras.push(crate::resolver::ResolvedCamera {
            position: Vec3::new(0.0, -5.0, 1.0),
            target: Vec3::new(0.0, 0.0, 0.75),
            up: Vec3::new(0.0, 1.0, 0.0),
        });
        let violations = check_scene(&scene, &plan, &AssetCatalog::empty());
        assert!(violations.iter().any(|v| v.check_id == CheckId::CameraUp));
    }

    const SPAN_PLAN: &str = "\
plan_type
  scene

simulation_parameters
  time_step: 0.001
  simulation_duration: 5
  gravity: 9.81

objects
  - name: gap_marker
    construction:
      kind: procedural
      primitive: generated_boundary
      size: {x: 2, y: 1, z: 1}
    topology:
      role: base
    pose:
      position: {x: 0, y: 0, z: 0}
    fixed: true
    is_dynamic: false
    fsi_registration: none
  - name: flank_w
    construction:
      kind: procedural
      primitive: box
      size: {x: 2, y: 1, z: 1}
    topology:
      role: child
      ref: gap_marker
      relation: adjacent_minus_x_top_flush
    fixed: true
    is_dynamic: false
    fsi_registration: none
  - name: flank_e
    construction:
      kind: procedural
      primitive: box
      size: {x: 2, y: 1, z: 1}
    topology:
      role: child
      ref: gap_marker
      relation: adjacent_plus_x_top_flush
    fixed: true
    is_dynamic: false
    fsi_registration: none
  - name: deck
    construction:
      kind: procedural
      primitive: box
      size: {x: 1, y: 0.8, z: 0.1}
    topology:
      role: child
      ref: [flank_w, flank_e]
      relation: bridge_between_a_and_b
    fixed: true
    is_dynamic: false
    fsi_registration: none

clarifications_needed
  []
";

    fn span_scene() -> (crate::plan::SimulationPlan, ResolvedScene) {
        let plan = parse_plan(SPAN_PLAN).unwrap().plan;
        let scene = resolve_scene(&plan, &AssetCatalog::empty()).unwrap();
        (plan, scene)
    }

    #[test]
    fn bridge_outside_its_flanks_is_flagged() {
        let (plan, mut scene) = span_scene();
        assert!(check_scene(&scene, &plan, &AssetCatalog::empty()).is_empty());
        // Drag the deck past the east flank centre.
        let deck = scene.bodies.get_mut("deck").unwrap();
        deck.position.x += 3.0;
        deck.aabb = crate::geometry::world_aabb(
            deck.extent,
            deck.position,
            deck.orientation,
            crate::geometry::AabbConvention::Center,
        );
        let violations = check_scene(&scene, &plan, &AssetCatalog::empty());
        assert!(violations.iter().any(|v| v.check_id == CheckId::BridgeBetween));
    }

    #[test]
    fn flanks_on_the_same_side_are_flagged() {
        let (plan, mut scene) = span_scene();
        // Move the west flank over to the east side of the shared ref.
        let flank = scene.bodies.get_mut("flank_w").unwrap();
        flank.position.x += 5.0;
        flank.aabb = crate::geometry::world_aabb(
            flank.extent,
            flank.position,
            flank.orientation,
            crate::geometry::AabbConvention::Center,
        );
        let violations = check_scene(&scene, &plan, &AssetCatalog::empty());
        let flank_violation = violations
            .iter()
            .find(|v| v.check_id == CheckId::FlankOpposition)
            .expect("flank violation");
        assert!(!flank_violation.advisory);
        assert!(flank_violation.subjects.contains(&"gap_marker".to_string()));
    }

    #[test]
    fn advisory_findings_do_not_fail_a_scene() {
        // Two children placed left_of the same ref sit on the same side;
        // the predicate-based pairing is advisory only.
        let plan_text = "\
plan_type
  scene

simulation_parameters
  time_step: 0.001
  simulation_duration: 5
  gravity: 9.81

objects
  - name: desk
    construction:
      kind: procedural
      primitive: box
      size: {x: 2, y: 1, z: 1}
    topology:
      role: base
    pose:
      position: {x: 0, y: 0, z: 0.5}
    fixed: true
    is_dynamic: false
    fsi_registration: none
  - name: bin_a
    construction:
      kind: procedural
      primitive: box
      size: {x: 0.3, y: 0.3, z: 0.4}
    topology:
      role: child
      ref: desk
      relation: left_of
    pose:
      position: {x: 0, y: 0, z: 0.2}
    fixed: true
    is_dynamic: false
    fsi_registration: none
  - name: bin_b
    construction:
      kind: procedural
      primitive: box
      size: {x: 0.3, y: 0.3, z: 0.4}
    topology:
      role: child
      ref: desk
      relation: right_of
    pose:
      position: {x: 0, y: 0, z: 0.2}
    fixed: true
    is_dynamic: false
    fsi_registration: none

clarifications_needed
  []
";
        let plan = parse_plan(plan_text).unwrap().plan;
        let mut scene = resolve_scene(&plan, &AssetCatalog::empty()).unwrap();
        // Clean scene: the pair opposes correctly, nothing to report.
        assert!(is_clean(&check_scene(&scene, &plan, &AssetCatalog::empty())));
        // Swap bin_b over to the left side: the advisory pairing fires
        // alongside the hard replay violation.
        let bin = scene.bodies.get_mut("bin_b").unwrap();
        bin.position.y = 2.0;
        bin.aabb = crate::geometry::world_aabb(
            bin.extent,
            bin.position,
            bin.orientation,
            crate::geometry::AabbConvention::Center,
        );
        let violations = check_scene(&scene, &plan, &AssetCatalog::empty());
        let advisory = violations
            .iter()
            .find(|v| v.check_id == CheckId::FlankOppositionPlanar)
            .expect("advisory pairing");
        assert!(advisory.advisory);
        // Advisory alone never fails a scene.
        assert!(is_clean(std::slice::from_ref(advisory)));
    }
}
