//! Artifact emission: the resolved-scene document and the simulator
//! script skeleton.
//!
//! The scene document is JSON listing every body with its pose, extents,
//! dynamic flags, and fsi registration, plus free surfaces, scene
//! bounds, and camera poses. Floats print in shortest round-trip form,
//! so poses survive a read back bit-exactly.
//!
//! The skeleton is a straight-line script against the generic `simapi`
//! surface described by the bundled API index: body creation, camera
//! setup, and writers matching the judge's trajectory and log formats.
//! Every call site it emits validates against that index.

use serde::{Deserialize, Serialize};

use crate::catalog::{self, AssetCatalog};
use crate::geometry::{BoxExtent, Frame, Orientation, Vec3, WorldAabb};
use crate::plan::{
    ConstructionKind, Gravity, PlanType, RecordingMode, SimulationPlan,
};
use crate::resolver::{ResolvedCamera, ResolvedScene};

use std::collections::BTreeMap;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SceneBody {
    pub name: String,
    pub kind: ConstructionKind,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub primitive: Option<String>,
    pub position: Vec3,
    pub rotation_deg: Vec3,
    pub extents: Vec3,
    pub aabb: WorldAabb,
    pub fixed: bool,
    pub is_dynamic: bool,
    pub fsi_registration: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub density: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub catalog: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub filename: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub factory: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub collision_proxy: Option<String>,
}

/// The emitted scene document.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SceneDoc {
    pub plan_type: PlanType,
    pub time_step: f64,
    pub simulation_duration: f64,
    pub gravity: Vec3,
    pub recording_mode: RecordingMode,
    pub bodies: Vec<SceneBody>,
    pub free_surfaces: BTreeMap<String, f64>,
    /// Fluid name -> container name.
    pub containers: BTreeMap<String, String>,
    pub scene_bounds: WorldAabb,
    pub cameras: Vec<ResolvedCamera>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub default_seed: Option<u64>,
}

/// Build the scene document for a resolved scene.
pub fn scene_doc(
    scene: &ResolvedScene,
    plan: &SimulationPlan,
    catalog: &AssetCatalog,
) -> SceneDoc {
    let params = &plan.simulation_parameters;
    let gravity = params
        .gravity
        .unwrap_or(Gravity::Scalar(crate::constants::DEFAULT_GRAVITY))
        .effective_vector();
    let bodies = plan
        .objects
        .iter()
        .filter_map(|obj| {
            let body = scene.bodies.get(&obj.name)?;
            let entry = catalog::lookup(catalog, &obj.construction).ok();
            Some(SceneBody {
                name: obj.name.clone(),
                kind: obj.construction.kind,
                primitive: obj.construction.primitive.as_ref().map(|p| p.name().to_string()),
                position: body.position,
                rotation_deg: Vec3::new(body.orientation.deg_x, 0.0, body.orientation.deg_z),
                extents: body.extent.size(),
                aabb: body.aabb,
                fixed: obj.fixed,
                is_dynamic: obj.is_dynamic,
                fsi_registration: obj.fsi_registration.name().to_string(),
                density: obj.construction.density.or(entry.and_then(|e| e.density)),
                catalog: obj.construction.catalog.clone(),
                filename: obj.construction.filename.clone(),
                factory: obj
                    .construction
                    .factory
                    .clone()
                    .or(entry.and_then(|e| e.factory.clone())),
                collision_proxy: entry.and_then(|e| e.collision_proxy.clone()),
            })
        })
        .collect();
    SceneDoc {
        plan_type: plan.plan_type,
        time_step: params.time_step.unwrap_or(crate::constants::DEFAULT_TIME_STEP),
        simulation_duration: params
            .simulation_duration
            .unwrap_or(crate::constants::DEFAULT_DURATION),
        gravity,
        recording_mode: plan.recording_mode.unwrap_or(RecordingMode::VsgOnly),
        bodies,
        free_surfaces: scene.free_surfaces.clone(),
        containers: scene.container_of.clone(),
        scene_bounds: scene.scene_bounds,
        cameras: scene.cameras.clone(),
        default_seed: scene.default_seed,
    }
}

/// Render the scene document as stable, pretty-printed JSON.
pub fn emit_scene(scene: &ResolvedScene, plan: &SimulationPlan, catalog: &AssetCatalog) -> String {
    let mut out =
        serde_json::to_string_pretty(&scene_doc(scene, plan, catalog)).expect("doc serializes");
    out.push('\n');
    out
}

/// Read a scene document back.
pub fn read_scene_doc(text: &str) -> Result<SceneDoc, serde_json::Error> {
    serde_json::from_str(text)
}

#[derive(Debug, thiserror::Error, PartialEq)]
#[error("scene document: body `{body}` has non-positive extents")]
pub struct SceneDocError {
    pub body: String,
}

/// Reconstruct a resolved scene from its document, e.g. for judging a
/// run without re-compiling the plan.
pub fn scene_from_doc(doc: &SceneDoc) -> Result<ResolvedScene, SceneDocError> {
    let mut scene = ResolvedScene {
        frame: Frame::from_gravity_vector(doc.gravity).unwrap_or_default(),
        scene_bounds: doc.scene_bounds,
        cameras: doc.cameras.clone(),
        free_surfaces: doc.free_surfaces.clone(),
        container_of: doc.containers.clone(),
        default_seed: doc.default_seed,
        ..ResolvedScene::default()
    };
    for (fluid, container) in &doc.containers {
        scene.surface_of_container.insert(container.clone(), fluid.clone());
    }
    for body in &doc.bodies {
        let extent = BoxExtent::from_vec(body.extents)
            .map_err(|_| SceneDocError { body: body.name.clone() })?;
        scene.bodies.insert(
            body.name.clone(),
            crate::resolver::ResolvedBody {
                position: body.position,
                orientation: Orientation {
                    deg_x: body.rotation_deg.x,
                    deg_z: body.rotation_deg.z,
                },
                extent,
                aabb: body.aabb,
            },
        );
    }
    Ok(scene)
}

/// Generate the simulator-script skeleton for a resolved scene. The
/// script is straight-line: imports, system setup, one creation block
/// per body, fsi registration, cameras, writers, and the run call.
pub fn emit_skeleton(scene: &ResolvedScene, plan: &SimulationPlan, catalog: &AssetCatalog) -> String {
    let doc = scene_doc(scene, plan, catalog);
    let has_fluid = doc.bodies.iter().any(|b| b.fsi_registration != "none")
        || !doc.free_surfaces.is_empty();
    let mut w = String::new();
    w.push_str(&format!(
        "# generated simulator script: {} plan, {} bodies\n",
        doc.plan_type.name(),
        doc.bodies.len()
    ));
    w.push_str("import simapi.core\n");
    w.push_str("import simapi.vis\n");
    w.push_str("import simapi.io\n");
    if has_fluid {
        w.push_str("import simapi.fsi\n");
    }
    w.push('\n');
    w.push_str("sys = simapi.core.System()\n");
    w.push_str(&format!(
        "sys.set_gravity({}, {}, {})\n",
        py(doc.gravity.x),
        py(doc.gravity.y),
        py(doc.gravity.z)
    ));
    w.push_str(&format!("sys.set_time_step({})\n", py(doc.time_step)));
    w.push('\n');

    for body in &doc.bodies {
        let var = format!("body_{}", body.name);
        match body.kind {
            ConstructionKind::Asset => {
                let mut call = format!(
                    "{var} = simapi.core.load_asset(sys, \"{}\", \"{}\"",
                    body.catalog.as_deref().unwrap_or(""),
                    body.filename.as_deref().unwrap_or("")
                );
                if let Some(density) = body.density {
                    call.push_str(&format!(", density={}", py(density)));
                }
                if body.fixed {
                    call.push_str(", fixed=True");
                }
                if let Some(factory) = &body.factory {
                    call.push_str(&format!(", factory=\"{factory}\""));
                }
                if let Some(proxy) = &body.collision_proxy {
                    call.push_str(&format!(", collision_proxy=\"{proxy}\""));
                }
                call.push_str(")\n");
                w.push_str(&call);
            }
            ConstructionKind::Procedural => {
                let e = body.extents;
                if body.fsi_registration == "fluid" {
                    let mut call = format!(
                        "{var} = simapi.fsi.create_fluid_box(sys, {}, {}, {}",
                        py(e.x),
                        py(e.y),
                        py(e.z)
                    );
                    if let Some(density) = body.density {
                        call.push_str(&format!(", density={}", py(density)));
                    }
                    call.push_str(")\n");
                    w.push_str(&call);
                } else if body.primitive.as_deref() == Some("generated_boundary") {
                    let mut call = format!(
                        "{var} = simapi.core.create_boundary_box(sys, {}, {}, {}",
                        py(e.x),
                        py(e.y),
                        py(e.z)
                    );
                    if body.fixed {
                        call.push_str(", fixed=True");
                    }
                    call.push_str(")\n");
                    w.push_str(&call);
                } else {
                    let mut call = format!(
                        "{var} = simapi.core.create_box(sys, {}, {}, {}",
                        py(e.x),
                        py(e.y),
                        py(e.z)
                    );
                    if let Some(density) = body.density {
                        call.push_str(&format!(", density={}", py(density)));
                    }
                    if body.fixed {
                        call.push_str(", fixed=True");
                    }
                    call.push_str(")\n");
                    w.push_str(&call);
                }
            }
        }
        w.push_str(&format!(
            "simapi.core.set_position({var}, {}, {}, {})\n",
            py(body.position.x),
            py(body.position.y),
            py(body.position.z)
        ));
        w.push_str(&format!(
            "simapi.core.set_rotation_deg({var}, {}, {}, {})\n",
            py(body.rotation_deg.x),
            py(body.rotation_deg.y),
            py(body.rotation_deg.z)
        ));
        if let Some(height) = doc.free_surfaces.get(&body.name) {
            w.push_str(&format!("simapi.fsi.set_free_surface({var}, {})\n", py(*height)));
        }
        if has_fluid && body.fsi_registration != "none" && body.fsi_registration != "fluid" {
            w.push_str(&format!(
                "simapi.fsi.register_body(sys, {var}, \"{}\")\n",
                body.fsi_registration
            ));
        }
        w.push('\n');
    }

    match doc.recording_mode {
        RecordingMode::SensorCams => {
            for (i, camera) in doc.cameras.iter().enumerate() {
                w.push_str(&format!(
                    "cam_{i} = simapi.vis.add_camera(sys, {}, {}, {}, {}, {}, {}, {}, {}, {})\n",
                    py(camera.position.x),
                    py(camera.position.y),
                    py(camera.position.z),
                    py(camera.target.x),
                    py(camera.target.y),
                    py(camera.target.z),
                    py(camera.up.x),
                    py(camera.up.y),
                    py(camera.up.z)
                ));
            }
        }
        RecordingMode::VsgOnly => {
            w.push_str("simapi.vis.enable_vsg(sys)\n");
        }
    }
    w.push('\n');
    w.push_str("simapi.io.write_trajectory(sys, \"trajectory.csv\")\n");
    w.push_str("simapi.io.write_log(sys, \"run.log\")\n");
    w.push_str(&format!(
        "simapi.core.run_simulation(sys, {})\n",
        py(doc.simulation_duration)
    ));
    w
}

/// Shortest round-trip float formatting, with a `.0` suffix so whole
/// numbers read as floats in the script.
fn py(v: f64) -> String {
    let s = format!("{v}");
    if s.contains('.') || s.contains('e') || s.contains("inf") || s.contains("NaN") {
        s
    } else {
        format!("{s}.0")
    }
}
