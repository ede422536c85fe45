//! Resolve symbolic relations into concrete metric poses.
//!
//! The derivation loop per object: resolve full extents first, pick the
//! coordinate convention, apply the relation to bounding-box anchors,
//! then recompute the stored position from the final bounds. Objects
//! resolve in dependency order of their references; explicit plan poses
//! are respected on every axis a relation leaves unconstrained.
//!
//! Orientation resolves in two tiers. Facing modes whose yaw is known
//! before placement (cardinals, seeded random, copying a resolved
//! reference) feed the rotated extents into the anchor arithmetic, so
//! flush contacts stay exact under any yaw. Target-relative modes
//! (`facing to`/`opposite_to`) never move the body: they are computed
//! after placement and are rejected on templates whose face anchors
//! would shift under the late rotation. `by_relative_side` yields a
//! cardinal yaw, so placement is re-anchored once with the permuted
//! extents.

mod anchors;
mod camera;
mod fluid;
mod group;
mod orient;

pub use anchors::{
    resolve_adjacent, resolve_alignment, resolve_bridge, resolve_inside, resolve_on_plane,
    resolve_planar, resolve_support, Alignment, BridgeSolution, Support,
};
pub use camera::{resolve_camera, ResolvedCamera};
pub use fluid::{
    archimedes_draft, center_z_at_surface, fill_box, fill_surface_height, SurfaceAnchor,
};
pub use group::{copy_group, freeze_group, mirror_position, mirror_yaw, GroupDef, MirrorAxis};
pub use orient::{name_hash, random_yaw, relative_side_yaw};

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::catalog::{self, AssetCatalog};
use crate::constants::{
    ANYWHERE_GRID_PITCH, BASE_PLANE_Z, CONTAINMENT_TOL, DEFAULT_FLUID_DENSITY,
};
use crate::geometry::{
    compose_rotation, world_aabb, world_extents, AabbConvention, BoxExtent, FacingRule, Frame,
    GeometryError, Orientation, Vec3, WorldAabb,
};
use crate::plan::{
    CameraSpec, ConstructionKind, Gravity, ObjectSpec, SimulationPlan, TopologyRole,
};
use crate::relation::Relation;

#[derive(Debug, Error)]
pub enum ResolveError {
    #[error("cyclic topology through {0:?}")]
    CyclicTopology(Vec<String>),
    #[error("`{object}` has no resolvable extents; add a size or catalog entry (needs clarification)")]
    UnresolvedExtent { object: String },
    #[error("`{object}` references asset `{key}` which is not in the catalog (needs clarification)")]
    MissingAsset { object: String, key: String },
    #[error("`{object}` needs a free surface from `{reference}`, but none is registered")]
    MissingSurface { object: String, reference: String },
    #[error("`{object}` uses a random rotation without a seed; determinism requires one")]
    MissingSeed { object: String },
    #[error("density must be positive, got {value}")]
    BadDensity { value: f64 },
    #[error("body would sink: object density {rho_obj} >= fluid density {rho_fluid}")]
    WouldSink { rho_obj: f64, rho_fluid: f64 },
    #[error("`{object}` does not fit: {message}")]
    DoesNotFit { object: String, message: String },
    #[error("bridge references overlap by {overlap} m; no gap to span")]
    NoGap { overlap: f64 },
    #[error("platform tops differ by {delta} m, beyond the coplanarity tolerance")]
    NonCoplanarTops { delta: f64 },
    #[error("`{object}`: facing mode `{mode}` cannot combine with relation {relation}")]
    IncompatibleFacing {
        object: String,
        mode: String,
        relation: String,
    },
    #[error("`{object}`: {source}")]
    Geometry {
        object: String,
        source: GeometryError,
    },
    #[error("`{object}` is missing required parameter `{param}`")]
    MissingParam { object: String, param: String },
    #[error("`{object}`: fill fraction must be in (0, 1], got {fraction}")]
    BadFraction { object: String, fraction: f64 },
    #[error("inside-wall camera needs an enclosing container; name one or add a generated_boundary object")]
    NoEnclosingContainer,
    #[error("`{object}`: mirror plane intersects the body, which is marked no-overlap")]
    MirrorPlaneIntersects { object: String },
    #[error("`{object}`: invalid topology: {message}")]
    InvalidTopology { object: String, message: String },
    #[error("gravity vector cannot be mapped to a supported frame")]
    UnsupportedGravity,
    #[error("plan resolves to an empty scene")]
    EmptyScene,
}

/// One placed body.
#[derive(Debug, Clone, PartialEq)]
pub struct ResolvedBody {
    /// Stored position: the body centre, except for boundary containers
    /// where it marks the floor (centred in plan view).
    pub position: Vec3,
    pub orientation: Orientation,
    /// Local full extents, after any height/span overrides.
    pub extent: BoxExtent,
    /// Tight world bounds under the final orientation.
    pub aabb: WorldAabb,
}

/// Fully resolved scene: every object with a concrete numeric pose, the
/// derived free surfaces, scene bounds, and camera poses.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ResolvedScene {
    pub bodies: BTreeMap<String, ResolvedBody>,
    /// Fluid object name -> free-surface height.
    pub free_surfaces: BTreeMap<String, f64>,
    /// Container name -> fluid name, for surface lookups by container.
    pub surface_of_container: BTreeMap<String, String>,
    /// Fluid name -> container name.
    pub container_of: BTreeMap<String, String>,
    pub groups: BTreeMap<String, GroupDef>,
    pub scene_bounds: WorldAabb,
    pub cameras: Vec<ResolvedCamera>,
    pub frame: Frame,
    /// The fallback seed resolution ran with, kept so self-checks can
    /// replay seeded draws faithfully.
    pub default_seed: Option<u64>,
}

impl ResolvedScene {
    pub fn body(&self, name: &str) -> Option<&ResolvedBody> {
        self.bodies.get(name)
    }

    /// Surface height visible from `name`, whether it names the fluid
    /// itself or its container.
    pub fn surface_for(&self, name: &str) -> Option<f64> {
        if let Some(height) = self.free_surfaces.get(name) {
            return Some(*height);
        }
        self.surface_of_container
            .get(name)
            .and_then(|fluid| self.free_surfaces.get(fluid))
            .copied()
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct ResolveOptions {
    /// Fallback seed for seeded draws when a relation omits `seed`;
    /// mixed with the object name so objects get distinct yaws.
    pub default_seed: Option<u64>,
}

/// Resolve a schema-valid plan against an asset catalog.
pub fn resolve_scene(
    plan: &SimulationPlan,
    catalog: &AssetCatalog,
) -> Result<ResolvedScene, ResolveError> {
    resolve_scene_with(plan, catalog, &ResolveOptions::default())
}

pub fn resolve_scene_with(
    plan: &SimulationPlan,
    catalog: &AssetCatalog,
    options: &ResolveOptions,
) -> Result<ResolvedScene, ResolveError> {
    let frame = plan_frame(plan)?;
    let order = dependency_order(plan)?;

    let mut scene = ResolvedScene {
        frame,
        default_seed: options.default_seed,
        ..ResolvedScene::default()
    };
    let mut resolved_order: Vec<String> = Vec::new();

    for &index in &order {
        let obj = &plan.objects[index];
        let body = {
            let ctx = PlacementContext {
                plan,
                catalog,
                options,
                scene: &scene,
                resolved_order: &resolved_order,
            };
            place_object(&ctx, obj)?
        };
        register_effects(plan, obj, &body, &mut scene)?;
        scene.bodies.insert(obj.name.clone(), body);
        resolved_order.push(obj.name.clone());
    }

    scene.scene_bounds = scene
        .bodies
        .values()
        .map(|b| b.aabb)
        .reduce(|a, b| a.union(&b))
        .ok_or(ResolveError::EmptyScene)?;

    // Cameras come last; templates frame the final bounds.
    for step in &plan.implementation_steps {
        for camera in &step.cameras {
            match camera {
                CameraSpec::Explicit { position, target, up } => {
                    scene.cameras.push(ResolvedCamera {
                        position: *position,
                        target: *target,
                        up: *up,
                    });
                }
                CameraSpec::Template { template, container } => {
                    let container_aabb = match container {
                        Some(name) => Some(
                            scene
                                .bodies
                                .get(name)
                                .map(|b| b.aabb)
                                .ok_or_else(|| ResolveError::InvalidTopology {
                                    object: name.clone(),
                                    message: "camera container is not resolved".into(),
                                })?,
                        ),
                        None => default_container(plan, &scene),
                    };
                    scene.cameras.push(resolve_camera(
                        *template,
                        &scene.scene_bounds,
                        frame,
                        container_aabb.as_ref(),
                    )?);
                }
            }
        }
    }

    Ok(scene)
}

fn plan_frame(plan: &SimulationPlan) -> Result<Frame, ResolveError> {
    match plan.simulation_parameters.gravity {
        Some(Gravity::Vector(v)) => {
            Frame::from_gravity_vector(v).ok_or(ResolveError::UnsupportedGravity)
        }
        _ => Ok(Frame::default()),
    }
}

/// The unique boundary container, when exactly one exists.
fn default_container(plan: &SimulationPlan, scene: &ResolvedScene) -> Option<WorldAabb> {
    let mut found = None;
    for obj in &plan.objects {
        if obj.is_boundary_container() {
            match found {
                None => found = Some(obj.name.clone()),
                Some(_) => return None,
            }
        }
    }
    found.and_then(|name| scene.bodies.get(&name).map(|b| b.aabb))
}

/// Topological order of plan objects by reference dependencies;
/// deterministic (plan order among ready nodes).
pub fn dependency_order(plan: &SimulationPlan) -> Result<Vec<usize>, ResolveError> {
    let index_of: BTreeMap<&str, usize> = plan
        .objects
        .iter()
        .enumerate()
        .map(|(i, o)| (o.name.as_str(), i))
        .collect();
    let n = plan.objects.len();
    let mut deps: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (i, obj) in plan.objects.iter().enumerate() {
        let mut add = |name: &str| {
            if let Some(&j) = index_of.get(name) {
                if j != i && !deps[i].contains(&j) {
                    deps[i].push(j);
                }
            }
        };
        for r in &obj.topology.refs {
            add(r);
        }
        for key in ["facing_ref", "container"] {
            if let Some(name) = obj.topology.param_text(key) {
                add(name);
            }
        }
        if let Some(members) = obj.topology.params.get("members").and_then(|p| p.as_list()) {
            for m in members {
                add(m);
            }
        }
        if obj.topology.refs.iter().any(|r| r == &obj.name) {
            return Err(ResolveError::CyclicTopology(vec![obj.name.clone()]));
        }
    }
    let mut indegree: Vec<usize> = deps.iter().map(Vec::len).collect();
    let mut dependents: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (i, list) in deps.iter().enumerate() {
        for &j in list {
            dependents[j].push(i);
        }
    }
    let mut ready: BTreeSet<usize> = (0..n).filter(|&i| indegree[i] == 0).collect();
    let mut order = Vec::with_capacity(n);
    while let Some(&i) = ready.iter().next() {
        ready.remove(&i);
        order.push(i);
        for &j in &dependents[i] {
            indegree[j] -= 1;
            if indegree[j] == 0 {
                ready.insert(j);
            }
        }
    }
    if order.len() != n {
        let stuck: Vec<String> = (0..n)
            .filter(|i| !order.contains(i))
            .map(|i| plan.objects[i].name.clone())
            .collect();
        return Err(ResolveError::CyclicTopology(stuck));
    }
    Ok(order)
}

/// Everything a single placement can see: the plan, the catalog, and the
/// bodies resolved before the subject. The validator replays placements
/// against a fully stored scene through this same interface, so resolver
/// and validator agree by construction.
pub(crate) struct PlacementContext<'a> {
    pub plan: &'a SimulationPlan,
    pub catalog: &'a AssetCatalog,
    pub options: &'a ResolveOptions,
    pub scene: &'a ResolvedScene,
    /// Names resolved before the subject, in resolution order.
    pub resolved_order: &'a [String],
}

impl PlacementContext<'_> {
    fn body(&self, object: &str, name: &str) -> Result<&ResolvedBody, ResolveError> {
        self.scene.bodies.get(name).ok_or_else(|| ResolveError::InvalidTopology {
            object: object.to_string(),
            message: format!("reference `{name}` is not resolved yet"),
        })
    }

    fn surface_for(&self, object: &str, reference: &str) -> Result<f64, ResolveError> {
        self.scene
            .surface_for(reference)
            .ok_or_else(|| ResolveError::MissingSurface {
                object: object.to_string(),
                reference: reference.to_string(),
            })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum FacingMode {
    Front,
    Back,
    Left,
    Right,
    To,
    OppositeTo,
    SameAs,
    Random,
    ByRelativeSide,
}

impl FacingMode {
    fn name(self) -> &'static str {
        match self {
            FacingMode::Front => "front",
            FacingMode::Back => "back",
            FacingMode::Left => "left",
            FacingMode::Right => "right",
            FacingMode::To => "to",
            FacingMode::OppositeTo => "opposite_to",
            FacingMode::SameAs => "same_as",
            FacingMode::Random => "random",
            FacingMode::ByRelativeSide => "by_relative_side",
        }
    }
}

fn facing_mode(obj: &ObjectSpec) -> Option<FacingMode> {
    if let Some(relation) = obj.topology.relation {
        let from_relation = match relation {
            Relation::FacingFront => Some(FacingMode::Front),
            Relation::FacingBack => Some(FacingMode::Back),
            Relation::FacingLeft => Some(FacingMode::Left),
            Relation::FacingRight => Some(FacingMode::Right),
            Relation::FacingTo => Some(FacingMode::To),
            Relation::FacingOppositeTo => Some(FacingMode::OppositeTo),
            Relation::FacingSameAs => Some(FacingMode::SameAs),
            Relation::RandomRot => Some(FacingMode::Random),
            Relation::OrientByRelativeSide => Some(FacingMode::ByRelativeSide),
            _ => None,
        };
        if from_relation.is_some() {
            return from_relation;
        }
    }
    match obj.topology.param_text("facing") {
        Some("front") => Some(FacingMode::Front),
        Some("back") => Some(FacingMode::Back),
        Some("left") => Some(FacingMode::Left),
        Some("right") => Some(FacingMode::Right),
        Some("to") => Some(FacingMode::To),
        Some("opposite_to") => Some(FacingMode::OppositeTo),
        Some("same_as") => Some(FacingMode::SameAs),
        Some("random") => Some(FacingMode::Random),
        Some("by_relative_side") => Some(FacingMode::ByRelativeSide),
        _ => None,
    }
}

/// The object the facing mode refers to: `facing_ref` if given, else the
/// first topology reference.
fn facing_reference(obj: &ObjectSpec) -> Option<&str> {
    obj.topology
        .param_text("facing_ref")
        .or_else(|| obj.topology.refs.first().map(String::as_str))
}

/// Relations whose planar placement does not depend on the subject's own
/// extents; target-relative facing is computable before placement there.
fn planar_known_upfront(relation: Option<Relation>) -> bool {
    match relation {
        None => true,
        Some(r) => {
            r.is_rotation_only()
                || matches!(r, Relation::PlaceOnBase | Relation::Height | Relation::ContainsFluid)
        }
    }
}

/// Relations that tolerate a yaw applied after placement (their anchors
/// pin centres, not faces, or they scan with a yaw-safe footprint).
fn allows_deferred_target_facing(relation: Relation) -> bool {
    use Relation::*;
    matches!(
        relation,
        PlaceAnywhere
            | PlaceOn
            | PlacedOnTop
            | SpawnedOnTop
            | CenteredOnRef
            | PlaceIn
            | BottomFlushWaterSurface
            | CenterAtWaterSurface
            | TopFlushWaterSurface
            | FloatsAtSurface
            | Submerged
            | CopyGroup
    )
}

pub(crate) fn place_object(
    ctx: &PlacementContext<'_>,
    obj: &ObjectSpec,
) -> Result<ResolvedBody, ResolveError> {
    let extent = object_extent(ctx, obj)?;
    let deg_x = obj.pose.rotation_deg.x;
    let mode = facing_mode(obj);

    // Tier A: yaw known before placement.
    let relation = obj.topology.relation;
    let mut deferred: Option<FacingMode> = None;
    let yaw0 = match mode {
        None => obj.pose.rotation_deg.z,
        Some(FacingMode::Front) => 0.0,
        Some(FacingMode::Left) => 90.0,
        Some(FacingMode::Back) => 180.0,
        Some(FacingMode::Right) => -90.0,
        Some(FacingMode::Random) => {
            let seed = match obj.topology.param_number("seed") {
                Some(s) => s as u64,
                None => match ctx.options.default_seed {
                    Some(base) => base ^ name_hash(&obj.name),
                    None => return Err(ResolveError::MissingSeed { object: obj.name.clone() }),
                },
            };
            random_yaw(seed)
        }
        Some(FacingMode::SameAs) => {
            let target = facing_reference(obj).ok_or_else(|| ResolveError::MissingParam {
                object: obj.name.clone(),
                param: "facing_ref".into(),
            })?;
            ctx.body(&obj.name, target)?.orientation.deg_z
        }
        Some(FacingMode::To) | Some(FacingMode::OppositeTo)
            if planar_known_upfront(relation) =>
        {
            target_yaw(ctx, obj, mode.unwrap(), obj.pose.position)?
        }
        Some(m @ (FacingMode::To | FacingMode::OppositeTo)) => {
            let rel = relation.expect("target facing without relation is upfront");
            if !allows_deferred_target_facing(rel) {
                return Err(ResolveError::IncompatibleFacing {
                    object: obj.name.clone(),
                    mode: m.name().into(),
                    relation: rel.name(),
                });
            }
            deferred = Some(m);
            obj.pose.rotation_deg.z
        }
        Some(FacingMode::ByRelativeSide) => {
            deferred = Some(FacingMode::ByRelativeSide);
            obj.pose.rotation_deg.z
        }
    };

    let mut orientation = compose_rotation(yaw0, deg_x);
    let yaw_safe_footprint = deferred == Some(FacingMode::To)
        || deferred == Some(FacingMode::OppositeTo);
    let (mut center, mut final_extent) =
        place_by_relation(ctx, obj, extent, orientation, yaw_safe_footprint)?;

    if let Some(mode) = deferred {
        let yaw = match mode {
            FacingMode::ByRelativeSide => {
                let target = facing_reference(obj).ok_or_else(|| ResolveError::MissingParam {
                    object: obj.name.clone(),
                    param: "facing_ref".into(),
                })?;
                let reference = ctx.body(&obj.name, target)?.aabb;
                relative_side_yaw(center.x, center.y, &reference)
            }
            _ => target_yaw(ctx, obj, mode, center)?,
        };
        orientation = compose_rotation(yaw, deg_x);
        if mode == FacingMode::ByRelativeSide {
            // Cardinal yaw permutes the footprint; re-anchor once. The
            // side sign is preserved, so one pass suffices.
            let (c2, e2) = place_by_relation(ctx, obj, extent, orientation, false)?;
            center = c2;
            final_extent = e2;
        }
    }

    // Mirrored and copied bodies inherit a derived yaw from their source.
    if let Some(yaw) = derived_yaw_override(ctx, obj)? {
        orientation = compose_rotation(yaw, deg_x);
    }

    let convention = convention_for(obj);
    let position = stored_position(center, final_extent, convention);
    let aabb = world_aabb(final_extent, position, orientation, convention);
    post_checks(ctx, obj, &aabb)?;
    Ok(ResolvedBody { position, orientation, extent: final_extent, aabb })
}

fn convention_for(obj: &ObjectSpec) -> AabbConvention {
    if obj.is_boundary_container() {
        AabbConvention::BoundaryFloor
    } else {
        AabbConvention::Center
    }
}

/// Convert an AABB centre into the stored position for the convention.
fn stored_position(center: Vec3, extent: BoxExtent, convention: AabbConvention) -> Vec3 {
    match convention {
        AabbConvention::Center => center,
        AabbConvention::BoundaryFloor => {
            Vec3::new(center.x, center.y, center.z - extent.sz() / 2.0)
        }
    }
}

fn target_yaw(
    ctx: &PlacementContext<'_>,
    obj: &ObjectSpec,
    mode: FacingMode,
    subject_center: Vec3,
) -> Result<f64, ResolveError> {
    let target_name = facing_reference(obj).ok_or_else(|| ResolveError::MissingParam {
        object: obj.name.clone(),
        param: "facing_ref".into(),
    })?;
    let target = ctx.body(&obj.name, target_name)?.aabb.center();
    let rule = match mode {
        FacingMode::To => FacingRule::To(target),
        FacingMode::OppositeTo => FacingRule::OppositeTo(target),
        _ => unreachable!("only target modes reach here"),
    };
    crate::geometry::yaw_for_facing(rule, subject_center)
        .map_err(|source| ResolveError::Geometry { object: obj.name.clone(), source })
}

/// Local extents for an object: plan size or catalog extents, with the
/// `height` relation and fluid fill templates overriding as specified.
fn object_extent(ctx: &PlacementContext<'_>, obj: &ObjectSpec) -> Result<BoxExtent, ResolveError> {
    let relation = obj.topology.relation;

    // Fill templates derive the fluid box from the container.
    if let Some(rel @ (Relation::FillsContainerToTop | Relation::FillsContainerLowerHalf)) =
        relation
    {
        let container_name = obj.topology.refs.first().ok_or_else(|| {
            ResolveError::InvalidTopology {
                object: obj.name.clone(),
                message: "fill templates need a container reference".into(),
            }
        })?;
        let container = ctx.body(&obj.name, container_name)?.aabb;
        let fraction = fill_fraction(obj, rel)?;
        let (_, size) = fill_box(&container, fraction);
        return BoxExtent::from_vec(size)
            .map_err(|_| ResolveError::UnresolvedExtent { object: obj.name.clone() });
    }
    // A free-surface marker with a container spans floor-to-height.
    if relation == Some(Relation::FreeSurfaceAt) {
        if let Some(container_name) = obj.topology.refs.first() {
            let container = ctx.body(&obj.name, container_name)?.aabb;
            let height = required_param(obj, "height")?;
            let depth = height - container.bottom_z();
            if depth <= 0.0 || height > container.top_z() + CONTAINMENT_TOL {
                return Err(ResolveError::DoesNotFit {
                    object: obj.name.clone(),
                    message: format!(
                        "free surface at {height} lies outside the container ({} .. {})",
                        container.bottom_z(),
                        container.top_z()
                    ),
                });
            }
            let size = container.size();
            return BoxExtent::new(size.x, size.y, depth)
                .map_err(|_| ResolveError::UnresolvedExtent { object: obj.name.clone() });
        }
    }

    let mut extent = match obj.construction.kind {
        ConstructionKind::Procedural => {
            let size = obj
                .construction
                .size
                .ok_or_else(|| ResolveError::UnresolvedExtent { object: obj.name.clone() })?;
            BoxExtent::from_vec(size)
                .map_err(|_| ResolveError::UnresolvedExtent { object: obj.name.clone() })?
        }
        ConstructionKind::Asset => {
            let entry = catalog::lookup(ctx.catalog, &obj.construction).map_err(|e| match e {
                catalog::CatalogError::MissingEntry(key) => {
                    ResolveError::MissingAsset { object: obj.name.clone(), key }
                }
                _ => ResolveError::UnresolvedExtent { object: obj.name.clone() },
            })?;
            entry.box_extent()
        }
    };
    if relation == Some(Relation::Height) {
        let height = required_param(obj, "height")?;
        extent = extent
            .with_height(height)
            .map_err(|_| ResolveError::UnresolvedExtent { object: obj.name.clone() })?;
    }
    Ok(extent)
}

fn fill_fraction(obj: &ObjectSpec, relation: Relation) -> Result<f64, ResolveError> {
    let fraction = match relation {
        Relation::FillsContainerToTop => 1.0,
        Relation::FillsContainerLowerHalf => obj.topology.param_number("fraction").unwrap_or(0.5),
        _ => unreachable!("not a fill template"),
    };
    if fraction <= 0.0 || fraction > 1.0 {
        return Err(ResolveError::BadFraction { object: obj.name.clone(), fraction });
    }
    Ok(fraction)
}

fn required_param(obj: &ObjectSpec, param: &str) -> Result<f64, ResolveError> {
    obj.topology
        .param_number(param)
        .ok_or_else(|| ResolveError::MissingParam {
            object: obj.name.clone(),
            param: param.to_string(),
        })
}

/// Density for buoyancy: plan density, then catalog density.
fn body_density(ctx: &PlacementContext<'_>, obj: &ObjectSpec) -> Option<f64> {
    obj.construction.density.or_else(|| {
        catalog::lookup(ctx.catalog, &obj.construction)
            .ok()
            .and_then(|e| e.density)
    })
}

/// Apply the relation to anchors and return the subject's AABB centre
/// plus its (possibly overridden) extents.
fn place_by_relation(
    ctx: &PlacementContext<'_>,
    obj: &ObjectSpec,
    extent: BoxExtent,
    orientation: Orientation,
    yaw_safe_footprint: bool,
) -> Result<(Vec3, BoxExtent), ResolveError> {
    let world_size = world_extents(extent, orientation);
    let fallback = plan_center(obj, extent);
    let gap = obj.topology.param_number("gap").unwrap_or(0.0);
    let offset = (
        obj.topology.param_number("offset_x").unwrap_or(0.0),
        obj.topology.param_number("offset_y").unwrap_or(0.0),
    );

    let Some(relation) = obj.topology.relation else {
        return Ok((fallback, extent));
    };
    if obj.topology.role == TopologyRole::Base && relation.ref_count().0 == 0 {
        // Base rows with referenceless relations (group anchors, free
        // surface markers without a container) keep their explicit pose.
        if !matches!(relation, Relation::FreeSurfaceAt) {
            return Ok((fallback, extent));
        }
    }

    use Relation::*;
    let first_ref = || -> Result<&ResolvedBody, ResolveError> {
        let name = obj.topology.refs.first().ok_or_else(|| ResolveError::InvalidTopology {
            object: obj.name.clone(),
            message: format!("relation {} needs a reference", relation.name()),
        })?;
        ctx.body(&obj.name, name)
    };

    let center = match relation {
        LeftOf => resolve_planar(&first_ref()?.aabb, world_size, crate::geometry::CardinalDir::PlusY, gap, fallback),
        RightOf => resolve_planar(&first_ref()?.aabb, world_size, crate::geometry::CardinalDir::MinusY, gap, fallback),
        FrontOf => resolve_planar(&first_ref()?.aabb, world_size, crate::geometry::CardinalDir::PlusX, gap, fallback),
        BackOf => resolve_planar(&first_ref()?.aabb, world_size, crate::geometry::CardinalDir::MinusX, gap, fallback),
        PlaceOnBase => {
            let plane = obj.topology.param_number("height").unwrap_or(BASE_PLANE_Z);
            resolve_on_plane(plane, world_size, fallback)
        }
        AlignLeft => resolve_alignment(&first_ref()?.aabb, world_size, Alignment::Left, fallback),
        AlignRight => resolve_alignment(&first_ref()?.aabb, world_size, Alignment::Right, fallback),
        AlignFront => resolve_alignment(&first_ref()?.aabb, world_size, Alignment::Front, fallback),
        AlignBack => resolve_alignment(&first_ref()?.aabb, world_size, Alignment::Back, fallback),
        AlignCenterLr => {
            resolve_alignment(&first_ref()?.aabb, world_size, Alignment::CenterLr, fallback)
        }
        AlignCenterFb => {
            resolve_alignment(&first_ref()?.aabb, world_size, Alignment::CenterFb, fallback)
        }
        PlaceOn | PlacedOnTop => {
            resolve_support(&first_ref()?.aabb, world_size, Support::Placed, offset)
        }
        SpawnedOnTop => resolve_support(&first_ref()?.aabb, world_size, Support::Spawned, offset),
        CenteredOnRef => {
            resolve_support(&first_ref()?.aabb, world_size, Support::Centered, offset)
        }
        PlaceIn => resolve_inside(&first_ref()?.aabb, world_size, offset).map_err(|e| match e {
            ResolveError::DoesNotFit { message, .. } => {
                ResolveError::DoesNotFit { object: obj.name.clone(), message }
            }
            other => other,
        })?,
        PlaceAnywhere => {
            let plane = obj.topology.param_number("height").unwrap_or(BASE_PLANE_Z);
            let footprint = if yaw_safe_footprint {
                let diag = (extent.sx().hypot(extent.sy())).max(world_size.x.max(world_size.y));
                Vec3::new(diag, diag, world_size.z)
            } else {
                world_size
            };
            place_anywhere(ctx, footprint, plane, fallback)
        }
        Height => {
            let plane = match obj.topology.refs.first() {
                Some(name) => ctx.body(&obj.name, name)?.aabb.top_z(),
                None => BASE_PLANE_Z,
            };
            resolve_on_plane(plane, world_size, fallback)
        }
        Adjacent(side, valign) => {
            resolve_adjacent(&first_ref()?.aabb, world_size, side, valign, gap)
        }
        FacingRight | FacingLeft | FacingFront | FacingBack | FacingTo | FacingOppositeTo
        | FacingSameAs | RandomRot | OrientByRelativeSide => fallback,
        FreeSurfaceAt => {
            match obj.topology.refs.first() {
                // With a container, the extent derivation already sized
                // the box floor-to-height; rest it on the floor.
                Some(name) => {
                    let container = ctx.body(&obj.name, name)?.aabb;
                    Vec3::new(
                        container.center_x(),
                        container.center_y(),
                        container.bottom_z() + world_size.z / 2.0,
                    )
                }
                // Free-standing: top face at the requested height.
                None => {
                    let height = required_param(obj, "height")?;
                    Vec3::new(fallback.x, fallback.y, height - world_size.z / 2.0)
                }
            }
        }
        FillsContainerToTop | FillsContainerLowerHalf => {
            let container = first_ref()?.aabb;
            let fraction = fill_fraction(obj, relation)?;
            let (center, _) = fill_box(&container, fraction);
            center
        }
        BottomFlushWaterSurface | CenterAtWaterSurface | TopFlushWaterSurface | Submerged => {
            let anchor = match relation {
                BottomFlushWaterSurface => SurfaceAnchor::Bottom,
                CenterAtWaterSurface => SurfaceAnchor::Center,
                _ => SurfaceAnchor::Top,
            };
            place_at_surface(ctx, obj, world_size, anchor, offset)?
        }
        FloatsAtSurface => {
            let rho_fluid = fluid_density(ctx, obj)?;
            match body_density(ctx, obj) {
                Some(rho_obj) => {
                    let draft = archimedes_draft(rho_obj, rho_fluid, world_size.z)?;
                    let reference = obj.topology.refs.first().cloned().unwrap_or_default();
                    let surface = ctx.surface_for(&obj.name, &reference)?;
                    let base = place_at_surface(ctx, obj, world_size, SurfaceAnchor::Top, offset)?;
                    // bottom_z = surface - draft
                    Vec3::new(base.x, base.y, surface - draft + world_size.z / 2.0)
                }
                // Without a density the draft is undefined; fall back to
                // centre-at-surface (the rho/rho_fluid = 0.5 limit).
                None => place_at_surface(ctx, obj, world_size, SurfaceAnchor::Center, offset)?,
            }
        }
        ContainsFluid => fallback,
        SymmetryAlong => {
            let source = first_ref()?;
            let axis = match obj.topology.param_text("axis") {
                Some("x") => MirrorAxis::X,
                Some("y") => MirrorAxis::Y,
                _ => {
                    return Err(ResolveError::MissingParam {
                        object: obj.name.clone(),
                        param: "axis".into(),
                    })
                }
            };
            let plane = obj.topology.param_number("offset").unwrap_or(0.0);
            if obj.topology.params.get("no_overlap").and_then(|p| p.as_flag()) == Some(true) {
                let straddles = match axis {
                    MirrorAxis::X => source.aabb.min_y() < plane && source.aabb.max_y() > plane,
                    MirrorAxis::Y => source.aabb.min_x() < plane && source.aabb.max_x() > plane,
                };
                if straddles {
                    return Err(ResolveError::MirrorPlaneIntersects { object: obj.name.clone() });
                }
            }
            return Ok((
                mirror_position(axis, plane, source.aabb.center()),
                extent,
            ));
        }
        Group => fallback,
        CopyGroup => {
            let source = first_ref()?;
            let delta = Vec3::new(
                obj.topology.param_number("dx").unwrap_or(0.0),
                obj.topology.param_number("dy").unwrap_or(0.0),
                obj.topology.param_number("dz").unwrap_or(0.0),
            );
            source.aabb.center() + delta
        }
        BridgeBetweenAAndB | FlushWithPlatformTop => {
            return place_bridge(ctx, obj, extent, orientation, relation);
        }
    };
    Ok((center, extent))
}

/// Yaw for mirrored and copied bodies comes from the source, not from
/// facing rules; handled here after the position so both stay paired.
fn derived_yaw_override(
    ctx: &PlacementContext<'_>,
    obj: &ObjectSpec,
) -> Result<Option<f64>, ResolveError> {
    match obj.topology.relation {
        Some(Relation::SymmetryAlong) => {
            let source_name = obj.topology.refs.first().ok_or_else(|| {
                ResolveError::InvalidTopology {
                    object: obj.name.clone(),
                    message: "symmetry_along needs a source reference".into(),
                }
            })?;
            let source = ctx.body(&obj.name, source_name)?;
            let axis = match obj.topology.param_text("axis") {
                Some("y") => MirrorAxis::Y,
                _ => MirrorAxis::X,
            };
            Ok(Some(mirror_yaw(axis, source.orientation.deg_z)))
        }
        Some(Relation::CopyGroup) => {
            let source_name = obj.topology.refs.first().ok_or_else(|| {
                ResolveError::InvalidTopology {
                    object: obj.name.clone(),
                    message: "copy_group needs a source reference".into(),
                }
            })?;
            Ok(Some(ctx.body(&obj.name, source_name)?.orientation.deg_z))
        }
        _ => Ok(None),
    }
}

fn plan_center(obj: &ObjectSpec, extent: BoxExtent) -> Vec3 {
    match convention_for(obj) {
        AabbConvention::Center => obj.pose.position,
        AabbConvention::BoundaryFloor => Vec3::new(
            obj.pose.position.x,
            obj.pose.position.y,
            obj.pose.position.z + extent.sz() / 2.0,
        ),
    }
}

fn fluid_density(ctx: &PlacementContext<'_>, obj: &ObjectSpec) -> Result<f64, ResolveError> {
    let Some(reference) = obj.topology.refs.first() else {
        return Ok(DEFAULT_FLUID_DENSITY);
    };
    // The reference may be the fluid or its container.
    let fluid_name = if ctx.scene.free_surfaces.contains_key(reference) {
        reference.clone()
    } else if let Some(fluid) = ctx.scene.surface_of_container.get(reference) {
        fluid.clone()
    } else {
        return Ok(DEFAULT_FLUID_DENSITY);
    };
    Ok(ctx
        .plan
        .object(&fluid_name)
        .and_then(|o| o.construction.density)
        .unwrap_or(DEFAULT_FLUID_DENSITY))
}

/// Planar centre over the fluid context and the requested vertical
/// anchor against its surface.
fn place_at_surface(
    ctx: &PlacementContext<'_>,
    obj: &ObjectSpec,
    world_size: Vec3,
    anchor: SurfaceAnchor,
    offset: (f64, f64),
) -> Result<Vec3, ResolveError> {
    let reference = obj.topology.refs.first().ok_or_else(|| ResolveError::InvalidTopology {
        object: obj.name.clone(),
        message: "surface templates need a fluid or container reference".into(),
    })?;
    let surface = ctx.surface_for(&obj.name, reference)?;
    let context_aabb = ctx.body(&obj.name, reference)?.aabb;
    Ok(Vec3::new(
        context_aabb.center_x() + offset.0,
        context_aabb.center_y() + offset.1,
        center_z_at_surface(surface, world_size.z, anchor),
    ))
}

fn place_bridge(
    ctx: &PlacementContext<'_>,
    obj: &ObjectSpec,
    extent: BoxExtent,
    orientation: Orientation,
    relation: Relation,
) -> Result<(Vec3, BoxExtent), ResolveError> {
    if !orientation.is_cardinal_yaw() {
        return Err(ResolveError::IncompatibleFacing {
            object: obj.name.clone(),
            mode: format!("yaw {}", orientation.deg_z),
            relation: relation.name(),
        });
    }
    let world_size = world_extents(extent, orientation);
    let refs = &obj.topology.refs;
    if relation == Relation::FlushWithPlatformTop && refs.len() == 1 {
        // Single platform: centred on it, top faces flush.
        let platform = ctx.body(&obj.name, &refs[0])?.aabb;
        let center = Vec3::new(
            platform.center_x(),
            platform.center_y(),
            platform.top_z() - world_size.z / 2.0,
        );
        return Ok((center, extent));
    }
    if refs.len() != 2 {
        return Err(ResolveError::InvalidTopology {
            object: obj.name.clone(),
            message: format!("{} needs two references", relation.name()),
        });
    }
    let a = ctx.body(&obj.name, &refs[0])?.aabb;
    let b = ctx.body(&obj.name, &refs[1])?.aabb;
    let solution = resolve_bridge(&a, &b, world_size.z)?;

    let mut final_extent = extent;
    if relation == Relation::BridgeBetweenAAndB {
        // Span length equals the gap unless the plan sizes it explicitly.
        let span = obj.topology.param_number("span").unwrap_or(solution.gap);
        // Cardinal yaw maps the world span axis onto a local axis.
        let swapped = crate::geometry::sin_deg(orientation.deg_z).abs() == 1.0;
        let local_axis_is_x = match solution.span_axis {
            crate::geometry::Axis3::X => !swapped,
            _ => swapped,
        };
        let size = final_extent.size();
        final_extent = if local_axis_is_x {
            BoxExtent::new(span, size.y, size.z)
        } else {
            BoxExtent::new(size.x, span, size.z)
        }
        .map_err(|_| ResolveError::UnresolvedExtent { object: obj.name.clone() })?;
    }
    Ok((solution.center, final_extent))
}

/// Deterministic free-spot search: scan a grid row-major from the
/// resolved scene's min corner and take the first footprint that
/// overlaps nothing resolved so far.
fn place_anywhere(
    ctx: &PlacementContext<'_>,
    footprint: Vec3,
    plane_z: f64,
    fallback: Vec3,
) -> Vec3 {
    let existing: Vec<WorldAabb> = ctx
        .resolved_order
        .iter()
        .filter_map(|name| ctx.scene.bodies.get(name).map(|b| b.aabb))
        .collect();
    let z = plane_z + footprint.z / 2.0;
    let Some(bounds) = existing
        .iter()
        .copied()
        .reduce(|a, b| a.union(&b))
    else {
        return Vec3::new(fallback.x, fallback.y, z);
    };
    let free = |min_x: f64, min_y: f64| {
        let candidate = WorldAabb::new(
            Vec3::new(min_x, min_y, plane_z),
            Vec3::new(min_x + footprint.x, min_y + footprint.y, plane_z + footprint.z),
        );
        // 3D test: resting on a support plane only touches it, which is
        // not an overlap.
        !existing.iter().any(|a| a.overlap_depths(&candidate).is_some())
    };
    let size = bounds.size();
    let nx = ((size.x + footprint.x) / ANYWHERE_GRID_PITCH).ceil() as usize + 2;
    let ny = ((size.y + footprint.y) / ANYWHERE_GRID_PITCH).ceil() as usize + 2;
    for iy in 0..=ny {
        let min_y = bounds.min.y + iy as f64 * ANYWHERE_GRID_PITCH;
        for ix in 0..=nx {
            let min_x = bounds.min.x + ix as f64 * ANYWHERE_GRID_PITCH;
            if free(min_x, min_y) {
                return Vec3::new(min_x + footprint.x / 2.0, min_y + footprint.y / 2.0, z);
            }
        }
    }
    // The grid extends past the occupied bounds, so this is unreachable;
    // keep a sane fallback anyway.
    Vec3::new(bounds.max.x + footprint.x / 2.0 + 1.0, bounds.min.y + footprint.y / 2.0, z)
}

/// Containment checks that need the final bounds.
fn post_checks(
    ctx: &PlacementContext<'_>,
    obj: &ObjectSpec,
    aabb: &WorldAabb,
) -> Result<(), ResolveError> {
    use Relation::*;
    let Some(relation) = obj.topology.relation else {
        return Ok(());
    };
    let reference = match obj.topology.refs.first() {
        Some(name) => Some(ctx.body(&obj.name, name)?.aabb),
        None => None,
    };
    match relation {
        PlaceOn | PlacedOnTop | SpawnedOnTop | CenteredOnRef => {
            let reference = reference.expect("on-top templates have a reference");
            if !reference.contains_footprint(aabb, CONTAINMENT_TOL) {
                return Err(ResolveError::DoesNotFit {
                    object: obj.name.clone(),
                    message: "footprint exceeds the supporting face".into(),
                });
            }
        }
        PlaceIn => {
            let reference = reference.expect("place_in has a reference");
            let strictly_inside = aabb.min.x > reference.min.x
                && aabb.max.x < reference.max.x
                && aabb.min.y > reference.min.y
                && aabb.max.y < reference.max.y
                && aabb.max.z < reference.max.z;
            if !strictly_inside {
                return Err(ResolveError::DoesNotFit {
                    object: obj.name.clone(),
                    message: "bounds are not strictly inside the container interior".into(),
                });
            }
        }
        FloatsAtSurface | Submerged | BottomFlushWaterSurface | CenterAtWaterSurface
        | TopFlushWaterSurface => {
            if let Some(name) = obj.topology.refs.first() {
                if let Some(container_name) = resolve_container_name(ctx, name) {
                    let container = ctx.body(&obj.name, &container_name)?.aabb;
                    if aabb.bottom_z() < container.bottom_z() - CONTAINMENT_TOL {
                        return Err(ResolveError::DoesNotFit {
                            object: obj.name.clone(),
                            message: "body would sit below the container floor".into(),
                        });
                    }
                }
            }
        }
        _ => {}
    }
    Ok(())
}

fn resolve_container_name(ctx: &PlacementContext<'_>, reference: &str) -> Option<String> {
    if ctx.scene.container_of.contains_key(reference) {
        return ctx.scene.container_of.get(reference).cloned();
    }
    if ctx.scene.surface_of_container.contains_key(reference) {
        return Some(reference.to_string());
    }
    None
}

/// Registers free surfaces, container aliases, and groups.
fn register_effects(
    plan: &SimulationPlan,
    obj: &ObjectSpec,
    body: &ResolvedBody,
    scene: &mut ResolvedScene,
) -> Result<(), ResolveError> {
    let _ = plan;
    if obj.is_fluid() {
        // Every fluid volume exposes its top as a free surface; the fill
        // and free-surface templates make that height exact.
        scene.free_surfaces.insert(obj.name.clone(), body.aabb.top_z());
        if let Some(container) = obj.topology.refs.first() {
            if matches!(
                obj.topology.relation,
                Some(Relation::FillsContainerToTop)
                    | Some(Relation::FillsContainerLowerHalf)
                    | Some(Relation::FreeSurfaceAt)
                    | Some(Relation::PlaceIn)
            ) {
                scene.container_of.insert(obj.name.clone(), container.clone());
                scene
                    .surface_of_container
                    .insert(container.clone(), obj.name.clone());
            }
        }
    }
    if obj.topology.relation == Some(Relation::ContainsFluid) {
        if let Some(fluid) = obj.topology.refs.first() {
            scene.container_of.insert(fluid.clone(), obj.name.clone());
            scene
                .surface_of_container
                .insert(obj.name.clone(), fluid.clone());
        }
    }
    if obj.topology.relation == Some(Relation::Group) {
        if let Some(members) = obj.topology.params.get("members").and_then(|p| p.as_list()) {
            let positions: Vec<(String, Vec3)> = members
                .iter()
                .filter_map(|name| {
                    scene
                        .bodies
                        .get(name)
                        .map(|b| (name.clone(), b.aabb.center()))
                })
                .collect();
            if positions.len() != members.len() {
                return Err(ResolveError::InvalidTopology {
                    object: obj.name.clone(),
                    message: "group members must resolve before the anchor".into(),
                });
            }
            scene
                .groups
                .insert(obj.name.clone(), freeze_group(body.aabb.center(), &positions));
        }
    }
    Ok(())
}

/// Expected pose of one object given an already-resolved scene. The
/// validator replays every object through this to confirm the stored
/// scene is exactly what the placement rules dictate.
pub(crate) fn replay_object(
    plan: &SimulationPlan,
    catalog: &AssetCatalog,
    options: &ResolveOptions,
    scene: &ResolvedScene,
    resolved_order: &[String],
    obj: &ObjectSpec,
) -> Result<ResolvedBody, ResolveError> {
    let ctx = PlacementContext { plan, catalog, options, scene, resolved_order };
    place_object(&ctx, obj)
}
