//! The structured simulation-plan format: domain types, parser, schema
//! validation, and canonical serialization.
//!
//! A plan document is an indentation-structured text format: top-level
//! sections are bare keys at column zero, nested fields are `key: value`
//! lines indented by two spaces per level, list entries start with `- `,
//! small vectors are written inline as `{x: .., y: .., z: ..}` or
//! `[a, b, c]`, and multi-line text uses `key: |` block scalars. The same
//! data is also exchangeable as JSON with identical field names (see
//! [`plan_to_json`] / [`plan_from_json`]).

mod grammar;
mod lower;
mod schema;
mod serialize;

pub use schema::{
    apply_defaults, is_compilable, validate_schema, IssueSeverity, ProposedDefault, SchemaIssue,
};
pub use serialize::serialize_plan;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::Vec3;
use crate::relation::{CameraTemplate, Relation};

/// 1-based position in a plan document.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Loc {
    pub line: usize,
    pub col: usize,
}

impl std::fmt::Display for Loc {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "line {}, col {}", self.line, self.col)
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum ParseErrorKind {
    #[error("{0}")]
    Syntax(String),
    #[error("unknown {field} value `{value}` (expected one of: {allowed})")]
    UnknownEnum {
        field: &'static str,
        value: String,
        allowed: &'static str,
    },
    #[error("duplicate object name `{0}`")]
    DuplicateObject(String),
    #[error("`{subject}` references unknown object `{target}`")]
    DanglingReference { subject: String, target: String },
}

#[derive(Debug, Error, PartialEq)]
#[error("{loc}: {kind}")]
pub struct ParseError {
    pub loc: Loc,
    pub kind: ParseErrorKind,
}

impl ParseError {
    pub(crate) fn syntax(loc: Loc, message: impl Into<String>) -> Self {
        ParseError { loc, kind: ParseErrorKind::Syntax(message.into()) }
    }
}

/// Non-fatal parser finding, e.g. an unknown key that was skipped.
#[derive(Debug, Clone, PartialEq)]
pub struct Warning {
    pub loc: Loc,
    pub message: String,
}

/// Parser output: the plan plus any warnings (unknown keys are reported,
/// never silently dropped).
#[derive(Debug, Clone, PartialEq)]
pub struct ParsedPlan {
    pub plan: SimulationPlan,
    pub warnings: Vec<Warning>,
}

/// Parse a plan document.
pub fn parse_plan(text: &str) -> Result<ParsedPlan, ParseError> {
    let tree = grammar::parse_document(text)?;
    lower::lower_document(tree)
}

/// Canonical JSON interchange dump.
pub fn plan_to_json(plan: &SimulationPlan) -> String {
    let mut out = serde_json::to_string_pretty(plan).expect("plan serializes to JSON");
    out.push('\n');
    out
}

/// Read a plan back from the JSON interchange form.
pub fn plan_from_json(text: &str) -> Result<SimulationPlan, serde_json::Error> {
    serde_json::from_str(text)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PlanType {
    Scene,
    Mbs,
    MbsInScene,
    FsiInScene,
}

impl PlanType {
    pub const ALLOWED: &'static str = "scene, mbs, mbs_in_scene, fsi_in_scene";

    pub fn from_name(s: &str) -> Option<PlanType> {
        match s {
            "scene" => Some(PlanType::Scene),
            "mbs" => Some(PlanType::Mbs),
            "mbs_in_scene" => Some(PlanType::MbsInScene),
            "fsi_in_scene" => Some(PlanType::FsiInScene),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            PlanType::Scene => "scene",
            PlanType::Mbs => "mbs",
            PlanType::MbsInScene => "mbs_in_scene",
            PlanType::FsiInScene => "fsi_in_scene",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RecordingMode {
    VsgOnly,
    SensorCams,
}

impl RecordingMode {
    pub const ALLOWED: &'static str = "vsg_only, sensor_cams";

    pub fn from_name(s: &str) -> Option<RecordingMode> {
        match s {
            "vsg_only" => Some(RecordingMode::VsgOnly),
            "sensor_cams" => Some(RecordingMode::SensorCams),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            RecordingMode::VsgOnly => "vsg_only",
            RecordingMode::SensorCams => "sensor_cams",
        }
    }
}

/// Gravity as either a magnitude along the negative gravity axis or an
/// explicit vector.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Gravity {
    Scalar(f64),
    Vector(Vec3),
}

impl Gravity {
    /// Effective gravity vector in the default `-z` frame. A scalar is a
    /// magnitude applied along the negative gravity axis.
    pub fn effective_vector(&self) -> Vec3 {
        match self {
            Gravity::Scalar(g) => Vec3::new(0.0, 0.0, -g.abs()),
            Gravity::Vector(v) => *v,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct SimulationParameters {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub time_step: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub simulation_duration: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gravity: Option<Gravity>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConstructionKind {
    Procedural,
    Asset,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AssetType {
    Mesh,
    Urdf,
    VehicleJson,
    WrapperVehicle,
}

impl AssetType {
    pub const ALLOWED: &'static str = "mesh, urdf, vehicle_json, wrapper_vehicle";

    pub fn from_name(s: &str) -> Option<AssetType> {
        match s {
            "mesh" => Some(AssetType::Mesh),
            "urdf" => Some(AssetType::Urdf),
            "vehicle_json" => Some(AssetType::VehicleJson),
            "wrapper_vehicle" => Some(AssetType::WrapperVehicle),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            AssetType::Mesh => "mesh",
            AssetType::Urdf => "urdf",
            AssetType::VehicleJson => "vehicle_json",
            AssetType::WrapperVehicle => "wrapper_vehicle",
        }
    }
}

/// Geometric primitive for procedural bodies. Open-ended: unknown names
/// are carried through rather than rejected.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Primitive {
    Box,
    Sphere,
    Cylinder,
    FluidDomain,
    GeneratedBoundary,
    Other(String),
}

impl Primitive {
    pub fn from_name(s: &str) -> Primitive {
        match s {
            "box" => Primitive::Box,
            "sphere" => Primitive::Sphere,
            "cylinder" => Primitive::Cylinder,
            "fluid_domain" => Primitive::FluidDomain,
            "generated_boundary" => Primitive::GeneratedBoundary,
            other => Primitive::Other(other.to_string()),
        }
    }

    pub fn name(&self) -> &str {
        match self {
            Primitive::Box => "box",
            Primitive::Sphere => "sphere",
            Primitive::Cylinder => "cylinder",
            Primitive::FluidDomain => "fluid_domain",
            Primitive::GeneratedBoundary => "generated_boundary",
            Primitive::Other(s) => s,
        }
    }
}

impl Serialize for Primitive {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(self.name())
    }
}

impl<'de> Deserialize<'de> for Primitive {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        Ok(Primitive::from_name(&s))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Construction {
    pub kind: ConstructionKind,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub primitive: Option<Primitive>,
    /// Full extents (width/depth/height), never half-extents.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub size: Option<Vec3>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub density: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub catalog: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub asset_type: Option<AssetType>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub filename: Option<String>,
    /// Factory expression for wrapper assets; stored verbatim.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub factory: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TopologyRole {
    Base,
    Child,
}

/// A relation parameter value.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ParamValue {
    Flag(bool),
    Number(f64),
    List(Vec<String>),
    Text(String),
}

impl ParamValue {
    pub fn as_number(&self) -> Option<f64> {
        match self {
            ParamValue::Number(n) => Some(*n),
            _ => None,
        }
    }

    pub fn as_text(&self) -> Option<&str> {
        match self {
            ParamValue::Text(s) => Some(s),
            _ => None,
        }
    }

    pub fn as_flag(&self) -> Option<bool> {
        match self {
            ParamValue::Flag(b) => Some(*b),
            _ => None,
        }
    }

    pub fn as_list(&self) -> Option<&[String]> {
        match self {
            ParamValue::List(v) => Some(v),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Topology {
    pub role: TopologyRole,
    /// Reference objects; one for most relations, two for bridges.
    #[serde(rename = "ref", default, skip_serializing_if = "Vec::is_empty")]
    pub refs: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub relation: Option<Relation>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub params: BTreeMap<String, ParamValue>,
}

impl Topology {
    pub fn base() -> Topology {
        Topology {
            role: TopologyRole::Base,
            refs: Vec::new(),
            relation: None,
            params: BTreeMap::new(),
        }
    }

    pub fn param_number(&self, key: &str) -> Option<f64> {
        self.params.get(key).and_then(ParamValue::as_number)
    }

    pub fn param_text(&self, key: &str) -> Option<&str> {
        self.params.get(key).and_then(ParamValue::as_text)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Pose {
    pub position: Vec3,
    pub rotation_deg: Vec3,
}

impl Default for Pose {
    fn default() -> Self {
        Pose { position: Vec3::ZERO, rotation_deg: Vec3::ZERO }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FsiRegistration {
    Boundary,
    Fluid,
    FsiSolid,
    NonFsi,
    None,
}

impl FsiRegistration {
    pub const ALLOWED: &'static str = "boundary, fluid, fsi_solid, non_fsi, none";

    pub fn from_name(s: &str) -> Option<FsiRegistration> {
        match s {
            "boundary" => Some(FsiRegistration::Boundary),
            "fluid" => Some(FsiRegistration::Fluid),
            "fsi_solid" => Some(FsiRegistration::FsiSolid),
            "non_fsi" => Some(FsiRegistration::NonFsi),
            "none" => Some(FsiRegistration::None),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            FsiRegistration::Boundary => "boundary",
            FsiRegistration::Fluid => "fluid",
            FsiRegistration::FsiSolid => "fsi_solid",
            FsiRegistration::NonFsi => "non_fsi",
            FsiRegistration::None => "none",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ObjectSpec {
    pub name: String,
    pub construction: Construction,
    pub topology: Topology,
    #[serde(default)]
    pub pose: Pose,
    #[serde(default)]
    pub fixed: bool,
    pub is_dynamic: bool,
    pub fsi_registration: FsiRegistration,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub description: Option<String>,
}

impl ObjectSpec {
    /// Whether the body is a fluid volume rather than a solid.
    pub fn is_fluid(&self) -> bool {
        self.fsi_registration == FsiRegistration::Fluid
            || self.construction.primitive == Some(Primitive::FluidDomain)
    }

    /// Whether the stored position marks the container floor.
    pub fn is_boundary_container(&self) -> bool {
        self.construction.primitive == Some(Primitive::GeneratedBoundary)
    }
}

/// A camera in an implementation step: either fully explicit or a
/// template resolved against the scene bounds.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CameraSpec {
    Explicit {
        #[serde(with = "vec3_as_array")]
        position: Vec3,
        #[serde(with = "vec3_as_array")]
        target: Vec3,
        #[serde(with = "vec3_as_array")]
        up: Vec3,
    },
    Template {
        template: CameraTemplate,
        #[serde(skip_serializing_if = "Option::is_none")]
        container: Option<String>,
    },
}

/// Cameras are written as `[x, y, z]` triples in both text and JSON.
mod vec3_as_array {
    use crate::geometry::Vec3;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(v: &Vec3, s: S) -> Result<S::Ok, S::Error> {
        [v.x, v.y, v.z].serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec3, D::Error> {
        let a = <[f64; 3]>::deserialize(d)?;
        Ok(Vec3::new(a[0], a[1], a[2]))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StepSpec {
    pub description: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub objects: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub cameras: Vec<CameraSpec>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub motion_expectations: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulationPlan {
    pub plan_type: PlanType,
    #[serde(default)]
    pub simulation_parameters: SimulationParameters,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub objectives: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub recording_mode: Option<RecordingMode>,
    pub objects: Vec<ObjectSpec>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub implementation_steps: Vec<StepSpec>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub clarifications_needed: Vec<String>,
}

impl SimulationPlan {
    pub fn object(&self, name: &str) -> Option<&ObjectSpec> {
        self.objects.iter().find(|o| o.name == name)
    }

    /// Union of all steps' motion expectations, deduplicated, plan order.
    pub fn motion_expectations(&self) -> Vec<&str> {
        let mut seen = Vec::new();
        for step in &self.implementation_steps {
            for name in &step.motion_expectations {
                if !seen.contains(&name.as_str()) {
                    seen.push(name.as_str());
                }
            }
        }
        seen
    }
}
