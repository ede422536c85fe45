//! Schema validation over a parsed plan.
//!
//! Issues are data, not failures, and come in three severities:
//!
//! - `Fatal` — the plan contradicts itself and cannot compile;
//! - `NeedsClarification` — something is missing that we refuse to guess
//!   (sizes, unknown assets, open questions recorded in the plan);
//! - `Defaultable` — missing values with a safe conservative default;
//!   each issue carries the exact default that compilation will apply.

use serde::Serialize;

use super::{
    CameraSpec, ConstructionKind, Gravity, ObjectSpec, RecordingMode, SimulationPlan,
    TopologyRole,
};
use crate::constants::{
    DEFAULT_BODY_DENSITY, DEFAULT_DURATION, DEFAULT_GRAVITY, DEFAULT_TIME_STEP,
};
use crate::geometry::Frame;
use crate::relation::Relation;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum IssueSeverity {
    Fatal,
    NeedsClarification,
    Defaultable,
}

/// The concrete default a defaultable issue proposes.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ProposedDefault {
    TimeStep(f64),
    SimulationDuration(f64),
    /// Magnitude applied along the negative gravity axis.
    Gravity(f64),
    RecordingMode(RecordingMode),
    Density { object: String, value: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SchemaIssue {
    pub severity: IssueSeverity,
    /// Object or step the issue concerns, when there is one.
    pub subject: Option<String>,
    pub message: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub default: Option<ProposedDefault>,
}

impl SchemaIssue {
    fn fatal(subject: Option<&str>, message: impl Into<String>) -> Self {
        SchemaIssue {
            severity: IssueSeverity::Fatal,
            subject: subject.map(str::to_string),
            message: message.into(),
            default: None,
        }
    }

    fn clarify(subject: Option<&str>, message: impl Into<String>) -> Self {
        SchemaIssue {
            severity: IssueSeverity::NeedsClarification,
            subject: subject.map(str::to_string),
            message: message.into(),
            default: None,
        }
    }

    fn defaultable(
        subject: Option<&str>,
        message: impl Into<String>,
        default: ProposedDefault,
    ) -> Self {
        SchemaIssue {
            severity: IssueSeverity::Defaultable,
            subject: subject.map(str::to_string),
            message: message.into(),
            default: Some(default),
        }
    }
}

/// Run the full schema check suite.
pub fn validate_schema(plan: &SimulationPlan) -> Vec<SchemaIssue> {
    let mut issues = Vec::new();

    if plan.objects.is_empty() {
        issues.push(SchemaIssue::fatal(None, "plan declares no objects"));
    }

    let p = &plan.simulation_parameters;
    match p.time_step {
        Some(ts) if ts <= 0.0 => {
            issues.push(SchemaIssue::fatal(None, format!("time_step must be > 0, got {ts}")))
        }
        Some(_) => {}
        None => issues.push(SchemaIssue::defaultable(
            None,
            "time_step is unspecified",
            ProposedDefault::TimeStep(DEFAULT_TIME_STEP),
        )),
    }
    match p.simulation_duration {
        Some(d) if d <= 0.0 => issues.push(SchemaIssue::fatal(
            None,
            format!("simulation_duration must be > 0, got {d}"),
        )),
        Some(_) => {}
        None => issues.push(SchemaIssue::defaultable(
            None,
            "simulation_duration is unspecified",
            ProposedDefault::SimulationDuration(DEFAULT_DURATION),
        )),
    }
    match p.gravity {
        Some(Gravity::Vector(v)) => {
            if v.norm() == 0.0 {
                issues.push(SchemaIssue::fatal(None, "gravity vector must be nonzero"));
            } else if Frame::from_gravity_vector(v).is_none() {
                issues.push(SchemaIssue::fatal(
                    None,
                    "gravity must point along the negative z or negative y axis",
                ));
            }
        }
        Some(Gravity::Scalar(g)) => {
            if g == 0.0 {
                issues.push(SchemaIssue::fatal(None, "gravity magnitude must be nonzero"));
            }
        }
        None => issues.push(SchemaIssue::defaultable(
            None,
            "gravity is unspecified",
            ProposedDefault::Gravity(DEFAULT_GRAVITY),
        )),
    }
    if plan.recording_mode.is_none() {
        issues.push(SchemaIssue::defaultable(
            None,
            "recording_mode is unspecified",
            ProposedDefault::RecordingMode(RecordingMode::VsgOnly),
        ));
    }

    for obj in &plan.objects {
        check_object(obj, &mut issues);
    }

    for (i, step) in plan.implementation_steps.iter().enumerate() {
        let subject = format!("step {}", i + 1);
        for cam in &step.cameras {
            if let CameraSpec::Explicit { up, .. } = cam {
                if up.norm() == 0.0 {
                    issues.push(SchemaIssue::fatal(Some(&subject), "camera up vector is zero"));
                }
            }
        }
    }

    for note in &plan.clarifications_needed {
        issues.push(SchemaIssue::clarify(None, format!("plan requests clarification: {note}")));
    }

    issues
}

fn check_object(obj: &ObjectSpec, issues: &mut Vec<SchemaIssue>) {
    let name = obj.name.as_str();

    if obj.fixed && obj.is_dynamic {
        issues.push(SchemaIssue::fatal(
            Some(name),
            "fixed and is_dynamic are both true; a body cannot be both",
        ));
    }

    if obj.pose.rotation_deg.y != 0.0 {
        issues.push(SchemaIssue::fatal(
            Some(name),
            "rotation about the y axis is not part of the orientation algebra (yaw about z, tilt about x)",
        ));
    }

    match obj.topology.role {
        TopologyRole::Child => {
            let Some(relation) = obj.topology.relation else {
                issues.push(SchemaIssue::fatal(
                    Some(name),
                    "child objects must declare a relation",
                ));
                return;
            };
            let (min_refs, max_refs) = relation.ref_count();
            let n = obj.topology.refs.len();
            if n < min_refs || n > max_refs {
                issues.push(SchemaIssue::fatal(
                    Some(name),
                    format!(
                        "relation {} takes {} reference(s), got {n}",
                        relation.name(),
                        if min_refs == max_refs {
                            min_refs.to_string()
                        } else {
                            format!("{min_refs}..{max_refs}")
                        }
                    ),
                ));
            }
            check_relation_params(obj, relation, issues);
        }
        TopologyRole::Base => {
            if !obj.topology.refs.is_empty() {
                issues.push(SchemaIssue::fatal(
                    Some(name),
                    "base objects must not declare a reference",
                ));
            }
            if let Some(relation) = obj.topology.relation {
                // A base row may carry a relation only if it needs no
                // reference (group anchors, free-surface markers).
                if relation.ref_count().0 > 0 {
                    issues.push(SchemaIssue::fatal(
                        Some(name),
                        format!("relation {} requires a reference, but the row is base", relation.name()),
                    ));
                } else {
                    check_relation_params(obj, relation, issues);
                }
            }
        }
    }

    // Fill and container-bound surface templates derive their extents
    // from the container, so a missing size is fine there.
    let derives_extent = matches!(
        obj.topology.relation,
        Some(Relation::FillsContainerToTop) | Some(Relation::FillsContainerLowerHalf)
    ) || (obj.topology.relation == Some(Relation::FreeSurfaceAt)
        && !obj.topology.refs.is_empty());

    match obj.construction.kind {
        ConstructionKind::Procedural => {
            match obj.construction.size {
                Some(size) => {
                    if size.x <= 0.0 || size.y <= 0.0 || size.z <= 0.0 {
                        issues.push(SchemaIssue::fatal(
                            Some(name),
                            format!(
                                "size components are full extents and must be strictly positive, got ({}, {}, {})",
                                size.x, size.y, size.z
                            ),
                        ));
                    }
                }
                None if derives_extent => {}
                None => issues.push(SchemaIssue::clarify(
                    Some(name),
                    "procedural body has no size; refusing to guess an extent",
                )),
            }
            if obj.construction.density.is_none() && obj.is_dynamic {
                issues.push(SchemaIssue::defaultable(
                    Some(name),
                    "dynamic procedural body has no density",
                    ProposedDefault::Density {
                        object: obj.name.clone(),
                        value: DEFAULT_BODY_DENSITY,
                    },
                ));
            }
        }
        ConstructionKind::Asset => {
            if obj.construction.catalog.is_none() || obj.construction.filename.is_none() {
                issues.push(SchemaIssue::fatal(
                    Some(name),
                    "asset constructions require both catalog and filename",
                ));
            }
        }
    }
}

fn check_relation_params(obj: &ObjectSpec, relation: Relation, issues: &mut Vec<SchemaIssue>) {
    let name = obj.name.as_str();
    let t = &obj.topology;
    match relation {
        Relation::FreeSurfaceAt if t.param_number("height").is_none() => {
            issues.push(SchemaIssue::fatal(
                Some(name),
                "free_surface_at requires a numeric `height` parameter",
            ));
        }
        Relation::Height if t.param_number("height").is_none() => {
            issues.push(SchemaIssue::fatal(
                Some(name),
                "height requires a numeric `height` parameter",
            ));
        }
        Relation::SymmetryAlong => {
            match t.param_text("axis") {
                Some("x") | Some("y") => {}
                Some(other) => issues.push(SchemaIssue::fatal(
                    Some(name),
                    format!("symmetry_along axis must be `x` or `y`, got `{other}`"),
                )),
                None => issues.push(SchemaIssue::fatal(
                    Some(name),
                    "symmetry_along requires an `axis` parameter",
                )),
            }
        }
        Relation::CopyGroup => {
            let has_delta = ["dx", "dy", "dz"].iter().any(|k| t.param_number(k).is_some());
            if !has_delta {
                issues.push(SchemaIssue::fatal(
                    Some(name),
                    "copy_group requires a translation (dx/dy/dz parameters)",
                ));
            }
        }
        Relation::Group if t.params.get("members").and_then(|p| p.as_list()).is_none() => {
            issues.push(SchemaIssue::fatal(
                Some(name),
                "group requires a `members` list parameter",
            ));
        }
        _ => {}
    }
    if let Some(mode) = t.param_text("facing") {
        const ALLOWED: &[&str] = &[
            "front", "back", "left", "right", "to", "opposite_to", "same_as",
            "by_relative_side", "random",
        ];
        if !ALLOWED.contains(&mode) {
            issues.push(SchemaIssue::fatal(
                Some(name),
                format!("unknown facing mode `{mode}`"),
            ));
        }
    }
}

/// Apply exactly the defaults proposed by `issues` to a copy of `plan`.
pub fn apply_defaults(plan: &SimulationPlan, issues: &[SchemaIssue]) -> SimulationPlan {
    let mut out = plan.clone();
    for issue in issues {
        match &issue.default {
            Some(ProposedDefault::TimeStep(v)) => {
                out.simulation_parameters.time_step = Some(*v);
            }
            Some(ProposedDefault::SimulationDuration(v)) => {
                out.simulation_parameters.simulation_duration = Some(*v);
            }
            Some(ProposedDefault::Gravity(v)) => {
                out.simulation_parameters.gravity = Some(Gravity::Scalar(*v));
            }
            Some(ProposedDefault::RecordingMode(mode)) => {
                out.recording_mode = Some(*mode);
            }
            Some(ProposedDefault::Density { object, value }) => {
                if let Some(obj) = out.objects.iter_mut().find(|o| &o.name == object) {
                    obj.construction.density = Some(*value);
                }
            }
            None => {}
        }
    }
    out
}

/// True when no fatal or needs-clarification issue is present.
pub fn is_compilable(issues: &[SchemaIssue]) -> bool {
    issues
        .iter()
        .all(|i| i.severity == IssueSeverity::Defaultable)
}
