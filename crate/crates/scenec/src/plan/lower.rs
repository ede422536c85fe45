//! Lower the generic grammar tree into a typed [`SimulationPlan`].
//!
//! This layer owns scalar interpretation (numbers, booleans, inline
//! vectors and lists), enum validation against the closed vocabularies,
//! and the structural reference checks: unique object names and no
//! dangling references anywhere in topology or steps.

use std::collections::BTreeMap;

use super::grammar::{Node, Spanned};
use super::{
    CameraSpec, Construction, ConstructionKind, FsiRegistration, Gravity, Loc, ObjectSpec,
    ParamValue, ParseError, ParseErrorKind, ParsedPlan, PlanType, Pose, Primitive, RecordingMode,
    SimulationParameters, SimulationPlan, StepSpec, Topology, TopologyRole, Warning,
};
use crate::geometry::Vec3;
use crate::plan::AssetType;
use crate::relation::{CameraTemplate, Relation};

pub(crate) fn lower_document(doc: Node) -> Result<ParsedPlan, ParseError> {
    let Node::Map(sections) = doc else {
        unreachable!("grammar guarantees a top-level map");
    };
    let mut lowerer = Lowerer { warnings: Vec::new() };

    let mut plan_type: Option<PlanType> = None;
    let mut params = SimulationParameters::default();
    let mut objectives = Vec::new();
    let mut recording_mode = None;
    let mut objects: Vec<ObjectSpec> = Vec::new();
    let mut object_locs: Vec<Loc> = Vec::new();
    let mut steps = Vec::new();
    let mut step_locs: Vec<Loc> = Vec::new();
    let mut clarifications = Vec::new();
    let mut doc_loc = Loc { line: 1, col: 1 };

    for (key, value) in &sections {
        doc_loc = key.loc;
        match key.value.as_str() {
            "plan_type" => {
                let s = expect_scalar(value, "plan_type")?;
                plan_type = Some(PlanType::from_name(&s.value).ok_or(ParseError {
                    loc: s.loc,
                    kind: ParseErrorKind::UnknownEnum {
                        field: "plan_type",
                        value: s.value.clone(),
                        allowed: PlanType::ALLOWED,
                    },
                })?);
            }
            "simulation_parameters" => params = lowerer.lower_sim_params(value)?,
            "objectives" => objectives = lowerer.lower_text_list(value, "objectives")?,
            "recording_mode" => {
                let s = expect_scalar(value, "recording_mode")?;
                recording_mode = Some(RecordingMode::from_name(&s.value).ok_or(ParseError {
                    loc: s.loc,
                    kind: ParseErrorKind::UnknownEnum {
                        field: "recording_mode",
                        value: s.value.clone(),
                        allowed: RecordingMode::ALLOWED,
                    },
                })?);
            }
            "objects" => {
                for item in expect_list(value, "objects")? {
                    object_locs.push(item.loc());
                    objects.push(lowerer.lower_object(item)?);
                }
            }
            "implementation_steps" => {
                for item in expect_list(value, "implementation_steps")? {
                    step_locs.push(item.loc());
                    steps.push(lowerer.lower_step(item)?);
                }
            }
            "clarifications_needed" => {
                clarifications = lowerer.lower_text_list(value, "clarifications_needed")?
            }
            other => lowerer.warn(key.loc, format!("unknown section `{other}` ignored")),
        }
    }

    let Some(plan_type) = plan_type else {
        return Err(ParseError::syntax(doc_loc, "missing required section `plan_type`"));
    };

    // Unique object names.
    for (i, obj) in objects.iter().enumerate() {
        if objects[..i].iter().any(|o| o.name == obj.name) {
            return Err(ParseError {
                loc: object_locs[i],
                kind: ParseErrorKind::DuplicateObject(obj.name.clone()),
            });
        }
    }

    // Every referenced name must exist.
    let known = |name: &str| objects.iter().any(|o| o.name == name);
    let dangling = |subject: &str, target: &str, loc: Loc| ParseError {
        loc,
        kind: ParseErrorKind::DanglingReference {
            subject: subject.to_string(),
            target: target.to_string(),
        },
    };
    for (obj, loc) in objects.iter().zip(&object_locs) {
        for target in &obj.topology.refs {
            if !known(target) {
                return Err(dangling(&obj.name, target, *loc));
            }
        }
        for key in ["facing_ref", "container"] {
            if let Some(target) = obj.topology.param_text(key) {
                if !known(target) {
                    return Err(dangling(&obj.name, target, *loc));
                }
            }
        }
        if let Some(ParamValue::List(members)) = obj.topology.params.get("members") {
            for target in members {
                if !known(target) {
                    return Err(dangling(&obj.name, target, *loc));
                }
            }
        }
    }
    for (i, (step, loc)) in steps.iter().zip(&step_locs).enumerate() {
        let subject = format!("step {}", i + 1);
        for target in step.objects.iter().chain(&step.motion_expectations) {
            if !known(target) {
                return Err(dangling(&subject, target, *loc));
            }
        }
        for cam in &step.cameras {
            if let CameraSpec::Template { container: Some(target), .. } = cam {
                if !known(target) {
                    return Err(dangling(&subject, target, *loc));
                }
            }
        }
    }

    Ok(ParsedPlan {
        plan: SimulationPlan {
            plan_type,
            simulation_parameters: params,
            objectives,
            recording_mode,
            objects,
            implementation_steps: steps,
            clarifications_needed: clarifications,
        },
        warnings: lowerer.warnings,
    })
}

struct Lowerer {
    warnings: Vec<Warning>,
}

impl Lowerer {
    fn warn(&mut self, loc: Loc, message: String) {
        self.warnings.push(Warning { loc, message });
    }

    fn lower_sim_params(&mut self, node: &Node) -> Result<SimulationParameters, ParseError> {
        let mut out = SimulationParameters::default();
        for (key, value) in expect_map(node, "simulation_parameters")? {
            match key.value.as_str() {
                "time_step" => out.time_step = Some(parse_f64(expect_scalar(value, "time_step")?)?),
                "simulation_duration" => {
                    out.simulation_duration =
                        Some(parse_f64(expect_scalar(value, "simulation_duration")?)?)
                }
                "gravity" => {
                    let s = expect_scalar(value, "gravity")?;
                    out.gravity = Some(if s.value.starts_with('[') {
                        Gravity::Vector(parse_inline_triple(s)?)
                    } else {
                        Gravity::Scalar(parse_f64(s)?)
                    });
                }
                other => self.warn(key.loc, format!("unknown key `{other}` ignored")),
            }
        }
        Ok(out)
    }

    fn lower_text_list(&mut self, node: &Node, field: &str) -> Result<Vec<String>, ParseError> {
        match node {
            Node::Scalar(s) if s.value.starts_with('[') => parse_inline_str_list(s),
            Node::List(items) => items
                .iter()
                .map(|item| match item {
                    Node::Scalar(s) => Ok(s.value.clone()),
                    other => Err(ParseError::syntax(
                        other.loc(),
                        format!("{field} entries must be plain text"),
                    )),
                })
                .collect(),
            other => Err(ParseError::syntax(
                other.loc(),
                format!("{field} must be a list"),
            )),
        }
    }

    fn lower_object(&mut self, node: &Node) -> Result<ObjectSpec, ParseError> {
        let entries = expect_map(node, "object entry")?;
        let mut name: Option<Spanned<String>> = None;
        let mut construction: Option<Construction> = None;
        let mut topology: Option<Topology> = None;
        let mut pose = Pose::default();
        let mut fixed: Option<bool> = None;
        let mut is_dynamic: Option<bool> = None;
        let mut fsi = FsiRegistration::None;
        let mut description = None;

        for (key, value) in entries {
            match key.value.as_str() {
                "name" => {
                    let s = expect_scalar(value, "name")?;
                    name = Some(Spanned::new(parse_ident(s)?, s.loc));
                }
                "construction" => construction = Some(self.lower_construction(value)?),
                "topology" => topology = Some(self.lower_topology(value)?),
                "pose" => pose = self.lower_pose(value)?,
                "fixed" => fixed = Some(parse_bool(expect_scalar(value, "fixed")?)?),
                "is_dynamic" => is_dynamic = Some(parse_bool(expect_scalar(value, "is_dynamic")?)?),
                "fsi_registration" => {
                    let s = expect_scalar(value, "fsi_registration")?;
                    fsi = FsiRegistration::from_name(&s.value).ok_or(ParseError {
                        loc: s.loc,
                        kind: ParseErrorKind::UnknownEnum {
                            field: "fsi_registration",
                            value: s.value.clone(),
                            allowed: FsiRegistration::ALLOWED,
                        },
                    })?;
                }
                "description" => {
                    description = Some(expect_scalar(value, "description")?.value.clone())
                }
                other => self.warn(key.loc, format!("unknown key `{other}` ignored")),
            }
        }

        let name = name
            .ok_or_else(|| ParseError::syntax(node.loc(), "object entry is missing `name`"))?;
        let construction = construction.ok_or_else(|| {
            ParseError::syntax(node.loc(), format!("object `{}` is missing `construction`", name.value))
        })?;
        let topology = topology.ok_or_else(|| {
            ParseError::syntax(node.loc(), format!("object `{}` is missing `topology`", name.value))
        })?;
        let fixed = fixed.unwrap_or(false);
        let is_dynamic = is_dynamic.unwrap_or(!fixed);

        Ok(ObjectSpec {
            name: name.value,
            construction,
            topology,
            pose,
            fixed,
            is_dynamic,
            fsi_registration: fsi,
            description,
        })
    }

    fn lower_construction(&mut self, node: &Node) -> Result<Construction, ParseError> {
        let mut kind: Option<ConstructionKind> = None;
        let mut out = Construction {
            kind: ConstructionKind::Procedural,
            primitive: None,
            size: None,
            density: None,
            catalog: None,
            asset_type: None,
            filename: None,
            factory: None,
        };
        for (key, value) in expect_map(node, "construction")? {
            match key.value.as_str() {
                "kind" => {
                    let s = expect_scalar(value, "kind")?;
                    kind = Some(match s.value.as_str() {
                        "procedural" => ConstructionKind::Procedural,
                        "asset" => ConstructionKind::Asset,
                        other => {
                            return Err(ParseError {
                                loc: s.loc,
                                kind: ParseErrorKind::UnknownEnum {
                                    field: "construction.kind",
                                    value: other.to_string(),
                                    allowed: "procedural, asset",
                                },
                            })
                        }
                    });
                }
                "primitive" => {
                    out.primitive =
                        Some(Primitive::from_name(&expect_scalar(value, "primitive")?.value))
                }
                "size" => out.size = Some(parse_inline_vec3(expect_scalar(value, "size")?)?),
                "density" => out.density = Some(parse_f64(expect_scalar(value, "density")?)?),
                "catalog" => out.catalog = Some(expect_scalar(value, "catalog")?.value.clone()),
                "asset_type" => {
                    let s = expect_scalar(value, "asset_type")?;
                    out.asset_type = Some(AssetType::from_name(&s.value).ok_or(ParseError {
                        loc: s.loc,
                        kind: ParseErrorKind::UnknownEnum {
                            field: "asset_type",
                            value: s.value.clone(),
                            allowed: AssetType::ALLOWED,
                        },
                    })?);
                }
                "filename" => out.filename = Some(expect_scalar(value, "filename")?.value.clone()),
                "factory" => out.factory = Some(expect_scalar(value, "factory")?.value.clone()),
                other => self.warn(key.loc, format!("unknown key `{other}` ignored")),
            }
        }
        out.kind = kind
            .ok_or_else(|| ParseError::syntax(node.loc(), "construction is missing `kind`"))?;
        Ok(out)
    }

    fn lower_topology(&mut self, node: &Node) -> Result<Topology, ParseError> {
        let mut role: Option<TopologyRole> = None;
        let mut refs = Vec::new();
        let mut relation = None;
        let mut params = BTreeMap::new();
        for (key, value) in expect_map(node, "topology")? {
            match key.value.as_str() {
                "role" => {
                    let s = expect_scalar(value, "role")?;
                    role = Some(match s.value.as_str() {
                        "base" => TopologyRole::Base,
                        "child" => TopologyRole::Child,
                        other => {
                            return Err(ParseError {
                                loc: s.loc,
                                kind: ParseErrorKind::UnknownEnum {
                                    field: "topology.role",
                                    value: other.to_string(),
                                    allowed: "base, child",
                                },
                            })
                        }
                    });
                }
                "ref" => {
                    let s = expect_scalar(value, "ref")?;
                    refs = if s.value.starts_with('[') {
                        parse_inline_str_list(s)?
                    } else {
                        vec![s.value.clone()]
                    };
                }
                "relation" => {
                    let s = expect_scalar(value, "relation")?;
                    relation = Some(Relation::from_name(&s.value).ok_or(ParseError {
                        loc: s.loc,
                        kind: ParseErrorKind::UnknownEnum {
                            field: "relation",
                            value: s.value.clone(),
                            allowed: "a relation template from the placement vocabulary",
                        },
                    })?);
                }
                "params" => {
                    for (pkey, pvalue) in expect_map(value, "params")? {
                        let s = expect_scalar(pvalue, "param value")?;
                        params.insert(pkey.value.clone(), parse_param_value(s)?);
                    }
                }
                other => self.warn(key.loc, format!("unknown key `{other}` ignored")),
            }
        }
        Ok(Topology {
            role: role
                .ok_or_else(|| ParseError::syntax(node.loc(), "topology is missing `role`"))?,
            refs,
            relation,
            params,
        })
    }

    fn lower_pose(&mut self, node: &Node) -> Result<Pose, ParseError> {
        let mut pose = Pose::default();
        for (key, value) in expect_map(node, "pose")? {
            match key.value.as_str() {
                "position" => pose.position = parse_inline_vec3(expect_scalar(value, "position")?)?,
                "rotation_deg" => {
                    pose.rotation_deg = parse_inline_vec3(expect_scalar(value, "rotation_deg")?)?
                }
                other => self.warn(key.loc, format!("unknown key `{other}` ignored")),
            }
        }
        Ok(pose)
    }

    fn lower_step(&mut self, node: &Node) -> Result<StepSpec, ParseError> {
        let mut description = None;
        let mut objects = Vec::new();
        let mut cameras = Vec::new();
        let mut motion = Vec::new();
        for (key, value) in expect_map(node, "step entry")? {
            match key.value.as_str() {
                "description" => {
                    description = Some(expect_scalar(value, "description")?.value.clone())
                }
                "objects" => objects = self.lower_ident_list(value, "objects")?,
                "cameras" => {
                    for item in expect_list(value, "cameras")? {
                        cameras.push(self.lower_camera(item)?);
                    }
                }
                "motion_expectations" => {
                    motion = self.lower_ident_list(value, "motion_expectations")?
                }
                other => self.warn(key.loc, format!("unknown key `{other}` ignored")),
            }
        }
        Ok(StepSpec {
            description: description.ok_or_else(|| {
                ParseError::syntax(node.loc(), "step entry is missing `description`")
            })?,
            objects,
            cameras,
            motion_expectations: motion,
        })
    }

    fn lower_ident_list(&mut self, node: &Node, field: &str) -> Result<Vec<String>, ParseError> {
        let names = self.lower_text_list(node, field)?;
        if let Node::Scalar(s) = node {
            for name in &names {
                parse_ident(&Spanned::new(name.clone(), s.loc))?;
            }
        }
        Ok(names)
    }

    fn lower_camera(&mut self, node: &Node) -> Result<CameraSpec, ParseError> {
        let entries = expect_map(node, "camera entry")?;
        let mut position = None;
        let mut target = None;
        let mut up = None;
        let mut template = None;
        let mut container = None;
        for (key, value) in entries {
            match key.value.as_str() {
                "position" => position = Some(parse_inline_triple(expect_scalar(value, "position")?)?),
                "target" => target = Some(parse_inline_triple(expect_scalar(value, "target")?)?),
                "up" => up = Some(parse_inline_triple(expect_scalar(value, "up")?)?),
                "template" => {
                    let s = expect_scalar(value, "template")?;
                    template = Some(CameraTemplate::from_name(&s.value).ok_or(ParseError {
                        loc: s.loc,
                        kind: ParseErrorKind::UnknownEnum {
                            field: "camera template",
                            value: s.value.clone(),
                            allowed: "side_*, top_down, perspective, inside_*_wall",
                        },
                    })?);
                }
                "container" => {
                    let s = expect_scalar(value, "container")?;
                    container = Some(parse_ident(s)?);
                }
                other => self.warn(key.loc, format!("unknown key `{other}` ignored")),
            }
        }
        match (template, position, target, up) {
            (Some(template), None, None, None) => Ok(CameraSpec::Template { template, container }),
            (None, Some(position), Some(target), Some(up)) => {
                if container.is_some() {
                    return Err(ParseError::syntax(
                        node.loc(),
                        "`container` only applies to template cameras",
                    ));
                }
                Ok(CameraSpec::Explicit { position, target, up })
            }
            _ => Err(ParseError::syntax(
                node.loc(),
                "a camera needs either `template` or all of `position`, `target`, `up`",
            )),
        }
    }
}

fn expect_scalar<'n>(node: &'n Node, field: &str) -> Result<&'n Spanned<String>, ParseError> {
    match node {
        Node::Scalar(s) => Ok(s),
        other => Err(ParseError::syntax(
            other.loc(),
            format!("`{field}` must be a single value"),
        )),
    }
}

fn expect_map<'n>(
    node: &'n Node,
    field: &str,
) -> Result<&'n [(Spanned<String>, Node)], ParseError> {
    match node {
        Node::Map(entries) => Ok(entries),
        other => Err(ParseError::syntax(
            other.loc(),
            format!("`{field}` must be a map of `key: value` entries"),
        )),
    }
}

fn expect_list<'n>(node: &'n Node, field: &str) -> Result<&'n [Node], ParseError> {
    match node {
        Node::List(items) => Ok(items),
        Node::Scalar(s) if s.value == "[]" => Ok(&[]),
        other => Err(ParseError::syntax(
            other.loc(),
            format!("`{field}` must be a list"),
        )),
    }
}

fn parse_f64(s: &Spanned<String>) -> Result<f64, ParseError> {
    let value: f64 = s
        .value
        .parse()
        .map_err(|_| ParseError::syntax(s.loc, format!("expected a number, got `{}`", s.value)))?;
    if !value.is_finite() {
        return Err(ParseError::syntax(s.loc, "numbers must be finite"));
    }
    Ok(value)
}

fn parse_bool(s: &Spanned<String>) -> Result<bool, ParseError> {
    match s.value.as_str() {
        "true" => Ok(true),
        "false" => Ok(false),
        other => Err(ParseError::syntax(
            s.loc,
            format!("expected `true` or `false`, got `{other}`"),
        )),
    }
}

fn is_ident(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

fn parse_ident(s: &Spanned<String>) -> Result<String, ParseError> {
    if is_ident(&s.value) {
        Ok(s.value.clone())
    } else {
        Err(ParseError::syntax(
            s.loc,
            format!("`{}` is not a valid identifier", s.value),
        ))
    }
}

fn parse_param_value(s: &Spanned<String>) -> Result<ParamValue, ParseError> {
    if s.value.starts_with('[') {
        return Ok(ParamValue::List(parse_inline_str_list(s)?));
    }
    match s.value.as_str() {
        "true" => return Ok(ParamValue::Flag(true)),
        "false" => return Ok(ParamValue::Flag(false)),
        _ => {}
    }
    if let Ok(n) = s.value.parse::<f64>() {
        if n.is_finite() {
            return Ok(ParamValue::Number(n));
        }
    }
    Ok(ParamValue::Text(s.value.clone()))
}

/// Inline `{x: .., y: .., z: ..}` map. Exactly three named components;
/// a two-component map is an error, never padded.
fn parse_inline_vec3(s: &Spanned<String>) -> Result<Vec3, ParseError> {
    let inner = s
        .value
        .strip_prefix('{')
        .and_then(|t| t.strip_suffix('}'))
        .ok_or_else(|| {
            ParseError::syntax(s.loc, format!("expected `{{x: .., y: .., z: ..}}`, got `{}`", s.value))
        })?;
    let mut x = None;
    let mut y = None;
    let mut z = None;
    for part in split_top_level(inner) {
        let part = part.trim();
        if part.is_empty() {
            return Err(ParseError::syntax(s.loc, "empty component in vector"));
        }
        let (key, rest) = part
            .split_once(':')
            .ok_or_else(|| ParseError::syntax(s.loc, format!("expected `axis: number` in `{part}`")))?;
        let value = parse_f64(&Spanned::new(rest.trim().to_string(), s.loc))?;
        let slot = match key.trim() {
            "x" => &mut x,
            "y" => &mut y,
            "z" => &mut z,
            other => {
                return Err(ParseError::syntax(
                    s.loc,
                    format!("unknown vector component `{other}`"),
                ))
            }
        };
        if slot.replace(value).is_some() {
            return Err(ParseError::syntax(s.loc, format!("duplicate component `{}`", key.trim())));
        }
    }
    match (x, y, z) {
        (Some(x), Some(y), Some(z)) => Ok(Vec3::new(x, y, z)),
        _ => Err(ParseError::syntax(
            s.loc,
            "a 3-vector requires all of x, y, z",
        )),
    }
}

/// Inline `[a, b, c]` list of plain items.
fn parse_inline_str_list(s: &Spanned<String>) -> Result<Vec<String>, ParseError> {
    let inner = s
        .value
        .strip_prefix('[')
        .and_then(|t| t.strip_suffix(']'))
        .ok_or_else(|| ParseError::syntax(s.loc, format!("expected `[..]`, got `{}`", s.value)))?;
    if inner.trim().is_empty() {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    for part in split_top_level(inner) {
        let part = part.trim();
        if part.is_empty() {
            return Err(ParseError::syntax(s.loc, "empty item in inline list"));
        }
        out.push(part.to_string());
    }
    Ok(out)
}

/// Inline numeric triple `[x, y, z]`; exactly three components.
fn parse_inline_triple(s: &Spanned<String>) -> Result<Vec3, ParseError> {
    let items = parse_inline_str_list(s)?;
    if items.len() != 3 {
        return Err(ParseError::syntax(
            s.loc,
            format!("expected exactly 3 components, got {}", items.len()),
        ));
    }
    let mut out = [0.0; 3];
    for (slot, item) in out.iter_mut().zip(&items) {
        *slot = parse_f64(&Spanned::new(item.clone(), s.loc))?;
    }
    Ok(Vec3::new(out[0], out[1], out[2]))
}

fn split_top_level(s: &str) -> Vec<&str> {
    let mut parts = Vec::new();
    let mut depth = 0usize;
    let mut start = 0usize;
    for (i, c) in s.char_indices() {
        match c {
            '[' | '{' => depth += 1,
            ']' | '}' => depth = depth.saturating_sub(1),
            ',' if depth == 0 => {
                parts.push(&s[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    parts.push(&s[start..]);
    parts
}
