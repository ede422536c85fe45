//! Canonical plan writer. `parse_plan(serialize_plan(p))` returns a plan
//! equal to `p`; section and key order are fixed so output is byte-stable.

use super::{
    CameraSpec, Construction, Gravity, ObjectSpec, ParamValue, SimulationPlan, StepSpec, Topology,
};
use crate::geometry::Vec3;

/// Render the canonical text form of a plan.
pub fn serialize_plan(plan: &SimulationPlan) -> String {
    let mut w = String::new();

    w.push_str("plan_type\n");
    w.push_str(&format!("  {}\n", plan.plan_type.name()));

    let p = &plan.simulation_parameters;
    if p.time_step.is_some() || p.simulation_duration.is_some() || p.gravity.is_some() {
        w.push_str("\nsimulation_parameters\n");
        if let Some(ts) = p.time_step {
            w.push_str(&format!("  time_step: {}\n", num(ts)));
        }
        if let Some(d) = p.simulation_duration {
            w.push_str(&format!("  simulation_duration: {}\n", num(d)));
        }
        match p.gravity {
            Some(Gravity::Scalar(g)) => w.push_str(&format!("  gravity: {}\n", num(g))),
            Some(Gravity::Vector(v)) => w.push_str(&format!("  gravity: {}\n", triple(v))),
            None => {}
        }
    }

    if !plan.objectives.is_empty() {
        w.push_str("\nobjectives\n");
        for line in &plan.objectives {
            w.push_str(&format!("  - {line}\n"));
        }
    }

    if let Some(mode) = plan.recording_mode {
        w.push_str("\nrecording_mode\n");
        w.push_str(&format!("  {}\n", mode.name()));
    }

    w.push_str("\nobjects\n");
    if plan.objects.is_empty() {
        w.push_str("  []\n");
    }
    for obj in &plan.objects {
        write_object(&mut w, obj);
    }

    if !plan.implementation_steps.is_empty() {
        w.push_str("\nimplementation_steps\n");
        for step in &plan.implementation_steps {
            write_step(&mut w, step);
        }
    }

    w.push_str("\nclarifications_needed\n");
    if plan.clarifications_needed.is_empty() {
        w.push_str("  []\n");
    } else {
        for line in &plan.clarifications_needed {
            w.push_str(&format!("  - {line}\n"));
        }
    }

    w
}

fn write_object(w: &mut String, obj: &ObjectSpec) {
    w.push_str(&format!("  - name: {}\n", obj.name));
    write_construction(w, &obj.construction);
    write_topology(w, &obj.topology);
    w.push_str("    pose:\n");
    w.push_str(&format!("      position: {}\n", vec3_map(obj.pose.position)));
    w.push_str(&format!("      rotation_deg: {}\n", vec3_map(obj.pose.rotation_deg)));
    w.push_str(&format!("    fixed: {}\n", obj.fixed));
    w.push_str(&format!("    is_dynamic: {}\n", obj.is_dynamic));
    w.push_str(&format!("    fsi_registration: {}\n", obj.fsi_registration.name()));
    if let Some(desc) = &obj.description {
        write_text(w, "    ", "description", desc);
    }
}

fn write_construction(w: &mut String, c: &Construction) {
    w.push_str("    construction:\n");
    w.push_str(&format!("      kind: {}\n", match c.kind {
        super::ConstructionKind::Procedural => "procedural",
        super::ConstructionKind::Asset => "asset",
    }));
    if let Some(primitive) = &c.primitive {
        w.push_str(&format!("      primitive: {}\n", primitive.name()));
    }
    if let Some(size) = c.size {
        w.push_str(&format!("      size: {}\n", vec3_map(size)));
    }
    if let Some(density) = c.density {
        w.push_str(&format!("      density: {}\n", num(density)));
    }
    if let Some(catalog) = &c.catalog {
        w.push_str(&format!("      catalog: {catalog}\n"));
    }
    if let Some(asset_type) = c.asset_type {
        w.push_str(&format!("      asset_type: {}\n", asset_type.name()));
    }
    if let Some(filename) = &c.filename {
        w.push_str(&format!("      filename: {filename}\n"));
    }
    if let Some(factory) = &c.factory {
        w.push_str(&format!("      factory: {factory}\n"));
    }
}

fn write_topology(w: &mut String, t: &Topology) {
    w.push_str("    topology:\n");
    w.push_str(&format!("      role: {}\n", match t.role {
        super::TopologyRole::Base => "base",
        super::TopologyRole::Child => "child",
    }));
    match t.refs.len() {
        0 => {}
        1 => w.push_str(&format!("      ref: {}\n", t.refs[0])),
        _ => w.push_str(&format!("      ref: [{}]\n", t.refs.join(", "))),
    }
    if let Some(rel) = &t.relation {
        w.push_str(&format!("      relation: {}\n", rel.name()));
    }
    if !t.params.is_empty() {
        w.push_str("      params:\n");
        for (key, value) in &t.params {
            w.push_str(&format!("        {key}: {}\n", param(value)));
        }
    }
}

fn write_step(w: &mut String, step: &StepSpec) {
    write_text(w, "  - ", "description", &step.description);
    w.push_str(&format!("    objects: [{}]\n", step.objects.join(", ")));
    if !step.cameras.is_empty() {
        w.push_str("    cameras:\n");
        for cam in &step.cameras {
            match cam {
                CameraSpec::Explicit { position, target, up } => {
                    w.push_str(&format!("      - position: {}\n", triple(*position)));
                    w.push_str(&format!("        target: {}\n", triple(*target)));
                    w.push_str(&format!("        up: {}\n", triple(*up)));
                }
                CameraSpec::Template { template, container } => {
                    w.push_str(&format!("      - template: {}\n", template.name()));
                    if let Some(container) = container {
                        w.push_str(&format!("        container: {container}\n"));
                    }
                }
            }
        }
    }
    w.push_str(&format!(
        "    motion_expectations: [{}]\n",
        step.motion_expectations.join(", ")
    ));
}

/// Single-line text inline; multi-line text as a block scalar. Both call
/// sites put the key at column 4, so block content sits at column 6.
fn write_text(w: &mut String, prefix: &str, key: &str, text: &str) {
    if text.contains('\n') {
        w.push_str(&format!("{prefix}{key}: |\n"));
        for line in text.lines() {
            w.push_str(&format!("      {line}\n"));
        }
    } else {
        w.push_str(&format!("{prefix}{key}: {text}\n"));
    }
}

fn num(v: f64) -> String {
    format!("{v}")
}

fn vec3_map(v: Vec3) -> String {
    format!("{{x: {}, y: {}, z: {}}}", num(v.x), num(v.y), num(v.z))
}

fn triple(v: Vec3) -> String {
    format!("[{}, {}, {}]", num(v.x), num(v.y), num(v.z))
}

fn param(value: &ParamValue) -> String {
    match value {
        ParamValue::Number(n) => num(*n),
        ParamValue::Flag(b) => b.to_string(),
        ParamValue::Text(s) => s.clone(),
        ParamValue::List(items) => format!("[{}]", items.join(", ")),
    }
}
