//! Parse a plan document, inspect schema issues, and round-trip it.
//!
//! ```sh
//! cargo run -p scenec --example parse_plan
//! ```

use scenec::plan::{
    apply_defaults, parse_plan, plan_to_json, serialize_plan, validate_schema, IssueSeverity,
};

fn main() {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/tests/golden/office.plan");
    let text = std::fs::read_to_string(path).expect("plan file");
    let parsed = parse_plan(&text).expect("plan parses");

    println!("plan type     : {}", parsed.plan.plan_type.name());
    println!("objects       : {}", parsed.plan.objects.len());
    println!("steps         : {}", parsed.plan.implementation_steps.len());
    for warning in &parsed.warnings {
        println!("warning       : {}: {}", warning.loc, warning.message);
    }

    // Schema validation partitions findings by severity; defaultable
    // ones carry the exact value compilation would insert.
    let issues = validate_schema(&parsed.plan);
    if issues.is_empty() {
        println!("schema        : fully specified, no issues");
    }
    for issue in &issues {
        let severity = match issue.severity {
            IssueSeverity::Fatal => "fatal",
            IssueSeverity::NeedsClarification => "clarify",
            IssueSeverity::Defaultable => "default",
        };
        println!("schema {severity:>7}: {}", issue.message);
    }
    let plan = apply_defaults(&parsed.plan, &issues);

    // A plan with the time step removed gets the conservative default.
    let degraded = text.replace("  time_step: 0.001\n", "");
    let degraded_plan = parse_plan(&degraded).unwrap().plan;
    let degraded_issues = validate_schema(&degraded_plan);
    for issue in &degraded_issues {
        if issue.default.is_some() {
            println!("degraded plan : {}", issue.message);
        }
    }
    let filled = apply_defaults(&degraded_plan, &degraded_issues);
    println!(
        "default step  : {:?} s",
        filled.simulation_parameters.time_step.unwrap()
    );

    // Round trip: the canonical form is a fixed point.
    let rendered = serialize_plan(&plan);
    let reparsed = parse_plan(&rendered).unwrap().plan;
    assert_eq!(reparsed, plan);
    println!("round trip    : canonical form reparses equal");

    // The same data is available as JSON with identical field names.
    let json = plan_to_json(&plan);
    println!("json bytes    : {}", json.len());
}
