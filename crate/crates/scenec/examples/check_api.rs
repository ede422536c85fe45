//! Static API validation of a generated script against an index.
//!
//! ```sh
//! cargo run -p scenec --example check_api
//! ```

use scenec::api::{bundled_index_json, extract_call_sites, load_api_index, validate_calls};
use scenec::catalog::load_catalog;
use scenec::emit::emit_skeleton;
use scenec::plan::{apply_defaults, parse_plan, validate_schema};
use scenec::resolver::resolve_scene;

fn main() {
    let root = env!("CARGO_MANIFEST_DIR");
    let plan_text =
        std::fs::read_to_string(format!("{root}/tests/golden/fsi_tank.plan")).unwrap();
    let catalog =
        load_catalog(&std::fs::read_to_string(format!("{root}/tests/golden/catalog.json")).unwrap())
            .unwrap();
    let plan = parse_plan(&plan_text).unwrap().plan;
    let plan = apply_defaults(&plan, &validate_schema(&plan));
    let scene = resolve_scene(&plan, &catalog).unwrap();

    // The emitter targets the generic `simapi` surface described by the
    // bundled index, so its own output is always clean.
    let skeleton = emit_skeleton(&scene, &plan, &catalog);
    let index = load_api_index(bundled_index_json()).unwrap();
    let extraction = extract_call_sites(&skeleton).unwrap();
    let report = validate_calls(&extraction, &index);
    println!(
        "emitted script: {} call sites, {} findings against {}",
        report.sites_checked,
        report.findings.len(),
        report.index_version
    );

    // Simulate API drift: a script written for a newer surface.
    let drifted = skeleton
        .replace("simapi.core.set_rotation_deg", "simapi.core.set_euler_deg")
        .replace("density=1000.0", "rho=1000.0");
    let report = validate_calls(&extract_call_sites(&drifted).unwrap(), &index);
    println!("\ndrifted script: {} finding(s)", report.findings.len());
    for finding in report.findings.iter().take(4) {
        println!(
            "  line {:>2}: {:?}: {}",
            finding.site.line, finding.finding, finding.message
        );
    }
    if report.findings.len() > 4 {
        println!("  ... and {} more", report.findings.len() - 4);
    }

    // Index diffing pinpoints what changed between versions.
    let pruned = bundled_index_json().replace(
        "    {\"kind\": \"function\", \"path\": \"simapi.vis.enable_vsg\", \"min_args\": 1, \"max_args\": 1},\n",
        "",
    );
    let older = load_api_index(&pruned).unwrap();
    println!("\nindex diff    : {:?}", index.diff_symbols(&older));
}
