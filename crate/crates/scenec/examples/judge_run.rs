//! Judge executed runs from trajectories and logs.
//!
//! ```sh
//! cargo run -p scenec --example judge_run
//! ```

use scenec::catalog::load_catalog;
use scenec::judge::{judge_run, parse_log, parse_trajectory};
use scenec::plan::{apply_defaults, parse_plan, validate_schema};
use scenec::resolver::{resolve_scene, ResolvedScene};

fn main() {
    let root = env!("CARGO_MANIFEST_DIR");
    let plan_text =
        std::fs::read_to_string(format!("{root}/tests/golden/office.plan")).unwrap();
    let catalog =
        load_catalog(&std::fs::read_to_string(format!("{root}/tests/golden/catalog.json")).unwrap())
            .unwrap();
    let plan = parse_plan(&plan_text).unwrap().plan;
    let plan = apply_defaults(&plan, &validate_schema(&plan));
    let scene = resolve_scene(&plan, &catalog).unwrap();

    let clean_log = parse_log("INFO | start\nINFO | stepping\nSIM_DONE\n");

    // A healthy run: the robot walks 1.5 m, everything else stays put.
    let good = parse_trajectory(&synth(&scene, "robot", 1.5, None)).unwrap();
    let report = judge_run(&plan, &scene, &good, &clean_log).unwrap();
    println!("healthy run   : verdict {:?}", report.verdict);

    // The robot barely moves: motion expectation shortfall.
    let stuck = parse_trajectory(&synth(&scene, "robot", 0.004, None)).unwrap();
    let report = judge_run(&plan, &scene, &stuck, &clean_log).unwrap();
    print_report("stuck robot", &report);

    // The crate falls through the floor: tunnelling.
    let tunnelled = parse_trajectory(&synth(&scene, "robot", 1.5, Some("crate_box"))).unwrap();
    let report = judge_run(&plan, &scene, &tunnelled, &clean_log).unwrap();
    print_report("tunnelling", &report);

    // Solver errors in the log trump everything else.
    let dirty_log = parse_log("INFO | start\nERROR | constraint solver diverged at t=0.41\n");
    let report = judge_run(&plan, &scene, &tunnelled, &dirty_log).unwrap();
    print_report("dirty log", &report);
}

/// One row per object per sample; `mover` displaces linearly, `sinker`
/// (when set) drops far below the base plane mid-run.
fn synth(scene: &ResolvedScene, mover: &str, distance: f64, sinker: Option<&str>) -> String {
    let mut rows = String::from("t,name,px,py,pz\n");
    for step in 0..6 {
        let t = step as f64 * 0.4;
        for (name, body) in &scene.bodies {
            let mut p = body.position;
            if name == mover {
                p.x += distance * step as f64 / 5.0;
            }
            if sinker == Some(name.as_str()) && step >= 3 {
                p.z = -15.0;
            }
            rows.push_str(&format!("{t},{name},{},{},{}\n", p.x, p.y, p.z));
        }
    }
    rows
}

fn print_report(label: &str, report: &scenec::judge::ErrorReport) {
    println!("\n{label}:");
    println!("  verdict {:?}", report.verdict);
    for failure in &report.failures {
        println!("  [{:?}] {}: {}", failure.category, failure.subject, failure.evidence);
    }
}
