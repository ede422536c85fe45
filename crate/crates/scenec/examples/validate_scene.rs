//! Scene self-checks: a clean pass, then deliberate damage.
//!
//! ```sh
//! cargo run -p scenec --example validate_scene
//! ```

use scenec::catalog::load_catalog;
use scenec::geometry::{world_aabb, AabbConvention, Vec3};
use scenec::plan::{apply_defaults, parse_plan, validate_schema};
use scenec::resolver::resolve_scene;
use scenec::validator::check_scene;

fn main() {
    let root = env!("CARGO_MANIFEST_DIR");
    let plan_text =
        std::fs::read_to_string(format!("{root}/tests/golden/fsi_tank.plan")).unwrap();
    let catalog_text =
        std::fs::read_to_string(format!("{root}/tests/golden/catalog.json")).unwrap();
    let plan = parse_plan(&plan_text).unwrap().plan;
    let plan = apply_defaults(&plan, &validate_schema(&plan));
    let catalog = load_catalog(&catalog_text).unwrap();
    let scene = resolve_scene(&plan, &catalog).unwrap();

    let clean = check_scene(&scene, &plan, &catalog);
    println!("pristine scene: {} violation(s)", clean.len());

    // Lift the floating plate off its draft; the Archimedes check and
    // the placement replay both notice.
    let mut damaged = scene.clone();
    {
        let plate = damaged.bodies.get_mut("plate").unwrap();
        plate.position.z += 0.06;
        plate.aabb = world_aabb(
            plate.extent,
            plate.position,
            plate.orientation,
            AabbConvention::Center,
        );
    }
    report("lifted plate", &check_scene(&damaged, &plan, &catalog));

    // Shift the span deck sideways until it leaves the gap between its
    // flanking platforms.
    let mut shifted = scene.clone();
    {
        let deck = shifted.bodies.get_mut("span_deck").unwrap();
        deck.position.x += 4.5;
        deck.aabb = world_aabb(
            deck.extent,
            deck.position,
            deck.orientation,
            AabbConvention::Center,
        );
    }
    report("shifted deck", &check_scene(&shifted, &plan, &catalog));

    // Corrupt the registered free surface.
    let mut dry = scene.clone();
    dry.free_surfaces.insert("water".into(), 1.4);
    report("wrong surface", &check_scene(&dry, &plan, &catalog));

    // Point a camera's up vector sideways.
    let mut tilted = scene;
    tilted.cameras.push(scenec::resolver::ResolvedCamera {
        position: Vec3::new(0.0, -5.0, 1.0),
        target: Vec3::new(0.0, 0.0, 0.75),
        up: Vec3::new(0.0, 1.0, 0.0),
    });
    report("tilted camera", &check_scene(&tilted, &plan, &catalog));
}

fn report(label: &str, violations: &[scenec::validator::Violation]) {
    println!("\n{label}:");
    for violation in violations {
        let quantitative = match (violation.measured, violation.limit) {
            (Some(measured), Some(limit)) => {
                format!(" (measured {measured:.4} {u}, limit {limit:.1e} {u})", u = violation.units)
            }
            _ => String::new(),
        };
        println!(
            "  {:?} [{}]{}: {}",
            violation.check_id,
            violation.subjects.join(", "),
            quantitative,
            violation.message
        );
    }
}
