//! Compile the office plan: symbolic relations to concrete poses.
//!
//! ```sh
//! cargo run -p scenec --example resolve_office
//! ```

use scenec::catalog::load_catalog;
use scenec::plan::{apply_defaults, parse_plan, validate_schema};
use scenec::resolver::resolve_scene;

fn main() {
    let root = env!("CARGO_MANIFEST_DIR");
    let plan_text =
        std::fs::read_to_string(format!("{root}/tests/golden/office.plan")).unwrap();
    let catalog_text =
        std::fs::read_to_string(format!("{root}/tests/golden/catalog.json")).unwrap();

    let plan = parse_plan(&plan_text).unwrap().plan;
    let plan = apply_defaults(&plan, &validate_schema(&plan));
    let catalog = load_catalog(&catalog_text).unwrap();

    let scene = resolve_scene(&plan, &catalog).expect("office resolves");

    println!("{:<12} {:>8} {:>8} {:>8}  {:>7}  relation", "object", "x", "y", "z", "yaw");
    for obj in &plan.objects {
        let body = scene.body(&obj.name).unwrap();
        let relation = obj
            .topology
            .relation
            .map(|r| r.name())
            .unwrap_or_else(|| "(absolute)".into());
        println!(
            "{:<12} {:>8.3} {:>8.3} {:>8.3}  {:>7.2}  {relation}",
            obj.name,
            body.position.x,
            body.position.y,
            body.position.z,
            body.orientation.deg_z,
        );
    }

    println!();
    println!(
        "scene bounds  : ({:.2}, {:.2}, {:.2}) .. ({:.2}, {:.2}, {:.2})",
        scene.scene_bounds.min.x,
        scene.scene_bounds.min.y,
        scene.scene_bounds.min.z,
        scene.scene_bounds.max.x,
        scene.scene_bounds.max.y,
        scene.scene_bounds.max.z,
    );
    for (i, camera) in scene.cameras.iter().enumerate() {
        println!(
            "camera {i}      : at ({:.2}, {:.2}, {:.2}) looking at ({:.2}, {:.2}, {:.2})",
            camera.position.x,
            camera.position.y,
            camera.position.z,
            camera.target.x,
            camera.target.y,
            camera.target.z,
        );
    }

    // A couple of the derived relations, spelled out.
    let table = scene.body("table").unwrap().aabb;
    let laptop = scene.body("laptop").unwrap().aabb;
    println!();
    println!(
        "laptop gap    : {:.3} m above the table top (spawn clearance)",
        laptop.bottom_z() - table.top_z()
    );
    let chair_a = scene.body("chair_a").unwrap();
    println!(
        "chair_a       : front face gap {:.3} m, yaw {} deg (faces the table)",
        chair_a.aabb.min_x() - table.max_x(),
        chair_a.orientation.deg_z
    );
}
