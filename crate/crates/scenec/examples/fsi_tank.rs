//! The fluid scene: container filling, buoyancy, flanks, and a span.
//!
//! ```sh
//! cargo run -p scenec --example fsi_tank
//! ```

use scenec::catalog::load_catalog;
use scenec::emit::emit_scene;
use scenec::plan::{apply_defaults, parse_plan, validate_schema};
use scenec::resolver::resolve_scene;
use scenec::validator::{check_scene, is_clean};

fn main() {
    let root = env!("CARGO_MANIFEST_DIR");
    let plan_text =
        std::fs::read_to_string(format!("{root}/tests/golden/fsi_tank.plan")).unwrap();
    let catalog_text =
        std::fs::read_to_string(format!("{root}/tests/golden/catalog.json")).unwrap();
    let plan = parse_plan(&plan_text).unwrap().plan;
    let plan = apply_defaults(&plan, &validate_schema(&plan));
    let catalog = load_catalog(&catalog_text).unwrap();

    let scene = resolve_scene(&plan, &catalog).expect("tank scene resolves");

    let tank = scene.body("tank").unwrap().aabb;
    println!("tank          : floor {} m, rim {} m", tank.bottom_z(), tank.top_z());
    println!("free surface  : {} m (fills the lower half)", scene.free_surfaces["water"]);

    // The floating plate sits at its hydrostatic draft:
    // draft = (rho_obj / rho_fluid) * height.
    let plate = scene.body("plate").unwrap().aabb;
    let surface = scene.free_surfaces["water"];
    let draft = surface - plate.bottom_z();
    println!(
        "plate         : bottom {} m, draft {:.3} m ({}% submerged)",
        plate.bottom_z(),
        draft,
        (100.0 * draft / plate.size().z).round()
    );

    // Platforms flank the tank; the deck spans the gap between them.
    let west = scene.body("platform_w").unwrap().aabb;
    let east = scene.body("platform_e").unwrap().aabb;
    let deck = scene.body("span_deck").unwrap();
    println!(
        "platforms     : tops at {} and {} (flush with the rim)",
        west.top_z(),
        east.top_z()
    );
    println!(
        "span deck     : {} m span, centred at x = {}, top at {} m",
        deck.extent.size().x,
        deck.aabb.center_x(),
        deck.aabb.top_z()
    );
    println!(
        "deck between  : {} < {} < {}",
        west.center_x(),
        deck.aabb.center_x(),
        east.center_x()
    );

    let violations = check_scene(&scene, &plan, &catalog);
    println!(
        "self-checks   : {}",
        if is_clean(&violations) { "all clean".to_string() } else { format!("{violations:?}") }
    );

    let doc = emit_scene(&scene, &plan, &catalog);
    println!("scene document: {} bytes of JSON", doc.len());
}
