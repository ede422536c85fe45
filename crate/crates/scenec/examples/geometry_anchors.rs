//! Bounding-box anchors, conventions, and the orientation algebra.
//!
//! ```sh
//! cargo run -p scenec --example geometry_anchors
//! ```

use scenec::geometry::{
    compose_rotation, world_aabb, yaw_for_facing, AabbConvention, BoxExtent, FacingRule,
    Orientation, Vec3,
};

fn main() {
    // A 2 x 2 x 1 box centred at (0, 0, 0.5): anchors read straight off
    // the world bounds.
    let crate_box = BoxExtent::new(2.0, 2.0, 1.0).unwrap();
    let aabb = world_aabb(
        crate_box,
        Vec3::new(0.0, 0.0, 0.5),
        Orientation::identity(),
        AabbConvention::Center,
    );
    println!("centred box   : bottom_z {}  top_z {}  min_x {}", aabb.bottom_z(), aabb.top_z(), aabb.min_x());

    // Containers store their floor: position.z is the floor, the rim is
    // position.z + height.
    let tank = BoxExtent::new(4.0, 2.0, 1.5).unwrap();
    let tank_aabb = world_aabb(tank, Vec3::ZERO, Orientation::identity(), AabbConvention::BoundaryFloor);
    println!("container     : floor {}  rim {}", tank_aabb.bottom_z(), tank_aabb.top_z());

    // Quarter turns permute footprint extents exactly.
    let plank = BoxExtent::new(2.0, 1.0, 1.0).unwrap();
    let turned = world_aabb(plank, Vec3::ZERO, Orientation::yaw(90.0), AabbConvention::Center);
    println!("yaw 90        : extents {:?} -> {:?}", [2.0, 1.0], [turned.size().x, turned.size().y]);

    // Arbitrary yaw gives the tight bound of the rotated footprint.
    let skewed = world_aabb(plank, Vec3::ZERO, Orientation::yaw(30.0), AabbConvention::Center);
    println!("yaw 30        : extents ({:.4}, {:.4})", skewed.size().x, skewed.size().y);

    // Cardinal facing table and target-relative yaw.
    for (label, rule) in [
        ("front", FacingRule::Front),
        ("left", FacingRule::Left),
        ("back", FacingRule::Back),
        ("right", FacingRule::Right),
    ] {
        println!("facing {label:<6} : {:>6} deg", yaw_for_facing(rule, Vec3::ZERO).unwrap());
    }
    let toward = yaw_for_facing(FacingRule::To(Vec3::new(1.0, 1.0, 0.0)), Vec3::ZERO).unwrap();
    println!("facing (1,1)  : {toward} deg");

    // R = Rz(deg_z) * Rx(deg_x): a quarter yaw maps +X onto +Y exactly.
    let quarter = compose_rotation(90.0, 0.0);
    println!("Rz(90) * +X   : {:?}", <[f64; 3]>::from(quarter.rotate(Vec3::new(1.0, 0.0, 0.0))));
}
