//! Camera templates resolved against scene bounds.

use serde::{Deserialize, Serialize};

use crate::constants::{
    CAMERA_DISTANCE_FACTOR, WALL_CAMERA_HEIGHT_FRACTION, WALL_CAMERA_INSET,
};
use crate::geometry::{CardinalDir, Frame, Vec3, WorldAabb};
use crate::relation::CameraTemplate;

use super::ResolveError;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ResolvedCamera {
    pub position: Vec3,
    pub target: Vec3,
    pub up: Vec3,
}

/// Place a camera by template. Side and top-down cameras stand off the
/// named face by `CAMERA_DISTANCE_FACTOR` times the largest scene extent
/// and look at the scene centroid; inside-wall cameras sit just inside an
/// enclosing container looking inward.
pub fn resolve_camera(
    template: CameraTemplate,
    scene_bounds: &WorldAabb,
    frame: Frame,
    container: Option<&WorldAabb>,
) -> Result<ResolvedCamera, ResolveError> {
    let centroid = scene_bounds.center();
    let size = scene_bounds.size();
    let standoff = CAMERA_DISTANCE_FACTOR * size.x.max(size.y).max(size.z);
    let up = frame.camera_up();

    let camera = match template {
        CameraTemplate::Side(dir) => {
            let position = match dir {
                CardinalDir::PlusX => Vec3::new(scene_bounds.max_x() + standoff, centroid.y, centroid.z),
                CardinalDir::MinusX => Vec3::new(scene_bounds.min_x() - standoff, centroid.y, centroid.z),
                CardinalDir::PlusY => Vec3::new(centroid.x, scene_bounds.max_y() + standoff, centroid.z),
                CardinalDir::MinusY => Vec3::new(centroid.x, scene_bounds.min_y() - standoff, centroid.z),
            };
            ResolvedCamera { position, target: centroid, up }
        }
        CameraTemplate::TopDown => {
            // Straight down the gravity axis; up along +X since the view
            // direction is parallel to gravity. The half-extent along
            // the frame's up axis keeps the camera outside the bounds.
            let up_extent = size.x * up.x.abs() + size.y * up.y.abs() + size.z * up.z.abs();
            let position = centroid + up * (up_extent / 2.0 + standoff);
            ResolvedCamera { position, target: centroid, up: Vec3::new(1.0, 0.0, 0.0) }
        }
        CameraTemplate::Perspective => {
            let oblique = standoff / 3f64.sqrt();
            let position = Vec3::new(
                scene_bounds.max_x() + oblique,
                scene_bounds.max_y() + oblique,
                scene_bounds.top_z() + oblique,
            );
            ResolvedCamera { position, target: centroid, up }
        }
        CameraTemplate::InsideWall(dir) => {
            let container = container.ok_or(ResolveError::NoEnclosingContainer)?;
            let z = container.bottom_z() + WALL_CAMERA_HEIGHT_FRACTION * container.size().z;
            let position = match dir {
                CardinalDir::PlusX => {
                    Vec3::new(container.max_x() - WALL_CAMERA_INSET, container.center_y(), z)
                }
                CardinalDir::MinusX => {
                    Vec3::new(container.min_x() + WALL_CAMERA_INSET, container.center_y(), z)
                }
                CardinalDir::PlusY => {
                    Vec3::new(container.center_x(), container.max_y() - WALL_CAMERA_INSET, z)
                }
                CardinalDir::MinusY => {
                    Vec3::new(container.center_x(), container.min_y() + WALL_CAMERA_INSET, z)
                }
            };
            // Look horizontally inward at the container midline.
            let target = Vec3::new(container.center_x(), container.center_y(), z);
            ResolvedCamera { position, target, up }
        }
    };
    Ok(camera)
}
