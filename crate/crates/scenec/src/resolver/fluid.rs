//! Fluid templates: container filling, free surfaces, and buoyancy.
//!
//! A free surface is the horizontal plane of a fluid volume's top. Fill
//! templates derive it from the container bounds; surface-anchored
//! templates equate a body face with it; floating bodies sit at the
//! Archimedes draft `d = (rho_obj / rho_fluid) * height` for uniform
//! boxes.

use crate::geometry::{Vec3, WorldAabb};

use super::ResolveError;

/// Surface height when a container is filled to `fraction` of its height
/// (1.0 fills to the rim).
pub fn fill_surface_height(container: &WorldAabb, fraction: f64) -> f64 {
    container.bottom_z() + fraction * container.size().z
}

/// The fluid box occupying the lower `fraction` of a container: full
/// footprint, resting on the floor.
pub fn fill_box(container: &WorldAabb, fraction: f64) -> (Vec3, Vec3) {
    let size = container.size();
    let depth = fraction * size.z;
    let center = Vec3::new(
        container.center_x(),
        container.center_y(),
        container.bottom_z() + depth / 2.0,
    );
    (center, Vec3::new(size.x, size.y, depth))
}

/// Submerged depth of a floating box body.
pub fn archimedes_draft(
    rho_obj: f64,
    rho_fluid: f64,
    height: f64,
) -> Result<f64, ResolveError> {
    if rho_fluid <= 0.0 {
        return Err(ResolveError::BadDensity { value: rho_fluid });
    }
    if rho_obj <= 0.0 {
        return Err(ResolveError::BadDensity { value: rho_obj });
    }
    if rho_obj >= rho_fluid {
        return Err(ResolveError::WouldSink { rho_obj, rho_fluid });
    }
    Ok(rho_obj / rho_fluid * height)
}

/// Where a face-anchored body centre sits relative to a surface height.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SurfaceAnchor {
    /// bottom_z = surface (resting on the water plane).
    Bottom,
    /// center_z = surface.
    Center,
    /// top_z = surface (flush under the plane; also the submerged bound).
    Top,
}

pub fn center_z_at_surface(surface: f64, world_height: f64, anchor: SurfaceAnchor) -> f64 {
    match anchor {
        SurfaceAnchor::Bottom => surface + world_height / 2.0,
        SurfaceAnchor::Center => surface,
        SurfaceAnchor::Top => surface - world_height / 2.0,
    }
}
