//! Coordinate frame, orientation algebra, and bounding-box anchors.
//!
//! Conventions (the single source of truth for every other module):
//!
//! - gravity acts along `-Z` by default; the working plane is `XY` and the
//!   height axis is `Z`;
//! - cardinal names: `+X` = front, `-X` = back, `+Y` = left, `-Y` = right,
//!   `+Z` = up;
//! - camera up is anti-parallel to gravity (`-z` gravity gives
//!   `up = [0, 0, 1]`, `-y` gravity gives `up = [0, 1, 0]`);
//! - box sizes are always full extents (width/depth/height), never
//!   half-extents;
//! - a rotation is composed as `R = Rz(deg_z) * Rx(deg_x)`, with `deg_z`
//!   measured counterclockwise from world `+X`.
//!
//! Trigonometry snaps at multiples of 90 degrees so that cardinal yaws
//! permute box extents exactly and flush contacts stay bit-exact.

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum GeometryError {
    #[error("box extent must be strictly positive on every axis, got ({0}, {1}, {2})")]
    NonPositiveExtent(f64, f64, f64),
    #[error("facing target coincides with the subject in the working plane")]
    CoincidentFacingTarget,
}

/// Plain 3-vector in metres. Serializes as `{"x": .., "y": .., "z": ..}`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Vec3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Vec3 {
    pub const ZERO: Vec3 = Vec3 { x: 0.0, y: 0.0, z: 0.0 };

    pub fn new(x: f64, y: f64, z: f64) -> Self {
        Self { x, y, z }
    }

    pub fn dot(self, other: Vec3) -> f64 {
        self.x * other.x + self.y * other.y + self.z * other.z
    }

    pub fn norm(self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }

    pub fn component(self, axis: Axis3) -> f64 {
        match axis {
            Axis3::X => self.x,
            Axis3::Y => self.y,
            Axis3::Z => self.z,
        }
    }
}

impl From<[f64; 3]> for Vec3 {
    fn from(v: [f64; 3]) -> Self {
        Vec3::new(v[0], v[1], v[2])
    }
}

impl From<Vec3> for [f64; 3] {
    fn from(v: Vec3) -> Self {
        [v.x, v.y, v.z]
    }
}

impl std::ops::Add for Vec3 {
    type Output = Vec3;
    fn add(self, o: Vec3) -> Vec3 {
        Vec3::new(self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl std::ops::Sub for Vec3 {
    type Output = Vec3;
    fn sub(self, o: Vec3) -> Vec3 {
        Vec3::new(self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl std::ops::Mul<f64> for Vec3 {
    type Output = Vec3;
    fn mul(self, s: f64) -> Vec3 {
        Vec3::new(self.x * s, self.y * s, self.z * s)
    }
}

/// One of the three world axes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis3 {
    X,
    Y,
    Z,
}

/// Cardinal directions in the working plane.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CardinalDir {
    PlusX,
    MinusX,
    PlusY,
    MinusY,
}

impl CardinalDir {
    /// Yaw that faces this direction: `+X` 0, `+Y` 90, `-X` 180, `-Y` -90.
    pub fn yaw_deg(self) -> f64 {
        match self {
            CardinalDir::PlusX => 0.0,
            CardinalDir::PlusY => 90.0,
            CardinalDir::MinusX => 180.0,
            CardinalDir::MinusY => -90.0,
        }
    }

    pub fn axis(self) -> Axis3 {
        match self {
            CardinalDir::PlusX | CardinalDir::MinusX => Axis3::X,
            CardinalDir::PlusY | CardinalDir::MinusY => Axis3::Y,
        }
    }

    pub fn sign(self) -> f64 {
        match self {
            CardinalDir::PlusX | CardinalDir::PlusY => 1.0,
            CardinalDir::MinusX | CardinalDir::MinusY => -1.0,
        }
    }

    pub fn opposite(self) -> CardinalDir {
        match self {
            CardinalDir::PlusX => CardinalDir::MinusX,
            CardinalDir::MinusX => CardinalDir::PlusX,
            CardinalDir::PlusY => CardinalDir::MinusY,
            CardinalDir::MinusY => CardinalDir::PlusY,
        }
    }
}

/// Gravity axis choices. Only `-z` is exercised by the shipped corpus;
/// `-y` is supported per the same up-vector rule but considered
/// experimental.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GravityAxis {
    NegZ,
    NegY,
}

/// Scene coordinate frame.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Frame {
    pub gravity_axis: GravityAxis,
}

impl Default for Frame {
    fn default() -> Self {
        Frame { gravity_axis: GravityAxis::NegZ }
    }
}

impl Frame {
    /// Camera up vector, anti-parallel to gravity.
    pub fn camera_up(self) -> Vec3 {
        match self.gravity_axis {
            GravityAxis::NegZ => Vec3::new(0.0, 0.0, 1.0),
            GravityAxis::NegY => Vec3::new(0.0, 1.0, 0.0),
        }
    }

    /// Unit vector pointing along gravity.
    pub fn gravity_dir(self) -> Vec3 {
        self.camera_up() * -1.0
    }

    /// Derive the frame from an explicit gravity vector; `None` when the
    /// dominant component is not a negative `z` or `y`.
    pub fn from_gravity_vector(g: Vec3) -> Option<Frame> {
        let ax = g.x.abs();
        let ay = g.y.abs();
        let az = g.z.abs();
        if az >= ax && az >= ay && g.z < 0.0 {
            Some(Frame { gravity_axis: GravityAxis::NegZ })
        } else if ay >= ax && ay >= az && g.y < 0.0 {
            Some(Frame { gravity_axis: GravityAxis::NegY })
        } else {
            None
        }
    }
}

/// Full box extents in metres, strictly positive per axis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct BoxExtent {
    size: Vec3,
}

impl BoxExtent {
    pub fn new(sx: f64, sy: f64, sz: f64) -> Result<Self, GeometryError> {
        if sx > 0.0 && sy > 0.0 && sz > 0.0 && sx.is_finite() && sy.is_finite() && sz.is_finite()
        {
            Ok(Self { size: Vec3::new(sx, sy, sz) })
        } else {
            Err(GeometryError::NonPositiveExtent(sx, sy, sz))
        }
    }

    pub fn from_vec(v: Vec3) -> Result<Self, GeometryError> {
        Self::new(v.x, v.y, v.z)
    }

    pub fn size(self) -> Vec3 {
        self.size
    }

    pub fn sx(self) -> f64 {
        self.size.x
    }

    pub fn sy(self) -> f64 {
        self.size.y
    }

    pub fn sz(self) -> f64 {
        self.size.z
    }

    /// Same footprint, different height.
    pub fn with_height(self, sz: f64) -> Result<Self, GeometryError> {
        Self::new(self.size.x, self.size.y, sz)
    }
}

/// World axis-aligned bounds with the anchor scalars every relation
/// template acts through.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct WorldAabb {
    pub min: Vec3,
    pub max: Vec3,
}

impl WorldAabb {
    pub fn new(min: Vec3, max: Vec3) -> Self {
        Self { min, max }
    }

    pub fn from_center_size(center: Vec3, size: Vec3) -> Self {
        let half = size * 0.5;
        Self { min: center - half, max: center + half }
    }

    pub fn min_x(&self) -> f64 {
        self.min.x
    }
    pub fn max_x(&self) -> f64 {
        self.max.x
    }
    pub fn center_x(&self) -> f64 {
        (self.min.x + self.max.x) / 2.0
    }
    pub fn min_y(&self) -> f64 {
        self.min.y
    }
    pub fn max_y(&self) -> f64 {
        self.max.y
    }
    pub fn center_y(&self) -> f64 {
        (self.min.y + self.max.y) / 2.0
    }
    pub fn bottom_z(&self) -> f64 {
        self.min.z
    }
    pub fn top_z(&self) -> f64 {
        self.max.z
    }
    pub fn center_z(&self) -> f64 {
        (self.min.z + self.max.z) / 2.0
    }

    pub fn center(&self) -> Vec3 {
        Vec3::new(self.center_x(), self.center_y(), self.center_z())
    }

    pub fn size(&self) -> Vec3 {
        self.max - self.min
    }

    pub fn union(&self, other: &WorldAabb) -> WorldAabb {
        WorldAabb {
            min: Vec3::new(
                self.min.x.min(other.min.x),
                self.min.y.min(other.min.y),
                self.min.z.min(other.min.z),
            ),
            max: Vec3::new(
                self.max.x.max(other.max.x),
                self.max.y.max(other.max.y),
                self.max.z.max(other.max.z),
            ),
        }
    }

    /// Overlap extent per axis when the boxes intersect on all three.
    pub fn overlap_depths(&self, other: &WorldAabb) -> Option<[f64; 3]> {
        let dx = self.max.x.min(other.max.x) - self.min.x.max(other.min.x);
        let dy = self.max.y.min(other.max.y) - self.min.y.max(other.min.y);
        let dz = self.max.z.min(other.max.z) - self.min.z.max(other.min.z);
        if dx > 0.0 && dy > 0.0 && dz > 0.0 {
            Some([dx, dy, dz])
        } else {
            None
        }
    }

    /// Whether `other` lies inside `self`, with `tol` of slack per face.
    pub fn contains_aabb(&self, other: &WorldAabb, tol: f64) -> bool {
        other.min.x >= self.min.x - tol
            && other.min.y >= self.min.y - tol
            && other.min.z >= self.min.z - tol
            && other.max.x <= self.max.x + tol
            && other.max.y <= self.max.y + tol
            && other.max.z <= self.max.z + tol
    }

    /// Footprint containment in the working plane only.
    pub fn contains_footprint(&self, other: &WorldAabb, tol: f64) -> bool {
        other.min.x >= self.min.x - tol
            && other.min.y >= self.min.y - tol
            && other.max.x <= self.max.x + tol
            && other.max.y <= self.max.y + tol
    }

    pub fn footprints_overlap(&self, other: &WorldAabb) -> bool {
        self.max.x > other.min.x
            && other.max.x > self.min.x
            && self.max.y > other.min.y
            && other.max.y > self.min.y
    }
}

/// Cosine in degrees, exact at multiples of 90.
pub fn cos_deg(deg: f64) -> f64 {
    let r = deg.rem_euclid(360.0);
    if r == 0.0 {
        1.0
    } else if r == 90.0 || r == 270.0 {
        0.0
    } else if r == 180.0 {
        -1.0
    } else {
        r.to_radians().cos()
    }
}

/// Sine in degrees, exact at multiples of 90.
pub fn sin_deg(deg: f64) -> f64 {
    let r = deg.rem_euclid(360.0);
    if r == 0.0 || r == 180.0 {
        0.0
    } else if r == 90.0 {
        1.0
    } else if r == 270.0 {
        -1.0
    } else {
        r.to_radians().sin()
    }
}

/// Body orientation: yaw about Z composed with tilt about X,
/// `R = Rz(deg_z) * Rx(deg_x)`. `deg_x` stays 0 for z-up-native assets.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Orientation {
    pub deg_x: f64,
    pub deg_z: f64,
}

impl Orientation {
    pub fn identity() -> Self {
        Self { deg_x: 0.0, deg_z: 0.0 }
    }

    pub fn yaw(deg_z: f64) -> Self {
        Self { deg_x: 0.0, deg_z }
    }

    /// Row-major rotation matrix `Rz(deg_z) * Rx(deg_x)`.
    pub fn matrix(&self) -> [[f64; 3]; 3] {
        let cz = cos_deg(self.deg_z);
        let sz = sin_deg(self.deg_z);
        let cx = cos_deg(self.deg_x);
        let sx = sin_deg(self.deg_x);
        [
            [cz, -sz * cx, sz * sx],
            [sz, cz * cx, -cz * sx],
            [0.0, sx, cx],
        ]
    }

    pub fn rotate(&self, v: Vec3) -> Vec3 {
        let m = self.matrix();
        Vec3::new(
            m[0][0] * v.x + m[0][1] * v.y + m[0][2] * v.z,
            m[1][0] * v.x + m[1][1] * v.y + m[1][2] * v.z,
            m[2][0] * v.x + m[2][1] * v.y + m[2][2] * v.z,
        )
    }

    /// World-frame facing direction (the rotated `+X` axis).
    pub fn heading(&self) -> Vec3 {
        self.rotate(Vec3::new(1.0, 0.0, 0.0))
    }

    pub fn is_cardinal_yaw(&self) -> bool {
        self.deg_z.rem_euclid(90.0) == 0.0
    }
}

/// Compose a rotation from yaw and tilt. Kept as a named operation so the
/// composition order is fixed in exactly one place.
pub fn compose_rotation(deg_z: f64, deg_x: f64) -> Orientation {
    Orientation { deg_x, deg_z }
}

/// How a stored position maps onto a body's bounds.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AabbConvention {
    /// Position is the body centre.
    Center,
    /// Containers and channels: centred in plan view, floor at
    /// `position.z`, rim at `position.z + size.z`.
    BoundaryFloor,
}

/// World bounds of a box of `extent` at `position` under `orientation`.
///
/// Arbitrary yaw is supported: the result is the tight axis-aligned bound
/// of the rotated box (all 8 corners when `deg_x` is nonzero).
pub fn world_aabb(
    extent: BoxExtent,
    position: Vec3,
    orientation: Orientation,
    convention: AabbConvention,
) -> WorldAabb {
    let center = match convention {
        AabbConvention::Center => position,
        AabbConvention::BoundaryFloor => {
            Vec3::new(position.x, position.y, position.z + extent.sz() / 2.0)
        }
    };
    let h = extent.size() * 0.5;
    let mut min = Vec3::new(f64::INFINITY, f64::INFINITY, f64::INFINITY);
    let mut max = Vec3::new(f64::NEG_INFINITY, f64::NEG_INFINITY, f64::NEG_INFINITY);
    for &sx in &[-1.0, 1.0] {
        for &sy in &[-1.0, 1.0] {
            for &sz in &[-1.0, 1.0] {
                let corner = orientation.rotate(Vec3::new(h.x * sx, h.y * sy, h.z * sz));
                min.x = min.x.min(corner.x);
                min.y = min.y.min(corner.y);
                min.z = min.z.min(corner.z);
                max.x = max.x.max(corner.x);
                max.y = max.y.max(corner.y);
                max.z = max.z.max(corner.z);
            }
        }
    }
    WorldAabb::new(min + center, max + center)
}

/// World-frame extents of a yawed box (the size of its tight AABB).
pub fn world_extents(extent: BoxExtent, orientation: Orientation) -> Vec3 {
    world_aabb(extent, Vec3::ZERO, orientation, AabbConvention::Center).size()
}

/// A facing rule to be turned into a yaw angle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FacingRule {
    Front,
    Back,
    Left,
    Right,
    /// Face toward a target point in the working plane.
    To(Vec3),
    /// Face away from a target point.
    OppositeTo(Vec3),
    /// Copy another body's yaw.
    SameAs(f64),
}

/// Yaw in degrees for a facing rule applied at `subject_center`.
pub fn yaw_for_facing(rule: FacingRule, subject_center: Vec3) -> Result<f64, GeometryError> {
    match rule {
        FacingRule::Front => Ok(CardinalDir::PlusX.yaw_deg()),
        FacingRule::Left => Ok(CardinalDir::PlusY.yaw_deg()),
        FacingRule::Back => Ok(CardinalDir::MinusX.yaw_deg()),
        FacingRule::Right => Ok(CardinalDir::MinusY.yaw_deg()),
        FacingRule::To(target) => {
            let dx = target.x - subject_center.x;
            let dy = target.y - subject_center.y;
            if dx == 0.0 && dy == 0.0 {
                return Err(GeometryError::CoincidentFacingTarget);
            }
            Ok(dy.atan2(dx).to_degrees())
        }
        FacingRule::OppositeTo(target) => {
            let toward = yaw_for_facing(FacingRule::To(target), subject_center)?;
            Ok(toward + 180.0)
        }
        FacingRule::SameAs(yaw) => Ok(yaw),
    }
}
