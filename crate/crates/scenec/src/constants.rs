//! Tolerances, defaults, and tuning constants used across the compiler.
//!
//! Everything quantitative lives here so thresholds are pinned in one
//! place instead of scattered as magic numbers.

/// Flush contact between two faces must hold to this tolerance (metres).
///
/// Placement is computed by exact anchor arithmetic, so faces that should
/// touch differ only by floating-point rounding of a handful of adds.
pub const FLUSH_TOL: f64 = 1e-9;

/// Containment checks (footprint inside footprint, body inside container)
/// use the same bound as flush contact.
pub const CONTAINMENT_TOL: f64 = 1e-9;

/// Archimedes check: submerged fraction vs. density ratio (dimensionless).
pub const BUOYANCY_TOL: f64 = 1e-9;

/// Anchor self-consistency (`center == (min + max) / 2`) per axis.
pub const ANCHOR_TOL: f64 = 1e-12;

/// Two solid bodies may not overlap by more than this depth (metres).
/// The resolver emits exact contact, so any real overlap signals a bug.
pub const INTERPENETRATION_TOL: f64 = 1e-6;

/// Bridge/platform tops must be coplanar within this bound (metres).
/// Exact-arithmetic plans pass; genuinely mismatched platforms fail.
pub const COPLANARITY_TOL: f64 = 1e-6;

/// Spawn clearance above the support face for `spawned_on_top` (metres).
/// A spawned body settles under gravity in the simulator; a placed body
/// starts in static contact.
pub const SPAWN_CLEARANCE: f64 = 0.02;

/// Grid pitch for deterministic `place_anywhere` scanning (metres).
pub const ANYWHERE_GRID_PITCH: f64 = 0.25;

/// Camera standoff: distance factor times the largest scene extent.
pub const CAMERA_DISTANCE_FACTOR: f64 = 1.5;

/// Inside-wall cameras sit this far from the interior face (metres)...
pub const WALL_CAMERA_INSET: f64 = 0.1;

/// ...at this fraction of the container height.
pub const WALL_CAMERA_HEIGHT_FRACTION: f64 = 0.75;

/// Default integrator step when the plan leaves it unspecified (seconds).
pub const DEFAULT_TIME_STEP: f64 = 0.001;

/// Default simulation duration when unspecified (seconds).
pub const DEFAULT_DURATION: f64 = 10.0;

/// Default gravity magnitude along the negative gravity axis (m/s^2).
pub const DEFAULT_GRAVITY: f64 = 9.81;

/// Default density for procedural dynamic bodies (kg/m^3, water-like).
pub const DEFAULT_BODY_DENSITY: f64 = 1000.0;

/// Default fluid density when a fluid volume declares none (kg/m^3).
pub const DEFAULT_FLUID_DENSITY: f64 = 1000.0;

/// Height of the base plane that grounds unsupported placement (metres).
pub const BASE_PLANE_Z: f64 = 0.0;

/// An object listed in a step's motion expectations must displace at
/// least this far over the run (metres).
pub const DELTA_MOVE: f64 = 0.05;

/// A fixed body may drift at most this far before it counts as moving
/// (metres). Strictly below [`DELTA_MOVE`] so no body can violate both.
pub const DELTA_STILL: f64 = 0.005;

/// A dynamic body whose centre drops below the base plane by more than
/// this has tunnelled through its support (metres).
pub const SETTLEMENT_TOL: f64 = 0.01;

/// Any position component beyond this bound counts as divergence (metres).
pub const DIVERGENCE_BOUND: f64 = 1e3;

/// Retries allowed per implementation step before the pipeline fails.
pub const RETRY_BUDGET: u32 = 3;

// No body can violate the still bound and the move bound at once.
const _: () = assert!(DELTA_STILL < DELTA_MOVE);
