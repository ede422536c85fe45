//! scenec — a deterministic scene-plan compiler for physics simulations.
//!
//! The crate turns a declarative simulation plan (objects, symbolic spatial
//! relations, implementation steps, cameras) into a fully metric scene:
//! every body gets a concrete pose, fluid volumes get free-surface heights,
//! and cameras get positions framing the scene bounds. Around that core sit
//! a schema validator with conservative defaults, a geometric self-check
//! suite, a static API validator for generated simulator scripts, and a
//! trajectory/log judge that produces structured error reports for a
//! staged build-review loop.
//!
//! The pieces compose but are usable on their own:
//!
//! - [`plan`] — parse, validate, and serialize the plan format.
//! - [`geometry`] — frames, orientation algebra, box/anchor arithmetic.
//! - [`catalog`] — asset metadata (extents, density, licenses, proxies).
//! - [`relation`] — the closed vocabulary of relation templates.
//! - [`resolver`] — symbolic relations to numeric poses.
//! - [`validator`] — self-checks over a resolved scene.
//! - [`api`] — API index loading, call-site extraction, static checks.
//! - [`judge`] — log/trajectory parsing, verdicts, staged pipeline.
//! - [`emit`] — scene documents and simulator-script skeletons.
//!
//! ```
//! use scenec::catalog::AssetCatalog;
//! use scenec::plan::parse_plan;
//! use scenec::resolver::resolve_scene;
//! use scenec::validator::check_scene;
//!
//! let text = "\
//! plan_type
//!   scene
//!
//! simulation_parameters
//!   time_step: 0.001
//!   simulation_duration: 5
//!   gravity: 9.81
//!
//! objects
//!   - name: table
//!     construction:
//!       kind: procedural
//!       primitive: box
//!       size: {x: 1.4, y: 0.7, z: 0.75}
//!     topology:
//!       role: base
//!     pose:
//!       position: {x: 0, y: 0, z: 0.375}
//!       rotation_deg: {x: 0, y: 0, z: 0}
//!     fixed: true
//!     is_dynamic: false
//!     fsi_registration: none
//!   - name: mug
//!     construction:
//!       kind: procedural
//!       primitive: cylinder
//!       size: {x: 0.1, y: 0.1, z: 0.12}
//!       density: 400
//!     topology:
//!       role: child
//!       ref: table
//!       relation: placed_on_top
//!     fixed: false
//!     is_dynamic: true
//!     fsi_registration: none
//!
//! clarifications_needed
//!   []
//! ";
//! let plan = parse_plan(text).unwrap().plan;
//! let scene = resolve_scene(&plan, &AssetCatalog::empty()).unwrap();
//!
//! // The mug rests exactly on the table top, centred on its footprint.
//! let mug = scene.body("mug").unwrap();
//! assert_eq!(mug.aabb.bottom_z(), 0.75);
//! assert_eq!(mug.position.x, 0.0);
//! assert!(check_scene(&scene, &plan, &AssetCatalog::empty()).is_empty());
//! ```
//!
//! See the `examples/` directory for one runnable example per capability,
//! and the `scenec` binary for the batch front-end.

pub mod api;
pub mod catalog;
pub mod cli;
pub mod constants;
pub mod emit;
pub mod geometry;
pub mod judge;
pub mod plan;
pub mod relation;
pub mod resolver;
pub mod rng;
pub mod validator;
