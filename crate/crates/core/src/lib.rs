//! Skeletal point selection for 3D shapes.
//!
//! The crate is organised as a pipeline:
//!
//! * [`geometry`] loads meshes and point clouds, samples the boundary, runs
//!   winding-number inside tests and generates interior candidate points.
//! * [`selection`] computes candidate ball radii, the sample/ball coverage
//!   matrix and runs the greedy coverage + uniformity selection loop.
//! * [`connectivity`] connects the selected balls through the regular
//!   triangulation of selected balls and surface samples.
//! * [`metrics`] rebuilds the medial envelope (spheres, cones, slabs) from a
//!   skeleton and measures Hausdorff errors and coverage rate.
//!
//! All randomness goes through [`rng::seeded`], a ChaCha8 stream, so every
//! seeded operation is reproducible across platforms.

// `!(x > 0.0)` style checks are used on purpose so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod connectivity;
pub mod geometry;
pub mod metrics;
pub mod rng;
pub mod selection;

/// 3D point / vector in model units.
pub type Vec3 = nalgebra::Vector3<f64>;
