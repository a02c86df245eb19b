//! Convex-geometry toolkit built around quantitative Helly and Tverberg
//! statements: witness-set solvers (inscribed boxes, zonotopes, ellipsoids,
//! H-convex sets), a generic randomized LP-type solver, empirical theorem
//! harnesses, and Tverberg lifting charts with partition certificates.
//!
//! Convex bodies enter as H-polytopes (finite halfspace intersections), so
//! every containment question reduces to finitely many linear tests served
//! by a small dense LP kernel.

pub mod body;
pub mod error;
pub mod helly;
pub mod linalg;
pub mod lp;
pub mod lp_type;
pub mod measure;
pub mod rng;
pub mod solvers;
pub mod tverberg;

pub use body::{AxisBox, Body, Ellipsoid, HConvexSet, HPolytope, Halfspace, Vector, Zonotope};
pub use error::GeomError;
pub use solvers::{SolveReport, SolveStatus};

/// Hard ceiling on ambient dimension; everything here is desk-scale.
pub const MAX_DIM: usize = 8;

/// Default containment tolerance.
pub const CONTAINMENT_TOL: f64 = 1e-8;

/// Vertex deduplication tolerance for vertex enumeration.
pub const VERTEX_DEDUP_TOL: f64 = 1e-9;

/// Eigenvalue floor below which a symmetric matrix is not accepted as
/// positive definite.
pub const SPD_EIGENVALUE_FLOOR: f64 = 1e-10;
