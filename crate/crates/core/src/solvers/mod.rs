//! Convex-optimization solvers for optimal witness sets inside the
//! intersection of a finite family of H-polytopes: inscribed boxes,
//! zonotopes, ellipsoids (free / centered / axis-parallel / max-trace),
//! enclosing ellipsoids, H-convex sets, translates, and simultaneous
//! ε-approximations.

pub mod approx;
pub mod barrier;
pub mod boxes;
pub mod ellipsoids;
pub mod enclosing;
pub mod gaussian;
pub mod hconvex;
pub mod segments;
pub mod translate;
pub mod zonotopes;

use serde::{Deserialize, Serialize};

use crate::body::{Body, HPolytope, Vector};
use crate::error::{GeomError, Result};

pub use approx::{min_eps_approx, simultaneous_approx, ApproxClass};
pub use boxes::{max_perimeter_box, max_volume_box};
pub use ellipsoids::{max_trace_ellipsoid, max_volume_ellipsoid, EllipsoidConstraint};
pub use enclosing::min_enclosing_ellipsoid;
pub use gaussian::max_gaussian_box;
pub use hconvex::{max_hconvex, HConvexObjective};
pub use segments::max_increasing_segment;
pub use translate::max_translate;
pub use zonotopes::max_volume_zonotope;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SolveStatus {
    Optimal,
    Infeasible,
    Unbounded,
    MaxIter,
}

/// Outcome of a witness solve. `status == Optimal` implies the witness is
/// contained in every family member (tol 1e-8) and `kkt_residual < 1e-7`.
/// Degenerate optima (zero-volume witnesses) are reported as `Optimal` with
/// the flag set, so "witness with objective ≥ threshold" stays a clean
/// predicate.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SolveReport {
    pub status: SolveStatus,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Body>,
    pub objective_value: f64,
    pub iterations: usize,
    pub kkt_residual: f64,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub degenerate: bool,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub heuristic: bool,
    /// Translation vector for approximation solves.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub translate: Option<Vector>,
    /// For the trace objective: 2·Σ eigenvalues of the shape matrix on the
    /// unit-ball chart.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub axis_length_sum: Option<f64>,
    /// Relaxation upper bound for non-concave (diameter) objectives.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub upper_bound: Option<f64>,
}

impl SolveReport {
    pub fn status_only(status: SolveStatus) -> Self {
        SolveReport {
            status,
            witness: None,
            objective_value: 0.0,
            iterations: 0,
            kkt_residual: 0.0,
            degenerate: false,
            heuristic: false,
            translate: None,
            axis_length_sum: None,
            upper_bound: None,
        }
    }

    pub fn optimal(witness: Body, objective_value: f64, iterations: usize, kkt: f64) -> Self {
        SolveReport {
            status: SolveStatus::Optimal,
            witness: Some(witness),
            objective_value,
            iterations,
            kkt_residual: kkt,
            degenerate: false,
            heuristic: false,
            translate: None,
            axis_length_sum: None,
            upper_bound: None,
        }
    }

    pub fn is_optimal(&self) -> bool {
        self.status == SolveStatus::Optimal
    }
}

/// Witness class requested from a [`WitnessProblem`].
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(rename_all = "snake_case")]
pub enum WitnessClass {
    AxisBox,
    Zonotope { directions: Vec<Vector> },
    Ellipsoid,
    EllipsoidCentered,
    EllipsoidAxisParallel,
    HConvex { hset: Vec<Vector> },
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "snake_case")]
pub enum Objective {
    Volume,
    Perimeter,
    Trace,
    Diameter,
    GaussianMc,
}

/// A witness-optimization instance: family, witness class, objective.
/// Only the implemented class/objective pairs are accepted.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct WitnessProblem {
    pub family: Vec<HPolytope>,
    pub witness_class: WitnessClass,
    pub objective: Objective,
}

impl WitnessProblem {
    pub fn new(
        family: Vec<HPolytope>,
        witness_class: WitnessClass,
        objective: Objective,
    ) -> Result<Self> {
        use Objective::*;
        use WitnessClass::*;
        let ok = matches!(
            (&witness_class, objective),
            (AxisBox, Volume)
                | (AxisBox, Perimeter)
                | (AxisBox, GaussianMc)
                | (Zonotope { .. }, Volume)
                | (Zonotope { .. }, GaussianMc)
                | (Ellipsoid, Volume)
                | (Ellipsoid, Trace)
                | (Ellipsoid, GaussianMc)
                | (EllipsoidCentered, Volume)
                | (EllipsoidAxisParallel, Volume)
                | (HConvex { .. }, Volume)
                | (HConvex { .. }, Diameter)
        );
        if !ok {
            return Err(GeomError::InvalidInput(format!(
                "objective {objective:?} not implemented for class {witness_class:?}"
            )));
        }
        if family.is_empty() {
            return Err(GeomError::InvalidInput("empty family".into()));
        }
        Ok(WitnessProblem {
            family,
            witness_class,
            objective,
        })
    }

    pub fn solve(&self, seed: u64) -> Result<SolveReport> {
        match (&self.witness_class, self.objective) {
            (WitnessClass::AxisBox, Objective::Volume) => max_volume_box(&self.family),
            (WitnessClass::AxisBox, Objective::Perimeter) => max_perimeter_box(&self.family),
            (WitnessClass::AxisBox, Objective::GaussianMc) => max_gaussian_box(&self.family),
            (WitnessClass::Zonotope { directions }, Objective::Volume) => {
                max_volume_zonotope(&self.family, directions)
            }
            (WitnessClass::Ellipsoid, Objective::Volume) => {
                max_volume_ellipsoid(&self.family, EllipsoidConstraint::Free)
            }
            (WitnessClass::Ellipsoid, Objective::Trace) => max_trace_ellipsoid(&self.family),
            (WitnessClass::EllipsoidCentered, Objective::Volume) => {
                max_volume_ellipsoid(&self.family, EllipsoidConstraint::CenteredAtOrigin)
            }
            (WitnessClass::EllipsoidAxisParallel, Objective::Volume) => {
                max_volume_ellipsoid(&self.family, EllipsoidConstraint::AxisParallel)
            }
            (WitnessClass::HConvex { hset }, Objective::Volume) => {
                max_hconvex(&self.family, hset, HConvexObjective::Volume)
            }
            (WitnessClass::HConvex { hset }, Objective::Diameter) => {
                max_hconvex(&self.family, hset, HConvexObjective::Diameter)
            }
            (c, Objective::GaussianMc) => gaussian::max_gaussian_heuristic(&self.family, c, seed),
            _ => Err(GeomError::InvalidInput("unsupported pair".into())),
        }
    }
}

/// Pool the family's halfspaces, deduplicating repeats (families share
/// bounding boxes, and tangent constraints recur across members). For equal
/// normals only the tightest offset matters; near-duplicates otherwise feed
/// the LP kernel nearly-singular rows.
pub(crate) fn family_halfspaces(family: &[HPolytope]) -> Result<(usize, Vec<crate::body::Halfspace>)> {
    let first = family
        .first()
        .ok_or_else(|| GeomError::InvalidInput("empty family".into()))?;
    let dim = first.dim;
    let mut hs: Vec<crate::body::Halfspace> = Vec::new();
    for p in family {
        if p.dim != dim {
            return Err(GeomError::DimensionMismatch {
                expected: dim,
                got: p.dim,
            });
        }
        for h in &p.halfspaces {
            match hs.iter_mut().find(|e| {
                e.normal
                    .iter()
                    .zip(&h.normal)
                    .all(|(a, b)| (a - b).abs() < 1e-12)
            }) {
                Some(existing) => existing.offset = existing.offset.min(h.offset),
                None => hs.push(h.clone()),
            }
        }
    }
    Ok((dim, hs))
}
