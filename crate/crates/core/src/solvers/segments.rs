//! Longest increasing segment (endpoints comparable in the coordinatewise
//! order) inside an intersection, by ℓ₁ length. A segment lies in a convex
//! body iff both endpoints do, so with variables (base, delta ≥ 0) this is
//! one LP; the ℓ₁ length Σ delta_i is linear.

use crate::body::{AxisBox, Body, HPolytope, Vector, Zonotope};
use crate::error::{GeomError, Result};
use crate::lp::{LpProblem, Sense};
use crate::solvers::{family_halfspaces, SolveReport, SolveStatus};

/// Build a `Body` for the segment [base, base+delta].
pub fn segment_body(base: &[f64], delta: &[f64]) -> Result<Body> {
    let n = crate::linalg::norm(delta);
    if n < 1e-12 {
        return Ok(Body::AxisBox(AxisBox::new(
            base.to_vec(),
            vec![0.0; base.len()],
        )?));
    }
    let center: Vector = base.iter().zip(delta).map(|(b, d)| b + 0.5 * d).collect();
    Ok(Body::Zonotope(Zonotope::new(
        center,
        vec![delta.to_vec()],
        vec![1.0],
    )?))
}

/// Maximize the ℓ₁ length of an increasing segment in `∩ family`. The
/// report's objective is the ℓ₁ length; the Euclidean length is at least
/// objective/√d by norm comparison.
pub fn max_increasing_segment(family: &[HPolytope]) -> Result<SolveReport> {
    let (d, hs) = family_halfspaces(family)?;
    let n = 2 * d;
    let mut obj = vec![0.0; n];
    for i in 0..d {
        obj[d + i] = 1.0;
    }
    let mut p = LpProblem::new(obj, Sense::Max);
    for i in 0..d {
        p.set_nonneg(d + i);
    }
    for h in &hs {
        // base inside
        let mut row = vec![0.0; n];
        row[..d].copy_from_slice(&h.normal);
        p.add_le(row, h.offset);
        // tip inside
        let mut row = vec![0.0; n];
        row[..d].copy_from_slice(&h.normal);
        row[d..].copy_from_slice(&h.normal);
        p.add_le(row, h.offset);
    }
    let sol = match p.solve() {
        Ok(s) => s,
        Err(GeomError::Infeasible) => return Ok(SolveReport::status_only(SolveStatus::Infeasible)),
        Err(GeomError::Unbounded) => return Ok(SolveReport::status_only(SolveStatus::Unbounded)),
        Err(e) => return Err(e),
    };
    let base = sol.point[..d].to_vec();
    let delta: Vector = sol.point[d..].iter().map(|&x| x.max(0.0)).collect();
    let witness = segment_body(&base, &delta)?;
    let mut rep = SolveReport::optimal(witness, sol.value, 1, 0.0);
    rep.degenerate = sol.value < 1e-12;
    Ok(rep)
}

/// Euclidean length of the segment witness returned by
/// [`max_increasing_segment`].
pub fn segment_l2(report: &SolveReport) -> f64 {
    match &report.witness {
        Some(Body::Zonotope(z)) => z.coeffs.iter().sum(),
        _ => 0.0,
    }
}
