//! The John contact-point counterexample: d(d+3)/2 unit vectors u_i and
//! weights λ_i > 0 with Σ λ_i u_i⊗u_i = I and Σ λ_i u_i = 0, critical in the
//! sense that no proper subset's tensor system reaches the same target. The
//! tangent halfspaces { x : ⟨x,u_i⟩ ≤ 1 } then have the unit ball as the
//! maximum-volume ellipsoid of their full intersection, while every proper
//! subfamily admits a strictly larger one — showing d(d+3)/2 − 1 sets do not
//! suffice in the colorful/matroid ellipsoid theorems.
//!
//! For d = 2 the regular pentagon directions with uniform weights 2/5
//! satisfy the identity exactly; the construction is verified numerically
//! rather than assumed, with a random-restart search as fallback.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::body::{HPolytope, Halfspace, Vector};
use crate::error::{GeomError, Result};
use crate::helly::generators::BOUND_RADIUS;
use crate::lp::{LpProblem, Sense};
use crate::rng::seeded_rng;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct JohnCertificate {
    pub directions: Vec<Vector>,
    pub weights: Vec<f64>,
    /// max-norm residual of Σ λ u⊗u − I
    pub identity_residual: f64,
    /// Euclidean norm of Σ λ u
    pub balance_residual: f64,
    /// true iff every proper subset fails the tensor system (LP-infeasible)
    pub subset_critical: bool,
    /// area of the maximum ellipse of the full family (π for the disc)
    pub full_mvie_area: f64,
    /// per-dropped-index MVIE areas of the 4-subfamilies (all exceed π)
    pub subset_mvie_areas: Vec<f64>,
}

impl JohnCertificate {
    pub fn residual(&self) -> f64 {
        self.identity_residual.max(self.balance_residual)
    }
}

/// Can nonnegative weights on `dirs[subset]` reproduce Σ μ u⊗u = I/d and
/// Σ μ u = 0? (Σμ = 1 follows from the trace.) Criticality requires NO for
/// every proper subset.
fn subset_solves_john(dirs: &[Vector], subset: &[usize]) -> Result<bool> {
    let n = subset.len();
    let mut p = LpProblem::new(vec![0.0; n], Sense::Max);
    for i in 0..n {
        p.set_nonneg(i);
    }
    let d = dirs[0].len();
    for r in 0..d {
        for c in r..d {
            let row: Vec<f64> = subset.iter().map(|&i| dirs[i][r] * dirs[i][c]).collect();
            let rhs = if r == c { 1.0 / d as f64 } else { 0.0 };
            p.add_eq(row, rhs);
        }
    }
    for c in 0..d {
        let row: Vec<f64> = subset.iter().map(|&i| dirs[i][c]).collect();
        p.add_eq(row, 0.0);
    }
    match p.solve() {
        Ok(_) => Ok(true),
        Err(GeomError::Infeasible) => Ok(false),
        Err(e) => Err(e),
    }
}

fn residuals(dirs: &[Vector], weights: &[f64]) -> (f64, f64) {
    let d = dirs[0].len();
    let mut id_res = 0.0f64;
    for r in 0..d {
        for c in 0..d {
            let mut v = 0.0;
            for (u, w) in dirs.iter().zip(weights) {
                v += w * u[r] * u[c];
            }
            let target = if r == c { 1.0 } else { 0.0 };
            id_res = id_res.max((v - target).abs());
        }
    }
    let mut bal = vec![0.0; d];
    for (u, w) in dirs.iter().zip(weights) {
        for c in 0..d {
            bal[c] += w * u[c];
        }
    }
    (id_res, crate::linalg::norm(&bal))
}

fn verify(dirs: &[Vector]) -> Result<Option<JohnCertificate>> {
    let n = dirs.len();
    // Solve for weights by LP feasibility on the full set.
    if !subset_solves_john(dirs, &(0..n).collect::<Vec<_>>())? {
        return Ok(None);
    }
    // Recover explicit weights: maximize the smallest weight for a strictly
    // positive decomposition.
    let d = dirs[0].len();
    let mut p = LpProblem::new(
        {
            let mut o = vec![0.0; n + 1];
            o[n] = 1.0;
            o
        },
        Sense::Max,
    );
    for i in 0..n {
        p.set_nonneg(i);
    }
    for r in 0..d {
        for c in r..d {
            let mut row: Vec<f64> = dirs.iter().map(|u| u[r] * u[c]).collect();
            row.push(0.0);
            p.add_eq(row, if r == c { 1.0 / d as f64 } else { 0.0 });
        }
    }
    for c in 0..d {
        let mut row: Vec<f64> = dirs.iter().map(|u| u[c]).collect();
        row.push(0.0);
        p.add_eq(row, 0.0);
    }
    for i in 0..n {
        let mut row = vec![0.0; n + 1];
        row[i] = -1.0;
        row[n] = 1.0;
        p.add_le(row, 0.0); // t ≤ μ_i
    }
    let sol = match p.solve() {
        Ok(s) => s,
        Err(GeomError::Infeasible) => return Ok(None),
        Err(e) => return Err(e),
    };
    if sol.value <= 1e-9 {
        return Ok(None); // weights not strictly positive
    }
    // μ sums to 1 by the trace identity; λ = d·μ.
    let weights: Vec<f64> = sol.point[..n].iter().map(|&m| m * d as f64).collect();
    let (id_res, bal_res) = residuals(dirs, &weights);
    let mut critical = true;
    for skip in 0..n {
        let subset: Vec<usize> = (0..n).filter(|&i| i != skip).collect();
        if subset_solves_john(dirs, &subset)? {
            critical = false;
            break;
        }
    }
    Ok(Some(JohnCertificate {
        directions: dirs.to_vec(),
        weights,
        identity_residual: id_res,
        balance_residual: bal_res,
        subset_critical: critical,
        full_mvie_area: f64::NAN,
        subset_mvie_areas: Vec::new(),
    }))
}

/// Construct the d = 2 counterexample family: five bodies, each one tangent
/// halfspace of the unit disc intersected with the bounding box, whose full
/// intersection has the unit disc as its largest ellipse while every
/// 4-subfamily admits a strictly larger one.
pub fn john_counterexample(d: usize) -> Result<(Vec<HPolytope>, JohnCertificate)> {
    if d != 2 {
        return Err(GeomError::DimensionTooLarge(d));
    }
    let n = d * (d + 3) / 2;
    // Regular pentagon directions: Σ (2/5) u⊗u = I and Σ u = 0 exactly.
    let pentagon: Vec<Vector> = (0..n)
        .map(|k| {
            let t = 2.0 * std::f64::consts::PI * k as f64 / n as f64;
            vec![t.cos(), t.sin()]
        })
        .collect();
    let mut cert = verify(&pentagon)?;
    if cert.as_ref().map_or(true, |c| {
        !c.subset_critical || c.residual() >= 1e-9
    }) {
        // Random-restart fallback; the pentagon passes in practice, but the
        // criticality audit is a numerical check, not an assumption.
        let mut rng = seeded_rng(0x6a6f686e, 0);
        cert = None;
        for _restart in 0..10_000 {
            let dirs: Vec<Vector> = (0..n)
                .map(|_| {
                    let t: f64 = rng.gen_range(0.0..2.0 * std::f64::consts::PI);
                    vec![t.cos(), t.sin()]
                })
                .collect();
            if let Some(c) = verify(&dirs)? {
                if c.subset_critical && c.residual() < 1e-9 {
                    cert = Some(c);
                    break;
                }
            }
        }
    }
    let mut cert = cert.ok_or(GeomError::SearchFailed(10_000))?;
    let family: Vec<HPolytope> = cert
        .directions
        .iter()
        .map(|u| {
            let mut hs = vec![Halfspace::new(u.clone(), 1.0).expect("unit direction")];
            hs.extend(HPolytope::bounding_box(2, BOUND_RADIUS).halfspaces);
            HPolytope::new(2, hs).expect("tangent body")
        })
        .collect();
    // Record the sharpness data: the full family's maximum ellipse and the
    // (strictly larger) maxima of the five 4-subfamilies.
    use crate::solvers::{max_volume_ellipsoid, EllipsoidConstraint};
    cert.full_mvie_area =
        max_volume_ellipsoid(&family, EllipsoidConstraint::Free)?.objective_value;
    for skip in 0..family.len() {
        let sub: Vec<HPolytope> = family
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != skip)
            .map(|(_, b)| b.clone())
            .collect();
        cert.subset_mvie_areas
            .push(max_volume_ellipsoid(&sub, EllipsoidConstraint::Free)?.objective_value);
    }
    Ok((family, cert))
}
