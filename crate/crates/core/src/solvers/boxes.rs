//! Largest axis-parallel box inside an intersection: log-volume by barrier
//! Newton, side-length sum by a single LP.
//!
//! Containment of `center ± halfwidths` in the halfspace `⟨x,h⟩ ≤ b` is the
//! linear condition `⟨center,h⟩ + Σ_i halfwidths_i·|h_i| ≤ b`, so the
//! feasible (center, halfwidths) region is itself a polytope.

use nalgebra::{DMatrix, DVector};

use crate::body::{AxisBox, Body, Halfspace, HPolytope};
use crate::error::{GeomError, Result};
use crate::lp::{lp_solve, Sense};
use crate::solvers::barrier::{self, BarrierOptions, Term};
use crate::solvers::{family_halfspaces, SolveReport, SolveStatus};

/// Row of box-containment coefficients over variables (center, halfwidths).
fn containment_row(h: &Halfspace, d: usize) -> Vec<f64> {
    let mut row = Vec::with_capacity(2 * d);
    row.extend(h.normal.iter().copied());
    row.extend(h.normal.iter().map(|x| x.abs()));
    row
}

/// Strictly feasible start: maximize the worst slack t over
/// (center, halfwidths, t). Returns (center, halfwidths, t*).
fn feasible_start(hs: &[Halfspace], d: usize) -> Result<(Vec<f64>, Vec<f64>, f64)> {
    let n = 2 * d + 1;
    let mut obj = vec![0.0; n];
    obj[2 * d] = 1.0;
    let mut rows = Vec::new();
    for h in hs {
        let mut row = containment_row(h, d);
        row.push(1.0);
        rows.push((row, h.offset));
    }
    for i in 0..d {
        let mut row = vec![0.0; n];
        row[d + i] = -1.0;
        row[2 * d] = 1.0;
        rows.push((row, 0.0)); // t ≤ w_i
    }
    // Cap t so the LP cannot be unbounded through the slack variable alone.
    let mut cap = vec![0.0; n];
    cap[2 * d] = 1.0;
    rows.push((cap, 1e6));
    let sol = lp_solve(&obj, &rows, Sense::Max)?;
    Ok((
        sol.point[..d].to_vec(),
        sol.point[d..2 * d].to_vec(),
        sol.value,
    ))
}

/// Detect whether the box objective is unbounded over the family: LP
/// maximize Σ halfwidths under containment.
fn growth_unbounded(hs: &[Halfspace], d: usize) -> Result<bool> {
    let mut obj = vec![0.0; 2 * d];
    for i in 0..d {
        obj[d + i] = 1.0;
    }
    let mut rows: Vec<(Vec<f64>, f64)> =
        hs.iter().map(|h| (containment_row(h, d), h.offset)).collect();
    for i in 0..d {
        let mut row = vec![0.0; 2 * d];
        row[d + i] = -1.0;
        rows.push((row, 0.0));
    }
    match lp_solve(&obj, &rows, Sense::Max) {
        Ok(_) => Ok(false),
        Err(GeomError::Unbounded) => Ok(true),
        Err(e) => Err(e),
    }
}

/// Maximum-volume axis-parallel box in `∩ family`.
pub fn max_volume_box(family: &[HPolytope]) -> Result<SolveReport> {
    let (d, hs) = family_halfspaces(family)?;
    let (c0, w0, tstar) = match feasible_start(&hs, d) {
        Ok(v) => v,
        Err(GeomError::Infeasible) => return Ok(SolveReport::status_only(SolveStatus::Infeasible)),
        Err(GeomError::Unbounded) => return Ok(SolveReport::status_only(SolveStatus::Unbounded)),
        Err(e) => return Err(e),
    };
    if tstar < 0.0 {
        return Ok(SolveReport::status_only(SolveStatus::Infeasible));
    }
    if growth_unbounded(&hs, d)? {
        return Ok(SolveReport::status_only(SolveStatus::Unbounded));
    }
    if tstar < 1e-12 {
        // Lower-dimensional intersection: optimal volume 0, degenerate.
        let w = w0.iter().map(|&x| x.max(0.0)).collect::<Vec<f64>>();
        let witness = AxisBox::new(c0, w)?;
        let mut rep = SolveReport::optimal(Body::AxisBox(witness), 0.0, 0, 0.0);
        rep.degenerate = true;
        return Ok(rep);
    }

    // Barrier ascent of Σ log(2 w_i) over the containment polytope.
    let mut terms: Vec<Term> = Vec::new();
    for h in &hs {
        terms.push(barrier::linear_term(
            DVector::from_vec(containment_row(h, d)),
            h.offset,
        ));
    }
    let obj: Term = Box::new(move |x: &DVector<f64>| {
        let n = x.len() / 2;
        let mut f = 0.0;
        let mut g = DVector::zeros(2 * n);
        let mut hess = DMatrix::zeros(2 * n, 2 * n);
        for i in 0..n {
            let w = x[n + i];
            if w <= 0.0 {
                return None;
            }
            f += (2.0 * w).ln();
            g[n + i] = 1.0 / w;
            hess[(n + i, n + i)] = -1.0 / (w * w);
        }
        Some((f, g, hess))
    });
    let mut x0 = c0;
    x0.extend(w0);
    let out = barrier::maximize(&obj, &terms, DVector::from_vec(x0), &BarrierOptions::default())?;
    let center = out.x.as_slice()[..d].to_vec();
    let halfwidths = out.x.as_slice()[d..].to_vec();
    let witness = AxisBox::new(center, halfwidths)?;
    let volume = witness.volume();
    let mut rep = SolveReport::optimal(Body::AxisBox(witness), volume, out.iterations, out.kkt_residual);
    if !out.converged {
        rep.status = SolveStatus::MaxIter;
    }
    Ok(rep)
}

/// Maximum side-length-sum (Σ 2·halfwidths) axis-parallel box: a single LP.
/// Linear surrogate for the diameter objective.
pub fn max_perimeter_box(family: &[HPolytope]) -> Result<SolveReport> {
    let (d, hs) = family_halfspaces(family)?;
    let mut obj = vec![0.0; 2 * d];
    for i in 0..d {
        obj[d + i] = 2.0;
    }
    let mut rows: Vec<(Vec<f64>, f64)> =
        hs.iter().map(|h| (containment_row(h, d), h.offset)).collect();
    for i in 0..d {
        let mut row = vec![0.0; 2 * d];
        row[d + i] = -1.0;
        rows.push((row, 0.0));
    }
    let sol = match lp_solve(&obj, &rows, Sense::Max) {
        Ok(s) => s,
        Err(GeomError::Infeasible) => return Ok(SolveReport::status_only(SolveStatus::Infeasible)),
        Err(GeomError::Unbounded) => return Ok(SolveReport::status_only(SolveStatus::Unbounded)),
        Err(e) => return Err(e),
    };
    let center = sol.point[..d].to_vec();
    let halfwidths: Vec<f64> = sol.point[d..].iter().map(|&w| w.max(0.0)).collect();
    let witness = AxisBox::new(center, halfwidths)?;
    let degenerate = witness.is_degenerate();
    let mut rep = SolveReport::optimal(Body::AxisBox(witness), sol.value, 1, 0.0);
    rep.degenerate = degenerate;
    Ok(rep)
}
