//! Independent containment audit for Tverberg certificates.
//!
//! The membership claim "witness ⊆ conv(∪ part)" is checked through support
//! functions only — h_{conv ∪ A}(u) = max_i h_{A_i}(u) — over a quasi-uniform
//! direction grid, plus an exact LP vertex audit when everything involved is
//! polytopal. This path shares no code with the partition search or the
//! charts; it is what `verify` re-runs on stored certificates.

use crate::body::{support, Body, Vector};
use crate::error::{GeomError, Result};
use crate::lp::{LpProblem, Sense};
use crate::tverberg::TverbergCertificate;

/// Quasi-uniform unit directions: the circle grid in the plane, a Fibonacci
/// sphere in 3D.
pub fn direction_grid(d: usize, m: usize) -> Vec<Vector> {
    match d {
        1 => vec![vec![1.0], vec![-1.0]],
        2 => (0..m)
            .map(|k| {
                let t = 2.0 * std::f64::consts::PI * k as f64 / m as f64;
                vec![t.cos(), t.sin()]
            })
            .collect(),
        _ => {
            let golden = std::f64::consts::PI * (3.0 - 5.0f64.sqrt());
            (0..m)
                .map(|k| {
                    let z = 1.0 - 2.0 * (k as f64 + 0.5) / m as f64;
                    let rad = (1.0 - z * z).sqrt();
                    let t = golden * k as f64;
                    vec![rad * t.cos(), rad * t.sin(), z]
                })
                .collect()
        }
    }
}

/// Support-gap table: for each part j and direction u,
/// gap = max_{i ∈ part j} h_{A_i}(u) − h_witness(u). Nonnegative gaps mean
/// the witness sits inside the part's hull of unions (to that resolution).
pub fn containment_audit(
    witness: &Body,
    parts: &[Vec<Body>],
    directions: usize,
) -> Result<Vec<Vec<f64>>> {
    if directions < 64 {
        return Err(GeomError::InvalidInput("need at least 64 directions".into()));
    }
    let d = witness.dim();
    let grid = direction_grid(d, directions);
    let mut table = Vec::with_capacity(parts.len());
    for part in parts {
        let mut gaps = Vec::with_capacity(grid.len());
        for u in &grid {
            let hull: f64 = part
                .iter()
                .map(|b| support(b, u))
                .collect::<Result<Vec<f64>>>()?
                .into_iter()
                .fold(f64::NEG_INFINITY, f64::max);
            gaps.push(hull - support(witness, u)?);
        }
        table.push(gaps);
    }
    Ok(table)
}

/// Candidate vertex set of a polytopal body; `None` for ellipsoids.
fn polytope_vertices(body: &Body) -> Result<Option<Vec<Vector>>> {
    Ok(match body {
        Body::AxisBox(b) => {
            let d = b.dim();
            let mut out = Vec::with_capacity(1 << d);
            for mask in 0..(1u32 << d) {
                out.push(
                    (0..d)
                        .map(|i| {
                            b.center[i]
                                + if mask >> i & 1 == 1 { 1.0 } else { -1.0 } * b.halfwidths[i]
                        })
                        .collect(),
                );
            }
            Some(out)
        }
        Body::Zonotope(z) => {
            let k = z.num_directions();
            if k > 12 {
                return Ok(None);
            }
            let mut out = Vec::with_capacity(1 << k);
            for mask in 0..(1u32 << k) {
                let mut x = z.center.clone();
                for (i, (v, a)) in z.directions.iter().zip(&z.coeffs).enumerate() {
                    let s = if mask >> i & 1 == 1 { 0.5 } else { -0.5 };
                    for (xi, vi) in x.iter_mut().zip(v) {
                        *xi += s * a * vi;
                    }
                }
                out.push(x);
            }
            Some(out)
        }
        Body::HPolytope(p) => Some(p.vertices()?),
        Body::HConvex(h) => Some(h.vertices()?),
        Body::Ellipsoid(_) => None,
    })
}

/// Is `x` a convex combination of `points`? One LP feasibility problem.
fn in_hull(x: &[f64], points: &[Vector]) -> Result<bool> {
    let n = points.len();
    let d = x.len();
    let mut p = LpProblem::new(vec![0.0; n], Sense::Max);
    for i in 0..n {
        p.set_nonneg(i);
    }
    for c in 0..d {
        let row: Vec<f64> = points.iter().map(|pt| pt[c]).collect();
        p.add_eq(row, x[c]);
    }
    p.add_eq(vec![1.0; n], 1.0);
    match p.solve() {
        Ok(_) => Ok(true),
        Err(GeomError::Infeasible) => Ok(false),
        Err(e) => Err(e),
    }
}

/// Exact vertex audit: every witness vertex is a convex combination of the
/// part's pooled vertices. Only applies when witness and parts are
/// polytopal; returns `None` otherwise.
pub fn exact_vertex_audit(witness: &Body, parts: &[Vec<Body>]) -> Result<Option<bool>> {
    let Some(wverts) = polytope_vertices(witness)? else {
        return Ok(None);
    };
    let mut part_vertex_sets = Vec::with_capacity(parts.len());
    for part in parts {
        let mut pooled = Vec::new();
        for b in part {
            match polytope_vertices(b)? {
                Some(vs) => pooled.extend(vs),
                None => return Ok(None),
            }
        }
        part_vertex_sets.push(pooled);
    }
    for pooled in &part_vertex_sets {
        for v in &wverts {
            if !in_hull_with_tol(v, pooled)? {
                return Ok(Some(false));
            }
        }
    }
    Ok(Some(true))
}

/// Hull membership with a small inflation: vertices that sit exactly on the
/// hull boundary must not fail to floating-point noise, so the target point
/// is pulled a hair toward the pooled centroid before testing.
fn in_hull_with_tol(x: &[f64], points: &[Vector]) -> Result<bool> {
    if in_hull(x, points)? {
        return Ok(true);
    }
    let d = x.len();
    let centroid: Vector = (0..d)
        .map(|c| points.iter().map(|p| p[c]).sum::<f64>() / points.len() as f64)
        .collect();
    let eps = 1e-6;
    let pulled: Vector = x
        .iter()
        .zip(&centroid)
        .map(|(xi, ci)| xi + eps * (ci - xi))
        .collect();
    in_hull(&pulled, points)
}

/// Re-verification of a stored certificate, independent of the search:
/// partition validity, threshold, fresh-grid support gaps, and the exact
/// vertex audit where applicable. Uses the default slack 1e-6.
pub fn verify_certificate(cert: &TverbergCertificate) -> Result<bool> {
    verify_certificate_with(cert, 1e-6)
}

pub fn verify_certificate_with(cert: &TverbergCertificate, slack: f64) -> Result<bool> {
    if !cert.partition_is_valid(cert.witnesses.len()) {
        return Ok(false);
    }
    if cert.partition.len() != cert.r {
        return Ok(false);
    }
    let obj = cert.chart.objective(&cert.decoded_witness)?;
    if obj < cert.threshold - slack {
        return Ok(false);
    }
    let parts: Vec<Vec<Body>> = cert
        .partition
        .iter()
        .map(|part| part.iter().map(|&i| cert.witnesses[i].clone()).collect())
        .collect();
    // fresh (prime) direction count, distinct from the search's grid
    let table = containment_audit(&cert.decoded_witness, &parts, 509)?;
    for gaps in &table {
        if gaps.iter().any(|&g| g < -slack) {
            return Ok(false);
        }
    }
    if let Some(ok) = exact_vertex_audit(&cert.decoded_witness, &parts)? {
        if !ok {
            return Ok(false);
        }
    }
    Ok(true)
}
