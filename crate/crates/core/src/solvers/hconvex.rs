//! Largest H-convex set (fixed direction set H, plane only) inside an
//! intersection.
//!
//! On the support-vector chart every chart vertex
//! v_i(λ) = G_i⁻¹(λ_i, λ_{i+1}) is linear in λ, so facet lengths and
//! family-containment are linear constraints and the polygon area is an
//! explicit quadratic form Q(λ) = ½ λᵀMλ whose log is concave on the
//! canonical domain (all facet lengths ≥ 0). Volume maximization is barrier
//! Newton on log Q; the diameter objective is not concave and is handled by
//! a family of linear subproblems (one per vertex pair and probe direction)
//! with the best local witness reported alongside a relaxation upper bound.

use nalgebra::{DMatrix, DVector, Matrix2, Vector2};

use crate::body::{check_not_in_half_sphere, Body, HConvexSet, HPolytope};
use crate::error::{GeomError, Result};
use crate::linalg;
use crate::lp::{lp_solve, Sense};
use crate::solvers::barrier::{self, BarrierOptions, Term};
use crate::solvers::{family_halfspaces, SolveReport, SolveStatus};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HConvexObjective {
    Volume,
    Diameter,
}

/// Chart geometry for a sorted planar direction set.
struct PlanarChart {
    m: usize,
    /// permutation: sorted position -> original index
    perm: Vec<usize>,
    /// vertex maps: v_i(λ) = vx_i·λ + (affine 0), row vectors over sorted λ
    vertex_maps: Vec<[Vec<f64>; 2]>,
    /// facet length functionals over sorted λ
    edge_maps: Vec<Vec<f64>>,
    /// area quadratic form over sorted λ: area = ½ λᵀMλ
    area_form: DMatrix<f64>,
}

impl PlanarChart {
    fn new(hset: &[Vec<f64>]) -> Result<PlanarChart> {
        let m = hset.len();
        check_not_in_half_sphere(hset)?;
        let mut order: Vec<usize> = (0..m).collect();
        let angle = |v: &[f64]| v[1].atan2(v[0]);
        order.sort_by(|&a, &b| angle(&hset[a]).partial_cmp(&angle(&hset[b])).unwrap());
        let sorted: Vec<Vec<f64>> = order.iter().map(|&i| hset[i].clone()).collect();
        for i in 0..m {
            let a = &sorted[i];
            let b = &sorted[(i + 1) % m];
            if linalg::dot(a, b) > 1.0 - 1e-12 {
                return Err(GeomError::InvalidInput("duplicate directions in H".into()));
            }
        }

        // v_i solves [h_i; h_{i+1}] v = (λ_i, λ_{i+1}).
        let mut vertex_maps = Vec::with_capacity(m);
        for i in 0..m {
            let h1 = &sorted[i];
            let h2 = &sorted[(i + 1) % m];
            let g = Matrix2::new(h1[0], h1[1], h2[0], h2[1]);
            let gi = g
                .try_inverse()
                .ok_or(GeomError::HalfSphereViolation)?;
            let mut rows = [vec![0.0; m], vec![0.0; m]];
            for r in 0..2 {
                rows[r][i] = gi[(r, 0)];
                rows[r][(i + 1) % m] = gi[(r, 1)];
            }
            vertex_maps.push(rows);
        }
        // Facet i runs from v_{i-1} to v_i along t_i = rot90(h_i).
        let mut edge_maps = Vec::with_capacity(m);
        for i in 0..m {
            let t = Vector2::new(-sorted[i][1], sorted[i][0]);
            let prev = (i + m - 1) % m;
            let mut row = vec![0.0; m];
            for j in 0..m {
                let dvx = vertex_maps[i][0][j] - vertex_maps[prev][0][j];
                let dvy = vertex_maps[i][1][j] - vertex_maps[prev][1][j];
                row[j] = t[0] * dvx + t[1] * dvy;
            }
            edge_maps.push(row);
        }
        // Quadratic area form by polarization of the shoelace formula.
        let shoelace = |lam: &[f64]| -> f64 {
            let mut area = 0.0;
            for i in 0..m {
                let (x1, y1) = eval_vertex(&vertex_maps[i], lam);
                let (x2, y2) = eval_vertex(&vertex_maps[(i + 1) % m], lam);
                area += x1 * y2 - x2 * y1;
            }
            area / 2.0
        };
        let mut form = DMatrix::zeros(m, m);
        let basis = |i: usize| -> Vec<f64> {
            let mut v = vec![0.0; m];
            v[i] = 1.0;
            v
        };
        for p in 0..m {
            form[(p, p)] = 2.0 * shoelace(&basis(p));
        }
        for p in 0..m {
            for q in (p + 1)..m {
                let mut both = basis(p);
                both[q] = 1.0;
                let v = shoelace(&both) - form[(p, p)] / 2.0 - form[(q, q)] / 2.0;
                form[(p, q)] = v;
                form[(q, p)] = v;
            }
        }
        Ok(PlanarChart {
            m,
            perm: order,
            vertex_maps,
            edge_maps,
            area_form: form,
        })
    }

    fn area(&self, lam: &[f64]) -> f64 {
        let l = DVector::from_column_slice(lam);
        0.5 * (l.transpose() * &self.area_form * &l)[0]
    }

    fn to_original(&self, sorted_lam: &[f64], hset: &[Vec<f64>]) -> HConvexSet {
        let mut supports = vec![0.0; self.m];
        for (pos, &orig) in self.perm.iter().enumerate() {
            supports[orig] = sorted_lam[pos];
        }
        HConvexSet {
            hset: hset.to_vec(),
            supports,
        }
    }
}

fn eval_vertex(map: &[Vec<f64>; 2], lam: &[f64]) -> (f64, f64) {
    (linalg::dot(&map[0], lam), linalg::dot(&map[1], lam))
}

/// Linear constraint rows over the sorted-λ chart: facet nonnegativity and
/// family containment of every chart vertex.
fn chart_rows(chart: &PlanarChart, hs: &[crate::body::Halfspace]) -> Vec<(Vec<f64>, f64)> {
    let mut rows = Vec::new();
    for e in &chart.edge_maps {
        rows.push((e.iter().map(|x| -x).collect(), 0.0)); // -ℓ_i(λ) ≤ 0
    }
    for h in hs {
        for vm in &chart.vertex_maps {
            let row: Vec<f64> = (0..chart.m)
                .map(|j| h.normal[0] * vm[0][j] + h.normal[1] * vm[1][j])
                .collect();
            rows.push((row, h.offset));
        }
    }
    rows
}

pub fn max_hconvex(
    family: &[HPolytope],
    hset: &[Vec<f64>],
    objective: HConvexObjective,
) -> Result<SolveReport> {
    let (d, hs) = family_halfspaces(family)?;
    if d != 2 {
        return Err(GeomError::DimensionTooLarge(d));
    }
    let mut dirs = Vec::with_capacity(hset.len());
    for v in hset {
        let n = linalg::norm(v);
        if n < 1e-12 {
            return Err(GeomError::ZeroVector);
        }
        dirs.push(v.iter().map(|x| x / n).collect::<Vec<f64>>());
    }
    let chart = PlanarChart::new(&dirs)?;
    let rows = chart_rows(&chart, &hs);
    let m = chart.m;

    // Feasible start via the worst-margin LP.
    let mut obj = vec![0.0; m + 1];
    obj[m] = 1.0;
    let mut margin_rows: Vec<(Vec<f64>, f64)> = rows
        .iter()
        .map(|(r, b)| {
            let mut r2 = r.clone();
            r2.push(1.0);
            (r2, *b)
        })
        .collect();
    let mut cap = vec![0.0; m + 1];
    cap[m] = 1.0;
    margin_rows.push((cap, 1e6));
    let start = match lp_solve(&obj, &margin_rows, Sense::Max) {
        Ok(s) => s,
        Err(GeomError::Infeasible) => return Ok(SolveReport::status_only(SolveStatus::Infeasible)),
        Err(e) => return Err(e),
    };
    if start.value < 0.0 {
        return Ok(SolveReport::status_only(SolveStatus::Infeasible));
    }
    // Unbounded growth check: maximize the perimeter.
    let per_obj: Vec<f64> = (0..m)
        .map(|j| chart.edge_maps.iter().map(|e| e[j]).sum())
        .collect();
    match lp_solve(&per_obj, &rows, Sense::Max) {
        Ok(_) => {}
        Err(GeomError::Unbounded) => return Ok(SolveReport::status_only(SolveStatus::Unbounded)),
        Err(e) => return Err(e),
    }

    match objective {
        HConvexObjective::Volume => {
            if start.value < 1e-12 {
                let witness = chart.to_original(&start.point[..m], &dirs);
                let mut rep = SolveReport::optimal(Body::HConvex(witness), 0.0, 0, 0.0);
                rep.degenerate = true;
                return Ok(rep);
            }
            let form = chart.area_form.clone();
            let objective: Term = Box::new(move |x: &DVector<f64>| {
                let q = 0.5 * (x.transpose() * &form * x)[0];
                if q <= 0.0 {
                    return None;
                }
                let mx = &form * x;
                let g = &mx / q;
                let h = &form / q - (&mx * mx.transpose()) / (q * q);
                Some((q.ln(), g, h))
            });
            let terms: Vec<Term> = rows
                .iter()
                .map(|(r, b)| barrier::linear_term(DVector::from_column_slice(r), *b))
                .collect();
            let x0 = DVector::from_vec(start.point[..m].to_vec());
            let out = barrier::maximize(&objective, &terms, x0, &BarrierOptions::default())?;
            let witness = chart.to_original(out.x.as_slice(), &dirs);
            let area = chart.area(out.x.as_slice());
            let mut rep = SolveReport::optimal(
                Body::HConvex(witness),
                area,
                out.iterations,
                out.kkt_residual,
            );
            if !out.converged {
                rep.status = SolveStatus::MaxIter;
            }
            Ok(rep)
        }
        HConvexObjective::Diameter => {
            // One LP per (vertex pair, probe direction); evaluate the true
            // diameter of each optimizer and keep the best. Local search:
            // flagged heuristic, with a relaxation upper bound attached.
            let probes = 32;
            let mut best: Option<(f64, Vec<f64>)> = None;
            for i in 0..m {
                for j in (i + 1)..m {
                    for p in 0..probes {
                        let ang = std::f64::consts::PI * p as f64 / probes as f64;
                        let u = [ang.cos(), ang.sin()];
                        let obj: Vec<f64> = (0..m)
                            .map(|c| {
                                u[0] * (chart.vertex_maps[i][0][c] - chart.vertex_maps[j][0][c])
                                    + u[1] * (chart.vertex_maps[i][1][c] - chart.vertex_maps[j][1][c])
                            })
                            .collect();
                        let Ok(sol) = lp_solve(&obj, &rows, Sense::Max) else { continue };
                        let diam = true_diameter(&chart, &sol.point[..m]);
                        if best.as_ref().map_or(true, |(b, _)| diam > *b) {
                            best = Some((diam, sol.point[..m].to_vec()));
                        }
                    }
                }
            }
            let Some((diam, lam)) = best else {
                return Ok(SolveReport::status_only(SolveStatus::Infeasible));
            };
            let witness = chart.to_original(&lam, &dirs);
            let mut rep = SolveReport::optimal(Body::HConvex(witness), diam, 1, 0.0);
            rep.heuristic = true;
            rep.upper_bound = Some(family_diameter_upper_bound(&hs, 180)?);
            Ok(rep)
        }
    }
}

fn true_diameter(chart: &PlanarChart, lam: &[f64]) -> f64 {
    let verts: Vec<(f64, f64)> = chart
        .vertex_maps
        .iter()
        .map(|vm| eval_vertex(vm, lam))
        .collect();
    let mut best = 0.0f64;
    for i in 0..verts.len() {
        for j in (i + 1)..verts.len() {
            let dx = verts[i].0 - verts[j].0;
            let dy = verts[i].1 - verts[j].1;
            best = best.max((dx * dx + dy * dy).sqrt());
        }
    }
    best
}

/// Upper bound on the diameter of any subset of the family intersection:
/// width sweep over a direction grid with the angular-gap correction.
fn family_diameter_upper_bound(hs: &[crate::body::Halfspace], n: usize) -> Result<f64> {
    let poly = HPolytope::new(2, hs.to_vec())?;
    let mut best = 0.0f64;
    for p in 0..n {
        let ang = std::f64::consts::PI * p as f64 / n as f64;
        let u = vec![ang.cos(), ang.sin()];
        let mu = vec![-u[0], -u[1]];
        let w = poly.support(&u)? + poly.support(&mu)?;
        best = best.max(w);
    }
    Ok(best / (std::f64::consts::PI / (2.0 * n as f64)).cos())
}
