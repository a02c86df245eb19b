//! Simultaneous ε-approximation: one translated shape A with
//! `a + A ⊆ K ⊆ a + (1+ε)A` for every K in the family, and the bisection
//! search for the smallest feasible ε.
//!
//! For a fixed ε both containments are linear in the shape parameters: the
//! inner one through support-function rows, the outer one on each family
//! member's vertex list (with auxiliary coordinates for the zonotope class),
//! so feasibility is one LP.

use crate::body::{AxisBox, Body, HPolytope, Vector, Zonotope};
use crate::error::{GeomError, Result};
use crate::linalg;
use crate::lp::{LpProblem, Sense};

#[derive(Debug, Clone, PartialEq)]
pub enum ApproxClass {
    AxisBox,
    Zonotope { directions: Vec<Vector> },
}

#[derive(Debug, Clone)]
pub struct ApproxResult {
    pub feasible: bool,
    pub witness: Option<Body>,
    pub translate: Option<Vector>,
}

fn family_vertices(family: &[HPolytope]) -> Result<Vec<Vec<Vector>>> {
    family.iter().map(|p| p.vertices()).collect()
}

/// Decide whether one translate of a shape in `class` simultaneously
/// ε-approximates every member of the family.
pub fn simultaneous_approx(
    family: &[HPolytope],
    class: &ApproxClass,
    eps: f64,
) -> Result<ApproxResult> {
    if family.is_empty() {
        return Err(GeomError::InvalidInput("empty family".into()));
    }
    let d = family[0].dim;
    if d > 3 {
        return Err(GeomError::DimensionTooLarge(d));
    }
    for p in family {
        if !p.is_bounded() {
            return Err(GeomError::Unbounded);
        }
    }
    let verts = family_vertices(family)?;
    match class {
        ApproxClass::AxisBox => approx_box(family, &verts, d, eps),
        ApproxClass::Zonotope { directions } => approx_zonotope(family, &verts, d, directions, eps),
    }
}

fn approx_box(
    family: &[HPolytope],
    verts: &[Vec<Vector>],
    d: usize,
    eps: f64,
) -> Result<ApproxResult> {
    // Variables: translate a (free, d) + halfwidths w (nonneg, d) + margin t.
    let n = 2 * d + 1;
    let mut obj = vec![0.0; n];
    obj[n - 1] = 1.0;
    let mut p = LpProblem::new(obj, Sense::Max);
    for i in 0..d {
        p.set_nonneg(d + i);
    }
    let row_t = |mut row: Vec<f64>| {
        row.push(1.0);
        row
    };
    for body in family {
        for h in &body.halfspaces {
            // inner: ⟨a,h⟩ + Σ w_i |h_i| ≤ b
            let mut row = h.normal.clone();
            row.extend(h.normal.iter().map(|x| x.abs()));
            p.add_le(row_t(row), h.offset);
        }
    }
    for vs in verts {
        for v in vs {
            for j in 0..d {
                // outer: |v_j − a_j| ≤ (1+ε)·w_j
                let mut row = vec![0.0; 2 * d];
                row[j] = -1.0;
                row[d + j] = -(1.0 + eps);
                p.add_le(row_t(row), -v[j]);
                let mut row = vec![0.0; 2 * d];
                row[j] = 1.0;
                row[d + j] = -(1.0 + eps);
                p.add_le(row_t(row), v[j]);
            }
        }
    }
    let mut cap = vec![0.0; n];
    cap[n - 1] = 1.0;
    p.add_le(cap, 1.0);
    match p.solve() {
        Ok(sol) if sol.value >= -1e-9 => {
            let a = sol.point[..d].to_vec();
            let w: Vector = sol.point[d..2 * d].iter().map(|&x| x.max(0.0)).collect();
            Ok(ApproxResult {
                feasible: true,
                witness: Some(Body::AxisBox(AxisBox::new(a.clone(), w)?)),
                translate: Some(a),
            })
        }
        Ok(_) | Err(GeomError::Infeasible) => Ok(ApproxResult {
            feasible: false,
            witness: None,
            translate: None,
        }),
        Err(e) => Err(e),
    }
}

fn approx_zonotope(
    family: &[HPolytope],
    verts: &[Vec<Vector>],
    d: usize,
    directions: &[Vector],
    eps: f64,
) -> Result<ApproxResult> {
    let k = directions.len();
    let mut dirs: Vec<Vector> = Vec::with_capacity(k);
    for v in directions {
        let nn = linalg::norm(v);
        if nn < 1e-12 {
            return Err(GeomError::ZeroVector);
        }
        dirs.push(v.iter().map(|x| x / nn).collect());
    }
    let total_verts: usize = verts.iter().map(|v| v.len()).sum();
    // Variables: a (d) | α (k, nonneg) | per-vertex chart coords c (k each) | t.
    let n = d + k + total_verts * k + 1;
    let t_ix = n - 1;
    let mut obj = vec![0.0; n];
    obj[t_ix] = 1.0;
    let mut p = LpProblem::new(obj, Sense::Max);
    for i in 0..k {
        p.set_nonneg(d + i);
    }
    // inner containment rows
    for body in family {
        for h in &body.halfspaces {
            let mut row = vec![0.0; n];
            for j in 0..d {
                row[j] = h.normal[j];
            }
            for i in 0..k {
                row[d + i] = 0.5 * linalg::dot(&dirs[i], &h.normal).abs();
            }
            row[t_ix] = 1.0;
            p.add_le(row, h.offset);
        }
    }
    // outer containment: v − a = Σ_i c_{v,i}·dir_i with |c_{v,i}| ≤ (1+ε)α_i/2
    let mut vofs = d + k;
    for vs in verts {
        for v in vs {
            for j in 0..d {
                let mut row = vec![0.0; n];
                row[j] = 1.0; // a_j
                for i in 0..k {
                    row[vofs + i] = dirs[i][j];
                }
                p.add_eq(row, v[j]);
            }
            for i in 0..k {
                let mut row = vec![0.0; n];
                row[vofs + i] = 1.0;
                row[d + i] = -(1.0 + eps) * 0.5;
                p.add_le(row, 0.0);
                let mut row = vec![0.0; n];
                row[vofs + i] = -1.0;
                row[d + i] = -(1.0 + eps) * 0.5;
                p.add_le(row, 0.0);
            }
            vofs += k;
        }
    }
    let mut cap = vec![0.0; n];
    cap[t_ix] = 1.0;
    p.add_le(cap, 1.0);
    match p.solve() {
        Ok(sol) if sol.value >= -1e-9 => {
            let a = sol.point[..d].to_vec();
            let alpha: Vector = sol.point[d..d + k].iter().map(|&x| x.max(0.0)).collect();
            let z = Zonotope::new(a.clone(), dirs, alpha)?;
            Ok(ApproxResult {
                feasible: true,
                witness: Some(Body::Zonotope(z)),
                translate: Some(a),
            })
        }
        Ok(_) | Err(GeomError::Infeasible) => Ok(ApproxResult {
            feasible: false,
            witness: None,
            translate: None,
        }),
        Err(e) => Err(e),
    }
}

/// Smallest ε admitting a simultaneous approximation, by bisection with a
/// doubling upper bracket; terminates when the bracket is narrower than 1e-6
/// and returns the feasible endpoint.
pub fn min_eps_approx(
    family: &[HPolytope],
    class: &ApproxClass,
) -> Result<(f64, Body, Vector)> {
    if family.is_empty() {
        return Err(GeomError::InvalidInput("empty family".into()));
    }
    for p in family {
        if !p.is_bounded() {
            return Err(GeomError::NoFiniteEps);
        }
    }
    let check = |eps: f64| simultaneous_approx(family, class, eps);
    let at_zero = check(0.0)?;
    if at_zero.feasible {
        return Ok((0.0, at_zero.witness.unwrap(), at_zero.translate.unwrap()));
    }
    let mut lo = 0.0;
    let mut hi = 1.0;
    let mut hi_res = check(hi)?;
    while !hi_res.feasible {
        lo = hi;
        hi *= 2.0;
        if hi > 1e9 {
            return Err(GeomError::NoFiniteEps);
        }
        hi_res = check(hi)?;
    }
    while hi - lo > 1e-6 {
        let mid = 0.5 * (lo + hi);
        let res = check(mid)?;
        if res.feasible {
            hi = mid;
            hi_res = res;
        } else {
            lo = mid;
        }
    }
    Ok((
        hi,
        hi_res.witness.unwrap(),
        hi_res.translate.unwrap(),
    ))
}
