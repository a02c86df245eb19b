//! Largest-margin translate of a fixed template body inside an intersection:
//! `a + K ⊆ F` is the linear condition `⟨a,h⟩ + h_K(h) ≤ b` per halfspace,
//! so the best margin is one LP. The objective value is the margin (≥ 0 iff
//! a translate fits), which makes translate-Helly a clean threshold check.

use crate::body::{Body, HPolytope};
use crate::error::{GeomError, Result};
use crate::lp::{lp_solve, Sense};
use crate::solvers::{family_halfspaces, SolveReport, SolveStatus};

pub fn translate_body(body: &Body, a: &[f64]) -> Body {
    match body {
        Body::AxisBox(b) => {
            let mut c = b.clone();
            for (ci, ai) in c.center.iter_mut().zip(a) {
                *ci += ai;
            }
            Body::AxisBox(c)
        }
        Body::Zonotope(z) => {
            let mut c = z.clone();
            for (ci, ai) in c.center.iter_mut().zip(a) {
                *ci += ai;
            }
            Body::Zonotope(c)
        }
        Body::Ellipsoid(e) => {
            let mut c = e.clone();
            for (ci, ai) in c.center.iter_mut().zip(a) {
                *ci += ai;
            }
            Body::Ellipsoid(c)
        }
        Body::HPolytope(p) => {
            let mut c = p.clone();
            for h in c.halfspaces.iter_mut() {
                h.offset += crate::linalg::dot(&h.normal, a);
            }
            Body::HPolytope(HPolytope::new(c.dim, c.halfspaces).expect("translated polytope"))
        }
        Body::HConvex(h) => {
            let mut c = h.clone();
            for (s, hv) in c.supports.iter_mut().zip(&c.hset) {
                *s += crate::linalg::dot(hv, a);
            }
            Body::HConvex(c)
        }
    }
}

/// Best translate of `template` into `∩ family`; objective value is the
/// worst-halfspace margin of the translated body.
pub fn max_translate(family: &[HPolytope], template: &Body) -> Result<SolveReport> {
    let (d, hs) = family_halfspaces(family)?;
    if template.dim() != d {
        return Err(GeomError::DimensionMismatch {
            expected: d,
            got: template.dim(),
        });
    }
    // One support evaluation per halfspace normal.
    let mut supports = Vec::with_capacity(hs.len());
    for h in &hs {
        supports.push(crate::body::support(template, &h.normal)?);
    }
    // max t s.t. ⟨a,h⟩ + h_K(h) + t ≤ b
    let n = d + 1;
    let mut obj = vec![0.0; n];
    obj[d] = 1.0;
    let mut rows = Vec::new();
    for (h, s) in hs.iter().zip(&supports) {
        let mut row = h.normal.clone();
        row.push(1.0);
        rows.push((row, h.offset - s));
    }
    let sol = match lp_solve(&obj, &rows, Sense::Max) {
        Ok(s) => s,
        Err(GeomError::Unbounded) => return Ok(SolveReport::status_only(SolveStatus::Unbounded)),
        Err(GeomError::Infeasible) => return Ok(SolveReport::status_only(SolveStatus::Infeasible)),
        Err(e) => return Err(e),
    };
    let a = sol.point[..d].to_vec();
    let witness = translate_body(template, &a);
    let mut rep = SolveReport::optimal(witness, sol.value, 1, 0.0);
    rep.translate = Some(a);
    Ok(rep)
}
