//! Inscribed-ellipsoid solvers.
//!
//! An ellipsoid `a + A·B_d` (A symmetric positive definite) sits inside the
//! halfspace `⟨x,h⟩ ≤ b` iff `⟨a,h⟩ + ‖A·h‖₂ ≤ b`, so maximizing `log det A`
//! over those second-order constraints is a convex program. We optimize over
//! the d(d+1)/2 upper-triangle entries of A (or the d diagonal entries for
//! the axis-parallel variant, or with the center pinned for the centered
//! variant) with a log barrier and damped Newton steps; exact gradients and
//! Hessians throughout.

use nalgebra::{DMatrix, DVector};

use crate::body::{Body, Ellipsoid, Halfspace, HPolytope};
use crate::error::Result;
use crate::linalg;
use crate::solvers::barrier::{self, BarrierOptions, Term};
use crate::solvers::{family_halfspaces, SolveReport, SolveStatus};
use crate::SPD_EIGENVALUE_FLOOR;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EllipsoidConstraint {
    Free,
    CenteredAtOrigin,
    AxisParallel,
}

struct Chart {
    d: usize,
    has_center: bool,
    basis: Vec<DMatrix<f64>>,
}

impl Chart {
    fn new(d: usize, constraint: EllipsoidConstraint) -> Chart {
        let basis = match constraint {
            EllipsoidConstraint::AxisParallel => (0..d)
                .map(|i| {
                    let mut e = DMatrix::zeros(d, d);
                    e[(i, i)] = 1.0;
                    e
                })
                .collect(),
            _ => linalg::sym_basis(d),
        };
        Chart {
            d,
            has_center: constraint != EllipsoidConstraint::CenteredAtOrigin,
            basis,
        }
    }

    fn nvars(&self) -> usize {
        (if self.has_center { self.d } else { 0 }) + self.basis.len()
    }

    fn center_of(&self, x: &DVector<f64>) -> Vec<f64> {
        if self.has_center {
            x.as_slice()[..self.d].to_vec()
        } else {
            vec![0.0; self.d]
        }
    }

    fn matrix_of(&self, x: &DVector<f64>) -> DMatrix<f64> {
        let off = if self.has_center { self.d } else { 0 };
        let mut a = DMatrix::zeros(self.d, self.d);
        for (p, e) in self.basis.iter().enumerate() {
            a += e * x[off + p];
        }
        a
    }

    fn pack(&self, center: &[f64], a: &DMatrix<f64>) -> DVector<f64> {
        let mut v = Vec::with_capacity(self.nvars());
        if self.has_center {
            v.extend_from_slice(center);
        }
        for e in &self.basis {
            // coefficient of basis element: for E_ii it is A_ii, for
            // E_ij (i<j, stored with both entries 1) it is A_ij.
            let (mut i0, mut j0) = (0, 0);
            'outer: for i in 0..self.d {
                for j in 0..self.d {
                    if e[(i, j)] != 0.0 {
                        (i0, j0) = (i, j);
                        break 'outer;
                    }
                }
            }
            v.push(a[(i0, j0)]);
        }
        DVector::from_vec(v)
    }

    /// Barrier term log(b − ⟨a,h⟩ − ‖A·h‖) for one halfspace.
    fn containment_term<'a>(&'a self, h: &Halfspace) -> Term<'a> {
        let d = self.d;
        let off = if self.has_center { d } else { 0 };
        let n = self.nvars();
        let hn = linalg::to_dvec(&h.normal);
        let b = h.offset;
        // z_p = B_p · h are constant vectors.
        let zs: Vec<DVector<f64>> = self.basis.iter().map(|e| e * &hn).collect();
        let has_center = self.has_center;
        Box::new(move |x: &DVector<f64>| {
            let mut w = DVector::zeros(d);
            for (p, z) in zs.iter().enumerate() {
                w += z * x[off + p];
            }
            let wn = w.norm();
            if wn < 1e-300 {
                return None;
            }
            let mut center_dot = 0.0;
            if has_center {
                for i in 0..d {
                    center_dot += x[i] * hn[i];
                }
            }
            let s = b - center_dot - wn;
            if s <= 0.0 {
                return None;
            }
            // ∇g and ∇²g of g = ⟨a,h⟩ + ‖A(θ)h‖.
            let mut gg = DVector::zeros(n);
            if has_center {
                for i in 0..d {
                    gg[i] = hn[i];
                }
            }
            let wz: Vec<f64> = zs.iter().map(|z| w.dot(z)).collect();
            for p in 0..zs.len() {
                gg[off + p] = wz[p] / wn;
            }
            let mut hg = DMatrix::zeros(n, n);
            for p in 0..zs.len() {
                for q in p..zs.len() {
                    let v = (zs[p].dot(&zs[q]) - wz[p] * wz[q] / (wn * wn)) / wn;
                    hg[(off + p, off + q)] = v;
                    hg[(off + q, off + p)] = v;
                }
            }
            // log slack: value ln s, grad −∇g/s, hess −∇²g/s − ∇g∇gᵀ/s².
            let grad = &gg * (-1.0 / s);
            let hess = hg * (-1.0 / s) - (&gg * gg.transpose()) * (1.0 / (s * s));
            Some((s.ln(), grad, hess))
        })
    }

    /// log det A(θ) with exact derivatives; `None` unless A − floor·I ≻ 0.
    fn logdet_term<'a>(&'a self) -> Term<'a> {
        let n = self.nvars();
        let off = if self.has_center { self.d } else { 0 };
        Box::new(move |x: &DVector<f64>| {
            let a = self.matrix_of(x);
            let shifted = &a - DMatrix::identity(self.d, self.d) * SPD_EIGENVALUE_FLOOR;
            shifted.cholesky()?;
            let chol = a.clone().cholesky()?;
            let logdet = 2.0 * (0..self.d).map(|i| chol.l()[(i, i)].ln()).sum::<f64>();
            let ainv = chol.inverse();
            let mut grad = DVector::zeros(n);
            let mut hess = DMatrix::zeros(n, n);
            let ab: Vec<DMatrix<f64>> = self.basis.iter().map(|e| &ainv * e).collect();
            for p in 0..self.basis.len() {
                grad[off + p] = ab[p].trace();
                for q in p..self.basis.len() {
                    let v = -(&ab[p] * &ab[q]).trace();
                    hess[(off + p, off + q)] = v;
                    hess[(off + q, off + p)] = v;
                }
            }
            Some((logdet, grad, hess))
        })
    }
}

fn prepared_family(family: &[HPolytope]) -> Result<(usize, Vec<Halfspace>, HPolytope)> {
    let (d, hs) = family_halfspaces(family)?;
    let poly = HPolytope::new(d, hs.clone())?;
    Ok((d, hs, poly))
}

/// Maximum-volume inscribed ellipsoid of `∩ family`, optionally centered at
/// the origin or restricted to axis-parallel shape matrices.
pub fn max_volume_ellipsoid(
    family: &[HPolytope],
    constraint: EllipsoidConstraint,
) -> Result<SolveReport> {
    solve_ellipsoid(family, constraint, false)
}

/// Maximum-trace inscribed ellipsoid (linear objective tr A over the same
/// containment constraints). The report records both tr(A) and the axis
/// length sum 2·Σ eigenvalues for the unit-ball chart.
pub fn max_trace_ellipsoid(family: &[HPolytope]) -> Result<SolveReport> {
    solve_ellipsoid(family, EllipsoidConstraint::Free, true)
}

fn solve_ellipsoid(
    family: &[HPolytope],
    constraint: EllipsoidConstraint,
    trace_objective: bool,
) -> Result<SolveReport> {
    let (d, hs, poly) = prepared_family(family)?;
    if poly.is_empty() {
        return Ok(SolveReport::status_only(SolveStatus::Infeasible));
    }
    if !poly.is_bounded() {
        return Ok(SolveReport::status_only(SolveStatus::Unbounded));
    }
    let chart = Chart::new(d, constraint);

    // Strictly feasible start: Chebyshev center and a small ball.
    let (c0, r0) = poly.chebyshev_center()?;
    let (center0, radius0) = if constraint == EllipsoidConstraint::CenteredAtOrigin {
        let r = hs
            .iter()
            .map(|h| h.offset)
            .fold(f64::INFINITY, f64::min);
        if r <= 1e-12 {
            return Ok(SolveReport::status_only(SolveStatus::Infeasible));
        }
        (vec![0.0; d], r)
    } else {
        if r0 <= 1e-12 {
            return Ok(SolveReport::status_only(SolveStatus::Infeasible));
        }
        (c0, r0)
    };
    let a0 = DMatrix::identity(d, d) * (0.4 * radius0);
    let x0 = chart.pack(&center0, &a0);

    let mut terms: Vec<Term> = hs.iter().map(|h| chart.containment_term(h)).collect();
    let logdet = chart.logdet_term();

    let outcome = if trace_objective {
        // PD cone enforced by an extra μ-weighted log det barrier term.
        let n = chart.nvars();
        let off = if chart.has_center { d } else { 0 };
        let basis_traces: Vec<f64> = chart.basis.iter().map(|e| e.trace()).collect();
        let obj: Term = Box::new(move |x: &DVector<f64>| {
            let mut f = 0.0;
            let mut g = DVector::zeros(n);
            for (p, &t) in basis_traces.iter().enumerate() {
                f += t * x[off + p];
                g[off + p] = t;
            }
            Some((f, g, DMatrix::zeros(n, n)))
        });
        terms.push(logdet);
        barrier::maximize(&obj, &terms, x0, &BarrierOptions::default())?
    } else {
        barrier::maximize(&logdet, &terms, x0, &BarrierOptions::default())?
    };

    let center = chart.center_of(&outcome.x);
    let mut a = chart.matrix_of(&outcome.x);
    a = linalg::eigenvalue_floor(&a, SPD_EIGENVALUE_FLOOR);
    let ell = Ellipsoid::new(center, linalg::mat_rows(&a))?;
    let (objective_value, axis_sum) = if trace_objective {
        let tr = a.trace();
        (tr, Some(2.0 * tr))
    } else {
        (ell.volume(), None)
    };
    let mut rep = SolveReport::optimal(
        Body::Ellipsoid(ell),
        objective_value,
        outcome.iterations,
        outcome.kkt_residual,
    );
    rep.axis_length_sum = axis_sum;
    if !outcome.converged {
        rep.status = SolveStatus::MaxIter;
    }
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::GeomError;
    use std::f64::consts::PI;

    fn square() -> HPolytope {
        HPolytope::axis_box(&[-1.0, -1.0], &[1.0, 1.0]).unwrap()
    }

    fn triangle() -> HPolytope {
        HPolytope::new(
            2,
            vec![
                Halfspace::new(vec![-1.0, 0.0], 0.0).unwrap(),
                Halfspace::new(vec![0.0, -1.0], 0.0).unwrap(),
                Halfspace::new(vec![1.0, 1.0], 1.0).unwrap(),
            ],
        )
        .unwrap()
    }

    #[test]
    fn mvie_of_square_is_unit_disc() {
        let rep = max_volume_ellipsoid(&[square()], EllipsoidConstraint::Free).unwrap();
        assert!(rep.is_optimal());
        assert!((rep.objective_value - PI).abs() < 1e-5, "{}", rep.objective_value);
        let Body::Ellipsoid(e) = rep.witness.unwrap() else { panic!() };
        assert!(e.center.iter().all(|c| c.abs() < 1e-5));
    }

    #[test]
    fn mvie_of_triangle_is_steiner_inellipse() {
        // Steiner inellipse of a triangle has area π/(3√3)·|T|; here |T| = ½.
        let expect = PI / (6.0 * 3.0f64.sqrt());
        let rep = max_volume_ellipsoid(&[triangle()], EllipsoidConstraint::Free).unwrap();
        assert!(rep.is_optimal());
        assert!(
            (rep.objective_value - expect).abs() < 1e-4,
            "got {} want {}",
            rep.objective_value,
            expect
        );
    }

    #[test]
    fn mvie_unbounded_family() {
        let p = HPolytope::new(2, vec![Halfspace::new(vec![1.0, 0.0], 0.0).unwrap()]).unwrap();
        let rep = max_volume_ellipsoid(&[p], EllipsoidConstraint::Free).unwrap();
        assert_eq!(rep.status, SolveStatus::Unbounded);
    }

    #[test]
    fn centered_constraint_respected() {
        // Square shifted so the origin is off-center: the centered MVIE is
        // smaller than the free MVIE.
        let shifted = HPolytope::axis_box(&[-0.5, -0.5], &[1.5, 1.5]).unwrap();
        let free = max_volume_ellipsoid(&[shifted.clone()], EllipsoidConstraint::Free).unwrap();
        let centered =
            max_volume_ellipsoid(&[shifted], EllipsoidConstraint::CenteredAtOrigin).unwrap();
        let Body::Ellipsoid(e) = centered.witness.as_ref().unwrap() else { panic!() };
        assert!(e.center.iter().all(|c| c.abs() < 1e-12));
        assert!(centered.objective_value < free.objective_value - 0.1);
        // centered disc radius ½ → area π/4
        assert!((centered.objective_value - PI / 4.0).abs() < 1e-4);
    }

    #[test]
    fn axis_parallel_in_rotated_strip() {
        // Diamond |x|+|y| ≤ 1: the free MVIE is the inscribed disc of radius
        // 1/√2; axis-parallel restriction must agree (a disc is diagonal) and
        // report a diagonal shape matrix.
        let diamond = HPolytope::new(
            2,
            vec![
                Halfspace::new(vec![1.0, 1.0], 1.0).unwrap(),
                Halfspace::new(vec![1.0, -1.0], 1.0).unwrap(),
                Halfspace::new(vec![-1.0, 1.0], 1.0).unwrap(),
                Halfspace::new(vec![-1.0, -1.0], 1.0).unwrap(),
            ],
        )
        .unwrap();
        let rep = max_volume_ellipsoid(&[diamond], EllipsoidConstraint::AxisParallel).unwrap();
        let Body::Ellipsoid(e) = rep.witness.as_ref().unwrap() else { panic!() };
        assert!(e.shape[0][1].abs() < 1e-9);
        // inscribed disc of the unit diamond has radius 1/√2 → area π/2
        assert!((rep.objective_value - PI / 2.0).abs() < 1e-4);
    }

    #[test]
    fn trace_ellipsoid_square_and_thin_box() {
        let rep = max_trace_ellipsoid(&[square()]).unwrap();
        assert!((rep.objective_value - 2.0).abs() < 1e-5);
        assert!((rep.axis_length_sum.unwrap() - 4.0).abs() < 1e-4);
        let thin = HPolytope::axis_box(&[-1.0, -0.1], &[1.0, 0.1]).unwrap();
        let rep = max_trace_ellipsoid(&[thin]).unwrap();
        assert!((rep.objective_value - 1.1).abs() < 1e-4, "{}", rep.objective_value);
    }

    #[test]
    fn trace_rejects_empty_family_list() {
        assert!(matches!(
            max_trace_ellipsoid(&[]),
            Err(GeomError::InvalidInput(_))
        ));
    }
}
