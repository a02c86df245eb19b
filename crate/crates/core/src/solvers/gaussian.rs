//! Gaussian-measure objectives. The axis-box case is exact: the measure is a
//! product of error-function factors with analytic gradient and Hessian, and
//! its log is concave on the (center, halfwidths) chart, so the standard
//! barrier machinery applies. Every other class is a heuristic: Nelder–Mead
//! over the witness parameters with a Monte-Carlo objective, flagged as such
//! in the report.

use nalgebra::{DMatrix, DVector};

use crate::body::{Body, Ellipsoid, HPolytope, Zonotope};
use crate::error::{GeomError, Result};
use crate::linalg;
use crate::measure;
use crate::solvers::barrier::{self, BarrierOptions, Term};
use crate::solvers::boxes;
use crate::solvers::{family_halfspaces, SolveReport, SolveStatus, WitnessClass};

/// Maximum-Gaussian-measure axis-parallel box (exact, analytic derivatives).
pub fn max_gaussian_box(family: &[HPolytope]) -> Result<SolveReport> {
    let (d, hs) = family_halfspaces(family)?;
    // Reuse the box solver's feasibility analysis through a volume pre-solve.
    let pre = boxes::max_volume_box(family)?;
    match pre.status {
        SolveStatus::Infeasible => return Ok(SolveReport::status_only(SolveStatus::Infeasible)),
        SolveStatus::Unbounded => return Ok(SolveReport::status_only(SolveStatus::Unbounded)),
        _ => {}
    }
    if pre.degenerate {
        let mut rep = pre;
        rep.objective_value = 0.0;
        rep.degenerate = true;
        return Ok(rep);
    }
    let Some(Body::AxisBox(start)) = pre.witness else {
        return Err(GeomError::NumericalFailure("missing pre-solve witness".into()));
    };

    let pdf = |x: f64| (-0.5 * x * x).exp() / (2.0 * std::f64::consts::PI).sqrt();
    let obj: Term = Box::new(move |x: &DVector<f64>| {
        let n = x.len() / 2;
        let mut f = 0.0;
        let mut g = DVector::zeros(2 * n);
        let mut h = DMatrix::zeros(2 * n, 2 * n);
        for i in 0..n {
            let (c, w) = (x[i], x[n + i]);
            if w <= 0.0 {
                return None;
            }
            let (u, v) = (c + w, c - w);
            let fv = measure::phi(u) - measure::phi(v);
            if fv <= 1e-300 {
                return None;
            }
            let (pu, pv) = (pdf(u), pdf(v));
            let (dpu, dpv) = (-u * pu, -v * pv);
            let fc = pu - pv;
            let fw = pu + pv;
            let fcc = dpu - dpv;
            let fcw = dpu + dpv;
            let fww = dpu - dpv;
            f += fv.ln();
            g[i] += fc / fv;
            g[n + i] += fw / fv;
            h[(i, i)] += fcc / fv - (fc / fv) * (fc / fv);
            h[(n + i, n + i)] += fww / fv - (fw / fv) * (fw / fv);
            let cross = fcw / fv - (fc / fv) * (fw / fv);
            h[(i, n + i)] += cross;
            h[(n + i, i)] += cross;
        }
        Some((f, g, h))
    });
    let mut terms: Vec<Term> = Vec::new();
    for hsp in &hs {
        let mut row = hsp.normal.clone();
        row.extend(hsp.normal.iter().map(|x| x.abs()));
        terms.push(barrier::linear_term(DVector::from_vec(row), hsp.offset));
    }
    let mut x0 = start.center.clone();
    x0.extend(start.halfwidths.iter().map(|&w| w.max(1e-6)));
    let out = barrier::maximize(&obj, &terms, DVector::from_vec(x0), &BarrierOptions::default())?;
    let center = out.x.as_slice()[..d].to_vec();
    let halfwidths = out.x.as_slice()[d..].to_vec();
    let bx = crate::body::AxisBox::new(center, halfwidths)?;
    let gm = measure::gaussian_box(&bx);
    let mut rep = SolveReport::optimal(Body::AxisBox(bx), gm, out.iterations, out.kkt_residual);
    if !out.converged {
        rep.status = SolveStatus::MaxIter;
    }
    Ok(rep)
}

/// Monte-Carlo Gaussian objective for the non-box classes, optimized by
/// Nelder–Mead without gradients. Heuristic: the report is flagged and the
/// objective carries MC noise at the 1/√samples scale.
pub fn max_gaussian_heuristic(
    family: &[HPolytope],
    class: &WitnessClass,
    seed: u64,
) -> Result<SolveReport> {
    let (d, _) = family_halfspaces(family)?;
    let inter = HPolytope::intersect_family(family)?;
    if inter.is_empty() {
        return Ok(SolveReport::status_only(SolveStatus::Infeasible));
    }
    if !inter.is_bounded() {
        return Ok(SolveReport::status_only(SolveStatus::Unbounded));
    }
    let (c0, r0) = inter.chebyshev_center()?;
    let samples = 10_000;

    let decode: Box<dyn Fn(&[f64]) -> Option<Body>> = match class {
        WitnessClass::Ellipsoid => {
            let d0 = d;
            Box::new(move |x: &[f64]| {
                let center = x[..d0].to_vec();
                let theta = DVector::from_column_slice(&x[d0..]);
                let a = linalg::sym_unpack(&theta, d0);
                if a.clone().cholesky().is_none() {
                    return None;
                }
                Ellipsoid::new(center, linalg::mat_rows(&a)).ok().map(Body::Ellipsoid)
            })
        }
        WitnessClass::Zonotope { directions } => {
            let dirs = directions.clone();
            let d0 = d;
            Box::new(move |x: &[f64]| {
                let center = x[..d0].to_vec();
                let alpha: Vec<f64> = x[d0..].to_vec();
                if alpha.iter().any(|&a| a < 0.0) {
                    return None;
                }
                Zonotope::new(center, dirs.clone(), alpha).ok().map(Body::Zonotope)
            })
        }
        _ => {
            return Err(GeomError::InvalidInput(
                "heuristic Gaussian objective supports ellipsoid and zonotope classes".into(),
            ))
        }
    };
    let x0: Vec<f64> = match class {
        WitnessClass::Ellipsoid => {
            let mut v = c0.clone();
            let a0 = DMatrix::identity(d, d) * (0.4 * r0);
            v.extend(linalg::sym_pack(&a0).iter().copied());
            v
        }
        WitnessClass::Zonotope { directions } => {
            let mut v = c0.clone();
            v.extend(std::iter::repeat(0.4 * r0).take(directions.len()));
            v
        }
        _ => unreachable!(),
    };
    let eval = |x: &[f64]| -> f64 {
        match decode(x) {
            Some(body) => {
                if crate::body::contains(&inter, &body, 1e-9).unwrap_or(false) {
                    measure::gaussian_mc(&body, samples, seed).map(|(v, _)| v).unwrap_or(0.0)
                } else {
                    -1.0
                }
            }
            None => -1.0,
        }
    };
    let best = nelder_mead(&eval, &x0, 0.25 * r0.max(0.1), 120);
    let Some(body) = decode(&best.0) else {
        return Err(GeomError::NumericalFailure("heuristic decode failed".into()));
    };
    let mut rep = SolveReport::optimal(body, best.1, 120, f64::NAN);
    rep.heuristic = true;
    rep.kkt_residual = 0.0;
    Ok(rep)
}

/// Plain Nelder–Mead maximization; returns (best point, best value).
fn nelder_mead(
    f: &dyn Fn(&[f64]) -> f64,
    x0: &[f64],
    scale: f64,
    iters: usize,
) -> (Vec<f64>, f64) {
    let n = x0.len();
    let mut simplex: Vec<Vec<f64>> = vec![x0.to_vec()];
    for i in 0..n {
        let mut v = x0.to_vec();
        v[i] += scale;
        simplex.push(v);
    }
    let mut vals: Vec<f64> = simplex.iter().map(|x| f(x)).collect();
    for _ in 0..iters {
        let mut idx: Vec<usize> = (0..simplex.len()).collect();
        idx.sort_by(|&a, &b| vals[b].partial_cmp(&vals[a]).unwrap());
        let (best, worst) = (idx[0], idx[n]);
        let centroid: Vec<f64> = (0..n)
            .map(|j| {
                idx[..n].iter().map(|&i| simplex[i][j]).sum::<f64>() / n as f64
            })
            .collect();
        let reflect: Vec<f64> = (0..n)
            .map(|j| centroid[j] + (centroid[j] - simplex[worst][j]))
            .collect();
        let fr = f(&reflect);
        if fr > vals[best] {
            let expand: Vec<f64> = (0..n)
                .map(|j| centroid[j] + 2.0 * (centroid[j] - simplex[worst][j]))
                .collect();
            let fe = f(&expand);
            if fe > fr {
                simplex[worst] = expand;
                vals[worst] = fe;
            } else {
                simplex[worst] = reflect;
                vals[worst] = fr;
            }
        } else if fr > vals[idx[n - 1]] {
            simplex[worst] = reflect;
            vals[worst] = fr;
        } else {
            let contract: Vec<f64> = (0..n)
                .map(|j| centroid[j] - 0.5 * (centroid[j] - simplex[worst][j]))
                .collect();
            let fc = f(&contract);
            if fc > vals[worst] {
                simplex[worst] = contract;
                vals[worst] = fc;
            } else {
                // shrink toward best
                let b = simplex[best].clone();
                for (i, s) in simplex.iter_mut().enumerate() {
                    if i != best {
                        for j in 0..n {
                            s[j] = b[j] + 0.5 * (s[j] - b[j]);
                        }
                    }
                }
                vals = simplex.iter().map(|x| f(x)).collect();
            }
        }
    }
    let mut bi = 0;
    for i in 1..vals.len() {
        if vals[i] > vals[bi] {
            bi = i;
        }
    }
    (simplex[bi].clone(), vals[bi])
}
