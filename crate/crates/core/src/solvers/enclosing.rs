//! Minimum-volume enclosing ellipsoid by Khachiyan's multiplicative-weights
//! iteration with away steps (the dual is `max log det Σ uᵢ qᵢqᵢᵀ` over the
//! simplex for lifted points q = (x, 1); Frank–Wolfe on that problem is
//! exactly Khachiyan's update, and the away step gives the fast local rate).
//!
//! The returned ellipsoid is inflated by the duality-gap factor so that all
//! input points are certified inside it.

use nalgebra::{DMatrix, DVector};

use crate::body::{Body, Ellipsoid};
use crate::error::{GeomError, Result};
use crate::linalg;
use crate::solvers::SolveReport;

const DUAL_GAP_TOL: f64 = 1e-7;
const MAX_ITERS: usize = 400_000;

/// Minimum-volume ellipsoid containing `points` (≥ d+1 affinely independent).
pub fn min_enclosing_ellipsoid(points: &[Vec<f64>]) -> Result<SolveReport> {
    let n = points.len();
    if n == 0 {
        return Err(GeomError::InvalidInput("no points".into()));
    }
    let d = points[0].len();
    if points.iter().any(|p| p.len() != d) {
        return Err(GeomError::DimensionMismatch {
            expected: d,
            got: points.iter().map(|p| p.len()).find(|&l| l != d).unwrap_or(d),
        });
    }
    if n < d + 1 || affine_rank(points, d) < d {
        return Err(GeomError::DegenerateInput(
            "points are affinely dependent (lower-dimensional hull)".into(),
        ));
    }

    // Lifted points q = (x, 1).
    let q: Vec<DVector<f64>> = points
        .iter()
        .map(|p| {
            let mut v = p.clone();
            v.push(1.0);
            DVector::from_vec(v)
        })
        .collect();
    let dl = d + 1;
    let mut u = vec![1.0 / n as f64; n];
    let mut iterations = 0usize;
    let mut gap = f64::INFINITY;

    for it in 0..MAX_ITERS {
        iterations = it + 1;
        let mut v = DMatrix::zeros(dl, dl);
        for (ui, qi) in u.iter().zip(&q) {
            if *ui > 0.0 {
                v += qi * qi.transpose() * *ui;
            }
        }
        let vinv = match v.clone().try_inverse() {
            Some(m) => m,
            None => return Err(GeomError::NumericalFailure("singular moment matrix".into())),
        };
        let m: Vec<f64> = q.iter().map(|qi| (qi.transpose() * &vinv * qi)[0]).collect();
        let (mut imax, mut kmax) = (0, f64::NEG_INFINITY);
        let (mut imin, mut kmin) = (0, f64::INFINITY);
        for (i, &mi) in m.iter().enumerate() {
            if mi > kmax {
                kmax = mi;
                imax = i;
            }
            if u[i] > 1e-14 && mi < kmin {
                kmin = mi;
                imin = i;
            }
        }
        let up_gap = kmax - dl as f64;
        let down_gap = dl as f64 - kmin;
        gap = up_gap.max(down_gap);
        if gap <= DUAL_GAP_TOL * dl as f64 {
            break;
        }
        if up_gap >= down_gap {
            // Frank–Wolfe step toward the farthest point.
            let beta = up_gap / (dl as f64 * (kmax - 1.0));
            for ui in u.iter_mut() {
                *ui *= 1.0 - beta;
            }
            u[imax] += beta;
        } else {
            // Away step from the most over-weighted support point.
            let beta_raw = down_gap / (dl as f64 * (kmin - 1.0));
            let beta = beta_raw.min(u[imin] / (1.0 - u[imin]).max(1e-300));
            for ui in u.iter_mut() {
                *ui *= 1.0 + beta;
            }
            u[imin] -= beta * 1.0;
            u[imin] = u[imin].max(0.0);
            // renormalize against drift
            let s: f64 = u.iter().sum();
            for ui in u.iter_mut() {
                *ui /= s;
            }
        }
    }

    // Decode: center and covariance-like moment.
    let mut c = vec![0.0; d];
    for (ui, p) in u.iter().zip(points) {
        for j in 0..d {
            c[j] += ui * p[j];
        }
    }
    let mut sigma = DMatrix::zeros(d, d);
    for (ui, p) in u.iter().zip(points) {
        let x = linalg::to_dvec(p);
        sigma += &x * x.transpose() * *ui;
    }
    let cv = linalg::to_dvec(&c);
    sigma -= &cv * cv.transpose();
    // Containment guarantee: max_i (x_i - c)ᵀ Σ⁻¹ (x_i - c) ≤ d + gap, so the
    // quadratic form (d·γ·Σ)⁻¹ with γ = 1 + gap/d certifies every point.
    let gamma = 1.0 + (gap / d as f64).max(0.0);
    let shape_sq = sigma * (d as f64 * gamma);
    let a = linalg::sym_sqrt(&shape_sq)?;
    let ell = Ellipsoid::new(c, linalg::mat_rows(&a))?;
    let vol = ell.volume();
    let mut rep = SolveReport::optimal(Body::Ellipsoid(ell), vol, iterations, gap);
    rep.kkt_residual = gap;
    Ok(rep)
}

fn affine_rank(points: &[Vec<f64>], d: usize) -> usize {
    let n = points.len();
    let mut centroid = vec![0.0; d];
    for p in points {
        for j in 0..d {
            centroid[j] += p[j] / n as f64;
        }
    }
    let m = DMatrix::from_fn(d, n, |i, j| points[j][i] - centroid[i]);
    m.rank(1e-9)
}
