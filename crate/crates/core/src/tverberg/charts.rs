//! Lifting charts from witness bodies to parameter space.
//!
//! Every chart combines points affinely; what varies is the decode map and
//! which coordinate (if any) is hidden from the partition search:
//!
//! - zonotope chart ℝ^{d+k} and H-convex chart ℝ^{|H|}: exact Minkowski
//!   charts. One coordinate can be hidden (searched in ℝ^{dim−1}) and
//!   completed per part afterwards, taking the minimum across parts — this
//!   is what brings the Tverberg counts down to (r−1)(k+d)+1 and
//!   (r−1)|H|+1.
//! - determinant ellipsoid chart ℝ^{d+d(d+1)/2}: affine in (center, shape);
//!   decode rescales the shape to the common determinant, which only ever
//!   shrinks it (log-concavity of det), so containment transports.
//! - sum chart for centered ellipsoids: shapes normalized to entry-sum one
//!   live in an affine slice of ℝ^{d(d+1)/2}; decode rescales to the common
//!   determinant.
//! - segment chart ℝ^{2d}: (base, delta ≥ 0) of increasing segments with
//!   ℓ₁-norm one; the ℓ₁ norm is linear, so it is preserved exactly.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::body::{Body, Ellipsoid, HConvexSet, Vector, Zonotope};
use crate::error::{GeomError, Result};
use crate::linalg;
use crate::solvers::segments::segment_body;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "chart")]
pub enum ChartKind {
    Zonotope { directions: Vec<Vector> },
    HConvex { hset: Vec<Vector> },
    EllipsoidDet,
    EllipsoidSum,
    Segment,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Chart {
    pub kind: ChartKind,
    pub dim: usize,
    /// Common determinant of the input shapes (ellipsoid charts only).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub det0: Option<f64>,
}

pub fn is_prime_power(mut r: usize) -> bool {
    if r < 2 {
        return false;
    }
    let mut p = 2;
    while p * p <= r {
        if r % p == 0 {
            while r % p == 0 {
                r /= p;
            }
            return r == 1;
        }
        p += 1;
    }
    true // r itself prime
}

impl Chart {
    /// Create a chart; direction sets are unit-normalized here so that lift
    /// and decode agree on the coefficient scale.
    pub fn new(kind: ChartKind, dim: usize) -> Chart {
        let normalize = |vs: Vec<Vector>| -> Vec<Vector> {
            vs.into_iter()
                .map(|v| {
                    let n = crate::linalg::norm(&v).max(1e-300);
                    v.iter().map(|x| x / n).collect()
                })
                .collect()
        };
        let kind = match kind {
            ChartKind::Zonotope { directions } => ChartKind::Zonotope {
                directions: normalize(directions),
            },
            ChartKind::HConvex { hset } => ChartKind::HConvex {
                hset: normalize(hset),
            },
            other => other,
        };
        Chart {
            kind,
            dim,
            det0: None,
        }
    }

    /// Full chart dimension.
    pub fn len(&self) -> usize {
        let d = self.dim;
        match &self.kind {
            ChartKind::Zonotope { directions } => d + directions.len(),
            ChartKind::HConvex { hset } => hset.len(),
            ChartKind::EllipsoidDet => d + d * (d + 1) / 2,
            ChartKind::EllipsoidSum => d * (d + 1) / 2,
            ChartKind::Segment => 2 * d,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Index of the coordinate hidden from the partition search, if any.
    pub fn hidden_coordinate(&self) -> Option<usize> {
        match &self.kind {
            ChartKind::Zonotope { .. } | ChartKind::HConvex { .. } => Some(self.len() - 1),
            _ => None,
        }
    }

    /// Witness count for which a Tverberg partition into r parts is
    /// guaranteed. For the determinant chart the smaller topological count
    /// applies when r is a prime power, otherwise the affine count.
    pub fn theorem_count(&self, r: usize) -> usize {
        let d = self.dim;
        match &self.kind {
            ChartKind::Zonotope { directions } => (r - 1) * (directions.len() + d) + 1,
            ChartKind::HConvex { hset } => (r - 1) * hset.len() + 1,
            ChartKind::EllipsoidDet => {
                let n = d * (d + 3) / 2;
                if is_prime_power(r) {
                    (r - 1) * n + 1
                } else {
                    (r - 1) * (n + 1) + 1
                }
            }
            ChartKind::EllipsoidSum => (r - 1) * (d * (d + 1) / 2) + 1,
            ChartKind::Segment => 2 * (r - 1) * d + 1,
        }
    }

    /// Lift a witness to its full chart point, recording/validating the
    /// shared determinant for the ellipsoid charts.
    pub fn lift(&mut self, body: &Body) -> Result<Vec<f64>> {
        match (&self.kind, body) {
            (ChartKind::Zonotope { directions }, Body::Zonotope(z)) => {
                let reference = Zonotope::new(
                    vec![0.0; self.dim],
                    directions.clone(),
                    vec![1.0; directions.len()],
                )?;
                if !z.same_directions(&reference) {
                    return Err(GeomError::DirectionMismatch);
                }
                let mut p = z.center.clone();
                p.extend(z.coeffs.iter().copied());
                Ok(p)
            }
            (ChartKind::HConvex { hset }, Body::HConvex(h)) => {
                let reference = HConvexSet::new(hset.clone(), vec![1.0; hset.len()])?;
                if !h.same_directions(&reference) {
                    return Err(GeomError::DirectionMismatch);
                }
                Ok(h.canonicalize()?.supports)
            }
            (ChartKind::EllipsoidDet, Body::Ellipsoid(e)) => {
                let a = e.shape_matrix();
                let det = linalg::determinant(&a);
                self.record_det(det)?;
                let mut p = e.center.clone();
                p.extend(linalg::sym_pack(&a).iter().copied());
                Ok(p)
            }
            (ChartKind::EllipsoidSum, Body::Ellipsoid(e)) => {
                if e.center.iter().any(|c| c.abs() > 1e-9) {
                    return Err(GeomError::InvalidInput(
                        "sum chart requires origin-centered ellipsoids".into(),
                    ));
                }
                let s = e.shape_matrix();
                let det = linalg::determinant(&s);
                self.record_det(det)?;
                let total: f64 = s.iter().sum();
                if total <= 0.0 {
                    return Err(GeomError::NotPositiveDefinite);
                }
                Ok(linalg::sym_pack(&(s / total)).iter().copied().collect())
            }
            (ChartKind::Segment, body) => {
                let (base, delta) = segment_params(body)?;
                let l1: f64 = delta.iter().sum();
                if (l1 - 1.0).abs() > 1e-9 {
                    return Err(GeomError::InvalidInput(format!(
                        "segment chart requires ℓ₁-norm 1, got {l1}"
                    )));
                }
                let mut p = base;
                p.extend(delta);
                Ok(p)
            }
            _ => Err(GeomError::InvalidInput(
                "body class does not match chart kind".into(),
            )),
        }
    }

    fn record_det(&mut self, det: f64) -> Result<()> {
        if det <= 0.0 {
            return Err(GeomError::NotPositiveDefinite);
        }
        match self.det0 {
            None => {
                self.det0 = Some(det);
                Ok(())
            }
            Some(d0) => {
                if (det - d0).abs() > 1e-6 * d0.max(1.0) {
                    Err(GeomError::InvalidInput(format!(
                        "ellipsoid determinants differ: {det} vs {d0}"
                    )))
                } else {
                    Ok(())
                }
            }
        }
    }

    pub fn decode(&self, point: &[f64]) -> Result<Body> {
        let d = self.dim;
        match &self.kind {
            ChartKind::Zonotope { directions } => {
                let center = point[..d].to_vec();
                let coeffs: Vec<f64> = point[d..].iter().map(|&a| a.max(0.0)).collect();
                Ok(Body::Zonotope(Zonotope::new(
                    center,
                    directions.clone(),
                    coeffs,
                )?))
            }
            ChartKind::HConvex { hset } => Ok(Body::HConvex(HConvexSet::new(
                hset.clone(),
                point.to_vec(),
            )?)),
            ChartKind::EllipsoidDet => {
                let det0 = self.det0.ok_or_else(|| {
                    GeomError::InvalidInput("decode before lift on det chart".into())
                })?;
                let center = point[..d].to_vec();
                let cstar = linalg::sym_unpack(
                    &nalgebra::DVector::from_column_slice(&point[d..]),
                    d,
                );
                let c = normalize_det(&cstar, det0, d)?;
                Ok(Body::Ellipsoid(Ellipsoid::new(center, linalg::mat_rows(&c))?))
            }
            ChartKind::EllipsoidSum => {
                let det0 = self.det0.ok_or_else(|| {
                    GeomError::InvalidInput("decode before lift on sum chart".into())
                })?;
                let a = linalg::sym_unpack(&nalgebra::DVector::from_column_slice(point), d);
                let s = normalize_det(&a, det0, d)?;
                Ok(Body::Ellipsoid(Ellipsoid::new(
                    vec![0.0; d],
                    linalg::mat_rows(&s),
                )?))
            }
            ChartKind::Segment => {
                let base = point[..d].to_vec();
                let delta: Vec<f64> = point[d..].iter().map(|&x| x.max(0.0)).collect();
                segment_body(&base, &delta)
            }
        }
    }

    /// Affine combination of chart points (the charts' combine rule: the
    /// determinant normalization lives in decode).
    pub fn combine(&self, points: &[Vec<f64>], weights: &[f64]) -> Vec<f64> {
        let n = self.len();
        let mut out = vec![0.0; n];
        for (p, &w) in points.iter().zip(weights) {
            for (o, &x) in out.iter_mut().zip(p) {
                *o += w * x;
            }
        }
        out
    }

    /// The objective the theorem thresholds: volume for the body charts,
    /// ℓ₁-length for segments.
    pub fn objective(&self, body: &Body) -> Result<f64> {
        match (&self.kind, body) {
            (ChartKind::Segment, b) => {
                let (_, delta) = segment_params(b)?;
                Ok(delta.iter().sum())
            }
            (_, b) => b.volume(),
        }
    }
}

fn normalize_det(cstar: &DMatrix<f64>, det0: f64, d: usize) -> Result<DMatrix<f64>> {
    let det = linalg::determinant(cstar);
    if det <= 0.0 {
        return Err(GeomError::NotPositiveDefinite);
    }
    Ok(cstar * (det0 / det).powf(1.0 / d as f64))
}

/// Extract (base, delta) of a segment-like body: 1-direction zonotope with a
/// nonnegative direction, or a degenerate point box.
pub fn segment_params(body: &Body) -> Result<(Vector, Vector)> {
    match body {
        Body::Zonotope(z) if z.num_directions() == 1 => {
            let delta: Vector = z.directions[0].iter().map(|x| x * z.coeffs[0]).collect();
            if delta.iter().any(|&x| x < -1e-9) {
                return Err(GeomError::InvalidInput("segment is not increasing".into()));
            }
            let base: Vector = z
                .center
                .iter()
                .zip(&delta)
                .map(|(c, dl)| c - 0.5 * dl)
                .collect();
            Ok((base, delta.iter().map(|&x| x.max(0.0)).collect()))
        }
        Body::AxisBox(b) if b.halfwidths.iter().all(|&w| w < 1e-12) => {
            Ok((b.center.clone(), vec![0.0; b.dim()]))
        }
        _ => Err(GeomError::InvalidInput(
            "expected a segment (1-direction zonotope or point)".into(),
        )),
    }
}
