//! Domain types: halfspaces, H-polytopes, and the four witness-set classes
//! (axis-parallel boxes, zonotopes with fixed directions, ellipsoids, and
//! H-convex sets), together with support-function arithmetic, containment
//! predicates, volume formulas, and vertex enumeration.
//!
//! Conventions:
//! - A halfspace is `{ x : ⟨x, normal⟩ ≤ offset }` with the normal stored
//!   unit-length (offset rescaled on construction).
//! - Zonotope segments are centered: the body is
//!   `center ⊕_i [-½·coeffs[i]·dir_i, +½·coeffs[i]·dir_i]`, so `center` is the
//!   center of symmetry. Directions are stored unit-length with magnitudes
//!   folded into the coefficients.
//! - An ellipsoid is `center + shape·B_d` with `shape` symmetric positive
//!   definite, so its volume is `det(shape)·ω_d`.

use itertools::Itertools;
use nalgebra::{DMatrix, DVector};
use rand::Rng;
use serde::{Deserialize, Serialize};
use std::sync::OnceLock;

use crate::error::{GeomError, Result};
use crate::linalg;
use crate::lp::{lp_solve, LpProblem, Sense};
use crate::{CONTAINMENT_TOL, MAX_DIM, VERTEX_DEDUP_TOL};

pub type Vector = Vec<f64>;

fn check_vector(v: &[f64]) -> Result<()> {
    if v.is_empty() || v.len() > MAX_DIM {
        return Err(GeomError::DimensionTooLarge(v.len()));
    }
    if v.iter().any(|x| !x.is_finite()) {
        return Err(GeomError::InvalidInput("non-finite coordinate".into()));
    }
    Ok(())
}

fn check_dim(expected: usize, got: usize) -> Result<()> {
    if expected != got {
        return Err(GeomError::DimensionMismatch { expected, got });
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Halfspace / HPolytope
// ---------------------------------------------------------------------------

/// Closed halfspace `{ x : ⟨x, normal⟩ ≤ offset }`, normal unit-length.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct Halfspace {
    pub normal: Vector,
    pub offset: f64,
}

impl Halfspace {
    pub fn new(normal: Vector, offset: f64) -> Result<Self> {
        check_vector(&normal)?;
        let n = linalg::norm(&normal);
        if n < 1e-12 {
            return Err(GeomError::ZeroVector);
        }
        Ok(Halfspace {
            normal: normal.iter().map(|x| x / n).collect(),
            offset: offset / n,
        })
    }

    pub fn dim(&self) -> usize {
        self.normal.len()
    }

    /// Signed slack `offset − ⟨x, normal⟩` (nonnegative inside).
    pub fn slack(&self, x: &[f64]) -> f64 {
        self.offset - linalg::dot(&self.normal, x)
    }
}

/// Convex body as a finite intersection of halfspaces.
///
/// Emptiness and boundedness are decided by the LP kernel on first query and
/// cached; all other state is immutable, so values are safe to share across
/// threads.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct HPolytope {
    pub dim: usize,
    pub halfspaces: Vec<Halfspace>,
    #[serde(skip)]
    empty_cache: OnceLock<bool>,
    #[serde(skip)]
    bounded_cache: OnceLock<bool>,
}

impl PartialEq for HPolytope {
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim && self.halfspaces == other.halfspaces
    }
}

impl HPolytope {
    pub fn new(dim: usize, halfspaces: Vec<Halfspace>) -> Result<Self> {
        if dim == 0 || dim > MAX_DIM {
            return Err(GeomError::DimensionTooLarge(dim));
        }
        for h in &halfspaces {
            check_dim(dim, h.dim())?;
        }
        Ok(HPolytope {
            dim,
            halfspaces,
            empty_cache: OnceLock::new(),
            bounded_cache: OnceLock::new(),
        })
    }

    /// Axis-aligned box `[lo, hi]` in each coordinate.
    pub fn axis_box(lo: &[f64], hi: &[f64]) -> Result<Self> {
        let d = lo.len();
        let mut hs = Vec::with_capacity(2 * d);
        for i in 0..d {
            let mut e = vec![0.0; d];
            e[i] = 1.0;
            hs.push(Halfspace::new(e.clone(), hi[i])?);
            e[i] = -1.0;
            hs.push(Halfspace::new(e, -lo[i])?);
        }
        HPolytope::new(d, hs)
    }

    /// Cube `[-r, r]^d`, used to bound halfspace families.
    pub fn bounding_box(dim: usize, r: f64) -> Self {
        HPolytope::axis_box(&vec![-r; dim], &vec![r; dim]).expect("valid box")
    }

    /// Intersection: concatenation of halfspace lists.
    pub fn intersection(parts: &[&HPolytope]) -> Result<Self> {
        let dim = parts
            .first()
            .ok_or_else(|| GeomError::InvalidInput("empty family".into()))?
            .dim;
        let mut hs = Vec::new();
        for p in parts {
            check_dim(dim, p.dim)?;
            hs.extend(p.halfspaces.iter().cloned());
        }
        HPolytope::new(dim, hs)
    }

    pub fn intersect_family(family: &[HPolytope]) -> Result<Self> {
        let refs: Vec<&HPolytope> = family.iter().collect();
        HPolytope::intersection(&refs)
    }

    fn lp_rows(&self) -> Vec<(Vec<f64>, f64)> {
        self.halfspaces
            .iter()
            .map(|h| (h.normal.clone(), h.offset))
            .collect()
    }

    pub fn is_empty(&self) -> bool {
        *self.empty_cache.get_or_init(|| {
            matches!(
                lp_solve(&vec![0.0; self.dim], &self.lp_rows(), Sense::Max),
                Err(GeomError::Infeasible)
            )
        })
    }

    pub fn is_bounded(&self) -> bool {
        *self.bounded_cache.get_or_init(|| {
            if self.is_empty() {
                return true;
            }
            let rows = self.lp_rows();
            for i in 0..self.dim {
                for sgn in [1.0, -1.0] {
                    let mut obj = vec![0.0; self.dim];
                    obj[i] = sgn;
                    match lp_solve(&obj, &rows, Sense::Max) {
                        Err(GeomError::Unbounded) => return false,
                        Ok(_) => {}
                        Err(_) => return false,
                    }
                }
            }
            true
        })
    }

    /// Support value `max { ⟨x, dir⟩ : x ∈ self }` via the LP kernel.
    pub fn support(&self, dir: &[f64]) -> Result<f64> {
        check_dim(self.dim, dir.len())?;
        match lp_solve(dir, &self.lp_rows(), Sense::Max) {
            Ok(sol) => Ok(sol.value),
            Err(GeomError::Infeasible) => Err(GeomError::EmptyBody),
            Err(e) => Err(e),
        }
    }

    pub fn membership(&self, x: &[f64], tol: f64) -> bool {
        self.halfspaces.iter().all(|h| h.slack(x) >= -tol)
    }

    /// A point of the polytope, reasonably interior (Chebyshev center).
    pub fn chebyshev_center(&self) -> Result<(Vector, f64)> {
        // max r s.t. ⟨c,h⟩ + r ≤ b for all halfspaces
        let n = self.dim + 1;
        let mut obj = vec![0.0; n];
        obj[self.dim] = 1.0;
        let mut rows = Vec::new();
        for h in &self.halfspaces {
            let mut c = h.normal.clone();
            c.push(1.0);
            rows.push((c, h.offset));
        }
        match lp_solve(&obj, &rows, Sense::Max) {
            Ok(sol) => Ok((sol.point[..self.dim].to_vec(), sol.value)),
            Err(GeomError::Infeasible) => Err(GeomError::EmptyBody),
            Err(e) => Err(e),
        }
    }

    /// Vertex enumeration over d-subsets of halfspaces (d ≤ 3).
    pub fn vertices(&self) -> Result<Vec<Vector>> {
        let d = self.dim;
        if d > 3 {
            return Err(GeomError::DimensionTooLarge(d));
        }
        if !self.is_bounded() {
            return Err(GeomError::Unbounded);
        }
        if self.is_empty() {
            return Ok(Vec::new());
        }
        let m = self.halfspaces.len();
        let mut verts: Vec<Vector> = Vec::new();
        for subset in (0..m).combinations(d) {
            let a = DMatrix::from_fn(d, d, |i, j| self.halfspaces[subset[i]].normal[j]);
            let b = DVector::from_fn(d, |i, _| self.halfspaces[subset[i]].offset);
            let lu = a.lu();
            if lu.determinant().abs() < 1e-10 {
                continue;
            }
            let Some(x) = lu.solve(&b) else { continue };
            let x: Vector = x.iter().copied().collect();
            if !self.membership(&x, CONTAINMENT_TOL) {
                continue;
            }
            if !verts.iter().any(|v| {
                v.iter()
                    .zip(&x)
                    .all(|(a, b)| (a - b).abs() <= VERTEX_DEDUP_TOL.max(1e-9 * a.abs()))
            }) {
                verts.push(x);
            }
        }
        Ok(verts)
    }

    /// Lebesgue volume for d ≤ 3 via vertex enumeration.
    pub fn volume(&self) -> Result<f64> {
        let d = self.dim;
        if d > 3 {
            return Err(GeomError::DimensionTooLarge(d));
        }
        let verts = self.vertices()?;
        if verts.len() < d + 1 {
            return Ok(0.0);
        }
        match d {
            1 => {
                let lo = verts.iter().map(|v| v[0]).fold(f64::INFINITY, f64::min);
                let hi = verts.iter().map(|v| v[0]).fold(f64::NEG_INFINITY, f64::max);
                Ok(hi - lo)
            }
            2 => Ok(polygon_area(&verts)),
            3 => self.volume_3d(&verts),
            _ => unreachable!(),
        }
    }

    fn volume_3d(&self, verts: &[Vector]) -> Result<f64> {
        let centroid: Vector = (0..3)
            .map(|j| verts.iter().map(|v| v[j]).sum::<f64>() / verts.len() as f64)
            .collect();
        let mut vol = 0.0;
        let mut seen: Vec<(&Vector, f64)> = Vec::new();
        for h in &self.halfspaces {
            if seen
                .iter()
                .any(|(n, b)| linalg::dot(n, &h.normal) > 1.0 - 1e-12 && (b - h.offset).abs() < 1e-12)
            {
                continue; // duplicate facet
            }
            seen.push((&h.normal, h.offset));
            let facet: Vec<&Vector> = verts
                .iter()
                .filter(|v| h.slack(v).abs() < 1e-7)
                .collect();
            if facet.len() < 3 {
                continue;
            }
            // Orthonormal basis of the facet plane.
            let n = linalg::to_dvec(&h.normal);
            let mut u = DVector::from_vec(vec![1.0, 0.0, 0.0]);
            if n[0].abs() > 0.9 {
                u = DVector::from_vec(vec![0.0, 1.0, 0.0]);
            }
            let e1 = (&u - &n * n.dot(&u)).normalize();
            let e2 = n.cross(&e1);
            let fc: Vector = (0..3)
                .map(|j| facet.iter().map(|v| v[j]).sum::<f64>() / facet.len() as f64)
                .collect();
            let mut planar: Vec<(f64, f64, f64)> = facet
                .iter()
                .map(|v| {
                    let rel = DVector::from_vec(vec![v[0] - fc[0], v[1] - fc[1], v[2] - fc[2]]);
                    let (x, y) = (e1.dot(&rel), e2.dot(&rel));
                    (y.atan2(x), x, y)
                })
                .collect();
            planar.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
            let mut area = 0.0;
            for i in 0..planar.len() {
                let (_, x1, y1) = planar[i];
                let (_, x2, y2) = planar[(i + 1) % planar.len()];
                area += x1 * y2 - x2 * y1;
            }
            let area = area.abs() / 2.0;
            let height = (h.offset - linalg::dot(&h.normal, &centroid)).abs();
            vol += area * height / 3.0;
        }
        Ok(vol)
    }
}

/// Area of the convex polygon spanned by `verts` (any order).
pub fn polygon_area(verts: &[Vector]) -> f64 {
    if verts.len() < 3 {
        return 0.0;
    }
    let cx = verts.iter().map(|v| v[0]).sum::<f64>() / verts.len() as f64;
    let cy = verts.iter().map(|v| v[1]).sum::<f64>() / verts.len() as f64;
    let mut ordered: Vec<&Vector> = verts.iter().collect();
    ordered.sort_by(|a, b| {
        let ta = (a[1] - cy).atan2(a[0] - cx);
        let tb = (b[1] - cy).atan2(b[0] - cx);
        ta.partial_cmp(&tb).unwrap()
    });
    let mut area = 0.0;
    for i in 0..ordered.len() {
        let p = ordered[i];
        let q = ordered[(i + 1) % ordered.len()];
        area += p[0] * q[1] - q[0] * p[1];
    }
    area.abs() / 2.0
}

// ---------------------------------------------------------------------------
// Witness classes
// ---------------------------------------------------------------------------

/// Axis-parallel box `center ± halfwidths`. Degenerate boxes (a zero
/// halfwidth) are allowed and flagged.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct AxisBox {
    pub center: Vector,
    pub halfwidths: Vector,
}

impl AxisBox {
    pub fn new(center: Vector, halfwidths: Vector) -> Result<Self> {
        check_vector(&center)?;
        check_dim(center.len(), halfwidths.len())?;
        if halfwidths.iter().any(|&w| w < 0.0 || !w.is_finite()) {
            return Err(GeomError::InvalidInput("negative halfwidth".into()));
        }
        Ok(AxisBox { center, halfwidths })
    }

    pub fn dim(&self) -> usize {
        self.center.len()
    }

    pub fn volume(&self) -> f64 {
        self.halfwidths.iter().map(|w| 2.0 * w).product()
    }

    pub fn is_degenerate(&self) -> bool {
        self.halfwidths.iter().any(|&w| w < 1e-12)
    }

    pub fn support(&self, dir: &[f64]) -> f64 {
        linalg::dot(&self.center, dir)
            + self
                .halfwidths
                .iter()
                .zip(dir)
                .map(|(w, u)| w * u.abs())
                .sum::<f64>()
    }

    /// Euclidean diameter (corner-to-corner).
    pub fn diameter(&self) -> f64 {
        2.0 * linalg::norm(&self.halfwidths)
    }

    pub fn to_zonotope(&self) -> Zonotope {
        let d = self.dim();
        let dirs: Vec<Vector> = (0..d)
            .map(|i| {
                let mut e = vec![0.0; d];
                e[i] = 1.0;
                e
            })
            .collect();
        let coeffs = self.halfwidths.iter().map(|w| 2.0 * w).collect();
        Zonotope::new(self.center.clone(), dirs, coeffs).expect("canonical box zonotope")
    }

    pub fn to_hpolytope(&self) -> HPolytope {
        let lo: Vector = self
            .center
            .iter()
            .zip(&self.halfwidths)
            .map(|(c, w)| c - w)
            .collect();
        let hi: Vector = self
            .center
            .iter()
            .zip(&self.halfwidths)
            .map(|(c, w)| c + w)
            .collect();
        HPolytope::axis_box(&lo, &hi).expect("valid box")
    }
}

/// Zonotope `center ⊕_i [-½·coeffs[i]·dir_i, +½·coeffs[i]·dir_i]` with unit
/// directions. Construction normalizes directions, folding magnitudes into
/// the coefficients.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct Zonotope {
    pub center: Vector,
    pub directions: Vec<Vector>,
    pub coeffs: Vec<f64>,
}

impl Zonotope {
    pub fn new(center: Vector, directions: Vec<Vector>, coeffs: Vec<f64>) -> Result<Self> {
        check_vector(&center)?;
        if directions.len() != coeffs.len() {
            return Err(GeomError::DirectionMismatch);
        }
        let mut dirs = Vec::with_capacity(directions.len());
        let mut cf = Vec::with_capacity(coeffs.len());
        for (v, &a) in directions.iter().zip(&coeffs) {
            check_dim(center.len(), v.len())?;
            let n = linalg::norm(v);
            if n < 1e-12 {
                return Err(GeomError::ZeroVector);
            }
            if a < 0.0 || !a.is_finite() {
                return Err(GeomError::InvalidInput("negative coefficient".into()));
            }
            dirs.push(v.iter().map(|x| x / n).collect());
            cf.push(a * n);
        }
        Ok(Zonotope {
            center,
            directions: dirs,
            coeffs: cf,
        })
    }

    pub fn dim(&self) -> usize {
        self.center.len()
    }

    pub fn num_directions(&self) -> usize {
        self.directions.len()
    }

    pub fn support(&self, dir: &[f64]) -> f64 {
        linalg::dot(&self.center, dir)
            + 0.5
                * self
                    .directions
                    .iter()
                    .zip(&self.coeffs)
                    .map(|(v, a)| a * linalg::dot(v, dir).abs())
                    .sum::<f64>()
    }

    /// Volume by the mixed-determinant expansion:
    /// Σ over d-subsets S of |det V_S| · Π_{i∈S} coeffs[i].
    pub fn volume(&self) -> f64 {
        zonotope_volume(&self.directions, &self.coeffs, self.dim())
    }

    pub fn rank(&self) -> usize {
        let d = self.dim();
        let m = DMatrix::from_fn(d, self.directions.len(), |i, j| self.directions[j][i]);
        m.rank(1e-10)
    }

    pub fn same_directions(&self, other: &Zonotope) -> bool {
        self.directions.len() == other.directions.len()
            && self
                .directions
                .iter()
                .zip(&other.directions)
                .all(|(a, b)| a.iter().zip(b).all(|(x, y)| (x - y).abs() < 1e-9))
    }

    pub fn membership(&self, x: &[f64], tol: f64) -> bool {
        // x - center = Σ c_i · coeffs[i] · dir_i with |c_i| ≤ ½
        let d = self.dim();
        let k = self.num_directions();
        let mut p = LpProblem::new(vec![0.0; k], Sense::Max);
        for i in 0..k {
            p.add_le(unit_row(k, i, 1.0), 0.5 + tol);
            p.add_le(unit_row(k, i, -1.0), 0.5 + tol);
        }
        for j in 0..d {
            let row: Vec<f64> = (0..k).map(|i| self.coeffs[i] * self.directions[i][j]).collect();
            let rhs = x[j] - self.center[j];
            p.add_le(row.clone(), rhs + tol);
            p.add_le(row.iter().map(|v| -v).collect(), -(rhs - tol));
        }
        p.solve().is_ok()
    }
}

fn unit_row(n: usize, i: usize, v: f64) -> Vec<f64> {
    let mut r = vec![0.0; n];
    r[i] = v;
    r
}

pub fn zonotope_volume(directions: &[Vector], coeffs: &[f64], d: usize) -> f64 {
    let k = directions.len();
    if k < d {
        return 0.0;
    }
    let mut vol = 0.0;
    for subset in (0..k).combinations(d) {
        let m = DMatrix::from_fn(d, d, |i, j| directions[subset[j]][i]);
        let det = m.determinant().abs();
        if det > 0.0 {
            vol += det * subset.iter().map(|&i| coeffs[i]).product::<f64>();
        }
    }
    vol
}

/// Ellipsoid `center + shape·B_d` with `shape` symmetric positive definite
/// (row-major). Volume is `det(shape)·ω_d`.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct Ellipsoid {
    pub center: Vector,
    pub shape: Vec<Vector>,
}

impl Ellipsoid {
    pub fn new(center: Vector, shape: Vec<Vector>) -> Result<Self> {
        check_vector(&center)?;
        let d = center.len();
        if shape.len() != d || shape.iter().any(|r| r.len() != d) {
            return Err(GeomError::DimensionMismatch {
                expected: d,
                got: shape.len(),
            });
        }
        let m = linalg::to_dmat(&shape);
        linalg::check_spd(&m, 1e-10)?;
        // Store exactly symmetrized entries.
        let sym = (&m + m.transpose()) * 0.5;
        Ok(Ellipsoid {
            center,
            shape: linalg::mat_rows(&sym),
        })
    }

    pub fn unit_ball(d: usize) -> Self {
        let eye = (0..d)
            .map(|i| {
                let mut r = vec![0.0; d];
                r[i] = 1.0;
                r
            })
            .collect();
        Ellipsoid {
            center: vec![0.0; d],
            shape: eye,
        }
    }

    pub fn dim(&self) -> usize {
        self.center.len()
    }

    pub fn shape_matrix(&self) -> DMatrix<f64> {
        linalg::to_dmat(&self.shape)
    }

    pub fn support(&self, dir: &[f64]) -> f64 {
        let a = self.shape_matrix();
        let u = linalg::to_dvec(dir);
        linalg::dot(&self.center, dir) + (a * u).norm()
    }

    pub fn volume(&self) -> f64 {
        linalg::determinant(&self.shape_matrix()) * linalg::unit_ball_volume(self.dim())
    }

    pub fn membership(&self, x: &[f64], tol: f64) -> bool {
        let a = self.shape_matrix();
        let rel = linalg::to_dvec(x) - linalg::to_dvec(&self.center);
        match a.lu().solve(&rel) {
            Some(y) => y.norm() <= 1.0 + tol,
            None => false,
        }
    }

    /// Dilate about the center by `t`.
    pub fn scaled(&self, t: f64) -> Ellipsoid {
        Ellipsoid {
            center: self.center.clone(),
            shape: self
                .shape
                .iter()
                .map(|r| r.iter().map(|x| x * t).collect())
                .collect(),
        }
    }
}

/// H-convex set: `∩_i { x : ⟨x, hset[i]⟩ ≤ supports[i] }` for a fixed
/// direction set not contained in any closed half-sphere (which makes every
/// such body bounded).
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct HConvexSet {
    pub hset: Vec<Vector>,
    pub supports: Vec<f64>,
}

impl HConvexSet {
    pub fn new(hset: Vec<Vector>, supports: Vec<f64>) -> Result<Self> {
        if hset.len() != supports.len() {
            return Err(GeomError::DirectionMismatch);
        }
        let mut dirs = Vec::with_capacity(hset.len());
        for v in &hset {
            check_vector(v)?;
            let n = linalg::norm(v);
            if n < 1e-12 {
                return Err(GeomError::ZeroVector);
            }
            dirs.push(v.iter().map(|x| x / n).collect::<Vector>());
        }
        check_not_in_half_sphere(&dirs)?;
        Ok(HConvexSet {
            hset: dirs,
            supports,
        })
    }

    pub fn dim(&self) -> usize {
        self.hset[0].len()
    }

    pub fn to_hpolytope(&self) -> HPolytope {
        let hs = self
            .hset
            .iter()
            .zip(&self.supports)
            .map(|(h, &s)| Halfspace {
                normal: h.clone(),
                offset: s,
            })
            .collect();
        HPolytope::new(self.dim(), hs).expect("H-convex halfspaces are valid")
    }

    pub fn support(&self, dir: &[f64]) -> Result<f64> {
        self.to_hpolytope().support(dir)
    }

    pub fn volume(&self) -> Result<f64> {
        self.to_hpolytope().volume()
    }

    pub fn vertices(&self) -> Result<Vec<Vector>> {
        self.to_hpolytope().vertices()
    }

    /// Replace each stored support by the body's actual support value in that
    /// direction, making the parameter vector canonical.
    pub fn canonicalize(&self) -> Result<HConvexSet> {
        let poly = self.to_hpolytope();
        let mut supports = Vec::with_capacity(self.hset.len());
        for h in &self.hset {
            supports.push(poly.support(h)?);
        }
        Ok(HConvexSet {
            hset: self.hset.clone(),
            supports,
        })
    }

    pub fn same_directions(&self, other: &HConvexSet) -> bool {
        self.hset.len() == other.hset.len()
            && self
                .hset
                .iter()
                .zip(&other.hset)
                .all(|(a, b)| a.iter().zip(b).all(|(x, y)| (x - y).abs() < 1e-9))
    }
}

/// Fail unless the origin is strictly inside conv(dirs), i.e. the directions
/// are not contained in any closed half-sphere. Checked by 2d LPs over the
/// dual cone `{ u : ⟨h_i, u⟩ ≥ 0 ∀i }`, which must be trivial.
pub fn check_not_in_half_sphere(dirs: &[Vector]) -> Result<()> {
    let d = dirs[0].len();
    for j in 0..d {
        for sgn in [1.0, -1.0] {
            let mut obj = vec![0.0; d];
            obj[j] = sgn;
            let mut rows: Vec<(Vec<f64>, f64)> = dirs
                .iter()
                .map(|h| (h.iter().map(|x| -x).collect(), 0.0))
                .collect();
            for i in 0..d {
                rows.push((unit_row(d, i, 1.0), 1.0));
                rows.push((unit_row(d, i, -1.0), 1.0));
            }
            let sol = lp_solve(&obj, &rows, Sense::Max)?;
            if sol.value > 1e-9 {
                return Err(GeomError::HalfSphereViolation);
            }
        }
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Body enum + shared operations
// ---------------------------------------------------------------------------

/// Any of the body types, as they appear in JSON instances.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum Body {
    HPolytope(HPolytope),
    AxisBox(AxisBox),
    Zonotope(Zonotope),
    Ellipsoid(Ellipsoid),
    HConvex(HConvexSet),
}

impl Body {
    pub fn dim(&self) -> usize {
        match self {
            Body::HPolytope(p) => p.dim,
            Body::AxisBox(b) => b.dim(),
            Body::Zonotope(z) => z.dim(),
            Body::Ellipsoid(e) => e.dim(),
            Body::HConvex(h) => h.dim(),
        }
    }

    pub fn volume(&self) -> Result<f64> {
        match self {
            Body::HPolytope(p) => p.volume(),
            Body::AxisBox(b) => Ok(b.volume()),
            Body::Zonotope(z) => Ok(z.volume()),
            Body::Ellipsoid(e) => Ok(e.volume()),
            Body::HConvex(h) => h.volume(),
        }
    }

    pub fn membership(&self, x: &[f64], tol: f64) -> bool {
        match self {
            Body::HPolytope(p) => p.membership(x, tol),
            Body::AxisBox(b) => b
                .center
                .iter()
                .zip(&b.halfwidths)
                .zip(x)
                .all(|((c, w), xi)| (xi - c).abs() <= w + tol),
            Body::Zonotope(z) => z.membership(x, tol),
            Body::Ellipsoid(e) => e.membership(x, tol),
            Body::HConvex(h) => h.to_hpolytope().membership(x, tol),
        }
    }

    /// Uniform-ish random point of the body (rejection sampling for the
    /// polytopal kinds); used by sampling oracles.
    pub fn sample_point<R: Rng>(&self, rng: &mut R) -> Result<Vector> {
        match self {
            Body::AxisBox(b) => Ok(b
                .center
                .iter()
                .zip(&b.halfwidths)
                .map(|(c, w)| c + rng.gen_range(-1.0..=1.0) * w)
                .collect()),
            Body::Zonotope(z) => {
                let mut x = z.center.clone();
                for (v, a) in z.directions.iter().zip(&z.coeffs) {
                    let t = rng.gen_range(-0.5..=0.5) * a;
                    for (xi, vi) in x.iter_mut().zip(v) {
                        *xi += t * vi;
                    }
                }
                Ok(x)
            }
            Body::Ellipsoid(e) => {
                let d = e.dim();
                // uniform in the unit ball, then map by the shape matrix
                let mut u: Vec<f64> = (0..d)
                    .map(|_| {
                        // Box–Muller
                        let u1: f64 = rng.gen_range(f64::EPSILON..1.0);
                        let u2: f64 = rng.gen_range(0.0..1.0);
                        (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
                    })
                    .collect();
                let n = linalg::norm(&u).max(1e-12);
                let r: f64 = rng.gen_range(0.0f64..1.0).powf(1.0 / d as f64);
                for ui in u.iter_mut() {
                    *ui *= r / n;
                }
                let a = e.shape_matrix();
                let y = a * linalg::to_dvec(&u);
                Ok(e.center.iter().zip(y.iter()).map(|(c, v)| c + v).collect())
            }
            Body::HPolytope(_) | Body::HConvex(_) => {
                let poly = match self {
                    Body::HPolytope(p) => p.clone(),
                    Body::HConvex(h) => h.to_hpolytope(),
                    _ => unreachable!(),
                };
                let verts = poly.vertices()?;
                if verts.is_empty() {
                    return Err(GeomError::EmptyBody);
                }
                let d = poly.dim;
                let lo: Vector = (0..d)
                    .map(|j| verts.iter().map(|v| v[j]).fold(f64::INFINITY, f64::min))
                    .collect();
                let hi: Vector = (0..d)
                    .map(|j| verts.iter().map(|v| v[j]).fold(f64::NEG_INFINITY, f64::max))
                    .collect();
                for _ in 0..10_000 {
                    let x: Vector = lo
                        .iter()
                        .zip(&hi)
                        .map(|(a, b)| rng.gen_range(*a..=*b))
                        .collect();
                    if poly.membership(&x, 0.0) {
                        return Ok(x);
                    }
                }
                Err(GeomError::NumericalFailure("rejection sampling stalled".into()))
            }
        }
    }
}

/// Support function `max { ⟨x, dir⟩ : x ∈ body }`.
///
/// Closed forms for the witness classes; an LP for H-polytopes.
pub fn support(body: &Body, dir: &[f64]) -> Result<f64> {
    if linalg::norm(dir) < 1e-12 {
        return Err(GeomError::ZeroVector);
    }
    check_dim(body.dim(), dir.len())?;
    match body {
        Body::HPolytope(p) => p.support(dir),
        Body::AxisBox(b) => Ok(b.support(dir)),
        Body::Zonotope(z) => Ok(z.support(dir)),
        Body::Ellipsoid(e) => Ok(e.support(dir)),
        Body::HConvex(h) => h.support(dir),
    }
}

/// `true` iff `inner ⊆ outer` up to `tol`, tested per halfspace of `outer`
/// against the support function of `inner`. Total on valid inputs.
pub fn contains(outer: &HPolytope, inner: &Body, tol: f64) -> Result<bool> {
    check_dim(outer.dim, inner.dim())?;
    for h in &outer.halfspaces {
        let s = match support(inner, &h.normal) {
            Ok(s) => s,
            Err(GeomError::Unbounded) => return Ok(false),
            Err(e) => return Err(e),
        };
        if s > h.offset + tol {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Parameter-space convex combination `λ·a ⊕ (1−λ)·b` on the Minkowski chart
/// of zonotopes with matching directions.
pub fn minkowski_combine_zonotopes(a: &Zonotope, b: &Zonotope, lambda: f64) -> Result<Zonotope> {
    if !a.same_directions(b) {
        return Err(GeomError::DirectionMismatch);
    }
    let l = lambda;
    let center = a
        .center
        .iter()
        .zip(&b.center)
        .map(|(x, y)| l * x + (1.0 - l) * y)
        .collect();
    let coeffs = a
        .coeffs
        .iter()
        .zip(&b.coeffs)
        .map(|(x, y)| l * x + (1.0 - l) * y)
        .collect();
    Ok(Zonotope {
        center,
        directions: a.directions.clone(),
        coeffs,
    })
}

/// Parameter-space convex combination on the support-vector chart of
/// H-convex sets with the same direction set.
pub fn minkowski_combine_hconvex(
    a: &HConvexSet,
    b: &HConvexSet,
    lambda: f64,
) -> Result<HConvexSet> {
    if !a.same_directions(b) {
        return Err(GeomError::DirectionMismatch);
    }
    let supports = a
        .supports
        .iter()
        .zip(&b.supports)
        .map(|(x, y)| lambda * x + (1.0 - lambda) * y)
        .collect();
    Ok(HConvexSet {
        hset: a.hset.clone(),
        supports,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    fn sq2() -> f64 {
        2.0f64.sqrt()
    }

    #[test]
    fn support_box_and_ball() {
        let b = AxisBox::new(vec![0.0, 0.0], vec![1.0, 1.0]).unwrap();
        assert!((b.support(&[1.0, 0.0]) - 1.0).abs() < 1e-12);
        let e = Ellipsoid::unit_ball(2);
        assert!((e.support(&[0.0, 1.0]) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn support_zonotope_closed_form_matches_vertex_sampling() {
        // dirs e1, e2, (1,1)/√2 with coefficients 1 each, centered at 0.
        let z = Zonotope::new(
            vec![0.0, 0.0],
            vec![vec![1.0, 0.0], vec![0.0, 1.0], vec![1.0 / sq2(), 1.0 / sq2()]],
            vec![1.0, 1.0, 1.0],
        )
        .unwrap();
        let dir = [1.0, 0.0];
        let closed = z.support(&dir);
        // Oracle: enumerate all vertex sign patterns of the segment sum.
        let mut best = f64::NEG_INFINITY;
        for mask in 0..8u32 {
            let mut x = [0.0, 0.0];
            for (i, (v, a)) in z.directions.iter().zip(&z.coeffs).enumerate() {
                let s = if mask >> i & 1 == 1 { 0.5 } else { -0.5 };
                x[0] += s * a * v[0];
                x[1] += s * a * v[1];
            }
            best = best.max(x[0] * dir[0] + x[1] * dir[1]);
        }
        assert!((closed - best).abs() < 1e-12);
        // Frozen value of the closed-form sum ½(1 + 0 + 1/√2).
        assert!((closed - 0.5 * (1.0 + 1.0 / sq2())).abs() < 1e-12);
    }

    #[test]
    fn support_hpolytope_unbounded() {
        let p = HPolytope::new(2, vec![Halfspace::new(vec![1.0, 0.0], 0.0).unwrap()]).unwrap();
        assert_eq!(p.support(&[-1.0, 0.0]).unwrap_err(), GeomError::Unbounded);
        assert!((p.support(&[1.0, 0.0]).unwrap()).abs() < 1e-9);
    }

    #[test]
    fn contains_disc_in_square() {
        let square = HPolytope::axis_box(&[-1.0, -1.0], &[1.0, 1.0]).unwrap();
        let disc = Body::Ellipsoid(Ellipsoid::unit_ball(2));
        assert!(contains(&square, &disc, 1e-8).unwrap());
        let stretched = Body::Ellipsoid(
            Ellipsoid::new(vec![0.0, 0.0], vec![vec![2.0, 0.0], vec![0.0, 0.5]]).unwrap(),
        );
        assert!(!contains(&square, &stretched, 1e-8).unwrap());
    }

    #[test]
    fn contains_box_in_triangle_vertex_check() {
        // Triangle x ≥ 0, y ≥ 0, x + y ≤ 1; the box centered (½,½) with
        // halfwidths ¼ pokes out: corner (¾,¾) violates x + y ≤ 1.
        let tri = HPolytope::new(
            2,
            vec![
                Halfspace::new(vec![-1.0, 0.0], 0.0).unwrap(),
                Halfspace::new(vec![0.0, -1.0], 0.0).unwrap(),
                Halfspace::new(vec![1.0, 1.0], 1.0).unwrap(),
            ],
        )
        .unwrap();
        let b = Body::AxisBox(AxisBox::new(vec![0.5, 0.5], vec![0.25, 0.25]).unwrap());
        assert!(!contains(&tri, &b, 1e-8).unwrap());
    }

    #[test]
    fn zonotope_volume_mixed_determinants() {
        // dirs (1,0),(0,1),(1,1) with coeffs (1,1,1): volume 3. The (1,1)
        // direction is normalized on construction with its magnitude folded
        // into the coefficient, which leaves the volume unchanged.
        let z = Zonotope::new(
            vec![0.0, 0.0],
            vec![vec![1.0, 0.0], vec![0.0, 1.0], vec![1.0, 1.0]],
            vec![1.0, 1.0, 1.0],
        )
        .unwrap();
        assert!((z.volume() - 3.0).abs() < 1e-12);
        // Monte-Carlo volume oracle: fraction of bounding-box samples inside.
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(42);
        let body = Body::Zonotope(z.clone());
        let (lo, hi) = (-2.0, 2.0);
        let total = 40_000;
        let mut inside = 0;
        for _ in 0..total {
            let x = [rng.gen_range(lo..hi), rng.gen_range(lo..hi)];
            if body.membership(&x, 1e-9) {
                inside += 1;
            }
        }
        let mc = inside as f64 / total as f64 * (hi - lo) * (hi - lo);
        assert!((mc - 3.0).abs() / 3.0 < 0.05, "mc = {mc}");
    }

    #[test]
    fn volumes_ellipse_and_triangle() {
        assert!((Ellipsoid::unit_ball(2).volume() - std::f64::consts::PI).abs() < 1e-12);
        let tri = HPolytope::new(
            2,
            vec![
                Halfspace::new(vec![-1.0, 0.0], 0.0).unwrap(),
                Halfspace::new(vec![0.0, -1.0], 0.0).unwrap(),
                Halfspace::new(vec![1.0, 1.0], 1.0).unwrap(),
            ],
        )
        .unwrap();
        assert!((tri.volume().unwrap() - 0.5).abs() < 1e-9);
    }

    #[test]
    fn vertices_square_and_triangle() {
        let sq = HPolytope::axis_box(&[0.0, 0.0], &[1.0, 1.0]).unwrap();
        assert_eq!(sq.vertices().unwrap().len(), 4);
        let tri = HPolytope::new(
            2,
            vec![
                Halfspace::new(vec![-1.0, 0.0], 0.0).unwrap(),
                Halfspace::new(vec![0.0, -1.0], 0.0).unwrap(),
                Halfspace::new(vec![1.0, 1.0], 1.0).unwrap(),
            ],
        )
        .unwrap();
        let mut vs = tri.vertices().unwrap();
        vs.sort_by(|a, b| (a[0], a[1]).partial_cmp(&(b[0], b[1])).unwrap());
        assert_eq!(vs.len(), 3);
        assert!((vs[2][0] - 1.0).abs() < 1e-9);
    }

    #[test]
    fn vertices_pentagon_tangent_lines() {
        // 5 halfspaces tangent to the unit circle at angles 2πk/5: vertices
        // sit at radius 1/cos(π/5).
        let hs: Vec<Halfspace> = (0..5)
            .map(|k| {
                let t = 2.0 * std::f64::consts::PI * k as f64 / 5.0;
                Halfspace::new(vec![t.cos(), t.sin()], 1.0).unwrap()
            })
            .collect();
        let p = HPolytope::new(2, hs).unwrap();
        let verts = p.vertices().unwrap();
        assert_eq!(verts.len(), 5);
        let r_expect = 1.0 / (std::f64::consts::PI / 5.0).cos();
        for v in verts {
            assert!((linalg::norm(&v) - r_expect).abs() < 1e-9);
        }
    }

    #[test]
    fn cube_volume_3d() {
        let cube = HPolytope::axis_box(&[0.0, 0.0, 0.0], &[1.0, 2.0, 3.0]).unwrap();
        assert!((cube.volume().unwrap() - 6.0).abs() < 1e-8);
    }

    #[test]
    fn combine_zonotopes_midpoint() {
        // λ = ½ of boxes [0,2]² and the degenerate point box at the origin
        // gives [0,1]² (as zonotopes).
        let a = AxisBox::new(vec![1.0, 1.0], vec![1.0, 1.0]).unwrap().to_zonotope();
        let b = AxisBox::new(vec![0.0, 0.0], vec![0.0, 0.0]).unwrap().to_zonotope();
        let mid = minkowski_combine_zonotopes(&a, &b, 0.5).unwrap();
        assert!((mid.center[0] - 0.5).abs() < 1e-12);
        assert!((mid.coeffs[0] - 1.0).abs() < 1e-12);
        // λ = 0 returns b exactly.
        let at0 = minkowski_combine_zonotopes(&a, &b, 0.0).unwrap();
        assert_eq!(at0.coeffs, b.coeffs);
        // coordinate average over a shared third direction
        let d3 = vec![vec![1.0, 0.0], vec![0.0, 1.0], vec![1.0, 1.0]];
        let za = Zonotope::new(vec![0.0, 0.0], d3.clone(), vec![2.0, 0.0, 0.0]).unwrap();
        let zb = Zonotope::new(vec![0.0, 0.0], d3, vec![0.0, 2.0, 0.0]).unwrap();
        let zm = minkowski_combine_zonotopes(&za, &zb, 0.5).unwrap();
        assert!((zm.coeffs[0] - 1.0).abs() < 1e-12);
        assert!((zm.coeffs[1] - 1.0).abs() < 1e-12);
        assert!(zm.coeffs[2].abs() < 1e-12);
    }

    #[test]
    fn hconvex_rejects_half_sphere() {
        let r = HConvexSet::new(vec![vec![1.0, 0.0], vec![0.0, 1.0]], vec![1.0, 1.0]);
        assert_eq!(r.unwrap_err(), GeomError::HalfSphereViolation);
        let ok = HConvexSet::new(
            vec![
                vec![1.0, 0.0],
                vec![-1.0, 0.0],
                vec![0.0, 1.0],
                vec![0.0, -1.0],
            ],
            vec![1.0; 4],
        );
        assert!(ok.is_ok());
    }

    #[test]
    fn hconvex_box_volume() {
        let h = HConvexSet::new(
            vec![
                vec![1.0, 0.0],
                vec![-1.0, 0.0],
                vec![0.0, 1.0],
                vec![0.0, -1.0],
            ],
            vec![1.0; 4],
        )
        .unwrap();
        assert!((h.volume().unwrap() - 4.0).abs() < 1e-9);
    }

    #[test]
    fn body_json_roundtrip() {
        let e = Body::Ellipsoid(
            Ellipsoid::new(vec![0.5, -0.5], vec![vec![2.0, 0.3], vec![0.3, 1.0]]).unwrap(),
        );
        let s = serde_json::to_string(&e).unwrap();
        assert!(s.contains("\"type\":\"ellipsoid\""));
        let back: Body = serde_json::from_str(&s).unwrap();
        assert_eq!(e, back);
    }

    #[test]
    fn boundedness_cache() {
        let p = HPolytope::new(2, vec![Halfspace::new(vec![1.0, 0.0], 0.0).unwrap()]).unwrap();
        assert!(!p.is_bounded());
        assert!(!p.is_bounded());
        let b = HPolytope::bounding_box(2, 5.0);
        assert!(b.is_bounded());
        assert!(!b.is_empty());
    }
}
