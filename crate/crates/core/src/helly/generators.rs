//! Seeded instance generators. Every generator plants a known witness body
//! and produces family members that contain it, so theorem premises hold by
//! construction and the suites genuinely exercise the conclusions.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::body::{support, AxisBox, Body, Ellipsoid, HConvexSet, HPolytope, Halfspace, Vector, Zonotope};
use crate::error::Result;
use crate::linalg;
use crate::rng::seeded_rng;

/// Radius of the bounding box every generated body is intersected with;
/// keeps halfspace families bounded for volume work.
pub const BOUND_RADIUS: f64 = 10.0;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum GeneratorKind {
    /// Each body is one random halfspace tangent to the planted witness
    /// (plus the bounding box).
    TangentHalfspaces,
    /// Each body is a few random supporting halfspaces (plus the box).
    RandomPolytopeIntersections { halfspaces_per_body: usize },
    /// Slabs through a common center with the given overlap width; overlap 0
    /// degenerates the intersection to measure zero.
    ShiftedSlabs { overlap: f64 },
    /// Origin-symmetric slabs tangent to the planted witness; every family
    /// member is centrally symmetric.
    SymmetricSlabs,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GeneratorSpec {
    pub kind: GeneratorKind,
    pub count: usize,
    pub planted: Body,
    /// Uniform [0, jitter) extra slack added to tangent offsets.
    pub jitter: f64,
}

fn random_unit(rng: &mut ChaCha8Rng, d: usize) -> Vector {
    loop {
        let v: Vector = (0..d)
            .map(|_| {
                let u1: f64 = rng.gen_range(f64::EPSILON..1.0);
                let u2: f64 = rng.gen_range(0.0..1.0);
                (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
            })
            .collect();
        let n = linalg::norm(&v);
        if n > 1e-6 {
            return v.iter().map(|x| x / n).collect();
        }
    }
}

fn with_bounding_box(d: usize, mut hs: Vec<Halfspace>) -> Result<HPolytope> {
    let bb = HPolytope::bounding_box(d, BOUND_RADIUS);
    hs.extend(bb.halfspaces);
    HPolytope::new(d, hs)
}

/// Deterministic family from the generator description and seed; every
/// subfamily intersection
/// contains the planted body.
pub fn random_family(spec: &GeneratorSpec, seed: u64) -> Result<Vec<HPolytope>> {
    let d = spec.planted.dim();
    let mut out = Vec::with_capacity(spec.count);
    for b in 0..spec.count {
        let mut rng = seeded_rng(seed, b as u64);
        let body = match &spec.kind {
            GeneratorKind::TangentHalfspaces => {
                let u = random_unit(&mut rng, d);
                let off = support(&spec.planted, &u)? + rng.gen_range(0.0..spec.jitter.max(1e-12));
                with_bounding_box(d, vec![Halfspace::new(u, off)?])?
            }
            GeneratorKind::RandomPolytopeIntersections { halfspaces_per_body } => {
                let mut hs = Vec::new();
                for _ in 0..*halfspaces_per_body {
                    let u = random_unit(&mut rng, d);
                    let off =
                        support(&spec.planted, &u)? + rng.gen_range(0.0..spec.jitter.max(1e-12));
                    hs.push(Halfspace::new(u, off)?);
                }
                with_bounding_box(d, hs)?
            }
            GeneratorKind::ShiftedSlabs { overlap } => {
                let u = random_unit(&mut rng, d);
                let c = center_of(&spec.planted);
                let mid = linalg::dot(&u, &c);
                let w = overlap / 2.0;
                with_bounding_box(
                    d,
                    vec![
                        Halfspace::new(u.clone(), mid + w)?,
                        Halfspace::new(u.iter().map(|x| -x).collect(), -(mid - w))?,
                    ],
                )?
            }
            GeneratorKind::SymmetricSlabs => {
                let u = random_unit(&mut rng, d);
                let s = support(&spec.planted, &u)?.abs().max(
                    support(&spec.planted, &u.iter().map(|x| -x).collect::<Vector>())?.abs(),
                ) + rng.gen_range(0.0..spec.jitter.max(1e-12));
                with_bounding_box(
                    d,
                    vec![
                        Halfspace::new(u.clone(), s)?,
                        Halfspace::new(u.iter().map(|x| -x).collect(), s)?,
                    ],
                )?
            }
        };
        out.push(body);
    }
    Ok(out)
}

fn center_of(body: &Body) -> Vector {
    match body {
        Body::AxisBox(b) => b.center.clone(),
        Body::Zonotope(z) => z.center.clone(),
        Body::Ellipsoid(e) => e.center.clone(),
        Body::HPolytope(p) => p
            .chebyshev_center()
            .map(|(c, _)| c)
            .unwrap_or_else(|_| vec![0.0; p.dim]),
        Body::HConvex(h) => h
            .to_hpolytope()
            .chebyshev_center()
            .map(|(c, _)| c)
            .unwrap_or_else(|_| vec![0.0; h.dim()]),
    }
}

// ---------------------------------------------------------------------------
// Planted witnesses, normalized to the suite thresholds
// ---------------------------------------------------------------------------

pub fn planted_box(rng: &mut ChaCha8Rng, volume: f64) -> AxisBox {
    let center = vec![rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)];
    let mut w = vec![rng.gen_range(0.3..1.2), rng.gen_range(0.3..1.2)];
    let v = 4.0 * w[0] * w[1];
    let s = (volume / v).sqrt();
    w.iter_mut().for_each(|x| *x *= s);
    AxisBox::new(center, w).expect("planted box")
}

pub fn planted_zonotope(rng: &mut ChaCha8Rng, directions: &[Vector], volume: f64) -> Zonotope {
    let d = directions[0].len();
    let center = (0..d).map(|_| rng.gen_range(-2.0..2.0)).collect();
    let alpha: Vec<f64> = directions.iter().map(|_| rng.gen_range(0.4..1.5)).collect();
    let z = Zonotope::new(center, directions.to_vec(), alpha).expect("planted zonotope");
    let v = z.volume();
    let s = (volume / v).powf(1.0 / d as f64);
    Zonotope::new(
        z.center.clone(),
        z.directions.clone(),
        z.coeffs.iter().map(|a| a * s).collect(),
    )
    .expect("scaled zonotope")
}

/// Random SPD shape with reasonable aspect ratio, scaled to the target area.
pub fn planted_ellipse(
    rng: &mut ChaCha8Rng,
    volume: f64,
    centered: bool,
    axis_parallel: bool,
) -> Ellipsoid {
    let center = if centered {
        vec![0.0, 0.0]
    } else {
        vec![rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)]
    };
    let (l1, l2) = (rng.gen_range(0.5..1.6), rng.gen_range(0.5..1.6));
    let theta = if axis_parallel {
        0.0
    } else {
        rng.gen_range(0.0..std::f64::consts::PI)
    };
    let (c, s) = (theta.cos(), theta.sin());
    // A = R diag(l1,l2) Rᵀ
    let a = vec![
        vec![c * c * l1 + s * s * l2, c * s * (l1 - l2)],
        vec![c * s * (l1 - l2), s * s * l1 + c * c * l2],
    ];
    let e = Ellipsoid::new(center, a).expect("planted ellipse");
    // vol(a + A·B₂) = π·det A and det(sA) = s²·det A
    let det = l1 * l2;
    let target_det = volume / std::f64::consts::PI;
    e.scaled((target_det / det).sqrt())
}

pub fn planted_hconvex(rng: &mut ChaCha8Rng, hset: &[Vector], volume: f64) -> Result<HConvexSet> {
    let base: Vec<f64> = hset.iter().map(|_| 1.0 + rng.gen_range(0.0..0.3)).collect();
    let h = HConvexSet::new(hset.to_vec(), base)?.canonicalize()?;
    let a = h.volume()?;
    let s = (volume / a).sqrt();
    let scaled = HConvexSet {
        hset: h.hset.clone(),
        supports: h.supports.iter().map(|x| x * s).collect(),
    };
    // random translate
    let t = vec![rng.gen_range(-1.5..1.5), rng.gen_range(-1.5..1.5)];
    let supports = scaled
        .supports
        .iter()
        .zip(&scaled.hset)
        .map(|(sv, hv)| sv + linalg::dot(hv, &t))
        .collect();
    Ok(HConvexSet {
        hset: scaled.hset,
        supports,
    })
}

/// Box with Euclidean diameter exactly `diam`.
pub fn planted_diameter_box(rng: &mut ChaCha8Rng, diam: f64) -> AxisBox {
    let center = vec![rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)];
    let mut w = vec![rng.gen_range(0.3..1.0), rng.gen_range(0.3..1.0)];
    let s = diam / (2.0 * linalg::norm(&w));
    w.iter_mut().for_each(|x| *x *= s);
    AxisBox::new(center, w).expect("planted diameter box")
}

/// Increasing segment with Euclidean length exactly `len`, as
/// (base, nonnegative delta).
pub fn planted_increasing_segment(rng: &mut ChaCha8Rng, len: f64) -> (Vector, Vector) {
    let base = vec![rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)];
    let mut delta = vec![rng.gen_range(0.2..1.0), rng.gen_range(0.2..1.0)];
    let s = len / linalg::norm(&delta);
    delta.iter_mut().for_each(|x| *x *= s);
    (base, delta)
}
