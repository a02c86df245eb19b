//! Quantitative Tverberg engine: brute-force partition search over lifted
//! witness parameters, decode of the common point, and certificates whose
//! containment claims are re-verified by an independent audit path.

pub mod audit;
pub mod charts;

use serde::{Deserialize, Serialize};

use crate::body::Body;
use crate::error::{GeomError, Result};
use crate::lp::{LpProblem, Sense};
use crate::solvers::{max_volume_ellipsoid, EllipsoidConstraint};

pub use audit::{containment_audit, verify_certificate, verify_certificate_with};
pub use charts::{is_prime_power, Chart, ChartKind};

/// Brute-force cap: r^N partition assignments.
const MAX_ASSIGNMENTS: f64 = 1e7;

/// Partitions of {0..n-1} into at most r nonempty parts, as restricted-growth
/// strings, ordered by part-size imbalance then lexicographically. Balanced
/// partitions come first, which is where Tverberg certificates live.
fn partitions(n: usize, r: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut rgs = vec![0usize; n];
    loop {
        out.push(rgs.clone());
        // next restricted-growth string with values < r
        let mut i = n;
        loop {
            if i == 1 {
                // exhausted
                let imbalance = |s: &Vec<usize>| -> (usize, Vec<usize>) {
                    let parts = s.iter().max().map(|m| m + 1).unwrap_or(1);
                    let mut sizes = vec![0usize; r];
                    for &a in s {
                        sizes[a] += 1;
                    }
                    let target = (n + r - 1) / r;
                    let imb: usize = sizes
                        .iter()
                        .map(|&sz| (sz as isize - target as isize).unsigned_abs())
                        .sum();
                    let _ = parts;
                    (imb, s.clone())
                };
                out.sort_by_key(imbalance);
                return out;
            }
            i -= 1;
            let max_prev = rgs[..i].iter().copied().max().unwrap_or(0);
            if rgs[i] <= max_prev && rgs[i] + 1 < r {
                rgs[i] += 1;
                for v in rgs[i + 1..].iter_mut() {
                    *v = 0;
                }
                break;
            }
            rgs[i] = 0;
        }
    }
}

fn parts_of(assignment: &[usize], r: usize) -> Vec<Vec<usize>> {
    let mut parts = vec![Vec::new(); r];
    for (i, &a) in assignment.iter().enumerate() {
        parts[a].push(i);
    }
    parts.retain(|p| !p.is_empty());
    parts
}

/// Common point of the convex hulls of the parts, if any: one LP feasibility
/// problem over (x, per-part convex weights).
fn common_point_lp(
    points: &[Vec<f64>],
    parts: &[Vec<usize>],
) -> Result<Option<(Vec<f64>, Vec<Vec<f64>>)>> {
    let l = points[0].len();
    let nw: usize = parts.iter().map(|p| p.len()).sum();
    let n = l + nw;
    let mut p = LpProblem::new(vec![0.0; n], Sense::Max);
    for i in 0..nw {
        p.set_nonneg(l + i);
    }
    let mut offset = l;
    for part in parts {
        for c in 0..l {
            let mut row = vec![0.0; n];
            row[c] = -1.0;
            for (j, &i) in part.iter().enumerate() {
                row[offset + j] = points[i][c];
            }
            p.add_eq(row, 0.0);
        }
        let mut row = vec![0.0; n];
        for j in 0..part.len() {
            row[offset + j] = 1.0;
        }
        p.add_eq(row, 1.0);
        offset += part.len();
    }
    match p.solve() {
        Ok(sol) => {
            let x = sol.point[..l].to_vec();
            let mut weights = Vec::with_capacity(parts.len());
            let mut off = l;
            for part in parts {
                weights.push(sol.point[off..off + part.len()].to_vec());
                off += part.len();
            }
            Ok(Some((x, weights)))
        }
        Err(GeomError::Infeasible) => Ok(None),
        Err(e) => Err(e),
    }
}

/// Tverberg partition of raw points: first partition (in balanced-first
/// order) whose part hulls share a common point.
pub fn tverberg_points(
    points: &[Vec<f64>],
    r: usize,
) -> Result<(Vec<Vec<usize>>, Vec<f64>)> {
    let n = points.len();
    if n == 0 || r < 2 {
        return Err(GeomError::InvalidInput("need points and r ≥ 2".into()));
    }
    if (r as f64).powi(n as i32) > MAX_ASSIGNMENTS {
        return Err(GeomError::TooManySubsets(n));
    }
    for assignment in partitions(n, r) {
        let parts = parts_of(&assignment, r);
        if parts.len() < 2 {
            continue;
        }
        if let Some((x, _)) = common_point_lp(points, &parts)? {
            return Ok((parts, x));
        }
    }
    Err(GeomError::NotFound)
}

/// Partition + lifted common point + decoded witness + containment evidence.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TverbergCertificate {
    pub chart: Chart,
    pub r: usize,
    pub threshold: f64,
    /// Input witnesses, echoed so certificates are self-contained.
    pub witnesses: Vec<Body>,
    pub partition: Vec<Vec<usize>>,
    /// The common chart point (full coordinates, hidden coordinate filled).
    pub lifted_common_point: Vec<f64>,
    /// Per-part full combinations (equal for affine charts up to LP slack;
    /// differ in the hidden coordinate for the reduced charts).
    pub per_part_points: Vec<Vec<f64>>,
    pub decoded_witness: Body,
    pub objective_value: f64,
    /// Minimum support gap per part over the audit directions (≥ -1e-6).
    pub min_gaps: Vec<f64>,
    pub audit_directions: usize,
}

impl TverbergCertificate {
    pub fn partition_is_valid(&self, n: usize) -> bool {
        let mut seen = vec![false; n];
        for part in &self.partition {
            if part.is_empty() {
                return false;
            }
            for &i in part {
                if i >= n || seen[i] {
                    return false;
                }
                seen[i] = true;
            }
        }
        seen.iter().all(|&s| s)
    }
}

/// Quantitative Tverberg search: lift the witnesses, look for a partition
/// whose lifted parts admit a common (reduced) chart point, complete any
/// hidden coordinate by the minimum across parts, decode, and audit.
///
/// The determinant chart first tries the affine route (enough witnesses make
/// the common point an ordinary Radon point of the (center, shape) lift);
/// with only the topological count available it falls back to a projected
/// weight search for decode-equality across parts.
pub fn quantitative_tverberg(
    witnesses: &[Body],
    chart_kind: ChartKind,
    r: usize,
    threshold: f64,
) -> Result<TverbergCertificate> {
    let n = witnesses.len();
    if n == 0 || r < 2 {
        return Err(GeomError::InvalidInput("need witnesses and r ≥ 2".into()));
    }
    let d = witnesses[0].dim();
    let mut chart = Chart::new(chart_kind, d);
    let need = chart.theorem_count(r);
    if n < need {
        return Err(GeomError::InvalidInput(format!(
            "chart needs {need} witnesses for r = {r}, got {n}"
        )));
    }
    if (r as f64).powi(n as i32) > MAX_ASSIGNMENTS {
        return Err(GeomError::TooManySubsets(n));
    }
    let mut lifts = Vec::with_capacity(n);
    for w in witnesses {
        let obj = chart.objective(w)?;
        if obj < threshold - 1e-9 {
            return Err(GeomError::InvalidInput(format!(
                "witness objective {obj} below threshold {threshold}"
            )));
        }
        lifts.push(chart.lift(w)?);
    }
    let hidden = chart.hidden_coordinate();
    let reduced: Vec<Vec<f64>> = lifts
        .iter()
        .map(|p| match hidden {
            Some(h) => {
                let mut q = p.clone();
                q.remove(h);
                q
            }
            None => p.clone(),
        })
        .collect();

    let assignments = partitions(n, r);
    for assignment in &assignments {
        let parts = parts_of(assignment, r);
        if parts.len() != r {
            continue;
        }
        if let Some((common_reduced, weights)) = common_point_lp(&reduced, &parts)? {
            // Per-part full combinations share the reduced coordinates (up
            // to LP slack); the hidden coordinate is completed by the
            // minimum, which stays inside every part's hull by monotonicity.
            let per_part: Vec<Vec<f64>> = parts
                .iter()
                .zip(&weights)
                .map(|(part, w)| {
                    let pts: Vec<Vec<f64>> = part.iter().map(|&i| lifts[i].clone()).collect();
                    chart.combine(&pts, w)
                })
                .collect();
            let full_common = match hidden {
                Some(h) => {
                    let min_hidden = per_part
                        .iter()
                        .map(|p| p[h])
                        .fold(f64::INFINITY, f64::min);
                    let mut q = common_reduced.clone();
                    q.insert(h, min_hidden);
                    q
                }
                None => common_reduced.clone(),
            };
            let decoded = chart.decode(&full_common)?;
            return finish_certificate(
                chart, r, threshold, witnesses, parts, full_common, per_part, decoded,
            );
        }
    }

    // Nonlinear fallback for the determinant chart at the topological count.
    if matches!(chart.kind, ChartKind::EllipsoidDet) {
        for assignment in &assignments {
            let parts = parts_of(assignment, r);
            if parts.len() != r {
                continue;
            }
            if let Some((per_part, decoded_point)) =
                det_chart_weight_search(&chart, &lifts, &parts)?
            {
                let decoded = chart.decode(&decoded_point)?;
                return finish_certificate(
                    chart,
                    r,
                    threshold,
                    witnesses,
                    parts,
                    decoded_point,
                    per_part,
                    decoded,
                );
            }
        }
    }
    Err(GeomError::NotFound)
}

#[allow(clippy::too_many_arguments)]
fn finish_certificate(
    chart: Chart,
    r: usize,
    threshold: f64,
    witnesses: &[Body],
    parts: Vec<Vec<usize>>,
    lifted_common_point: Vec<f64>,
    per_part_points: Vec<Vec<f64>>,
    decoded: Body,
) -> Result<TverbergCertificate> {
    let objective_value = chart.objective(&decoded)?;
    let dirs = if decoded.dim() == 2 { 360 } else { 1024 };
    let part_bodies: Vec<Vec<Body>> = parts
        .iter()
        .map(|part| part.iter().map(|&i| witnesses[i].clone()).collect())
        .collect();
    let gaps = containment_audit(&decoded, &part_bodies, dirs)?;
    let min_gaps: Vec<f64> = gaps
        .iter()
        .map(|g| g.iter().copied().fold(f64::INFINITY, f64::min))
        .collect();
    if min_gaps.iter().any(|&g| g < -1e-6) {
        return Err(GeomError::ContainmentAuditFailed(format!(
            "support gap {:?}",
            min_gaps
        )));
    }
    Ok(TverbergCertificate {
        chart,
        r,
        threshold,
        witnesses: witnesses.to_vec(),
        partition: parts,
        lifted_common_point,
        per_part_points,
        decoded_witness: decoded,
        objective_value,
        min_gaps,
        audit_directions: dirs,
    })
}

/// Projected-gradient search for per-part weights whose det-chart
/// combinations decode to the same ellipsoid (centers equal, normalized
/// shapes equal). Accepts below discrepancy 1e-7.
fn det_chart_weight_search(
    chart: &Chart,
    lifts: &[Vec<f64>],
    parts: &[Vec<usize>],
) -> Result<Option<(Vec<Vec<f64>>, Vec<f64>)>> {
    let d = chart.dim;
    let det0 = chart
        .det0
        .ok_or_else(|| GeomError::InvalidInput("weight search before lift".into()))?;
    let sizes: Vec<usize> = parts.iter().map(|p| p.len()).collect();
    let total: usize = sizes.iter().sum();

    let normalize = |point: &[f64]| -> Option<Vec<f64>> {
        let cstar = crate::linalg::sym_unpack(
            &nalgebra::DVector::from_column_slice(&point[d..]),
            d,
        );
        let det = crate::linalg::determinant(&cstar);
        if det <= 0.0 {
            return None;
        }
        let c = cstar * (det0 / det).powf(1.0 / d as f64);
        let mut out = point[..d].to_vec();
        out.extend(crate::linalg::sym_pack(&c).iter().copied());
        Some(out)
    };
    let combos = |w: &[f64]| -> Vec<Vec<f64>> {
        let mut out = Vec::with_capacity(parts.len());
        let mut off = 0;
        for (part, &sz) in parts.iter().zip(&sizes) {
            let pts: Vec<Vec<f64>> = part.iter().map(|&i| lifts[i].clone()).collect();
            out.push(chart.combine(&pts, &w[off..off + sz]));
            off += sz;
        }
        out
    };
    let discrepancy = |w: &[f64]| -> f64 {
        let normed: Option<Vec<Vec<f64>>> = combos(w).iter().map(|p| normalize(p)).collect();
        match normed {
            Some(ns) => {
                let mut disc = 0.0f64;
                for j in 1..ns.len() {
                    for (a, b) in ns[j].iter().zip(&ns[0]) {
                        disc += (a - b) * (a - b);
                    }
                }
                disc.sqrt()
            }
            None => f64::INFINITY,
        }
    };
    let project = |w: &mut [f64]| {
        let mut off = 0;
        for &sz in &sizes {
            let seg = &mut w[off..off + sz];
            for v in seg.iter_mut() {
                *v = v.max(0.0);
            }
            let s: f64 = seg.iter().sum();
            if s <= 1e-12 {
                for v in seg.iter_mut() {
                    *v = 1.0 / sz as f64;
                }
            } else {
                for v in seg.iter_mut() {
                    *v /= s;
                }
            }
            off += sz;
        }
    };

    let mut best: Option<(f64, Vec<f64>)> = None;
    for restart in 0..8u64 {
        let mut w: Vec<f64> = if restart == 0 {
            sizes
                .iter()
                .flat_map(|&sz| std::iter::repeat(1.0 / sz as f64).take(sz))
                .collect()
        } else {
            use rand::Rng;
            let mut rng = crate::rng::seeded_rng(0x7456, restart);
            (0..total).map(|_| rng.gen_range(0.1..1.0)).collect()
        };
        project(&mut w);
        let mut f = discrepancy(&w);
        let mut step = 0.25;
        for _ in 0..400 {
            if f < 1e-8 {
                break;
            }
            // numerical gradient
            let h = 1e-6;
            let mut g = vec![0.0; total];
            for i in 0..total {
                let mut wp = w.clone();
                wp[i] += h;
                project(&mut wp);
                g[i] = (discrepancy(&wp) - f) / h;
            }
            let mut improved = false;
            while step > 1e-10 {
                let mut cand = w.clone();
                for i in 0..total {
                    cand[i] -= step * g[i];
                }
                project(&mut cand);
                let fc = discrepancy(&cand);
                if fc < f {
                    w = cand;
                    f = fc;
                    step *= 1.5;
                    improved = true;
                    break;
                }
                step *= 0.5;
            }
            if !improved {
                break;
            }
        }
        if best.as_ref().map_or(true, |(b, _)| f < *b) {
            best = Some((f, w.clone()));
        }
        if f < 1e-8 {
            break;
        }
    }
    let Some((f, w)) = best else { return Ok(None) };
    if f > 1e-7 {
        return Ok(None);
    }
    let per_part = combos(&w);
    let decoded_point = normalize(&per_part[0])
        .ok_or_else(|| GeomError::NumericalFailure("degenerate combined shape".into()))?;
    Ok(Some((per_part, decoded_point)))
}

/// Tverberg for the volume (d = 2): shrink each body's maximum-volume
/// ellipse to the common volume, then run the determinant chart. The John
/// bound vol(MVIE) ≥ d^{-d}·vol(K) makes the decoded ellipse volume at least
/// d^{-d} when the inputs have volume one.
pub fn volume_tverberg(bodies: &[crate::body::HPolytope], r: usize) -> Result<TverbergCertificate> {
    if bodies.is_empty() {
        return Err(GeomError::InvalidInput("empty family".into()));
    }
    let d = bodies[0].dim;
    if d != 2 {
        return Err(GeomError::DimensionTooLarge(d));
    }
    for (i, b) in bodies.iter().enumerate() {
        let v = b.volume()?;
        if v < 1.0 - 1e-9 {
            return Err(GeomError::InvalidInput(format!(
                "body {i} has volume {v} < 1"
            )));
        }
    }
    let mut ellipses = Vec::with_capacity(bodies.len());
    for b in bodies {
        let rep = max_volume_ellipsoid(std::slice::from_ref(b), EllipsoidConstraint::Free)?;
        let Some(Body::Ellipsoid(e)) = rep.witness else {
            return Err(GeomError::NumericalFailure("MVIE failed".into()));
        };
        ellipses.push(e);
    }
    let vols: Vec<f64> = ellipses.iter().map(|e| e.volume()).collect();
    let vmin = vols.iter().copied().fold(f64::INFINITY, f64::min);
    let witnesses: Vec<Body> = ellipses
        .iter()
        .zip(&vols)
        .map(|(e, &v)| Body::Ellipsoid(e.scaled((vmin / v).powf(1.0 / d as f64))))
        .collect();
    quantitative_tverberg(&witnesses, ChartKind::EllipsoidDet, r, vmin)
}
