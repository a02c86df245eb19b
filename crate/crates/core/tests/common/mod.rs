//! Shared test utilities: an implementation-independent grid-search oracle
//! over witness parameters (coarse full grid, then local refinement with
//! coordinate and pairwise-diagonal moves), and random bounded-polytope
//! generators. The oracle exercises only halfspace arithmetic, never the
//! barrier solvers it is used to check.

use quanthelly::body::{Body, HPolytope};
use quanthelly::helly::generators::{random_family, GeneratorKind, GeneratorSpec};
use quanthelly::rng::seeded_rng;
use rand::Rng;

/// Local refinement: coordinate moves plus all ±e_i ± e_j diagonal moves,
/// shrinking the step through `scales`.
pub fn refine(
    start: Vec<f64>,
    scales: &[f64],
    feasible: &dyn Fn(&[f64]) -> bool,
    objective: &dyn Fn(&[f64]) -> f64,
) -> (Vec<f64>, f64) {
    let n = start.len();
    let mut moves: Vec<Vec<f64>> = Vec::new();
    for i in 0..n {
        for s in [1.0, -1.0] {
            let mut m = vec![0.0; n];
            m[i] = s;
            moves.push(m);
        }
    }
    for i in 0..n {
        for j in (i + 1)..n {
            for si in [1.0, -1.0] {
                for sj in [1.0, -1.0] {
                    let mut m = vec![0.0; n];
                    m[i] = si;
                    m[j] = sj;
                    moves.push(m);
                }
            }
        }
    }
    // compass + diagonal moves stall on ridges that need three or more
    // coordinates moving together; seeded random directions and Hooke-Jeeves
    // pattern extrapolation break those
    let mut rng = seeded_rng(0x0c0a, start.len() as u64);
    for _ in 0..96 {
        let m: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let norm = m.iter().map(|v| v * v).sum::<f64>().sqrt().max(1e-9);
        moves.push(m.iter().map(|v| v / norm).collect());
    }
    let eval = |p: &[f64]| -> f64 {
        if feasible(p) {
            objective(p)
        } else {
            f64::NEG_INFINITY
        }
    };
    let mut x = start;
    let mut fx = eval(&x);
    // cycle the whole ladder until a full pass stops improving
    for _pass in 0..6 {
        let before = fx;
        ladder(&mut x, &mut fx, scales, &moves, &eval);
        if fx <= before * (1.0 + 1e-12) + 1e-15 {
            break;
        }
    }
    (x, fx)
}

fn ladder(
    x: &mut Vec<f64>,
    fx: &mut f64,
    scales: &[f64],
    moves: &[Vec<f64>],
    eval: &dyn Fn(&[f64]) -> f64,
) {
    for &scale in scales {
        loop {
            let base = x.clone();
            // cumulative exploration: accepted moves compose into ridge
            // directions
            let mut improved = false;
            for m in moves {
                let cand: Vec<f64> = x.iter().zip(m).map(|(a, b)| a + scale * b).collect();
                let fc = eval(&cand);
                if fc > *fx + 1e-15 {
                    *x = cand;
                    *fx = fc;
                    improved = true;
                }
            }
            if !improved {
                break;
            }
            // pattern move: extrapolate along (x - base), doubling while it
            // keeps paying
            let mut t = 1.0;
            loop {
                let cand: Vec<f64> = x
                    .iter()
                    .zip(&base)
                    .map(|(xi, bi)| xi + t * (xi - bi))
                    .collect();
                let fc = eval(&cand);
                if fc > *fx + 1e-15 {
                    *x = cand;
                    *fx = fc;
                    t *= 2.0;
                } else {
                    break;
                }
            }
        }
    }
}

/// Nelder–Mead maximization polish: the simplex reorients itself along
/// curved ridges where fixed-direction pattern probes stall.
pub fn nelder_mead_polish(
    start: &[f64],
    scale: f64,
    iters: usize,
    eval: &dyn Fn(&[f64]) -> f64,
) -> (Vec<f64>, f64) {
    let n = start.len();
    let mut simplex: Vec<Vec<f64>> = vec![start.to_vec()];
    for i in 0..n {
        let mut v = start.to_vec();
        v[i] += scale;
        simplex.push(v);
    }
    let mut vals: Vec<f64> = simplex.iter().map(|x| eval(x)).collect();
    for _ in 0..iters {
        let mut idx: Vec<usize> = (0..simplex.len()).collect();
        idx.sort_by(|&a, &b| vals[b].partial_cmp(&vals[a]).unwrap());
        let (best, worst, second_worst) = (idx[0], idx[n], idx[n - 1]);
        let centroid: Vec<f64> = (0..n)
            .map(|j| idx[..n].iter().map(|&i| simplex[i][j]).sum::<f64>() / n as f64)
            .collect();
        let reflect: Vec<f64> = (0..n)
            .map(|j| centroid[j] + (centroid[j] - simplex[worst][j]))
            .collect();
        let fr = eval(&reflect);
        if fr > vals[best] {
            let expand: Vec<f64> = (0..n)
                .map(|j| centroid[j] + 2.0 * (centroid[j] - simplex[worst][j]))
                .collect();
            let fe = eval(&expand);
            if fe > fr {
                simplex[worst] = expand;
                vals[worst] = fe;
            } else {
                simplex[worst] = reflect;
                vals[worst] = fr;
            }
        } else if fr > vals[second_worst] {
            simplex[worst] = reflect;
            vals[worst] = fr;
        } else {
            let contract: Vec<f64> = (0..n)
                .map(|j| centroid[j] - 0.5 * (centroid[j] - simplex[worst][j]))
                .collect();
            let fc = eval(&contract);
            if fc > vals[worst] {
                simplex[worst] = contract;
                vals[worst] = fc;
            } else {
                let b = simplex[best].clone();
                for (i, s) in simplex.iter_mut().enumerate() {
                    if i != best {
                        for j in 0..n {
                            s[j] = b[j] + 0.5 * (s[j] - b[j]);
                        }
                    }
                }
                vals = simplex.iter().map(|x| eval(x)).collect();
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

fn halfspace_rows(family: &[HPolytope]) -> Vec<(Vec<f64>, f64)> {
    family
        .iter()
        .flat_map(|p| p.halfspaces.iter().map(|h| (h.normal.clone(), h.offset)))
        .collect()
}

/// Exact maximum of the product w_x·w_y over { w ≥ 0 : a_i·w ≤ r_i }
/// (a_i ≥ 0 componentwise): the optimum is at a polygon vertex or at the
/// tangency point w = (r/(2a_x), r/(2a_y)) of one edge, all enumerated.
fn max_product(constraints: &[(f64, f64, f64)]) -> f64 {
    if constraints.iter().any(|&(_, _, r)| r < 0.0) {
        return f64::NEG_INFINITY;
    }
    let feas = |w: (f64, f64)| -> bool {
        w.0 >= -1e-12
            && w.1 >= -1e-12
            && constraints
                .iter()
                .all(|&(ax, ay, r)| ax * w.0 + ay * w.1 <= r + 1e-10)
    };
    let mut best = 0.0f64;
    let mut consider = |w: (f64, f64)| {
        if feas(w) {
            best = best.max(w.0.max(0.0) * w.1.max(0.0));
        }
    };
    let m = constraints.len();
    for i in 0..m {
        let (ax, ay, r) = constraints[i];
        // edge tangency of the hyperbola w_x·w_y = const
        if ax > 1e-12 && ay > 1e-12 {
            consider((r / (2.0 * ax), r / (2.0 * ay)));
        }
        // axis intercepts
        if ax > 1e-12 {
            consider((r / ax, 0.0));
        }
        if ay > 1e-12 {
            consider((0.0, r / ay));
        }
        // pairwise intersections
        for j in (i + 1)..m {
            let (bx, by, s) = constraints[j];
            let det = ax * by - ay * bx;
            if det.abs() > 1e-12 {
                let wx = (r * by - ay * s) / det;
                let wy = (ax * s - r * bx) / det;
                consider((wx, wy));
            }
        }
    }
    best
}

/// Grid-search oracle for the largest axis-parallel box of a 2-D family:
/// coarse grid over the center with an exact inner width maximization,
/// then local refinement of the center.
pub fn box_oracle(family: &[HPolytope]) -> f64 {
    let rows = halfspace_rows(family);
    let value_at = |c: &[f64]| -> f64 {
        let constraints: Vec<(f64, f64, f64)> = rows
            .iter()
            .map(|(h, b)| (h[0].abs(), h[1].abs(), b - c[0] * h[0] - c[1] * h[1]))
            .collect();
        let p = max_product(&constraints);
        if p.is_finite() { 4.0 * p } else { p }
    };
    let inter = HPolytope::intersect_family(family).unwrap();
    let verts = inter.vertices().unwrap();
    let lo: Vec<f64> = (0..2)
        .map(|j| verts.iter().map(|v| v[j]).fold(f64::INFINITY, f64::min))
        .collect();
    let hi: Vec<f64> = (0..2)
        .map(|j| verts.iter().map(|v| v[j]).fold(f64::NEG_INFINITY, f64::max))
        .collect();
    let span = (hi[0] - lo[0]).max(hi[1] - lo[1]).max(1e-6);
    let steps = 24usize;
    let mut best: Option<(Vec<f64>, f64)> = None;
    for ic in 0..=steps {
        for jc in 0..=steps {
            let c = vec![
                lo[0] + (hi[0] - lo[0]) * ic as f64 / steps as f64,
                lo[1] + (hi[1] - lo[1]) * jc as f64 / steps as f64,
            ];
            let f = value_at(&c);
            if f.is_finite() && best.as_ref().map_or(true, |(_, b)| f > *b) {
                best = Some((c, f));
            }
        }
    }
    let (start, _) = best.expect("grid found no feasible center");
    let step0 = span / steps as f64;
    let scales = [step0, step0 / 4.0, step0 / 16.0, 1e-3, 2e-4, 5e-5, 1e-5];
    let eval = |c: &[f64]| value_at(c);
    let (x, f1) = refine(start, &scales, &|c| value_at(c).is_finite(), &eval);
    let (_, f2) = nelder_mead_polish(&x, 1e-3, 3000, &eval);
    f1.max(f2)
}

/// Grid-search oracle for the maximum-area ellipse of a 2-D family.
///
/// Parameterized as (center, rotation angle, squared semi-axes): with center
/// and angle fixed, each halfspace constraint ⟨c,h⟩ + ‖A·h‖ ≤ b becomes
/// linear in the squared semi-axes (x, y) = (l1², l2²), and the area
/// π·√(x·y) is maximized by the same exact product subproblem as the box
/// widths. Outer search is a grid plus refinement over (center, angle).
pub fn ellipse_oracle(family: &[HPolytope]) -> f64 {
    let rows = halfspace_rows(family);
    let value_at = |p: &[f64]| -> f64 {
        let (cx, cy, theta) = (p[0], p[1], p[2]);
        let (co, si) = (theta.cos(), theta.sin());
        let mut constraints = Vec::with_capacity(rows.len());
        for (h, b) in &rows {
            let r = b - cx * h[0] - cy * h[1];
            if r <= 0.0 {
                return f64::NEG_INFINITY;
            }
            // Rᵀh for R = [[cos, -sin], [sin, cos]]
            let ph = co * h[0] + si * h[1];
            let qh = -si * h[0] + co * h[1];
            constraints.push((ph * ph, qh * qh, r * r));
        }
        let prod = max_product(&constraints);
        if prod <= 0.0 {
            return 0.0;
        }
        std::f64::consts::PI * prod.sqrt()
    };
    let inter = HPolytope::intersect_family(family).unwrap();
    let verts = inter.vertices().unwrap();
    let lo: Vec<f64> = (0..2)
        .map(|j| verts.iter().map(|v| v[j]).fold(f64::INFINITY, f64::min))
        .collect();
    let hi: Vec<f64> = (0..2)
        .map(|j| verts.iter().map(|v| v[j]).fold(f64::NEG_INFINITY, f64::max))
        .collect();
    let span = (hi[0] - lo[0]).max(hi[1] - lo[1]).max(1e-6);
    let steps = 16usize;
    let mut best: Option<(Vec<f64>, f64)> = None;
    for ic in 0..=steps {
        for jc in 0..=steps {
            for it in 0..steps {
                let p = vec![
                    lo[0] + (hi[0] - lo[0]) * ic as f64 / steps as f64,
                    lo[1] + (hi[1] - lo[1]) * jc as f64 / steps as f64,
                    std::f64::consts::PI * it as f64 / steps as f64,
                ];
                let f = value_at(&p);
                if f.is_finite() && best.as_ref().map_or(true, |(_, b)| f > *b) {
                    best = Some((p, f));
                }
            }
        }
    }
    let (start, _) = best.expect("grid found no feasible ellipse");
    let step0 = span / steps as f64;
    let scales = [step0, step0 / 4.0, step0 / 16.0, 1e-3, 2e-4, 5e-5, 1e-5];
    let (x, f1) = refine(start, &scales, &|p| value_at(p).is_finite(), &value_at);
    let (_, f2) = nelder_mead_polish(&x, 1e-3, 3000, &value_at);
    f1.max(f2)
}

/// Random bounded polytope: tangent halfspaces around a random planted
/// ellipse, retried until bounded without the helper box.
pub fn random_bounded_polytope(seed: u64, halfspaces: usize) -> HPolytope {
    for attempt in 0..100u64 {
        let mut rng = seeded_rng(seed, 1000 + attempt);
        let planted = quanthelly::helly::generators::planted_ellipse(&mut rng, 1.0, false, false);
        let spec = GeneratorSpec {
            kind: GeneratorKind::RandomPolytopeIntersections {
                halfspaces_per_body: halfspaces,
            },
            count: 1,
            planted: Body::Ellipsoid(planted),
            jitter: 0.5,
        };
        let family = random_family(&spec, seed.wrapping_add(attempt)).unwrap();
        // strip the bounding box and keep only the tangent halfspaces when
        // they already bound the body
        let body = &family[0];
        let tangent = HPolytope::new(2, body.halfspaces[..halfspaces].to_vec()).unwrap();
        if tangent.is_bounded() && !tangent.is_empty() {
            return tangent;
        }
        if attempt == 99 {
            return body.clone();
        }
    }
    unreachable!()
}

/// Random SPD 2x2 matrix with eigenvalues in [lo, hi].
pub fn random_spd(rng: &mut rand_chacha::ChaCha8Rng, lo: f64, hi: f64) -> Vec<Vec<f64>> {
    let (l1, l2) = (rng.gen_range(lo..hi), rng.gen_range(lo..hi));
    let t = rng.gen_range(0.0..std::f64::consts::PI);
    let (c, s) = (t.cos(), t.sin());
    vec![
        vec![c * c * l1 + s * s * l2, c * s * (l1 - l2)],
        vec![c * s * (l1 - l2), s * s * l1 + c * c * l2],
    ]
}
