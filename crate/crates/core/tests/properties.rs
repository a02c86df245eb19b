//! Property suites for the geometry kernel and the witness solvers: support
//! additivity on the Minkowski charts, log-concavity of zonotope volume and
//! of the determinant, sampling-oracle agreement for containment, solver
//! feasibility/optimality/monotonicity, the John ratio, and chart
//! min-concavity. Randomized but fully seeded.

mod common;

use proptest::prelude::*;
use quanthelly::body::{
    contains, minkowski_combine_hconvex, minkowski_combine_zonotopes, support, AxisBox, Body,
    Ellipsoid, HConvexSet, HPolytope, Zonotope,
};
use quanthelly::helly::generators::{
    planted_box, random_family, GeneratorKind, GeneratorSpec,
};
use quanthelly::linalg;
use quanthelly::rng::seeded_rng;
use quanthelly::solvers::{
    max_volume_box, max_volume_ellipsoid, EllipsoidConstraint, SolveStatus,
};
use rand::Rng;

fn hexagon_hset() -> Vec<Vec<f64>> {
    (0..6)
        .map(|k| {
            let t = 2.0 * std::f64::consts::PI * k as f64 / 6.0;
            vec![t.cos(), t.sin()]
        })
        .collect()
}

#[test]
fn support_additivity_on_charts() {
    let mut rng = seeded_rng(101, 0);
    let dirs = vec![vec![1.0, 0.0], vec![0.0, 1.0], vec![1.0, 1.0]];
    for _ in 0..300 {
        let a = quanthelly::helly::generators::planted_zonotope(&mut rng, &dirs, 1.0);
        let b = quanthelly::helly::generators::planted_zonotope(&mut rng, &dirs, 2.0);
        let lam: f64 = rng.gen_range(0.0..1.0);
        let mid = minkowski_combine_zonotopes(&a, &b, lam).unwrap();
        let t: f64 = rng.gen_range(0.0..2.0 * std::f64::consts::PI);
        let u = vec![t.cos(), t.sin()];
        let lhs = mid.support(&u);
        let rhs = lam * a.support(&u) + (1.0 - lam) * b.support(&u);
        assert!((lhs - rhs).abs() < 1e-9, "zonotope additivity {lhs} vs {rhs}");
    }
    let hset = hexagon_hset();
    for trial in 0..100 {
        let mut rng = seeded_rng(102, trial);
        let mk = |rng: &mut rand_chacha::ChaCha8Rng| {
            let sup: Vec<f64> = (0..6).map(|_| rng.gen_range(0.8..2.0)).collect();
            HConvexSet::new(hset.clone(), sup).unwrap().canonicalize().unwrap()
        };
        let a = mk(&mut rng);
        let b = mk(&mut rng);
        let lam: f64 = rng.gen_range(0.0..1.0);
        let mid = minkowski_combine_hconvex(&a, &b, lam).unwrap();
        let t: f64 = rng.gen_range(0.0..2.0 * std::f64::consts::PI);
        let u = vec![t.cos(), t.sin()];
        let lhs = mid.support(&u).unwrap();
        let rhs = lam * a.support(&u).unwrap() + (1.0 - lam) * b.support(&u).unwrap();
        assert!((lhs - rhs).abs() < 1e-9, "hconvex additivity {lhs} vs {rhs}");
    }
}

#[test]
fn zonotope_volume_log_concavity() {
    // vol(combine(a,b,λ)) ≥ vol(a)^λ · vol(b)^(1-λ), 1000 random cases,
    // d ≤ 3, k ≤ 6.
    let mut rng = seeded_rng(103, 0);
    for case in 0..1000 {
        let d = if case % 3 == 0 { 3 } else { 2 };
        let k = rng.gen_range(d..=6usize);
        let dirs: Vec<Vec<f64>> = (0..k)
            .map(|_| {
                let v: Vec<f64> = (0..d).map(|_| rng.gen_range(-1.0..1.0)).collect();
                let n = linalg::norm(&v);
                if n < 1e-3 {
                    let mut e = vec![0.0; d];
                    e[0] = 1.0;
                    e
                } else {
                    v
                }
            })
            .collect();
        let mk = |rng: &mut rand_chacha::ChaCha8Rng| {
            Zonotope::new(
                vec![0.0; d],
                dirs.clone(),
                (0..k).map(|_| rng.gen_range(0.1..2.0)).collect(),
            )
            .unwrap()
        };
        let a = mk(&mut rng);
        let b = mk(&mut rng);
        let lam: f64 = rng.gen_range(0.0..1.0);
        let mid = minkowski_combine_zonotopes(&a, &b, lam).unwrap();
        let bound = a.volume().powf(lam) * b.volume().powf(1.0 - lam);
        assert!(
            mid.volume() >= bound - 1e-9,
            "case {case}: vol {} < bound {}",
            mid.volume(),
            bound
        );
    }
}

#[test]
fn determinant_log_concavity() {
    let mut rng = seeded_rng(104, 0);
    for _ in 0..1000 {
        let a = linalg::to_dmat(&common::random_spd(&mut rng, 0.2, 3.0));
        let b = linalg::to_dmat(&common::random_spd(&mut rng, 0.2, 3.0));
        let lam: f64 = rng.gen_range(0.0..1.0);
        let mid = &a * lam + &b * (1.0 - lam);
        let lhs = linalg::determinant(&mid);
        let rhs = linalg::determinant(&a).powf(lam) * linalg::determinant(&b).powf(1.0 - lam);
        assert!(lhs >= rhs - 1e-9, "det log-concavity {lhs} vs {rhs}");
    }
}

#[test]
fn contains_agrees_with_rejection_sampling() {
    // No sampled point of the inner body may land outside the outer body
    // when contains() says inside; and contains() must reject bodies with a
    // sampled escape.
    let mut rng = seeded_rng(105, 0);
    for trial in 0..20 {
        let outer = common::random_bounded_polytope(200 + trial, 6);
        let (c, r) = outer.chebyshev_center().unwrap();
        let inner: Body = match trial % 4 {
            0 => Body::AxisBox(AxisBox::new(c.clone(), vec![0.6 * r, 0.4 * r]).unwrap()),
            1 => Body::Ellipsoid(
                Ellipsoid::new(c.clone(), vec![vec![0.6 * r, 0.0], vec![0.0, 0.3 * r]]).unwrap(),
            ),
            2 => Body::Zonotope(
                Zonotope::new(
                    c.clone(),
                    vec![vec![1.0, 0.0], vec![0.0, 1.0], vec![1.0, 1.0]],
                    vec![0.4 * r, 0.4 * r, 0.3 * r],
                )
                .unwrap(),
            ),
            _ => Body::HConvex(
                HConvexSet::new(
                    hexagon_hset(),
                    hexagon_hset()
                        .iter()
                        .map(|h| linalg::dot(h, &c) + 0.5 * r)
                        .collect(),
                )
                .unwrap(),
            ),
        };
        let inside = contains(&outer, &inner, 1e-8).unwrap();
        let mut escaped = false;
        for _ in 0..5000 {
            let x = inner.sample_point(&mut rng).unwrap();
            if !outer.membership(&x, 1e-8) {
                escaped = true;
                break;
            }
        }
        if inside {
            assert!(!escaped, "trial {trial}: sampled escape from contained body");
        }
        // Inflate until contains() flips; the inflated body must show
        // sampled escapes (coarse cross-check of the reject direction).
        let big = match &inner {
            Body::Ellipsoid(e) => Body::Ellipsoid(e.scaled(10.0)),
            _ => continue,
        };
        assert!(!contains(&outer, &big, 1e-8).unwrap());
        let mut big_escape = false;
        for _ in 0..5000 {
            let x = big.sample_point(&mut rng).unwrap();
            if !outer.membership(&x, 1e-8) {
                big_escape = true;
                break;
            }
        }
        assert!(big_escape, "trial {trial}: oversized body never escaped in sampling");
    }
}

#[test]
fn simplex_volume_matches_determinant() {
    // Random triangles as H-polytopes: polygon volume = |det| / 2.
    let mut rng = seeded_rng(106, 0);
    for _ in 0..200 {
        let pts: Vec<Vec<f64>> = (0..3)
            .map(|_| vec![rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0)])
            .collect();
        let det = (pts[1][0] - pts[0][0]) * (pts[2][1] - pts[0][1])
            - (pts[2][0] - pts[0][0]) * (pts[1][1] - pts[0][1]);
        let area = det.abs() / 2.0;
        if area < 1e-3 {
            continue;
        }
        // halfspaces from edges, oriented against the opposite vertex
        let mut hs = Vec::new();
        for i in 0..3 {
            let (p, q, o) = (&pts[i], &pts[(i + 1) % 3], &pts[(i + 2) % 3]);
            let mut n = vec![q[1] - p[1], p[0] - q[0]];
            let mut b = n[0] * p[0] + n[1] * p[1];
            if n[0] * o[0] + n[1] * o[1] > b {
                n = vec![-n[0], -n[1]];
                b = -b;
            }
            hs.push(quanthelly::body::Halfspace::new(n, b).unwrap());
        }
        let tri = HPolytope::new(2, hs).unwrap();
        assert!(
            (tri.volume().unwrap() - area).abs() < 1e-9 * (1.0 + area),
            "{} vs {}",
            tri.volume().unwrap(),
            area
        );
    }
}

#[test]
fn solver_feasibility_and_oracle_agreement() {
    // Every Optimal report's witness passes contains() against every family
    // member; objective within 1e-3 relative of the pattern-search oracle.
    for trial in 0..12u64 {
        let body = common::random_bounded_polytope(42 + trial, 6);
        let family = vec![body];
        let box_rep = max_volume_box(&family).unwrap();
        assert_eq!(box_rep.status, SolveStatus::Optimal);
        assert!(box_rep.kkt_residual < 1e-7);
        let w = box_rep.witness.as_ref().unwrap();
        for f in &family {
            assert!(contains(f, w, 1e-8).unwrap());
        }
        let oracle = common::box_oracle(&family);
        let rel = (box_rep.objective_value - oracle).abs() / oracle.max(1e-9);
        assert!(
            box_rep.objective_value >= oracle - 1e-3 * oracle.max(1.0) && rel < 1e-3,
            "trial {trial}: box solver {} vs oracle {oracle}",
            box_rep.objective_value
        );

        let ell_rep = max_volume_ellipsoid(&family, EllipsoidConstraint::Free).unwrap();
        assert_eq!(ell_rep.status, SolveStatus::Optimal);
        let w = ell_rep.witness.as_ref().unwrap();
        for f in &family {
            assert!(contains(f, w, 1e-8).unwrap());
        }
        let oracle = common::ellipse_oracle(&family);
        let rel = (ell_rep.objective_value - oracle).abs() / oracle.max(1e-9);
        assert!(
            ell_rep.objective_value >= oracle - 1e-3 * oracle.max(1.0) && rel < 1e-3,
            "trial {trial}: MVIE {} vs oracle {oracle}",
            ell_rep.objective_value
        );
    }
}

#[test]
fn john_ratio_over_random_polytopes() {
    // vol(K) ≤ d^d · vol(MVIE(K)) + 1e-6, and the d-dilated MVIE contains
    // every vertex of K.
    for trial in 0..200u64 {
        let k = common::random_bounded_polytope(5000 + trial, 6);
        let rep = max_volume_ellipsoid(&[k.clone()], EllipsoidConstraint::Free).unwrap();
        assert_eq!(rep.status, SolveStatus::Optimal, "trial {trial}");
        let vol_k = k.volume().unwrap();
        assert!(
            vol_k <= 4.0 * rep.objective_value + 1e-6,
            "trial {trial}: vol {} vs 4·MVIE {}",
            vol_k,
            4.0 * rep.objective_value
        );
        let Some(Body::Ellipsoid(e)) = rep.witness else { panic!() };
        let dilated = e.scaled(2.0 * (1.0 + 1e-7));
        for v in k.vertices().unwrap() {
            assert!(
                dilated.membership(&v, 1e-7),
                "trial {trial}: vertex {v:?} escapes the 2-dilated MVIE"
            );
        }
    }
}

#[test]
fn monotonicity_adding_halfspaces() {
    // Adding a halfspace to the family never increases any Optimal
    // objective value.
    let mut rng = seeded_rng(107, 0);
    for trial in 0..25u64 {
        let body = common::random_bounded_polytope(900 + trial, 6);
        let family = vec![body.clone()];
        let before = max_volume_box(&family).unwrap();
        let (c, _) = body.chebyshev_center().unwrap();
        let t: f64 = rng.gen_range(0.0..2.0 * std::f64::consts::PI);
        let u = vec![t.cos(), t.sin()];
        let cut = linalg::dot(&u, &c) + rng.gen_range(0.05..0.6);
        let mut hs = body.halfspaces.clone();
        hs.push(quanthelly::body::Halfspace::new(u, cut).unwrap());
        let tighter = vec![HPolytope::new(2, hs).unwrap()];
        let after = max_volume_box(&tighter).unwrap();
        if before.is_optimal() && after.is_optimal() {
            assert!(
                after.objective_value <= before.objective_value + 1e-9,
                "trial {trial}: {} > {}",
                after.objective_value,
                before.objective_value
            );
        }
    }
}

#[test]
fn chart_midpoint_min_concavity() {
    // For feasible same-class witnesses W1, W2 inside ∩family, the chart
    // midpoint is feasible and its objective is ≥ min of the two.
    let mut rng = seeded_rng(108, 0);
    for trial in 0..50u64 {
        let b1 = planted_box(&mut rng, 1.0);
        let b2 = planted_box(&mut rng, 1.5);
        // family that contains both
        let hull_support = |u: &[f64]| -> f64 {
            b1.support(u).max(b2.support(u))
        };
        let mut hs = Vec::new();
        let mut rng2 = seeded_rng(109, trial);
        for _ in 0..8 {
            let t: f64 = rng2.gen_range(0.0..2.0 * std::f64::consts::PI);
            let u = vec![t.cos(), t.sin()];
            let off = hull_support(&u) + rng2.gen_range(0.0..0.3);
            hs.push(quanthelly::body::Halfspace::new(u, off).unwrap());
        }
        hs.extend(HPolytope::bounding_box(2, 10.0).halfspaces);
        let family = vec![HPolytope::new(2, hs).unwrap()];
        let z1 = b1.to_zonotope();
        let z2 = b2.to_zonotope();
        let lam: f64 = rng.gen_range(0.0..1.0);
        let mid = minkowski_combine_zonotopes(&z1, &z2, lam).unwrap();
        assert!(contains(&family[0], &Body::Zonotope(mid.clone()), 1e-9).unwrap());
        assert!(
            mid.volume() >= z1.volume().min(z2.volume()) - 1e-9,
            "min-concavity breach: {} vs min({}, {})",
            mid.volume(),
            z1.volume(),
            z2.volume()
        );
    }
}

#[test]
fn harness_premise_monotone_under_enlargement() {
    // Enlarging every body (adding ε to every offset) never flips a true
    // premise to false.
    for trial in 0..10u64 {
        let mut rng = seeded_rng(110, trial);
        let planted = Body::AxisBox(planted_box(&mut rng, 1.0));
        let spec = GeneratorSpec {
            kind: GeneratorKind::RandomPolytopeIntersections {
                halfspaces_per_body: 3,
            },
            count: 6,
            planted,
            jitter: 0.4,
        };
        let family = random_family(&spec, 7000 + trial).unwrap();
        let check = |fam: &[HPolytope]| {
            quanthelly::helly::check_helly(fam, 4, &quanthelly::helly::WitnessSpec::Box, 1.0)
                .unwrap()
        };
        let base = check(&family);
        assert!(base.premise_holds, "planted premise must hold");
        let enlarged: Vec<HPolytope> = family
            .iter()
            .map(|p| {
                let hs = p
                    .halfspaces
                    .iter()
                    .map(|h| quanthelly::body::Halfspace {
                        normal: h.normal.clone(),
                        offset: h.offset + 0.05,
                    })
                    .collect();
                HPolytope::new(2, hs).unwrap()
            })
            .collect();
        let big = check(&enlarged);
        assert!(big.premise_holds, "premise flipped under enlargement");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// JSON round-trip stability for bodies with arbitrary finite data.
    #[test]
    fn body_json_roundtrip(cx in -10.0f64..10.0, cy in -10.0f64..10.0,
                           wx in 0.0f64..5.0, wy in 0.0f64..5.0) {
        let b = Body::AxisBox(AxisBox::new(vec![cx, cy], vec![wx, wy]).unwrap());
        let s = serde_json::to_string(&b).unwrap();
        let back: Body = serde_json::from_str(&s).unwrap();
        prop_assert_eq!(b, back);
    }

    /// Support function subadditivity in the direction argument:
    /// h(u+v) ≤ h(u) + h(v) for every body class.
    #[test]
    fn support_subadditive(ax in -2.0f64..2.0, ay in -2.0f64..2.0,
                           ux in -1.0f64..1.0, uy in -1.0f64..1.0,
                           vx in -1.0f64..1.0, vy in -1.0f64..1.0) {
        prop_assume!(ux.abs() + uy.abs() > 1e-3);
        prop_assume!(vx.abs() + vy.abs() > 1e-3);
        prop_assume!((ux + vx).abs() + (uy + vy).abs() > 1e-3);
        let e = Body::Ellipsoid(Ellipsoid::new(
            vec![ax, ay],
            vec![vec![1.5, 0.4], vec![0.4, 0.9]],
        ).unwrap());
        let hu = support(&e, &[ux, uy]).unwrap();
        let hv = support(&e, &[vx, vy]).unwrap();
        let huv = support(&e, &[ux + vx, uy + vy]).unwrap();
        prop_assert!(huv <= hu + hv + 1e-9);
    }
}
