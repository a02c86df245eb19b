//! Acceptance suite: one test per criterion, each printing a PASS/FAIL line
//! (run with `cargo test -p quanthelly-cli --test acceptance -- --nocapture`
//! to see them). Tolerances are pinned in code; failures panic with the
//! measured values.

use quanthelly::body::{Body, HPolytope, Halfspace};
use quanthelly::helly::generators::{
    planted_box, planted_ellipse, random_family, GeneratorKind, GeneratorSpec,
};
use quanthelly::helly::john::john_counterexample;
use quanthelly::helly::suites::{run_suite, TheoremSuite};
use quanthelly::linalg;
use quanthelly::lp_type;
use quanthelly::rng::{derive_seed, seeded_rng};
use quanthelly::solvers::{
    max_volume_box, max_volume_ellipsoid, min_enclosing_ellipsoid, min_eps_approx, ApproxClass,
    EllipsoidConstraint,
};
use quanthelly::tverberg::{
    quantitative_tverberg, verify_certificate, volume_tverberg, Chart, ChartKind,
};
use rand::Rng;
use rayon::prelude::*;
use std::f64::consts::PI;

fn pass(criterion: &str, detail: String) {
    println!("[{criterion}] PASS — {detail}");
}

macro_rules! check {
    ($criterion:expr, $cond:expr, $($msg:tt)*) => {
        if !$cond {
            println!("[{}] FAIL — {}", $criterion, format!($($msg)*));
            panic!("acceptance criterion {} failed: {}", $criterion, format!($($msg)*));
        }
    };
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
fn criterion_1_solver_fixtures() {
    let c = "criterion 1: solver fixtures";
    let square = HPolytope::axis_box(&[-1.0, -1.0], &[1.0, 1.0]).unwrap();
    let mvie_square = max_volume_ellipsoid(&[square], EllipsoidConstraint::Free).unwrap();
    check!(
        c,
        (mvie_square.objective_value - PI).abs() < 1e-5,
        "MVIE of [-1,1]^2 area {} vs π",
        mvie_square.objective_value
    );

    let steiner = PI / (6.0 * 3.0f64.sqrt());
    let mvie_tri = max_volume_ellipsoid(&[triangle()], EllipsoidConstraint::Free).unwrap();
    check!(
        c,
        (mvie_tri.objective_value - steiner).abs() < 1e-4,
        "Steiner inellipse area {} vs {}",
        mvie_tri.objective_value,
        steiner
    );

    let box_tri = max_volume_box(&[triangle()]).unwrap();
    check!(
        c,
        (box_tri.objective_value - 0.25).abs() < 1e-6,
        "max box in triangle {} vs 1/4",
        box_tri.objective_value
    );

    let mee = min_enclosing_ellipsoid(&[
        vec![1.0, 0.0],
        vec![-1.0, 0.0],
        vec![0.0, 1.0],
        vec![0.0, -1.0],
    ])
    .unwrap();
    check!(
        c,
        (mee.objective_value - PI).abs() < 1e-5,
        "MEE of the diamond area {} vs π",
        mee.objective_value
    );
    pass(
        c,
        format!(
            "MVIE square {:.8}, Steiner {:.8}, box {:.8}, MEE {:.8}",
            mvie_square.objective_value,
            mvie_tri.objective_value,
            box_tri.objective_value,
            mee.objective_value
        ),
    );
}

#[test]
fn criterion_2_helly_suites() {
    let c = "criterion 2: Helly suites";
    let suites = [
        TheoremSuite::Box,
        TheoremSuite::Zonotope,
        TheoremSuite::Ellipsoid,
        TheoremSuite::HConvex,
        TheoremSuite::AxisEllipsoid,
        TheoremSuite::Centered,
        TheoremSuite::Translate,
    ];
    let mut summary = Vec::new();
    for suite in suites {
        let report = run_suite(suite, 2, 200, 20_260_810).unwrap();
        check!(
            c,
            report.premise_held == 200,
            "{}: premise held only {}/200 (planted instances must satisfy it)",
            suite.name(),
            report.premise_held
        );
        check!(
            c,
            report.conclusion_failures == 0,
            "{}: {} conclusion failures; first instance: {}",
            suite.name(),
            report.conclusion_failures,
            report.violation_instance.clone().unwrap_or_default()
        );
        summary.push(format!("{} 200/200", suite.name()));
    }
    pass(c, summary.join(", "));
}

#[test]
fn criterion_3_john_counterexample() {
    let c = "criterion 3: Corollary sharpness (John counterexample)";
    let (family, cert) = john_counterexample(2).unwrap();
    check!(c, family.len() == 5, "expected 5 halfspace bodies");
    check!(
        c,
        cert.residual() < 1e-9,
        "John residual {}",
        cert.residual()
    );
    check!(c, cert.subset_critical, "pentagon subset criticality failed");
    let full = max_volume_ellipsoid(&family, EllipsoidConstraint::Free).unwrap();
    check!(
        c,
        (full.objective_value - PI).abs() < 1e-5,
        "full-family MVIE area {} vs π",
        full.objective_value
    );
    let mut min_excess = f64::INFINITY;
    for skip in 0..5 {
        let sub: Vec<HPolytope> = family
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != skip)
            .map(|(_, b)| b.clone())
            .collect();
        let rep = max_volume_ellipsoid(&sub, EllipsoidConstraint::Free).unwrap();
        min_excess = min_excess.min(rep.objective_value - PI);
        check!(
            c,
            rep.objective_value > PI + 1e-3,
            "4-subset {skip} MVIE area {} not > π + 1e-3",
            rep.objective_value
        );
    }
    pass(
        c,
        format!(
            "residual {:.2e}, full MVIE {:.8}, min 4-subset excess {:.4}",
            cert.residual(),
            full.objective_value,
            min_excess
        ),
    );
}

#[test]
fn criterion_4_lp_type() {
    let c = "criterion 4: LP-type";
    // 100 random max-box instances, n = 12 halfspace bodies in the plane.
    let results: Vec<(f64, f64)> = (0..100u64)
        .into_par_iter()
        .map(|t| {
            let seed = derive_seed(777, t);
            let mut rng = seeded_rng(seed, 0);
            let planted = Body::AxisBox(planted_box(&mut rng, 1.0));
            let spec = GeneratorSpec {
                kind: GeneratorKind::TangentHalfspaces,
                count: 12,
                planted,
                jitter: 0.5,
            };
            let family = random_family(&spec, seed).unwrap();
            let problem = lp_type::box_instance::problem(family.clone());
            let solved = lp_type::solve(&problem, seed).unwrap();
            // exhaustive 4-subset enumeration oracle
            use itertools::Itertools;
            let mut exhaustive = f64::INFINITY;
            for subset in (0..family.len()).combinations(4) {
                let fam: Vec<HPolytope> = subset.iter().map(|&i| family[i].clone()).collect();
                let rep = max_volume_box(&fam).unwrap();
                exhaustive = exhaustive.min(rep.objective_value);
            }
            (solved.solution.objective_value, exhaustive)
        })
        .collect();
    let mut max_diff = 0.0f64;
    for (got, want) in &results {
        max_diff = max_diff.max((got - want).abs());
    }
    check!(
        c,
        max_diff < 1e-7,
        "LP-type vs exhaustive enumeration differ by {max_diff}"
    );

    // Smallest-enclosing-ball calibration: mean calls at n=400 < 8× n=100.
    let table = lp_type::calibrate_calls(
        &|n, seed| {
            let mut rng = seeded_rng(seed, 1);
            let pts: Vec<[f64; 2]> = (0..n)
                .map(|_| [rng.gen_range(0.0..1.0), rng.gen_range(0.0..1.0)])
                .collect();
            lp_type::ball::problem(pts)
        },
        &[50, 100, 200, 400],
        50,
        99,
    )
    .unwrap();
    let mean100 = table.iter().find(|(n, _)| *n == 100).unwrap().1;
    let mean400 = table.iter().find(|(n, _)| *n == 400).unwrap().1;
    check!(
        c,
        mean400 < 8.0 * mean100,
        "oracle calls not linear-ish: mean(400) = {mean400} vs mean(100) = {mean100}"
    );
    pass(
        c,
        format!(
            "max |lp-type − exhaustive| = {max_diff:.2e}; mean calls 100→{mean100:.1}, 400→{mean400:.1} (ratio {:.2})",
            mean400 / mean100
        ),
    );
}

#[test]
fn criterion_5_tverberg() {
    let c = "criterion 5: Tverberg";
    // 100 instances of 5 random unit-volume axis boxes (zonotope chart).
    let box_results: Vec<f64> = (0..100u64)
        .into_par_iter()
        .map(|t| {
            let mut rng = seeded_rng(derive_seed(888, t), 0);
            let witnesses: Vec<Body> = (0..5)
                .map(|_| Body::Zonotope(planted_box(&mut rng, 1.0).to_zonotope()))
                .collect();
            let cert = quantitative_tverberg(
                &witnesses,
                ChartKind::Zonotope {
                    directions: vec![vec![1.0, 0.0], vec![0.0, 1.0]],
                },
                2,
                1.0,
            )
            .unwrap();
            assert!(verify_certificate(&cert).unwrap(), "independent audit failed");
            cert.objective_value
        })
        .collect();
    let min_box = box_results.iter().copied().fold(f64::INFINITY, f64::min);
    check!(
        c,
        min_box >= 1.0 - 1e-6,
        "five-box certificates dipped to volume {min_box}"
    );

    // 50 instances of 7 unit-area ellipses (det chart).
    let ell_results: Vec<f64> = (0..50u64)
        .into_par_iter()
        .map(|t| {
            let mut rng = seeded_rng(derive_seed(889, t), 0);
            let witnesses: Vec<Body> = (0..7)
                .map(|_| Body::Ellipsoid(planted_ellipse(&mut rng, 1.0, false, false)))
                .collect();
            let cert =
                quantitative_tverberg(&witnesses, ChartKind::EllipsoidDet, 2, 1.0).unwrap();
            assert!(verify_certificate(&cert).unwrap(), "independent audit failed");
            cert.objective_value
        })
        .collect();
    let min_ell = ell_results.iter().copied().fold(f64::INFINITY, f64::min);
    check!(
        c,
        min_ell >= 1.0 - 1e-6,
        "seven-ellipse certificates dipped to volume {min_ell}"
    );

    // volume_tverberg on 7 unit squares scattered in [0,4]^2: witness volume
    // at least d^{-d} = 1/4.
    let mut rng = seeded_rng(890, 0);
    let bodies: Vec<HPolytope> = (0..7)
        .map(|_| {
            let x = rng.gen_range(0.0..3.0);
            let y = rng.gen_range(0.0..3.0);
            HPolytope::axis_box(&[x, y], &[x + 1.0, y + 1.0]).unwrap()
        })
        .collect();
    let cert = volume_tverberg(&bodies, 2).unwrap();
    check!(
        c,
        cert.objective_value >= 0.25,
        "volume Tverberg witness volume {} < 1/4",
        cert.objective_value
    );
    pass(
        c,
        format!(
            "min box-cert {min_box:.9}, min ellipse-cert {min_ell:.9}, volume-Tverberg {:.6} ≥ 0.25",
            cert.objective_value
        ),
    );
}

#[test]
fn criterion_6_chart_and_measure_properties() {
    let c = "criterion 6: chart/measure properties";
    let mut rng = seeded_rng(601, 0);
    let dirs = vec![vec![1.0, 0.0], vec![0.0, 1.0], vec![1.0, 1.0]];
    let grid: Vec<Vec<f64>> = (0..128)
        .map(|k| {
            let t = 2.0 * PI * k as f64 / 128.0;
            vec![t.cos(), t.sin()]
        })
        .collect();

    // 1000-case round-trip and affine transport across the charts.
    for case in 0..1000 {
        let (mut chart, a, b): (Chart, Body, Body) = match case % 4 {
            0 => (
                Chart::new(
                    ChartKind::Zonotope {
                        directions: dirs.clone(),
                    },
                    2,
                ),
                Body::Zonotope(quanthelly::helly::generators::planted_zonotope(
                    &mut rng, &dirs, 1.0,
                )),
                Body::Zonotope(quanthelly::helly::generators::planted_zonotope(
                    &mut rng, &dirs, 2.0,
                )),
            ),
            1 => (
                Chart::new(ChartKind::EllipsoidDet, 2),
                Body::Ellipsoid(planted_ellipse(&mut rng, 1.3, false, false)),
                Body::Ellipsoid(planted_ellipse(&mut rng, 1.3, false, false)),
            ),
            2 => (
                Chart::new(ChartKind::EllipsoidSum, 2),
                Body::Ellipsoid(planted_ellipse(&mut rng, 1.1, true, false)),
                Body::Ellipsoid(planted_ellipse(&mut rng, 1.1, true, false)),
            ),
            _ => {
                let hexagon: Vec<Vec<f64>> = (0..6)
                    .map(|k| {
                        let t = 2.0 * PI * k as f64 / 6.0;
                        vec![t.cos(), t.sin()]
                    })
                    .collect();
                (
                    Chart::new(
                        ChartKind::HConvex {
                            hset: hexagon.clone(),
                        },
                        2,
                    ),
                    Body::HConvex(
                        quanthelly::helly::generators::planted_hconvex(&mut rng, &hexagon, 1.0)
                            .unwrap(),
                    ),
                    Body::HConvex(
                        quanthelly::helly::generators::planted_hconvex(&mut rng, &hexagon, 1.5)
                            .unwrap(),
                    ),
                )
            }
        };
        let pa = chart.lift(&a).unwrap();
        let pb = chart.lift(&b).unwrap();
        // round-trip in support values
        let dec = chart.decode(&pa).unwrap();
        for u in grid.iter().step_by(8) {
            let s1 = quanthelly::body::support(&a, u).unwrap();
            let s2 = quanthelly::body::support(&dec, u).unwrap();
            check!(
                c,
                (s1 - s2).abs() < 1e-9 * (1.0 + s1.abs()),
                "case {case}: round-trip support drift {s1} vs {s2}"
            );
        }
        // transport: decode(λ·pa + (1−λ)·pb) ⊆ conv(a ∪ b)
        for &lam in &[0.0, 0.25, 0.5, 1.0] {
            let comb = chart.combine(&[pa.clone(), pb.clone()], &[lam, 1.0 - lam]);
            let mid = chart.decode(&comb).unwrap();
            for u in &grid {
                let hull = quanthelly::body::support(&a, u)
                    .unwrap()
                    .max(quanthelly::body::support(&b, u).unwrap());
                let got = quanthelly::body::support(&mid, u).unwrap();
                check!(
                    c,
                    got <= hull + 1e-9,
                    "case {case} λ={lam}: transport violated by {}",
                    got - hull
                );
            }
        }
    }

    // log-concavity sweeps (zonotope volume and determinant)
    for _ in 0..1000 {
        let za = quanthelly::helly::generators::planted_zonotope(&mut rng, &dirs, 0.7);
        let zb = quanthelly::helly::generators::planted_zonotope(&mut rng, &dirs, 1.9);
        let lam: f64 = rng.gen_range(0.0..1.0);
        let mid = quanthelly::body::minkowski_combine_zonotopes(&za, &zb, lam).unwrap();
        let bound = za.volume().powf(lam) * zb.volume().powf(1.0 - lam);
        check!(
            c,
            mid.volume() >= bound - 1e-9,
            "zonotope log-concavity: {} < {}",
            mid.volume(),
            bound
        );
        let ea = planted_ellipse(&mut rng, 1.0, false, false);
        let eb = planted_ellipse(&mut rng, 2.0, false, false);
        let ma = ea.shape_matrix();
        let mb = eb.shape_matrix();
        let mm = &ma * lam + &mb * (1.0 - lam);
        let lhs = linalg::determinant(&mm);
        let rhs = linalg::determinant(&ma).powf(lam) * linalg::determinant(&mb).powf(1.0 - lam);
        check!(c, lhs >= rhs - 1e-9, "det log-concavity: {lhs} < {rhs}");
    }

    // John ratio audit: vol(K) ≤ d^d vol(MVIE) and 2-dilated MVIE holds the
    // vertices, over 200 random bounded polytopes.
    let john: Vec<bool> = (0..200u64)
        .into_par_iter()
        .map(|t| {
            let mut rng = seeded_rng(602, t);
            let planted = Body::Ellipsoid(planted_ellipse(&mut rng, 1.0, false, false));
            let spec = GeneratorSpec {
                kind: GeneratorKind::RandomPolytopeIntersections {
                    halfspaces_per_body: 6,
                },
                count: 1,
                planted,
                jitter: 0.5,
            };
            let body = random_family(&spec, derive_seed(603, t)).unwrap().remove(0);
            let rep = max_volume_ellipsoid(&[body.clone()], EllipsoidConstraint::Free).unwrap();
            let vol_k = body.volume().unwrap();
            if vol_k > 4.0 * rep.objective_value + 1e-6 {
                return false;
            }
            let Some(Body::Ellipsoid(e)) = rep.witness else { return false };
            let dilated = e.scaled(2.0 + 1e-7);
            body.vertices()
                .unwrap()
                .iter()
                .all(|v| dilated.membership(v, 1e-7))
        })
        .collect();
    check!(
        c,
        john.iter().all(|&ok| ok),
        "John-ratio audit failed on {} of 200 polytopes",
        john.iter().filter(|&&ok| !ok).count()
    );
    pass(
        c,
        "1000 round-trips + transport, 1000 log-concavity sweeps, 200 John-ratio audits".into(),
    );
}

#[test]
fn criterion_7_approximation() {
    let c = "criterion 7: approximation";
    // Two-box fixture: ε* = 1.
    let fam = vec![
        HPolytope::axis_box(&[0.0, 0.0], &[1.0, 1.0]).unwrap(),
        HPolytope::axis_box(&[0.25, 0.0], &[0.75, 1.0]).unwrap(),
    ];
    let (eps, _, _) = min_eps_approx(&fam, &ApproxClass::AxisBox).unwrap();
    check!(c, (eps - 1.0).abs() < 1e-5, "two-box ε* = {eps}, want 1");

    // Square and the same square rotated 45°, approximated by zonogons over
    // axis + diagonal directions: ε* = √2 − 1 (the value the fixture pins;
    // with plain axis boxes the diamond's corner forces ε* = 1 instead).
    let square = HPolytope::axis_box(&[-1.0, -1.0], &[1.0, 1.0]).unwrap();
    let s = 2.0f64.sqrt();
    let diamond = HPolytope::new(
        2,
        vec![
            Halfspace::new(vec![1.0, 1.0], s).unwrap(),
            Halfspace::new(vec![1.0, -1.0], s).unwrap(),
            Halfspace::new(vec![-1.0, 1.0], s).unwrap(),
            Halfspace::new(vec![-1.0, -1.0], s).unwrap(),
        ],
    )
    .unwrap();
    let class = ApproxClass::Zonotope {
        directions: vec![
            vec![1.0, 0.0],
            vec![0.0, 1.0],
            vec![1.0, 1.0],
            vec![1.0, -1.0],
        ],
    };
    let (eps_rot, _, _) = min_eps_approx(&[square, diamond], &class).unwrap();
    check!(
        c,
        (eps_rot - (s - 1.0)).abs() < 1e-4,
        "rotated-square ε* = {eps_rot}, want √2−1 = {}",
        s - 1.0
    );
    pass(c, format!("two-box ε* = {eps:.7}, rotated-square ε* = {eps_rot:.7}"));
}

#[test]
fn criterion_8_reproducibility() {
    let c = "criterion 8: reproducibility";
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("run.json");
    let mut snapshots: Vec<Vec<u8>> = Vec::new();
    for _ in 0..2 {
        let code = quanthelly_cli::run([
            "quanthelly",
            "helly-test",
            "--theorem",
            "box",
            "--d",
            "2",
            "--trials",
            "25",
            "--seed",
            "12345",
            "--out",
            out.to_str().unwrap(),
        ]);
        check!(c, code == 0, "helly-test exited {code}");
        snapshots.push(std::fs::read(&out).unwrap());
    }
    check!(
        c,
        snapshots[0] == snapshots[1],
        "helly-test outputs differ between reruns"
    );

    let csv1 = dir.path().join("bench1.csv");
    let csv2 = dir.path().join("bench2.csv");
    for out in [&csv1, &csv2] {
        let code = quanthelly_cli::run([
            "quanthelly",
            "lptype-bench",
            "--sizes",
            "20,40",
            "--trials",
            "5",
            "--seed",
            "7",
            "--out",
            out.to_str().unwrap(),
        ]);
        check!(c, code == 0, "lptype-bench exited {code}");
    }
    check!(
        c,
        std::fs::read(&csv1).unwrap() == std::fs::read(&csv2).unwrap(),
        "lptype-bench outputs differ between reruns"
    );
    pass(c, "helly-test and lptype-bench reruns byte-identical".into());
}
