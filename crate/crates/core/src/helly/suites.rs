//! Theorem suites: seeded batches of planted instances, one per Helly-type
//! statement, each run through the premise/conclusion checkers. Trials are
//! data-parallel with per-trial seeds split off the master seed; results are
//! collected in trial order, so reruns are byte-identical.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::body::{Body, HPolytope, Vector};
use crate::error::{GeomError, Result};
use crate::helly::generators::{
    planted_box, planted_diameter_box, planted_ellipse, planted_hconvex,
    planted_increasing_segment, planted_zonotope, random_family, GeneratorKind, GeneratorSpec,
};
use crate::helly::{
    check_diameter_theorems, check_helly, check_matroid_helly, DiameterVariant, PartitionMatroid,
    WitnessSpec,
};
use crate::rng::{derive_seed, seeded_rng};
use crate::solvers::segments::segment_body;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TheoremSuite {
    Box,
    Zonotope,
    Ellipsoid,
    HConvex,
    AxisEllipsoid,
    Centered,
    Translate,
    BoxDiam,
    IncrDiam,
}

impl TheoremSuite {
    pub const ALL: [TheoremSuite; 9] = [
        TheoremSuite::Box,
        TheoremSuite::Zonotope,
        TheoremSuite::Ellipsoid,
        TheoremSuite::HConvex,
        TheoremSuite::AxisEllipsoid,
        TheoremSuite::Centered,
        TheoremSuite::Translate,
        TheoremSuite::BoxDiam,
        TheoremSuite::IncrDiam,
    ];

    pub fn parse(name: &str) -> Option<TheoremSuite> {
        match name {
            "box" => Some(TheoremSuite::Box),
            "zonotope" => Some(TheoremSuite::Zonotope),
            "ellipsoid" => Some(TheoremSuite::Ellipsoid),
            "hconvex" => Some(TheoremSuite::HConvex),
            "axis-ellipsoid" => Some(TheoremSuite::AxisEllipsoid),
            "centered" => Some(TheoremSuite::Centered),
            "translate" => Some(TheoremSuite::Translate),
            "box-diam" => Some(TheoremSuite::BoxDiam),
            "incr-diam" => Some(TheoremSuite::IncrDiam),
            _ => None,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            TheoremSuite::Box => "box",
            TheoremSuite::Zonotope => "zonotope",
            TheoremSuite::Ellipsoid => "ellipsoid",
            TheoremSuite::HConvex => "hconvex",
            TheoremSuite::AxisEllipsoid => "axis-ellipsoid",
            TheoremSuite::Centered => "centered",
            TheoremSuite::Translate => "translate",
            TheoremSuite::BoxDiam => "box-diam",
            TheoremSuite::IncrDiam => "incr-diam",
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TrialOutcome {
    pub trial: usize,
    pub seed: u64,
    pub premise: bool,
    pub conclusion: bool,
    pub objective: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: TheoremSuite,
    pub dim: usize,
    pub trials: Vec<TrialOutcome>,
    pub premise_held: usize,
    pub conclusion_failures: usize,
    /// JSON dump of the first violating instance, if any.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub violation_instance: Option<String>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.conclusion_failures == 0
    }
}

fn dump_instance(family: &[HPolytope], planted: &Body) -> String {
    serde_json::json!({
        "family": family,
        "planted": planted,
    })
    .to_string()
}

fn run_one(suite: TheoremSuite, d: usize, trial_seed: u64) -> Result<(bool, bool, f64, String)> {
    if d != 2 {
        return Err(GeomError::DimensionTooLarge(d));
    }
    let mut rng = seeded_rng(trial_seed, 0xfeed);
    let gen_kind = GeneratorKind::RandomPolytopeIntersections {
        halfspaces_per_body: 3,
    };
    match suite {
        TheoremSuite::Box => {
            let planted = Body::AxisBox(planted_box(&mut rng, 1.0));
            let spec = GeneratorSpec {
                kind: gen_kind,
                count: 8,
                planted: planted.clone(),
                jitter: 0.5,
            };
            let family = random_family(&spec, trial_seed)?;
            let res = check_helly(&family, 2 * d, &WitnessSpec::Box, 1.0)?;
            Ok((
                res.premise_holds,
                res.conclusion_holds,
                res.conclusion_objective,
                dump_instance(&family, &planted),
            ))
        }
        TheoremSuite::Zonotope => {
            let dirs: Vec<Vector> = vec![
                vec![1.0, 0.0],
                vec![0.0, 1.0],
                vec![1.0 / 2.0f64.sqrt(), 1.0 / 2.0f64.sqrt()],
            ];
            let planted = Body::Zonotope(planted_zonotope(&mut rng, &dirs, 1.0));
            let spec = GeneratorSpec {
                kind: gen_kind,
                count: 8,
                planted: planted.clone(),
                jitter: 0.5,
            };
            let family = random_family(&spec, trial_seed)?;
            let res = check_helly(
                &family,
                dirs.len() + d,
                &WitnessSpec::Zonotope { directions: dirs },
                1.0,
            )?;
            Ok((
                res.premise_holds,
                res.conclusion_holds,
                res.conclusion_objective,
                dump_instance(&family, &planted),
            ))
        }
        TheoremSuite::Ellipsoid => {
            // Matroid variant with 5 color classes of 2 bodies and rank
            // bound d(d+3)/2 − 1 = 4.
            let planted = Body::Ellipsoid(planted_ellipse(&mut rng, 1.0, false, false));
            let spec = GeneratorSpec {
                kind: gen_kind,
                count: 10,
                planted: planted.clone(),
                jitter: 0.5,
            };
            let family = random_family(&spec, trial_seed)?;
            let classes: Vec<Vec<usize>> = (0..5).map(|c| vec![2 * c, 2 * c + 1]).collect();
            let matroid = PartitionMatroid::new(classes, family.len())?;
            let (premise, tau) = check_matroid_helly(
                &family,
                &matroid,
                &WitnessSpec::Ellipsoid,
                1.0,
                d * (d + 3) / 2 - 1,
            )?;
            let conclusion = tau.is_some();
            Ok((
                premise,
                conclusion,
                if conclusion { 1.0 } else { 0.0 },
                dump_instance(&family, &planted),
            ))
        }
        TheoremSuite::HConvex => {
            let hset: Vec<Vector> = (0..6)
                .map(|k| {
                    let t = 2.0 * std::f64::consts::PI * k as f64 / 6.0;
                    vec![t.cos(), t.sin()]
                })
                .collect();
            let planted = Body::HConvex(planted_hconvex(&mut rng, &hset, 1.0)?);
            let spec = GeneratorSpec {
                kind: gen_kind,
                count: 8,
                planted: planted.clone(),
                jitter: 0.5,
            };
            let family = random_family(&spec, trial_seed)?;
            let res = check_helly(
                &family,
                hset.len(),
                &WitnessSpec::HConvex { hset },
                1.0,
            )?;
            Ok((
                res.premise_holds,
                res.conclusion_holds,
                res.conclusion_objective,
                dump_instance(&family, &planted),
            ))
        }
        TheoremSuite::AxisEllipsoid => {
            let planted = Body::Ellipsoid(planted_ellipse(&mut rng, 1.0, false, true));
            let spec = GeneratorSpec {
                kind: gen_kind,
                count: 8,
                planted: planted.clone(),
                jitter: 0.5,
            };
            let family = random_family(&spec, trial_seed)?;
            let res = check_helly(&family, 2 * d, &WitnessSpec::EllipsoidAxisParallel, 1.0)?;
            Ok((
                res.premise_holds,
                res.conclusion_holds,
                res.conclusion_objective,
                dump_instance(&family, &planted),
            ))
        }
        TheoremSuite::Centered => {
            let planted = Body::Ellipsoid(planted_ellipse(&mut rng, 1.0, true, false));
            let spec = GeneratorSpec {
                kind: GeneratorKind::SymmetricSlabs,
                count: 7,
                planted: planted.clone(),
                jitter: 0.5,
            };
            let family = random_family(&spec, trial_seed)?;
            let res = check_helly(
                &family,
                d * (d + 1) / 2,
                &WitnessSpec::EllipsoidCentered,
                1.0,
            )?;
            Ok((
                res.premise_holds,
                res.conclusion_holds,
                res.conclusion_objective,
                dump_instance(&family, &planted),
            ))
        }
        TheoremSuite::Translate => {
            use rand::Rng;
            // fixed template: a quarter-turn-symmetric pentagon-ish polytope
            let template = Body::HPolytope(
                HPolytope::new(
                    2,
                    (0..5)
                        .map(|k| {
                            let t = 2.0 * std::f64::consts::PI * k as f64 / 5.0 + 0.3;
                            crate::body::Halfspace::new(vec![t.cos(), t.sin()], 0.6).unwrap()
                        })
                        .collect(),
                )
                .unwrap(),
            );
            let shift = vec![rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)];
            let planted = crate::solvers::translate::translate_body(&template, &shift);
            let spec = GeneratorSpec {
                kind: gen_kind,
                count: 7,
                planted: planted.clone(),
                jitter: 0.5,
            };
            let family = random_family(&spec, trial_seed)?;
            let res = check_helly(
                &family,
                d + 1,
                &WitnessSpec::Translate { template },
                0.0,
            )?;
            Ok((
                res.premise_holds,
                res.conclusion_holds,
                res.conclusion_objective,
                dump_instance(&family, &planted),
            ))
        }
        TheoremSuite::BoxDiam => {
            let planted = Body::AxisBox(planted_diameter_box(&mut rng, 1.0));
            let spec = GeneratorSpec {
                kind: gen_kind,
                count: 8,
                planted: planted.clone(),
                jitter: 0.5,
            };
            let family = random_family(&spec, trial_seed)?;
            let res = check_diameter_theorems(&family, 2 * d, &DiameterVariant::BoxDiameter)?;
            Ok((
                res.premise_holds,
                res.conclusion_holds,
                res.conclusion_objective,
                dump_instance(&family, &planted),
            ))
        }
        TheoremSuite::IncrDiam => {
            let (base, delta) = planted_increasing_segment(&mut rng, 1.0);
            let planted = segment_body(&base, &delta)?;
            let spec = GeneratorSpec {
                kind: gen_kind,
                count: 8,
                planted: planted.clone(),
                jitter: 0.5,
            };
            let family = random_family(&spec, trial_seed)?;
            let res =
                check_diameter_theorems(&family, 2 * d, &DiameterVariant::IncreasingDiameter)?;
            Ok((
                res.premise_holds,
                res.conclusion_holds,
                res.conclusion_objective,
                dump_instance(&family, &planted),
            ))
        }
    }
}

/// Run a theorem suite: `trials` seeded instances in parallel. Zero
/// conclusion failures among premise-holding trials is the pass condition.
pub fn run_suite(suite: TheoremSuite, d: usize, trials: usize, seed: u64) -> Result<SuiteReport> {
    let results: Vec<Result<(bool, bool, f64, String)>> = (0..trials)
        .into_par_iter()
        .map(|t| run_one(suite, d, derive_seed(seed, t as u64)))
        .collect();
    let mut outcomes = Vec::with_capacity(trials);
    let mut premise_held = 0;
    let mut conclusion_failures = 0;
    let mut violation_instance = None;
    for (t, r) in results.into_iter().enumerate() {
        let (premise, conclusion, objective, dump) = r?;
        if premise {
            premise_held += 1;
            if !conclusion {
                conclusion_failures += 1;
                if violation_instance.is_none() {
                    violation_instance = Some(dump);
                }
            }
        }
        outcomes.push(TrialOutcome {
            trial: t,
            seed: derive_seed(seed, t as u64),
            premise,
            conclusion,
            objective,
        });
    }
    Ok(SuiteReport {
        suite,
        dim: d,
        trials: outcomes,
        premise_held,
        conclusion_failures,
        violation_instance,
    })
}
