//! Empirical verification harness for the Helly-type statements: premise
//! checkers over subfamilies and transversals, conclusion checkers, the
//! matroid/colorful variants, the diameter variants, and the John
//! contact-point counterexample.
//!
//! A conclusion failure where the premise holds is treated as a solver bug
//! (the theorems are proved); the harness dumps the instance and the caller
//! decides how loudly to fail.

pub mod generators;
pub mod john;
pub mod matroid;
pub mod suites;

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::body::{Body, HPolytope, Vector};
use crate::error::{GeomError, Result};
use crate::solvers::{
    max_hconvex, max_increasing_segment, max_perimeter_box, max_translate, max_volume_box,
    max_volume_ellipsoid, max_volume_zonotope, segments, EllipsoidConstraint, HConvexObjective,
    SolveReport,
};

pub use matroid::PartitionMatroid;

/// Premise checks use this slack below the threshold.
pub const PREMISE_SLACK: f64 = 1e-9;
/// Conclusion checks get the acceptance slack.
pub const CONCLUSION_SLACK: f64 = 1e-6;
/// Exhaustive subset enumeration is capped at this family size.
pub const MAX_FAMILY: usize = 14;
/// Transversal / independent-set enumeration cap.
pub const MAX_TRANSVERSALS: usize = 100_000;

/// Witness-solver handle: a witness class with enough context to solve any
/// subfamily, plus the chart dimension that sets the theorem's Helly number.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum WitnessSpec {
    Box,
    Zonotope { directions: Vec<Vector> },
    Ellipsoid,
    EllipsoidCentered,
    EllipsoidAxisParallel,
    HConvex { hset: Vec<Vector> },
    Translate { template: Body },
}

impl WitnessSpec {
    /// Chart dimension = Helly number of the corresponding theorem.
    pub fn helly_number(&self, d: usize) -> usize {
        match self {
            WitnessSpec::Box => 2 * d,
            WitnessSpec::Zonotope { directions } => directions.len() + d,
            WitnessSpec::Ellipsoid => d * (d + 3) / 2,
            WitnessSpec::EllipsoidCentered => d * (d + 1) / 2,
            WitnessSpec::EllipsoidAxisParallel => 2 * d,
            WitnessSpec::HConvex { hset } => hset.len(),
            WitnessSpec::Translate { .. } => d + 1,
        }
    }

    pub fn solve(&self, family: &[HPolytope]) -> Result<SolveReport> {
        match self {
            WitnessSpec::Box => max_volume_box(family),
            WitnessSpec::Zonotope { directions } => max_volume_zonotope(family, directions),
            WitnessSpec::Ellipsoid => max_volume_ellipsoid(family, EllipsoidConstraint::Free),
            WitnessSpec::EllipsoidCentered => {
                max_volume_ellipsoid(family, EllipsoidConstraint::CenteredAtOrigin)
            }
            WitnessSpec::EllipsoidAxisParallel => {
                max_volume_ellipsoid(family, EllipsoidConstraint::AxisParallel)
            }
            WitnessSpec::HConvex { hset } => max_hconvex(family, hset, HConvexObjective::Volume),
            WitnessSpec::Translate { template } => max_translate(family, template),
        }
    }

    fn admits(&self, family: &[HPolytope], threshold: f64, slack: f64) -> Result<(bool, SolveReport)> {
        let rep = self.solve(family)?;
        Ok((rep.is_optimal() && rep.objective_value >= threshold - slack, rep))
    }
}

/// Result of one premise/conclusion check.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct HellyCheckResult {
    pub premise_holds: bool,
    pub conclusion_holds: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub violating_subset: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Body>,
    pub conclusion_objective: f64,
}

fn subfamily(family: &[HPolytope], idx: &[usize]) -> Vec<HPolytope> {
    idx.iter().map(|&i| family[i].clone()).collect()
}

/// Exhaustive quantitative Helly check: premise over every k-subset,
/// conclusion on the whole family.
pub fn check_helly(
    family: &[HPolytope],
    k: usize,
    spec: &WitnessSpec,
    threshold: f64,
) -> Result<HellyCheckResult> {
    if family.len() < k {
        return Err(GeomError::InvalidInput(format!(
            "family of {} below subfamily size {k}",
            family.len()
        )));
    }
    if family.len() > MAX_FAMILY {
        return Err(GeomError::TooManySubsets(family.len()));
    }
    let mut premise_holds = true;
    let mut violating_subset = None;
    for subset in (0..family.len()).combinations(k) {
        let (ok, _) = spec.admits(&subfamily(family, &subset), threshold, PREMISE_SLACK)?;
        if !ok {
            premise_holds = false;
            violating_subset = Some(subset);
            break;
        }
    }
    let (conclusion_holds, rep) = spec.admits(family, threshold, CONCLUSION_SLACK)?;
    Ok(HellyCheckResult {
        premise_holds,
        conclusion_holds,
        violating_subset,
        witness: rep.witness,
        conclusion_objective: rep.objective_value,
    })
}

/// Colorful Helly: class count must equal the witness chart dimension. If
/// every transversal admits the witness, some single class's intersection
/// must too; returns that index.
pub fn check_colorful_helly(
    classes: &[Vec<HPolytope>],
    spec: &WitnessSpec,
    threshold: f64,
) -> Result<(bool, Option<usize>)> {
    let d = classes
        .first()
        .and_then(|c| c.first())
        .map(|p| p.dim)
        .ok_or_else(|| GeomError::InvalidInput("empty class".into()))?;
    let expected = spec.helly_number(d);
    if classes.len() != expected {
        return Err(GeomError::TheoremArityMismatch {
            expected,
            got: classes.len(),
        });
    }
    let count: usize = classes.iter().map(|c| c.len().max(1)).product();
    if count > MAX_TRANSVERSALS {
        return Err(GeomError::TooManyTransversals(count));
    }
    let mut transversals = vec![Vec::new()];
    for class in classes {
        let mut next = Vec::with_capacity(transversals.len() * class.len());
        for prefix in &transversals {
            for body in class {
                let mut p: Vec<HPolytope> = prefix.clone();
                p.push(body.clone());
                next.push(p);
            }
        }
        transversals = next;
    }
    for tv in &transversals {
        let (ok, _) = spec.admits(tv, threshold, PREMISE_SLACK)?;
        if !ok {
            return Ok((false, None));
        }
    }
    for (i, class) in classes.iter().enumerate() {
        let (ok, _) = spec.admits(class, threshold, CONCLUSION_SLACK)?;
        if ok {
            return Ok((true, Some(i)));
        }
    }
    Ok((true, None))
}

/// Matroid Helly: if every independent set's intersection admits the
/// witness, there is a τ ⊆ V with rank(V∖τ) ≤ rank_bound whose intersection
/// admits it. For partition matroids the minimal τ are unions of whole
/// classes, searched by increasing size.
pub fn check_matroid_helly(
    family: &[HPolytope],
    matroid: &PartitionMatroid,
    spec: &WitnessSpec,
    threshold: f64,
    rank_bound: usize,
) -> Result<(bool, Option<Vec<usize>>)> {
    if matroid.ground_size() != family.len() {
        return Err(GeomError::InvalidInput(
            "matroid ground set must index the family".into(),
        ));
    }
    if matroid.transversal_count() > MAX_TRANSVERSALS {
        return Err(GeomError::TooManyTransversals(matroid.transversal_count()));
    }
    for tv in matroid.transversals() {
        let (ok, _) = spec.admits(&subfamily(family, &tv), threshold, PREMISE_SLACK)?;
        if !ok {
            return Ok((false, None));
        }
    }
    // τ = union of a set S of classes leaves rank(V∖τ) = #classes outside S,
    // so |S| ≥ #classes − rank_bound; smaller τ means a larger intersection,
    // so search by growing |S|.
    let n = matroid.num_classes();
    let k_min = n.saturating_sub(rank_bound).max(1);
    for size in k_min..=n {
        for chosen in (0..n).combinations(size) {
            let tau: Vec<usize> = chosen
                .iter()
                .flat_map(|&c| matroid.classes()[c].iter().copied())
                .sorted()
                .collect();
            if tau.is_empty() {
                continue;
            }
            let (ok, _) = spec.admits(&subfamily(family, &tau), threshold, CONCLUSION_SLACK)?;
            if ok {
                return Ok((true, Some(tau)));
            }
        }
    }
    Err(GeomError::SearchExhausted)
}

/// Diameter-flavored Helly variants. The premise uses the theorem's linear
/// surrogate (side-length sum for boxes, ℓ₁ length for increasing segments,
/// vertex-pair subproblems for H-convex); the conclusion asserts the
/// guaranteed Euclidean value.
#[derive(Debug, Clone)]
pub enum DiameterVariant {
    BoxDiameter,
    IncreasingDiameter,
    HConvexDiameter { hset: Vec<Vector> },
}

pub fn check_diameter_theorems(
    family: &[HPolytope],
    k: usize,
    variant: &DiameterVariant,
) -> Result<HellyCheckResult> {
    let d = family
        .first()
        .map(|p| p.dim)
        .ok_or_else(|| GeomError::InvalidInput("empty family".into()))?;
    let expected_k = match variant {
        DiameterVariant::BoxDiameter | DiameterVariant::IncreasingDiameter => 2 * d,
        DiameterVariant::HConvexDiameter { hset } => hset.len(),
    };
    if k != expected_k {
        return Err(GeomError::TheoremArityMismatch {
            expected: expected_k,
            got: k,
        });
    }
    if family.len() < k {
        return Err(GeomError::InvalidInput("family smaller than arity".into()));
    }
    if family.len() > MAX_FAMILY {
        return Err(GeomError::TooManySubsets(family.len()));
    }

    // surrogate premise value and Euclidean conclusion value per subfamily
    let premise_value = |fam: &[HPolytope]| -> Result<f64> {
        match variant {
            DiameterVariant::BoxDiameter => Ok(max_perimeter_box(fam)?.objective_value),
            DiameterVariant::IncreasingDiameter => {
                Ok(max_increasing_segment(fam)?.objective_value)
            }
            DiameterVariant::HConvexDiameter { hset } => {
                Ok(max_hconvex(fam, hset, HConvexObjective::Diameter)?.objective_value)
            }
        }
    };
    let mut premise_holds = true;
    let mut violating_subset = None;
    for subset in (0..family.len()).combinations(k) {
        if premise_value(&subfamily(family, &subset))? < 1.0 - CONCLUSION_SLACK {
            premise_holds = false;
            violating_subset = Some(subset);
            break;
        }
    }
    let guarantee = match variant {
        DiameterVariant::BoxDiameter | DiameterVariant::IncreasingDiameter => {
            (d as f64).powf(-0.5)
        }
        DiameterVariant::HConvexDiameter { hset } => (hset.len() as f64).powf(-0.5),
    };
    let (diam, witness) = match variant {
        DiameterVariant::BoxDiameter => {
            let rep = max_perimeter_box(family)?;
            let diam = match &rep.witness {
                Some(Body::AxisBox(b)) => b.diameter(),
                _ => 0.0,
            };
            (diam, rep.witness)
        }
        DiameterVariant::IncreasingDiameter => {
            let rep = max_increasing_segment(family)?;
            (segments::segment_l2(&rep), rep.witness)
        }
        DiameterVariant::HConvexDiameter { hset } => {
            let rep = max_hconvex(family, hset, HConvexObjective::Diameter)?;
            (rep.objective_value, rep.witness)
        }
    };
    Ok(HellyCheckResult {
        premise_holds,
        conclusion_holds: diam >= guarantee - PREMISE_SLACK,
        violating_subset,
        witness,
        conclusion_objective: diam,
    })
}

/// Empirical Minkowski-closure audit for an H direction set: for sampled
/// pairs of canonical H-convex sets, the support-vector sum must reproduce
/// the Minkowski sum (checked on a direction grid). Direction sets failing
/// the audit are rejected by the harness.
pub fn audit_minkowski_closure(hset: &[Vector], trials: usize, seed: u64) -> Result<bool> {
    use rand::Rng;
    let m = hset.len();
    for t in 0..trials {
        let mut rng = crate::rng::seeded_rng(seed, t as u64);
        let mk = |rng: &mut rand_chacha::ChaCha8Rng| -> Result<crate::body::HConvexSet> {
            let supports: Vec<f64> = (0..m).map(|_| rng.gen_range(0.5..2.0)).collect();
            crate::body::HConvexSet::new(hset.to_vec(), supports)?.canonicalize()
        };
        let a = mk(&mut rng)?;
        let b = mk(&mut rng)?;
        let sum = crate::body::HConvexSet {
            hset: a.hset.clone(),
            supports: a
                .supports
                .iter()
                .zip(&b.supports)
                .map(|(x, y)| x + y)
                .collect(),
        };
        for p in 0..90 {
            let ang = 2.0 * std::f64::consts::PI * p as f64 / 90.0;
            let u = vec![ang.cos(), ang.sin()];
            let lhs = sum.support(&u)?;
            let rhs = a.support(&u)? + b.support(&u)?;
            if (lhs - rhs).abs() > 1e-9 * (1.0 + rhs.abs()) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}
