//! Generic randomized LP-type solver (Sharir–Welzl dual-simplex style).
//!
//! The problem is abstract: an ordered list of opaque constraints, a basis
//! oracle that solves any subset of at most δ+1 constraints, and a violation
//! test. The algorithm follows the six-step recursive procedure:
//!
//! 1. order the constraints randomly;
//! 2. solve the first δ-tuple with the oracle;
//! 3. scan the remaining constraints for a violation;
//! 4. on a violation at index m, re-solve the current basis plus the violator
//!    by checking every δ-tuple of those δ+1 constraints;
//! 5. recurse on the prefix 1..m with the new basis pinned first (the rest of
//!    the prefix keeps its order — no re-randomization);
//! 6. continue the scan after m.
//!
//! Expected oracle-call count is linear in the family size when δ is the
//! problem's combinatorial dimension.

use itertools::Itertools;
use rand::seq::SliceRandom;
use serde::Serialize;

use crate::error::{GeomError, Result};
use crate::rng::seeded_rng;

/// Violation tolerance: a constraint violates iff the witness exceeds its
/// margin by more than this, which keeps oracle noise from looping forever.
pub const VIOLATION_TOL: f64 = 1e-7;

/// How ties between candidate bases are broken: the subset with extremal
/// objective value wins, lexicographic constraint order breaking exact ties.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ObjectiveSense {
    /// Adding constraints can only shrink the objective (max problems).
    Shrinking,
    /// Adding constraints can only grow the objective (min problems).
    Growing,
}

/// An LP-type problem: constraints, combinatorial dimension, oracle, and
/// violation test. The oracle must be deterministic for a fixed subset order,
/// and must satisfy the usual monotonicity/locality contract (audited
/// probabilistically in the test suites, not enforced here).
pub struct LpTypeProblem<'a, C, S> {
    pub constraints: Vec<C>,
    pub combinatorial_dim: usize,
    pub sense: ObjectiveSense,
    pub basis_oracle: Box<dyn Fn(&[&C]) -> Result<S> + Sync + 'a>,
    pub objective: Box<dyn Fn(&S) -> f64 + Sync + 'a>,
    pub violates: Box<dyn Fn(&S, &C) -> bool + Sync + 'a>,
}

#[derive(Debug, Clone, Serialize)]
pub struct RunStats {
    pub oracle_calls: usize,
    pub violation_tests: usize,
    pub recursion_depth: usize,
    pub seed: u64,
}

pub struct LpTypeOutcome<S> {
    pub solution: S,
    /// Indices (into the original constraint list) of the final basis.
    pub basis: Vec<usize>,
    pub stats: RunStats,
}

struct Ctx<'p, 'a, C, S> {
    problem: &'p LpTypeProblem<'a, C, S>,
    oracle_calls: usize,
    violation_tests: usize,
    max_depth: usize,
}

impl<'p, 'a, C, S> Ctx<'p, 'a, C, S> {
    fn call_oracle(&mut self, order: &[usize], subset: &[usize]) -> Result<S> {
        let _ = order;
        self.oracle_calls += 1;
        let refs: Vec<&C> = subset.iter().map(|&i| &self.problem.constraints[i]).collect();
        (self.problem.basis_oracle)(&refs)
    }

    /// Among the δ-subsets of `candidates` (in lexicographic order), find the
    /// basis: a subset whose solution no candidate violates; ties and numeric
    /// degeneracy fall back to the extremal objective value.
    fn best_subbasis(&mut self, candidates: &[usize]) -> Result<(Vec<usize>, S)> {
        let delta = self.problem.combinatorial_dim.min(candidates.len());
        let mut fallback: Option<(f64, Vec<usize>, S)> = None;
        for subset in candidates.iter().copied().combinations(delta) {
            let sol = self.call_oracle(&[], &subset)?;
            let mut ok = true;
            for &c in candidates {
                if subset.contains(&c) {
                    continue;
                }
                self.violation_tests += 1;
                if (self.problem.violates)(&sol, &self.problem.constraints[c]) {
                    ok = false;
                    break;
                }
            }
            if ok {
                return Ok((subset, sol));
            }
            let obj = (self.problem.objective)(&sol);
            let better = match (&fallback, self.problem.sense) {
                (None, _) => true,
                (Some((b, _, _)), ObjectiveSense::Shrinking) => obj < *b,
                (Some((b, _, _)), ObjectiveSense::Growing) => obj > *b,
            };
            if better {
                fallback = Some((obj, subset, sol));
            }
        }
        let (_, subset, sol) =
            fallback.ok_or_else(|| GeomError::NumericalFailure("no candidate basis".into()))?;
        Ok((subset, sol))
    }

    /// Solve the prefix `order[..len]` whose first `min(δ, len)` entries are
    /// the pinned basis; returns the solution and basis indices.
    fn solve_prefix(&mut self, order: &mut Vec<usize>, len: usize, depth: usize) -> Result<(S, Vec<usize>)> {
        self.max_depth = self.max_depth.max(depth);
        let delta = self.problem.combinatorial_dim.min(len);
        let mut basis: Vec<usize> = order[..delta].to_vec();
        let mut sol = self.call_oracle(order, &basis)?;
        let mut i = delta;
        while i < len {
            let ci = order[i];
            self.violation_tests += 1;
            if (self.problem.violates)(&sol, &self.problem.constraints[ci]) {
                // Basis update: exhaustive δ-tuple search over basis ∪ {violator}.
                let mut candidates = basis.clone();
                candidates.push(ci);
                let (new_basis, _new_sol) = self.best_subbasis(&candidates)?;
                // Recurse on the prefix up to and including the violator with
                // the new basis pinned first; remaining prefix keeps order.
                let mut sub_order: Vec<usize> = new_basis.clone();
                sub_order.extend(order[..=i].iter().copied().filter(|c| !new_basis.contains(c)));
                let sub_len = sub_order.len();
                let (s, b) = self.solve_prefix(&mut sub_order, sub_len, depth + 1)?;
                // Splice the recursion's ordering back into the prefix.
                order.splice(..=i, sub_order);
                sol = s;
                basis = b;
            }
            i += 1;
        }
        Ok((sol, basis))
    }
}

/// Run the randomized LP-type algorithm with the given seed. Returns a
/// solution violated by no constraint, a basis whose oracle solution equals
/// it, and exact run statistics (reproducible from the seed).
pub fn solve<C, S>(problem: &LpTypeProblem<C, S>, seed: u64) -> Result<LpTypeOutcome<S>> {
    let n = problem.constraints.len();
    if n == 0 {
        return Err(GeomError::InvalidInput("no constraints".into()));
    }
    let mut order: Vec<usize> = (0..n).collect();
    let mut rng = seeded_rng(seed, 0);
    order.shuffle(&mut rng);
    let mut ctx = Ctx {
        problem,
        oracle_calls: 0,
        violation_tests: 0,
        max_depth: 0,
    };
    let (solution, basis) = ctx.solve_prefix(&mut order, n, 0)?;
    Ok(LpTypeOutcome {
        solution,
        basis,
        stats: RunStats {
            oracle_calls: ctx.oracle_calls,
            violation_tests: ctx.violation_tests,
            recursion_depth: ctx.max_depth,
            seed,
        },
    })
}

/// Mean oracle calls per family size: one row per n, averaged over seeded
/// trials. The generator receives (n, trial_seed).
pub fn calibrate_calls<C, S>(
    make_problem: &dyn Fn(usize, u64) -> LpTypeProblem<'static, C, S>,
    sizes: &[usize],
    trials: usize,
    seed: u64,
) -> Result<Vec<(usize, f64)>> {
    let mut table = Vec::new();
    for &n in sizes {
        let mut total = 0usize;
        for t in 0..trials {
            let trial_seed = crate::rng::derive_seed(seed, (n as u64) << 20 | t as u64);
            let problem = make_problem(n, trial_seed);
            let out = solve(&problem, trial_seed)?;
            total += out.stats.oracle_calls;
        }
        let mean = if trials == 0 { 0.0 } else { total as f64 / trials as f64 };
        if trials > 0 {
            table.push((n, mean));
        }
    }
    Ok(table)
}

// ---------------------------------------------------------------------------
// Instantiations
// ---------------------------------------------------------------------------

/// Smallest enclosing ball in the plane (the classic sanity instantiation,
/// combinatorial dimension 3).
pub mod ball {
    use super::*;

    #[derive(Debug, Clone, PartialEq)]
    pub struct Circle {
        pub center: [f64; 2],
        pub radius: f64,
    }

    fn circle_two(p: &[f64; 2], q: &[f64; 2]) -> Circle {
        let center = [(p[0] + q[0]) / 2.0, (p[1] + q[1]) / 2.0];
        let radius = ((p[0] - q[0]).powi(2) + (p[1] - q[1]).powi(2)).sqrt() / 2.0;
        Circle { center, radius }
    }

    fn circumcircle(a: &[f64; 2], b: &[f64; 2], c: &[f64; 2]) -> Option<Circle> {
        let d = 2.0 * (a[0] * (b[1] - c[1]) + b[0] * (c[1] - a[1]) + c[0] * (a[1] - b[1]));
        if d.abs() < 1e-14 {
            return None;
        }
        let ux = ((a[0] * a[0] + a[1] * a[1]) * (b[1] - c[1])
            + (b[0] * b[0] + b[1] * b[1]) * (c[1] - a[1])
            + (c[0] * c[0] + c[1] * c[1]) * (a[1] - b[1]))
            / d;
        let uy = ((a[0] * a[0] + a[1] * a[1]) * (c[0] - b[0])
            + (b[0] * b[0] + b[1] * b[1]) * (a[0] - c[0])
            + (c[0] * c[0] + c[1] * c[1]) * (b[0] - a[0]))
            / d;
        let r = ((a[0] - ux).powi(2) + (a[1] - uy).powi(2)).sqrt();
        Some(Circle {
            center: [ux, uy],
            radius: r,
        })
    }

    fn contains(c: &Circle, p: &[f64; 2], tol: f64) -> bool {
        let d = ((p[0] - c.center[0]).powi(2) + (p[1] - c.center[1]).powi(2)).sqrt();
        d <= c.radius + tol
    }

    /// Smallest circle enclosing at most three points (exact).
    pub fn oracle(points: &[&[f64; 2]]) -> Result<Circle> {
        match points.len() {
            0 => Ok(Circle {
                center: [0.0, 0.0],
                radius: 0.0,
            }),
            1 => Ok(Circle {
                center: *points[0],
                radius: 0.0,
            }),
            2 => Ok(circle_two(points[0], points[1])),
            3 => {
                // best two-point circle if it already covers, else circumcircle
                let pairs = [(0, 1, 2), (0, 2, 1), (1, 2, 0)];
                let mut best: Option<Circle> = None;
                for (i, j, k) in pairs {
                    let c = circle_two(points[i], points[j]);
                    if contains(&c, points[k], 1e-12) {
                        let better = best.as_ref().map_or(true, |b| c.radius < b.radius);
                        if better {
                            best = Some(c);
                        }
                    }
                }
                if let Some(c) = best {
                    return Ok(c);
                }
                circumcircle(points[0], points[1], points[2])
                    .ok_or_else(|| GeomError::DegenerateInput("collinear triple".into()))
            }
            _ => Err(GeomError::InvalidInput("ball oracle takes ≤ 3 points".into())),
        }
    }

    pub fn problem<'a>(points: Vec<[f64; 2]>) -> LpTypeProblem<'a, [f64; 2], Circle> {
        LpTypeProblem {
            constraints: points,
            combinatorial_dim: 3,
            sense: ObjectiveSense::Growing,
            basis_oracle: Box::new(|pts: &[&[f64; 2]]| oracle(pts)),
            objective: Box::new(|c: &Circle| c.radius),
            violates: Box::new(|c: &Circle, p: &[f64; 2]| !contains(c, p, VIOLATION_TOL)),
        }
    }
}

/// Largest axis-parallel box over a family of convex bodies (combinatorial
/// dimension 2d by the box Helly number).
pub mod box_instance {
    use super::*;
    use crate::body::{contains as body_contains, HPolytope};
    use crate::solvers::{max_volume_box, SolveReport};

    pub fn problem<'a>(bodies: Vec<HPolytope>) -> LpTypeProblem<'a, HPolytope, SolveReport> {
        let d = bodies.first().map(|b| b.dim).unwrap_or(2);
        LpTypeProblem {
            constraints: bodies,
            combinatorial_dim: 2 * d,
            sense: ObjectiveSense::Shrinking,
            basis_oracle: Box::new(|subset: &[&HPolytope]| {
                let fam: Vec<HPolytope> = subset.iter().map(|&b| b.clone()).collect();
                max_volume_box(&fam)
            }),
            objective: Box::new(|r: &SolveReport| r.objective_value),
            violates: Box::new(|r: &SolveReport, body: &HPolytope| match &r.witness {
                Some(w) => !body_contains(body, w, VIOLATION_TOL).unwrap_or(false),
                None => false,
            }),
        }
    }
}

/// Best simultaneous ε-approximation by an axis-box translate over a family
/// of convex bodies (combinatorial dimension l+d+1 = 2d+1: halfwidth chart
/// plus translation plus one).
pub mod approx_instance {
    use super::*;
    use crate::body::{AxisBox, Body, HPolytope};
    use crate::solvers::{min_eps_approx, ApproxClass};

    #[derive(Debug, Clone)]
    pub struct ApproxSolution {
        pub eps: f64,
        pub witness: AxisBox,
    }

    fn approximates(sol: &ApproxSolution, body: &HPolytope, tol: f64) -> bool {
        // inner: the witness box sits inside the body
        if !crate::body::contains(body, &Body::AxisBox(sol.witness.clone()), tol)
            .unwrap_or(false)
        {
            return false;
        }
        // outer: the body sits inside the (1+ε)-inflated box
        let Ok(verts) = body.vertices() else { return false };
        verts.iter().all(|v| {
            v.iter()
                .zip(&sol.witness.center)
                .zip(&sol.witness.halfwidths)
                .all(|((x, c), w)| (x - c).abs() <= (1.0 + sol.eps) * w + tol)
        })
    }

    pub fn problem<'a>(bodies: Vec<HPolytope>) -> LpTypeProblem<'a, HPolytope, ApproxSolution> {
        let d = bodies.first().map(|b| b.dim).unwrap_or(2);
        LpTypeProblem {
            constraints: bodies,
            combinatorial_dim: 2 * d + 1,
            sense: ObjectiveSense::Growing,
            basis_oracle: Box::new(|subset: &[&HPolytope]| {
                let fam: Vec<HPolytope> = subset.iter().map(|&b| b.clone()).collect();
                let (eps, witness, _) = min_eps_approx(&fam, &ApproxClass::AxisBox)?;
                let Body::AxisBox(witness) = witness else {
                    return Err(GeomError::NumericalFailure("non-box witness".into()));
                };
                Ok(ApproxSolution { eps, witness })
            }),
            objective: Box::new(|s: &ApproxSolution| s.eps),
            violates: Box::new(|s: &ApproxSolution, body: &HPolytope| {
                !approximates(s, body, VIOLATION_TOL)
            }),
        }
    }
}
