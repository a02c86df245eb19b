//! Damped-Newton log-barrier engine shared by the witness solvers.
//!
//! Maximizes a smooth concave objective f over `{ x : g_j(x) < 0 }` by
//! ascending  F_μ(x) = f(x) + μ Σ_j log(-g_j(x))  along a μ-schedule
//! (×0.2 per outer iteration) until the duality measure μ·m drops below
//! target. Inner loop is Newton with Armijo backtracking (β = 0.5,
//! σ = 0.01). Objective and barrier terms return `None` outside their
//! domain, which the line search treats as a rejected step.

use nalgebra::{DMatrix, DVector};

use crate::error::{GeomError, Result};

/// Value, gradient, and Hessian of a smooth term at a point; `None` when the
/// point is outside the term's domain.
pub type TermEval = Option<(f64, DVector<f64>, DMatrix<f64>)>;

pub type Term<'a> = Box<dyn Fn(&DVector<f64>) -> TermEval + 'a>;

pub struct BarrierOptions {
    pub mu0: f64,
    pub mu_factor: f64,
    pub duality_target: f64,
    pub max_inner: usize,
    pub newton_tol: f64,
}

impl Default for BarrierOptions {
    fn default() -> Self {
        BarrierOptions {
            mu0: 1.0,
            mu_factor: 0.2,
            duality_target: 1e-10,
            max_inner: 80,
            newton_tol: 1e-12,
        }
    }
}

pub struct BarrierOutcome {
    pub x: DVector<f64>,
    pub objective: f64,
    pub iterations: usize,
    pub kkt_residual: f64,
    pub converged: bool,
}

/// Barrier term for a linear constraint `a·x ≤ b`: contributes
/// log(b − a·x) with exact gradient and Hessian.
pub fn linear_term<'a>(a: DVector<f64>, b: f64) -> Term<'a> {
    Box::new(move |x: &DVector<f64>| {
        let s = b - a.dot(x);
        if s <= 0.0 {
            return None;
        }
        let grad = &a * (-1.0 / s);
        let hess = (&a * a.transpose()) * (-1.0 / (s * s));
        Some((s.ln(), grad, hess))
    })
}

pub fn maximize(
    objective: &Term,
    terms: &[Term],
    x0: DVector<f64>,
    opts: &BarrierOptions,
) -> Result<BarrierOutcome> {
    let n = x0.len();
    let m = terms.len().max(1) as f64;
    let mut x = x0;

    let eval = |x: &DVector<f64>, mu: f64| -> Option<(f64, DVector<f64>, DMatrix<f64>, f64)> {
        let (f, mut g, mut h) = objective(x)?;
        let mut total = f;
        for t in terms {
            let (v, tg, th) = t(x)?;
            total += mu * v;
            g += tg * mu;
            h += th * mu;
        }
        Some((total, g, h, f))
    };
    let value_only = |x: &DVector<f64>, mu: f64| -> Option<f64> {
        let (f, _, _) = objective(x)?;
        let mut total = f;
        for t in terms {
            let (v, _, _) = t(x)?;
            total += mu * v;
        }
        Some(total)
    };

    if value_only(&x, opts.mu0).is_none() {
        return Err(GeomError::InvalidInput(
            "barrier start point not strictly feasible".into(),
        ));
    }

    let mut mu = opts.mu0;
    let mut iterations = 0usize;
    let mut converged = true;

    loop {
        let mut centered = false;
        for _ in 0..opts.max_inner {
            let Some((fval, g, h, _)) = eval(&x, mu) else {
                return Err(GeomError::NumericalFailure("iterate left domain".into()));
            };
            // Newton direction for maximization: solve (-H) Δ = g, with a
            // ridge escalation if -H is not numerically positive definite.
            let neg_h = -h;
            let mut delta = None;
            for ridge in [0.0, 1e-12, 1e-9, 1e-6, 1e-3, 1.0] {
                let mut reg = neg_h.clone();
                for i in 0..n {
                    reg[(i, i)] += ridge * (1.0 + reg[(i, i)].abs());
                }
                if let Some(chol) = reg.cholesky() {
                    delta = Some(chol.solve(&g));
                    break;
                }
            }
            let Some(delta) = delta else {
                return Err(GeomError::NumericalFailure("hessian factorization failed".into()));
            };
            let decrement = g.dot(&delta);
            if decrement.abs() < opts.newton_tol * (1.0 + fval.abs()) {
                centered = true;
                break;
            }
            // Armijo backtracking, β = 0.5, σ = 0.01.
            let mut t = 1.0;
            let mut accepted = false;
            while t >= 1e-14 {
                let cand = &x + &delta * t;
                if let Some(v) = value_only(&cand, mu) {
                    if v >= fval + 0.01 * t * decrement {
                        x = cand;
                        accepted = true;
                        break;
                    }
                }
                t *= 0.5;
            }
            iterations += 1;
            if !accepted {
                // No admissible progress at this μ; treat as centered.
                centered = true;
                break;
            }
        }
        if !centered {
            converged = false;
        }
        if mu * m < opts.duality_target {
            break;
        }
        mu *= opts.mu_factor;
    }

    let Some((_, g, h, f_final)) = eval(&x, mu) else {
        return Err(GeomError::NumericalFailure("final iterate left domain".into()));
    };
    // Squared Newton decrement bounds the remaining suboptimality of the
    // final barrier problem; together with the duality measure μ·m it
    // certifies near-optimality at the right scale even when the raw
    // gradient is huge next to the boundary.
    let neg_h = -h;
    let decrement = {
        let mut reg = neg_h;
        for i in 0..n {
            reg[(i, i)] += 1e-12 * (1.0 + reg[(i, i)].abs());
        }
        match reg.cholesky() {
            Some(chol) => g.dot(&chol.solve(&g)).abs(),
            None => g.amax(),
        }
    };
    let kkt = decrement.max(mu * m);
    Ok(BarrierOutcome {
        x,
        objective: f_final,
        iterations,
        kkt_residual: kkt,
        converged,
    })
}
