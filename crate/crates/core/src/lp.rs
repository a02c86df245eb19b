//! Small dense linear-programming kernel.
//!
//! Two-phase primal simplex on a full tableau with Bland's pivoting rule, so
//! solves are deterministic given the input order and cannot cycle. Sized for
//! the problems this crate generates (n ≤ 64 variables, a few hundred rows);
//! no factorization updates, no sparsity.
//!
//! Variables are free by default (internally split into positive parts);
//! callers that know a variable is nonnegative can say so and save a column.

use crate::error::{GeomError, Result};

const RCOST_TOL: f64 = 1e-9;
const PIVOT_TOL: f64 = 1e-11;
const FEAS_TOL: f64 = 1e-7;
const BLOWUP_LIMIT: f64 = 1e12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Max,
    Min,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RowOp {
    Le,
    Eq,
}

/// Linear program in inequality/equality row form.
#[derive(Debug, Clone)]
pub struct LpProblem {
    n: usize,
    objective: Vec<f64>,
    sense: Sense,
    rows: Vec<(Vec<f64>, f64, RowOp)>,
    nonneg: Vec<bool>,
}

#[derive(Debug, Clone)]
pub struct LpSolution {
    pub value: f64,
    pub point: Vec<f64>,
}

impl LpProblem {
    pub fn new(objective: Vec<f64>, sense: Sense) -> Self {
        let n = objective.len();
        LpProblem {
            n,
            objective,
            sense,
            rows: Vec::new(),
            nonneg: vec![false; n],
        }
    }

    pub fn num_vars(&self) -> usize {
        self.n
    }

    /// Declare variable `i` nonnegative (saves the sign split).
    pub fn set_nonneg(&mut self, i: usize) {
        self.nonneg[i] = true;
    }

    pub fn add_le(&mut self, coeffs: Vec<f64>, rhs: f64) {
        debug_assert_eq!(coeffs.len(), self.n);
        self.rows.push((coeffs, rhs, RowOp::Le));
    }

    pub fn add_eq(&mut self, coeffs: Vec<f64>, rhs: f64) {
        debug_assert_eq!(coeffs.len(), self.n);
        self.rows.push((coeffs, rhs, RowOp::Eq));
    }

    pub fn add_ge(&mut self, coeffs: Vec<f64>, rhs: f64) {
        let neg: Vec<f64> = coeffs.iter().map(|c| -c).collect();
        self.add_le(neg, -rhs);
    }

    pub fn solve(&self) -> Result<LpSolution> {
        if self.rows.iter().any(|(c, b, _)| {
            !b.is_finite() || c.iter().any(|x| !x.is_finite())
        }) || self.objective.iter().any(|x| !x.is_finite())
        {
            return Err(GeomError::InvalidInput("non-finite LP data".into()));
        }
        Tableau::build(self)?.run(self)
    }
}

/// Convenience entry point matching the rest of the crate: maximize or
/// minimize `objective · x` subject to `coeffs · x ≤ rhs` rows over free
/// variables. Returns the optimal value and one optimizer.
pub fn lp_solve(
    objective: &[f64],
    constraints: &[(Vec<f64>, f64)],
    sense: Sense,
) -> Result<LpSolution> {
    if objective.len() > 64 {
        return Err(GeomError::InvalidInput(format!(
            "lp_solve is sized for n ≤ 64 variables, got {}",
            objective.len()
        )));
    }
    let mut p = LpProblem::new(objective.to_vec(), sense);
    for (c, b) in constraints {
        p.add_le(c.clone(), *b);
    }
    p.solve()
}

struct Tableau {
    m: usize,
    ncols: usize,
    /// m rows of ncols coefficients + rhs appended.
    t: Vec<Vec<f64>>,
    basis: Vec<usize>,
    /// Column index ranges.
    n_struct: usize,
    art_start: usize,
    /// struct column -> (variable index, sign)
    col_var: Vec<(usize, f64)>,
    scale: f64,
}

impl Tableau {
    fn build(p: &LpProblem) -> Result<Tableau> {
        let m = p.rows.len();
        // Structural columns: one per nonneg variable, two per free variable.
        let mut col_var = Vec::new();
        for i in 0..p.n {
            col_var.push((i, 1.0));
            if !p.nonneg[i] {
                col_var.push((i, -1.0));
            }
        }
        let n_struct = col_var.len();
        let n_slack = p.rows.iter().filter(|r| r.2 == RowOp::Le).count();
        // Worst case an artificial per row; trim later.
        let ncols_cap = n_struct + n_slack + m;

        let mut t = vec![vec![0.0; ncols_cap + 1]; m];
        let mut basis = vec![usize::MAX; m];
        let mut slack_at = n_struct;
        let mut art_cols = Vec::new();

        for (r, (coeffs, rhs, op)) in p.rows.iter().enumerate() {
            let flip = if *rhs < 0.0 { -1.0 } else { 1.0 };
            for (j, &(var, sign)) in col_var.iter().enumerate() {
                t[r][j] = flip * coeffs[var] * sign;
            }
            t[r][ncols_cap] = flip * rhs;
            match op {
                RowOp::Le => {
                    t[r][slack_at] = flip;
                    if flip > 0.0 {
                        basis[r] = slack_at;
                    }
                    slack_at += 1;
                }
                RowOp::Eq => {}
            }
            if basis[r] == usize::MAX {
                art_cols.push(r);
            }
        }
        let art_start = n_struct + n_slack;
        let mut next_art = art_start;
        for &r in &art_cols {
            t[r][next_art] = 1.0;
            basis[r] = next_art;
            next_art += 1;
        }
        let ncols = next_art;
        // Shrink rows to actual width (rhs moves to index ncols).
        for row in t.iter_mut() {
            let rhs = row[ncols_cap];
            row.truncate(ncols);
            row.push(rhs);
        }
        let scale = t
            .iter()
            .flat_map(|r| r.iter())
            .fold(1.0f64, |a, &x| a.max(x.abs()));
        Ok(Tableau {
            m,
            ncols,
            t,
            basis,
            n_struct,
            art_start,
            col_var,
            scale,
        })
    }

    fn run(mut self, p: &LpProblem) -> Result<LpSolution> {
        // Phase 1: maximize -(sum of artificials).
        if self.art_start < self.ncols {
            let mut c1 = vec![0.0; self.ncols];
            for j in self.art_start..self.ncols {
                c1[j] = -1.0;
            }
            self.iterate(&c1, false)?;
            let obj1: f64 = (0..self.m)
                .filter(|&r| self.basis[r] >= self.art_start)
                .map(|r| self.t[r][self.ncols])
                .sum();
            if obj1 > FEAS_TOL * self.scale.max(1.0) {
                return Err(GeomError::Infeasible);
            }
            self.expel_artificials();
        }

        // Phase 2 with the real objective; artificial columns are frozen.
        let mut c2 = vec![0.0; self.ncols];
        let sgn = match p.sense {
            Sense::Max => 1.0,
            Sense::Min => -1.0,
        };
        for (j, &(var, sign)) in self.col_var.iter().enumerate() {
            c2[j] = sgn * p.objective[var] * sign;
        }
        self.iterate(&c2, true)?;

        let mut x = vec![0.0; p.n];
        for r in 0..self.m {
            let j = self.basis[r];
            if j < self.n_struct {
                let (var, sign) = self.col_var[j];
                x[var] += sign * self.t[r][self.ncols];
            }
        }
        let value: f64 = p.objective.iter().zip(&x).map(|(c, v)| c * v).sum();
        Ok(LpSolution { value, point: x })
    }

    /// Bland-rule simplex iterations for the given (maximization) costs.
    /// `phase2` bans artificial columns from entering.
    fn iterate(&mut self, costs: &[f64], phase2: bool) -> Result<()> {
        let max_iters = 2000 * (self.m + self.ncols) + 10_000;
        for _ in 0..max_iters {
            // Reduced costs r_j = c_j - c_B^T T_j.
            let mut entering = None;
            let limit = if phase2 { self.art_start } else { self.ncols };
            'cols: for j in 0..limit {
                if self.basis.contains(&j) {
                    continue;
                }
                let mut r = costs[j];
                for i in 0..self.m {
                    let cb = costs[self.basis[i]];
                    if cb != 0.0 {
                        r -= cb * self.t[i][j];
                    }
                }
                if r > RCOST_TOL {
                    entering = Some(j);
                    break 'cols; // Bland: first improving index
                }
            }
            let Some(e) = entering else { return Ok(()) };

            // Ratio test; ties broken by smallest basis index (Bland).
            // Well-scaled pivots are preferred: near-duplicate rows leave
            // elimination residues around 1e-9 whose reciprocals wreck the
            // tableau, so those rows only pivot when nothing better exists.
            let mut leave: Option<(usize, f64)> = None;
            for pass_tol in [1e-7, PIVOT_TOL] {
                for i in 0..self.m {
                    let a = self.t[i][e];
                    if a > pass_tol {
                        let ratio = self.t[i][self.ncols] / a;
                        match leave {
                            None => leave = Some((i, ratio)),
                            Some((li, lr)) => {
                                if ratio < lr - PIVOT_TOL
                                    || (ratio < lr + PIVOT_TOL && self.basis[i] < self.basis[li])
                                {
                                    leave = Some((i, ratio));
                                }
                            }
                        }
                    }
                }
                if leave.is_some() {
                    break;
                }
            }
            let Some((l, _)) = leave else {
                return if phase2 {
                    Err(GeomError::Unbounded)
                } else {
                    Err(GeomError::NumericalFailure(
                        "phase-1 unbounded".into(),
                    ))
                };
            };
            self.pivot(l, e)?;
        }
        Err(GeomError::NumericalFailure("simplex iteration cap".into()))
    }

    fn pivot(&mut self, row: usize, col: usize) -> Result<()> {
        let piv = self.t[row][col];
        if piv.abs() < PIVOT_TOL {
            return Err(GeomError::NumericalFailure("tiny pivot".into()));
        }
        let inv = 1.0 / piv;
        for v in self.t[row].iter_mut() {
            *v *= inv;
        }
        for i in 0..self.m {
            if i == row {
                continue;
            }
            let f = self.t[i][col];
            if f != 0.0 {
                for j in 0..=self.ncols {
                    self.t[i][j] -= f * self.t[row][j];
                }
            }
        }
        self.basis[row] = col;
        let mx = self
            .t
            .iter()
            .flat_map(|r| r.iter())
            .fold(0.0f64, |a, &x| a.max(x.abs()));
        if mx > BLOWUP_LIMIT * self.scale.max(1.0) {
            return Err(GeomError::NumericalFailure(
                "condition estimate exceeded".into(),
            ));
        }
        Ok(())
    }

    /// After phase 1, pivot artificials out of the basis when their row has
    /// any usable structural/slack entry; rows that cannot be cleared are
    /// redundant and keep a zero-valued artificial that phase 2 never enters.
    fn expel_artificials(&mut self) {
        for r in 0..self.m {
            if self.basis[r] < self.art_start {
                continue;
            }
            if let Some(j) =
                (0..self.art_start).find(|&j| self.t[r][j].abs() > 1e-8 && !self.basis.contains(&j))
            {
                let _ = self.pivot(r, j);
            }
        }
    }
}
