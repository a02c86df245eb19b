//! Thin helpers over nalgebra for the small dense matrices used everywhere
//! (d ≤ 8, so everything is heap-allocated dynamic and nobody cares).

use nalgebra::{DMatrix, DVector};

use crate::error::{GeomError, Result};
use crate::SPD_EIGENVALUE_FLOOR;

pub fn to_dvec(v: &[f64]) -> DVector<f64> {
    DVector::from_column_slice(v)
}

pub fn to_dmat(rows: &[Vec<f64>]) -> DMatrix<f64> {
    let r = rows.len();
    let c = if r == 0 { 0 } else { rows[0].len() };
    DMatrix::from_fn(r, c, |i, j| rows[i][j])
}

pub fn mat_rows(m: &DMatrix<f64>) -> Vec<Vec<f64>> {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| m[(i, j)]).collect())
        .collect()
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// Check symmetry to `tol` and positive definiteness down to the global
/// eigenvalue floor.
pub fn check_spd(m: &DMatrix<f64>, sym_tol: f64) -> Result<()> {
    let d = m.nrows();
    if m.ncols() != d {
        return Err(GeomError::InvalidInput("matrix not square".into()));
    }
    for i in 0..d {
        for j in (i + 1)..d {
            if (m[(i, j)] - m[(j, i)]).abs() > sym_tol {
                return Err(GeomError::NotPositiveDefinite);
            }
        }
    }
    let eig = m.clone().symmetric_eigen();
    if eig.eigenvalues.iter().any(|&l| l <= SPD_EIGENVALUE_FLOOR) {
        return Err(GeomError::NotPositiveDefinite);
    }
    Ok(())
}

pub fn determinant(m: &DMatrix<f64>) -> f64 {
    m.clone().lu().determinant()
}

/// Symmetric positive square root via eigendecomposition.
pub fn sym_sqrt(m: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let eig = m.clone().symmetric_eigen();
    if eig.eigenvalues.iter().any(|&l| l < 0.0) {
        return Err(GeomError::NotPositiveDefinite);
    }
    let sq = DMatrix::from_diagonal(&eig.eigenvalues.map(|l| l.max(0.0).sqrt()));
    Ok(&eig.eigenvectors * sq * eig.eigenvectors.transpose())
}

/// Clamp eigenvalues of a symmetric matrix from below.
pub fn eigenvalue_floor(m: &DMatrix<f64>, floor: f64) -> DMatrix<f64> {
    let eig = m.clone().symmetric_eigen();
    let lam = DMatrix::from_diagonal(&eig.eigenvalues.map(|l| l.max(floor)));
    &eig.eigenvectors * lam * eig.eigenvectors.transpose()
}

/// Basis of symmetric d×d matrices indexed by upper-triangle pairs (i ≤ j):
/// E_ii = e_i e_iᵀ, E_ij = e_i e_jᵀ + e_j e_iᵀ.
pub fn sym_basis(d: usize) -> Vec<DMatrix<f64>> {
    let mut basis = Vec::with_capacity(d * (d + 1) / 2);
    for i in 0..d {
        for j in i..d {
            let mut e = DMatrix::zeros(d, d);
            e[(i, j)] = 1.0;
            e[(j, i)] = 1.0;
            if i == j {
                e[(i, i)] = 1.0;
            }
            basis.push(e);
        }
    }
    basis
}

/// Pack a symmetric matrix into upper-triangle coordinates matching
/// [`sym_basis`]: A = Σ θ_p E_p.
pub fn sym_pack(m: &DMatrix<f64>) -> DVector<f64> {
    let d = m.nrows();
    let mut out = Vec::with_capacity(d * (d + 1) / 2);
    for i in 0..d {
        for j in i..d {
            out.push(m[(i, j)]);
        }
    }
    DVector::from_vec(out)
}

pub fn sym_unpack(theta: &DVector<f64>, d: usize) -> DMatrix<f64> {
    let mut m = DMatrix::zeros(d, d);
    let mut p = 0;
    for i in 0..d {
        for j in i..d {
            m[(i, j)] = theta[p];
            m[(j, i)] = theta[p];
            p += 1;
        }
    }
    m
}

/// Solve the square system `a x = b`, failing on (near-)singular input.
pub fn solve_square(a: &DMatrix<f64>, b: &DVector<f64>) -> Result<DVector<f64>> {
    a.clone()
        .lu()
        .solve(b)
        .ok_or_else(|| GeomError::NumericalFailure("singular system".into()))
}

/// Volume of the unit ball in dimension d (ω_d).
pub fn unit_ball_volume(d: usize) -> f64 {
    match d {
        0 => 1.0,
        1 => 2.0,
        _ => unit_ball_volume(d - 2) * 2.0 * std::f64::consts::PI / d as f64,
    }
}
