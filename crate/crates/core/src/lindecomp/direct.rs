//! LU with partial pivoting, Cholesky, Gaussian elimination, determinant and
//! inverse.

use crate::error::{NumError, Result};
use crate::ndcore::Matrix;

/// Pivots smaller than this fraction of the largest entry of `A` are
/// treated as zero.
pub const SINGULAR_RTOL: f64 = 1e-12;

/// `P·A = L·U` with unit lower-triangular `L`.
#[derive(Debug, Clone)]
pub struct LuFactors {
    pub l: Matrix,
    pub u: Matrix,
    /// `perm[i]` is the row of `A` that ended up in row `i`.
    pub perm: Vec<usize>,
    /// Parity of the permutation, +1 or -1.
    pub sign: f64,
}

impl LuFactors {
    /// Permutation matrix `P` with `P·A = L·U`.
    pub fn p(&self) -> Matrix {
        let n = self.perm.len();
        Matrix::from_fn(n, n, |i, j| if self.perm[i] == j { 1.0 } else { 0.0 })
    }

    /// Solves `A x = b` by forward and back substitution.
    pub fn solve(&self, b: &[f64]) -> Result<Vec<f64>> {
        let n = self.perm.len();
        if b.len() != n {
            return Err(NumError::shape("right-hand side length"));
        }
        let mut y: Vec<f64> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            let s: f64 = (0..i).map(|j| self.l[(i, j)] * y[j]).sum();
            y[i] -= s;
        }
        back_substitute(&self.u, &y)
    }

    pub fn det(&self) -> f64 {
        self.sign * self.u.diag().iter().product::<f64>()
    }
}

pub(crate) fn require_square(a: &Matrix) -> Result<usize> {
    if !a.is_square() {
        return Err(NumError::shape(format!("expected a square matrix, got {}x{}", a.rows(), a.cols())));
    }
    Ok(a.rows())
}

/// Solves `U x = y` for upper-triangular `U`.
pub(crate) fn back_substitute(u: &Matrix, y: &[f64]) -> Result<Vec<f64>> {
    let n = y.len();
    let tiny = SINGULAR_RTOL * u.max_abs();
    let mut x = vec![0.0; n];
    for i in (0..n).rev() {
        let s: f64 = ((i + 1)..n).map(|j| u[(i, j)] * x[j]).sum();
        let d = u[(i, i)];
        if d.abs() <= tiny || d == 0.0 {
            return Err(NumError::Singular);
        }
        x[i] = (y[i] - s) / d;
    }
    Ok(x)
}

fn lu_inner(a: &Matrix, strict: bool) -> Result<LuFactors> {
    let n = require_square(a)?;
    let threshold = SINGULAR_RTOL * a.max_abs();
    let mut u = a.clone();
    let mut l = Matrix::zeros(n, n);
    let mut perm: Vec<usize> = (0..n).collect();
    let mut sign = 1.0;

    for k in 0..n {
        let p = (k..n).max_by(|&i, &j| u[(i, k)].abs().total_cmp(&u[(j, k)].abs())).unwrap_or(k);
        if p != k {
            u.swap_rows(p, k);
            l.swap_rows(p, k);
            perm.swap(p, k);
            sign = -sign;
        }
        let pivot = u[(k, k)];
        if pivot.abs() < threshold || pivot == 0.0 {
            if strict {
                return Err(NumError::Singular);
            }
            continue;
        }
        for i in (k + 1)..n {
            let factor = u[(i, k)] / pivot;
            l[(i, k)] = factor;
            u[(i, k)] = 0.0;
            for j in (k + 1)..n {
                u[(i, j)] -= factor * u[(k, j)];
            }
        }
    }
    for i in 0..n {
        l[(i, i)] = 1.0;
    }
    Ok(LuFactors { l, u, perm, sign })
}

/// LU decomposition with partial pivoting.
pub fn lu(a: &Matrix) -> Result<LuFactors> {
    lu_inner(a, true)
}

/// Determinant as `sign · Π diag(U)`. Singular matrices give zero (or a
/// value at rounding level) instead of an error.
pub fn det(a: &Matrix) -> Result<f64> {
    Ok(lu_inner(a, false)?.det())
}

pub fn inv(a: &Matrix) -> Result<Matrix> {
    let f = lu(a)?;
    let n = a.rows();
    let mut out = Matrix::zeros(n, n);
    let mut e = vec![0.0; n];
    for j in 0..n {
        e.iter_mut().for_each(|v| *v = 0.0);
        e[j] = 1.0;
        let col = f.solve(&e)?;
        for i in 0..n {
            out[(i, j)] = col[i];
        }
    }
    Ok(out)
}

/// Gaussian elimination with partial pivoting on the augmented system.
pub fn gauss_solve(a: &Matrix, b: &[f64]) -> Result<Vec<f64>> {
    let n = require_square(a)?;
    if b.len() != n {
        return Err(NumError::shape("right-hand side length"));
    }
    let threshold = SINGULAR_RTOL * a.max_abs();
    let mut m = a.clone();
    let mut rhs = b.to_vec();
    for k in 0..n {
        let p = (k..n).max_by(|&i, &j| m[(i, k)].abs().total_cmp(&m[(j, k)].abs())).unwrap_or(k);
        m.swap_rows(p, k);
        rhs.swap(p, k);
        let pivot = m[(k, k)];
        if pivot.abs() < threshold || pivot == 0.0 {
            return Err(NumError::Singular);
        }
        for i in (k + 1)..n {
            let factor = m[(i, k)] / pivot;
            if factor == 0.0 {
                continue;
            }
            for j in k..n {
                m[(i, j)] -= factor * m[(k, j)];
            }
            rhs[i] -= factor * rhs[k];
        }
    }
    back_substitute(&m, &rhs)
}

/// Lower-triangular `L` with `A = L·Lᵀ`.
pub fn cholesky(a: &Matrix) -> Result<Matrix> {
    let n = require_square(a)?;
    if !a.is_symmetric(1e-12) {
        return Err(NumError::NotSpd);
    }
    let mut l = Matrix::zeros(n, n);
    for j in 0..n {
        let s: f64 = (0..j).map(|k| l[(j, k)] * l[(j, k)]).sum();
        let d = a[(j, j)] - s;
        if d <= 0.0 || !d.is_finite() {
            return Err(NumError::NotSpd);
        }
        let ljj = d.sqrt();
        l[(j, j)] = ljj;
        for i in (j + 1)..n {
            let s: f64 = (0..j).map(|k| l[(i, k)] * l[(j, k)]).sum();
            l[(i, j)] = (a[(i, j)] - s) / ljj;
        }
    }
    Ok(l)
}

pub(crate) fn cholesky_solve(a: &Matrix, b: &[f64]) -> Result<Vec<f64>> {
    let l = cholesky(a)?;
    let n = l.rows();
    if b.len() != n {
        return Err(NumError::shape("right-hand side length"));
    }
    let mut y = vec![0.0; n];
    for i in 0..n {
        let s: f64 = (0..i).map(|k| l[(i, k)] * y[k]).sum();
        y[i] = (b[i] - s) / l[(i, i)];
    }
    back_substitute(&l.transpose(), &y)
}
