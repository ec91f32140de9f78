//! Householder QR and least squares.

use super::direct::{back_substitute, SINGULAR_RTOL};
use crate::error::{NumError, Result};
use crate::ndcore::Matrix;

#[derive(Debug, Clone)]
pub struct QrFactors {
    /// Orthogonal, `m x m`.
    pub q: Matrix,
    /// Upper triangular, `m x n`.
    pub r: Matrix,
}

/// Householder QR of an `m x n` matrix with `m >= n`.
pub fn qr(a: &Matrix) -> Result<QrFactors> {
    let (m, n) = a.shape();
    if m < n {
        return Err(NumError::shape(format!("qr needs rows >= cols, got {m}x{n}")));
    }
    let mut r = a.clone();
    let mut q = Matrix::identity(m);
    let mut v = vec![0.0; m];

    for k in 0..n.min(m - 1) {
        let norm_x = (k..m).map(|i| r[(i, k)] * r[(i, k)]).sum::<f64>().sqrt();
        if norm_x == 0.0 {
            continue;
        }
        let alpha = if r[(k, k)] >= 0.0 { -norm_x } else { norm_x };
        for i in 0..m {
            v[i] = if i < k { 0.0 } else { r[(i, k)] };
        }
        v[k] -= alpha;
        let vnorm2: f64 = v[k..].iter().map(|x| x * x).sum();
        if vnorm2 == 0.0 {
            continue;
        }
        // R <- (I - 2vvᵀ/vᵀv) R
        for j in k..n {
            let s: f64 = (k..m).map(|i| v[i] * r[(i, j)]).sum::<f64>() * 2.0 / vnorm2;
            for i in k..m {
                r[(i, j)] -= s * v[i];
            }
        }
        // Q <- Q (I - 2vvᵀ/vᵀv)
        for i in 0..m {
            let s: f64 = (k..m).map(|j| q[(i, j)] * v[j]).sum::<f64>() * 2.0 / vnorm2;
            for j in k..m {
                q[(i, j)] -= s * v[j];
            }
        }
        r[(k, k)] = alpha;
        for i in (k + 1)..m {
            r[(i, k)] = 0.0;
        }
    }
    Ok(QrFactors { q, r })
}

/// Minimizes `‖A x − b‖₂` through QR. For square `A` this is an exact solve.
pub fn least_squares(a: &Matrix, b: &[f64]) -> Result<Vec<f64>> {
    let (m, n) = a.shape();
    if b.len() != m {
        return Err(NumError::shape("right-hand side length"));
    }
    let f = qr(a)?;
    let threshold = SINGULAR_RTOL * a.max_abs();
    if f.r.diag().iter().any(|d| d.abs() <= threshold) {
        return Err(NumError::Singular);
    }
    let qtb = f.q.transpose().mul_vec(b)?;
    let r = f.r.block(0, 0, n, n);
    back_substitute(&r, &qtb[..n])
}

/// Least-squares polynomial coefficients, highest degree first.
pub fn polyfit(xs: &[f64], ys: &[f64], degree: usize) -> Result<Vec<f64>> {
    if xs.len() != ys.len() {
        return Err(NumError::shape("xs and ys differ in length"));
    }
    if xs.len() < degree + 1 {
        return Err(NumError::RankDeficient);
    }
    if xs.iter().chain(ys).any(|v| !v.is_finite()) {
        return Err(NumError::NonFinite);
    }
    let vander = Matrix::from_fn(xs.len(), degree + 1, |i, j| xs[i].powi((degree - j) as i32));
    least_squares(&vander, ys).map_err(|e| match e {
        NumError::Singular => NumError::RankDeficient,
        other => other,
    })
}
