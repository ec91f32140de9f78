//! Thin SVD from the Gram-matrix eigendecomposition, and PCA on top of it.

use super::eigen::{eig, normalize_with_sign};
use crate::error::{NumError, Result};
use crate::ndcore::Matrix;

/// Thin SVD: `A = U · diag(sigma) · Vᵀ` with `k = min(m, n)` columns in `U`
/// and `V`.
#[derive(Debug, Clone)]
pub struct SvdResult {
    pub u: Matrix,
    pub sigma: Vec<f64>,
    pub v: Matrix,
}

impl SvdResult {
    pub fn reconstruct(&self) -> Matrix {
        let us = Matrix::from_fn(self.u.rows(), self.sigma.len(), |i, j| self.u[(i, j)] * self.sigma[j]);
        us.matmul(&self.v.transpose()).expect("consistent shapes")
    }
}

/// Relative cutoff below which singular values are treated as zero.
pub const SIGMA_RTOL: f64 = 1e-12;

pub fn svd(a: &Matrix) -> Result<SvdResult> {
    let (m, n) = a.shape();
    if n <= m {
        let (v, sigma, u) = from_gram(a)?;
        Ok(SvdResult { u, sigma, v })
    } else {
        let (u, sigma, v) = from_gram(&a.transpose())?;
        Ok(SvdResult { u, sigma, v })
    }
}

/// For tall `a` (m >= n): eigendecompose `aᵀa` to get right vectors and
/// singular values, then recover left vectors as `a·v/σ`.
fn from_gram(a: &Matrix) -> Result<(Matrix, Vec<f64>, Matrix)> {
    let (m, n) = a.shape();
    let gram = a.transpose().matmul(a)?;
    let e = eig(&gram)?;
    let v = e.vectors;
    let sigma_max = e.values.first().copied().unwrap_or(0.0).max(0.0).sqrt();
    let cutoff = SIGMA_RTOL * sigma_max;
    let mut sigma = Vec::with_capacity(n);
    let mut cols: Vec<Vec<f64>> = Vec::with_capacity(n);
    let av = a.matmul(&v)?;
    for k in 0..n {
        let s = e.values[k].max(0.0).sqrt();
        if s > cutoff && s > 0.0 {
            sigma.push(s);
            cols.push((0..m).map(|i| av[(i, k)] / s).collect());
        } else {
            sigma.push(0.0);
            cols.push(Vec::new());
        }
    }
    let u_cols = orthonormal_completion(cols, m);
    let u = Matrix::from_fn(m, n, |i, j| u_cols[j][i]);
    Ok((v, sigma, u))
}

/// Re-orthonormalizes the given columns with modified Gram-Schmidt and
/// fills empty slots with unit vectors orthogonal to everything before.
fn orthonormal_completion(cols: Vec<Vec<f64>>, m: usize) -> Vec<Vec<f64>> {
    let mut out: Vec<Vec<f64>> = Vec::with_capacity(cols.len());
    let mut basis_candidate = 0usize;
    for col in cols {
        let mut c = col;
        let mut filled = !c.is_empty();
        loop {
            if !filled {
                if basis_candidate >= m {
                    break;
                }
                c = vec![0.0; m];
                c[basis_candidate] = 1.0;
                basis_candidate += 1;
            }
            for prev in &out {
                let d: f64 = prev.iter().zip(&c).map(|(p, x)| p * x).sum();
                c.iter_mut().zip(prev).for_each(|(x, p)| *x -= d * p);
            }
            let norm = c.iter().map(|x| x * x).sum::<f64>().sqrt();
            if norm > 1e-8 {
                c.iter_mut().for_each(|x| *x /= norm);
                break;
            }
            filled = false;
        }
        out.push(c);
    }
    out
}

/// Projects mean-centered rows of `x` onto the top-`k` principal directions
/// of the sample covariance (divisor `n − 1`). Each direction is signed so
/// that its largest-magnitude loading is positive.
pub fn pca(x: &Matrix, k: usize) -> Result<Matrix> {
    let (n, d) = x.shape();
    if n < 2 || k < 1 || k > (n - 1).min(d) {
        return Err(NumError::BadRank(format!(
            "k = {k} outside 1..={} for a {n}x{d} dataset",
            (n.saturating_sub(1)).min(d)
        )));
    }
    let centered = center_columns(x);
    let cov = centered.transpose().matmul(&centered)?.scale(1.0 / (n as f64 - 1.0));
    let e = eig(&cov)?;
    let mut w = Matrix::zeros(d, k);
    for j in 0..k {
        let mut col = e.vectors.col(j);
        normalize_with_sign(&mut col);
        for i in 0..d {
            w[(i, j)] = col[i];
        }
    }
    centered.matmul(&w)
}

pub(crate) fn center_columns(x: &Matrix) -> Matrix {
    let (n, d) = x.shape();
    let means: Vec<f64> = (0..d).map(|j| (0..n).map(|i| x[(i, j)]).sum::<f64>() / n as f64).collect();
    Matrix::from_fn(n, d, |i, j| x[(i, j)] - means[j])
}
