//! Jacobi, Gauss-Seidel and conjugate gradient.

use super::direct::require_square;
use crate::error::{NumError, Result};
use crate::ndcore::{norm_inf, Matrix};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IterMethod {
    Jacobi,
    GaussSeidel,
    ConjugateGradient,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IterConfig {
    /// Infinity-norm tolerance on the step and on the residual.
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for IterConfig {
    fn default() -> Self {
        IterConfig { tol: 1e-10, max_iter: 100 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IterReport {
    pub iterations: usize,
    /// `‖A x − b‖∞` at the returned iterate.
    pub residual: f64,
    pub converged: bool,
}

fn residual(a: &Matrix, x: &[f64], b: &[f64]) -> f64 {
    let ax = a.mul_vec(x).expect("shape checked");
    ax.iter().zip(b).fold(0.0, |m: f64, (p, q)| m.max((p - q).abs()))
}

/// Iterates until the infinity-norm step drops below `tol`, the residual
/// drops below `tol`, or `max_iter` sweeps have run. Running out of
/// iterations is reported through `converged = false`, not as an error.
pub fn solve_iterative(
    a: &Matrix,
    b: &[f64],
    x0: &[f64],
    method: IterMethod,
    cfg: IterConfig,
) -> Result<(Vec<f64>, IterReport)> {
    let n = require_square(a)?;
    if b.len() != n || x0.len() != n {
        return Err(NumError::shape("b and x0 must match the matrix size"));
    }
    if cfg.tol <= 0.0 || cfg.max_iter == 0 {
        return Err(NumError::InvalidParameter("tol > 0 and max_iter >= 1"));
    }
    match method {
        IterMethod::Jacobi | IterMethod::GaussSeidel => {
            if (0..n).any(|i| a[(i, i)] == 0.0) {
                return Err(NumError::ZeroDiagonal);
            }
            Ok(stationary(a, b, x0, method == IterMethod::GaussSeidel, cfg))
        }
        IterMethod::ConjugateGradient => conjugate_gradient(a, b, x0, cfg),
    }
}

fn stationary(a: &Matrix, b: &[f64], x0: &[f64], in_place: bool, cfg: IterConfig) -> (Vec<f64>, IterReport) {
    let n = b.len();
    let mut x = x0.to_vec();
    let mut next = x.clone();
    for iter in 1..=cfg.max_iter {
        for i in 0..n {
            let row = a.row(i);
            let src = if in_place { &next } else { &x };
            let s: f64 = (0..n).filter(|&j| j != i).map(|j| row[j] * src[j]).sum();
            next[i] = (b[i] - s) / row[i];
        }
        let step = x.iter().zip(&next).fold(0.0, |m: f64, (p, q)| m.max((p - q).abs()));
        x.copy_from_slice(&next);
        let res = residual(a, &x, b);
        if !res.is_finite() {
            return (x, IterReport { iterations: iter, residual: res, converged: false });
        }
        if step < cfg.tol || res < cfg.tol {
            return (x, IterReport { iterations: iter, residual: res, converged: true });
        }
    }
    let res = residual(a, &x, b);
    (x, IterReport { iterations: cfg.max_iter, residual: res, converged: false })
}

fn conjugate_gradient(a: &Matrix, b: &[f64], x0: &[f64], cfg: IterConfig) -> Result<(Vec<f64>, IterReport)> {
    if !a.is_symmetric(1e-12) {
        return Err(NumError::NotSpd);
    }
    let mut x = x0.to_vec();
    let ax = a.mul_vec(&x)?;
    let mut r: Vec<f64> = b.iter().zip(&ax).map(|(bi, ai)| bi - ai).collect();
    if norm_inf(&r) < cfg.tol {
        let res = residual(a, &x, b);
        return Ok((x, IterReport { iterations: 0, residual: res, converged: true }));
    }
    let mut p = r.clone();
    let mut rr: f64 = r.iter().map(|v| v * v).sum();
    for iter in 1..=cfg.max_iter {
        let ap = a.mul_vec(&p)?;
        let curvature: f64 = p.iter().zip(&ap).map(|(u, v)| u * v).sum();
        if curvature <= 0.0 {
            return Err(NumError::NotSpd);
        }
        let alpha = rr / curvature;
        let mut step = 0.0_f64;
        for i in 0..x.len() {
            x[i] += alpha * p[i];
            r[i] -= alpha * ap[i];
            step = step.max((alpha * p[i]).abs());
        }
        let res = residual(a, &x, b);
        if step < cfg.tol || res < cfg.tol {
            return Ok((x, IterReport { iterations: iter, residual: res, converged: true }));
        }
        let rr_new: f64 = r.iter().map(|v| v * v).sum();
        let beta = rr_new / rr;
        for i in 0..p.len() {
            p[i] = r[i] + beta * p[i];
        }
        rr = rr_new;
    }
    let res = residual(a, &x, b);
    Ok((x, IterReport { iterations: cfg.max_iter, residual: res, converged: false }))
}
