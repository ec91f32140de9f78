//! Real eigendecomposition by shifted QR iteration on the Hessenberg form.
//!
//! The matrix is reduced to upper Hessenberg form with Householder
//! reflections, then driven to upper-triangular (real Schur) form with
//! Wilkinson-shifted Givens QR sweeps. Trailing 2x2 blocks are split
//! analytically. Complex-conjugate pairs are not supported: a 2x2 block with
//! a negative discriminant ends the iteration with `NoConvergence`.
//!
//! Eigenvectors come from back substitution on the triangular factor,
//! mapped back through the accumulated orthogonal transform. For symmetric
//! input the Schur vectors are already eigenvectors and are used directly.

use super::direct::require_square;
use crate::error::{NumError, Result};
use crate::ndcore::Matrix;

#[derive(Debug, Clone)]
pub struct EigResult {
    /// Eigenvalues sorted in descending order.
    pub values: Vec<f64>,
    /// Unit-norm eigenvectors as columns, aligned with `values`.
    pub vectors: Matrix,
}

const SWEEPS_PER_EIGENVALUE: usize = 60;

pub fn eig(a: &Matrix) -> Result<EigResult> {
    let n = require_square(a)?;
    let symmetric = a.is_symmetric(1e-12);
    let (mut h, mut z) = hessenberg(a);
    schur(&mut h, &mut z)?;

    let values: Vec<f64> = h.diag();
    let vectors = if symmetric {
        z
    } else {
        let y = triangular_eigenvectors(&h);
        z.matmul(&y)?
    };

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| values[j].total_cmp(&values[i]));
    let mut out = Matrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        let mut col = vectors.col(src);
        normalize_with_sign(&mut col);
        for i in 0..n {
            out[(i, dst)] = col[i];
        }
    }
    Ok(EigResult { values: order.iter().map(|&i| values[i]).collect(), vectors: out })
}

/// Scales to unit length and flips so the largest-magnitude entry is
/// positive (first one wins on ties).
pub(crate) fn normalize_with_sign(v: &mut [f64]) {
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    if norm == 0.0 {
        return;
    }
    let mut best = 0;
    for i in 1..v.len() {
        if v[i].abs() > v[best].abs() * (1.0 + 1e-12) {
            best = i;
        }
    }
    let s = if v[best] < 0.0 { -1.0 } else { 1.0 } / norm;
    v.iter_mut().for_each(|x| *x *= s);
}

/// Returns `(H, Q)` with `A = Q H Qᵀ` and `H` upper Hessenberg.
fn hessenberg(a: &Matrix) -> (Matrix, Matrix) {
    let n = a.rows();
    let mut h = a.clone();
    let mut q = Matrix::identity(n);
    if n < 3 {
        return (h, q);
    }
    let mut v = vec![0.0; n];
    for k in 0..n - 2 {
        let norm_x = ((k + 1)..n).map(|i| h[(i, k)] * h[(i, k)]).sum::<f64>().sqrt();
        if norm_x == 0.0 {
            continue;
        }
        let alpha = if h[(k + 1, k)] >= 0.0 { -norm_x } else { norm_x };
        v.iter_mut().for_each(|x| *x = 0.0);
        for i in (k + 1)..n {
            v[i] = h[(i, k)];
        }
        v[k + 1] -= alpha;
        let vv: f64 = v.iter().map(|x| x * x).sum();
        if vv == 0.0 {
            continue;
        }
        // H <- P H P with P = I - 2vvᵀ/vᵀv
        for j in 0..n {
            let s = 2.0 * ((k + 1)..n).map(|i| v[i] * h[(i, j)]).sum::<f64>() / vv;
            for i in (k + 1)..n {
                h[(i, j)] -= s * v[i];
            }
        }
        for i in 0..n {
            let s = 2.0 * ((k + 1)..n).map(|j| h[(i, j)] * v[j]).sum::<f64>() / vv;
            for j in (k + 1)..n {
                h[(i, j)] -= s * v[j];
            }
        }
        for i in 0..n {
            let s = 2.0 * ((k + 1)..n).map(|j| q[(i, j)] * v[j]).sum::<f64>() / vv;
            for j in (k + 1)..n {
                q[(i, j)] -= s * v[j];
            }
        }
        for i in (k + 2)..n {
            h[(i, k)] = 0.0;
        }
    }
    (h, q)
}

/// Applies the plane rotation `G = [[c, -s], [s, c]]` on indices `(k, k+1)`
/// as the similarity `H <- Gᵀ H G`, and accumulates `Z <- Z G`.
fn rotate(h: &mut Matrix, z: &mut Matrix, k: usize, c: f64, s: f64) {
    let n = h.rows();
    for j in 0..n {
        let (p, q) = (h[(k, j)], h[(k + 1, j)]);
        h[(k, j)] = c * p + s * q;
        h[(k + 1, j)] = -s * p + c * q;
    }
    for i in 0..n {
        let (p, q) = (h[(i, k)], h[(i, k + 1)]);
        h[(i, k)] = c * p + s * q;
        h[(i, k + 1)] = -s * p + c * q;
        let (p, q) = (z[(i, k)], z[(i, k + 1)]);
        z[(i, k)] = c * p + s * q;
        z[(i, k + 1)] = -s * p + c * q;
    }
}

fn schur(h: &mut Matrix, z: &mut Matrix) -> Result<()> {
    let n = h.rows();
    if n == 1 {
        return Ok(());
    }
    let scale = h.max_abs().max(f64::MIN_POSITIVE);
    let budget = SWEEPS_PER_EIGENVALUE * n;
    let mut total = 0usize;
    let mut hi = n - 1;
    let mut since_deflation = 0usize;

    loop {
        // Find the start of the unreduced block ending at `hi`.
        let mut lo = hi;
        while lo > 0 {
            let sub = h[(lo, lo - 1)].abs();
            let mut diag = h[(lo - 1, lo - 1)].abs() + h[(lo, lo)].abs();
            if diag == 0.0 {
                diag = scale;
            }
            if sub <= f64::EPSILON * diag {
                h[(lo, lo - 1)] = 0.0;
                break;
            }
            lo -= 1;
        }

        if lo == hi {
            if hi == 0 {
                break;
            }
            hi -= 1;
            since_deflation = 0;
            continue;
        }
        if lo + 1 == hi {
            split_2x2(h, z, lo)?;
            if hi < 2 {
                break;
            }
            hi -= 2;
            since_deflation = 0;
            continue;
        }

        total += 1;
        since_deflation += 1;
        if total > budget {
            return Err(NumError::NoConvergence(total));
        }
        let shift = if since_deflation % 11 == 10 {
            // Exceptional shift to break symmetric stalls.
            h[(hi, hi)] + 0.75 * h[(hi, hi - 1)].abs()
        } else {
            wilkinson_shift(h, hi)
        };
        qr_sweep(h, z, lo, hi, shift);
    }
    Ok(())
}

fn wilkinson_shift(h: &Matrix, hi: usize) -> f64 {
    let a = h[(hi - 1, hi - 1)];
    let b = h[(hi - 1, hi)];
    let c = h[(hi, hi - 1)];
    let d = h[(hi, hi)];
    let half = 0.5 * (a - d);
    let disc = half * half + b * c;
    if disc < 0.0 {
        // Complex pair in the trailing block; use the shared real part.
        return 0.5 * (a + d);
    }
    let root = disc.sqrt();
    let l1 = 0.5 * (a + d) + root;
    let l2 = 0.5 * (a + d) - root;
    if (l1 - d).abs() < (l2 - d).abs() {
        l1
    } else {
        l2
    }
}

/// One explicit shifted QR step on the active window `lo..=hi`.
fn qr_sweep(h: &mut Matrix, z: &mut Matrix, lo: usize, hi: usize, shift: f64) {
    let n = h.rows();
    for k in lo..=hi {
        h[(k, k)] -= shift;
    }
    let mut rotations = Vec::with_capacity(hi - lo);
    for k in lo..hi {
        let x = h[(k, k)];
        let y = h[(k + 1, k)];
        let r = x.hypot(y);
        let (c, s) = if r == 0.0 { (1.0, 0.0) } else { (x / r, y / r) };
        for j in k..n {
            let (p, q) = (h[(k, j)], h[(k + 1, j)]);
            h[(k, j)] = c * p + s * q;
            h[(k + 1, j)] = -s * p + c * q;
        }
        rotations.push((c, s));
    }
    for (offset, &(c, s)) in rotations.iter().enumerate() {
        let k = lo + offset;
        for i in 0..=(k + 2).min(hi) {
            let (p, q) = (h[(i, k)], h[(i, k + 1)]);
            h[(i, k)] = c * p + s * q;
            h[(i, k + 1)] = -s * p + c * q;
        }
        for i in 0..n {
            let (p, q) = (z[(i, k)], z[(i, k + 1)]);
            z[(i, k)] = c * p + s * q;
            z[(i, k + 1)] = -s * p + c * q;
        }
    }
    for k in lo..=hi {
        h[(k, k)] += shift;
    }
}

/// Triangularizes the 2x2 diagonal block at `(k, k)` when its eigenvalues are
/// real.
fn split_2x2(h: &mut Matrix, z: &mut Matrix, k: usize) -> Result<()> {
    let a = h[(k, k)];
    let b = h[(k, k + 1)];
    let c = h[(k + 1, k)];
    let d = h[(k + 1, k + 1)];
    if c == 0.0 {
        return Ok(());
    }
    let half = 0.5 * (a - d);
    let disc = half * half + b * c;
    if disc < 0.0 {
        let scale = a.abs() + b.abs() + c.abs() + d.abs();
        if -disc > (f64::EPSILON * scale).powi(2) {
            return Err(NumError::NoConvergence(0));
        }
    }
    let lambda = 0.5 * (a + d) + disc.max(0.0).sqrt().copysign(half);
    // Two candidate eigenvectors; keep the better conditioned one.
    let v1 = (b, lambda - a);
    let v2 = (lambda - d, c);
    let (x, y) = if v1.0.hypot(v1.1) >= v2.0.hypot(v2.1) { v1 } else { v2 };
    let r = x.hypot(y);
    if r == 0.0 {
        return Ok(());
    }
    rotate(h, z, k, x / r, y / r);
    h[(k + 1, k)] = 0.0;
    Ok(())
}

/// Eigenvectors of an upper-triangular matrix, one per column.
fn triangular_eigenvectors(t: &Matrix) -> Matrix {
    let n = t.rows();
    let small = f64::EPSILON * t.max_abs().max(f64::MIN_POSITIVE);
    let mut y = Matrix::zeros(n, n);
    for k in 0..n {
        let lambda = t[(k, k)];
        let mut col = vec![0.0; n];
        col[k] = 1.0;
        for j in (0..k).rev() {
            let s: f64 = ((j + 1)..=k).map(|i| t[(j, i)] * col[i]).sum();
            let mut denom = t[(j, j)] - lambda;
            if denom.abs() < small {
                denom = if denom < 0.0 { -small } else { small };
            }
            col[j] = -s / denom;
        }
        for i in 0..n {
            y[(i, k)] = col[i];
        }
    }
    y
}
