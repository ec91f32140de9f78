//! Strassen multiplication on zero-padded power-of-two squares.

use super::matrix::{naive_product, Matrix};

/// Below this size the recursion falls back to the naive triple loop.
pub const CUTOFF: usize = 32;

pub(crate) fn multiply(a: &Matrix, b: &Matrix) -> Matrix {
    let (n, k, m) = (a.rows(), a.cols(), b.cols());
    let size = n.max(k).max(m).next_power_of_two();
    let pa = pad(a, size);
    let pb = pad(b, size);
    let pc = recurse(&pa, &pb, size);
    let mut out = Vec::with_capacity(n * m);
    for i in 0..n {
        out.extend_from_slice(&pc[i * size..i * size + m]);
    }
    Matrix::from_raw(n, m, out)
}

fn pad(a: &Matrix, size: usize) -> Vec<f64> {
    let mut out = vec![0.0; size * size];
    for i in 0..a.rows() {
        out[i * size..i * size + a.cols()].copy_from_slice(a.row(i));
    }
    out
}

fn recurse(a: &[f64], b: &[f64], n: usize) -> Vec<f64> {
    if n <= CUTOFF {
        return naive_product(a, b, n, n, n);
    }
    let h = n / 2;
    let [a11, a12, a21, a22] = split(a, n);
    let [b11, b12, b21, b22] = split(b, n);

    let m1 = recurse(&add(&a11, &a22), &add(&b11, &b22), h);
    let m2 = recurse(&add(&a21, &a22), &b11, h);
    let m3 = recurse(&a11, &sub(&b12, &b22), h);
    let m4 = recurse(&a22, &sub(&b21, &b11), h);
    let m5 = recurse(&add(&a11, &a12), &b22, h);
    let m6 = recurse(&sub(&a21, &a11), &add(&b11, &b12), h);
    let m7 = recurse(&sub(&a12, &a22), &add(&b21, &b22), h);

    let c11: Vec<f64> = (0..h * h).map(|i| m1[i] + m4[i] - m5[i] + m7[i]).collect();
    let c12 = add(&m3, &m5);
    let c21 = add(&m2, &m4);
    let c22: Vec<f64> = (0..h * h).map(|i| m1[i] - m2[i] + m3[i] + m6[i]).collect();
    join(&c11, &c12, &c21, &c22, h)
}

fn split(a: &[f64], n: usize) -> [Vec<f64>; 4] {
    let h = n / 2;
    let quad = |r0: usize, c0: usize| {
        let mut q = Vec::with_capacity(h * h);
        for i in 0..h {
            let start = (r0 + i) * n + c0;
            q.extend_from_slice(&a[start..start + h]);
        }
        q
    };
    [quad(0, 0), quad(0, h), quad(h, 0), quad(h, h)]
}

fn join(c11: &[f64], c12: &[f64], c21: &[f64], c22: &[f64], h: usize) -> Vec<f64> {
    let n = 2 * h;
    let mut c = vec![0.0; n * n];
    for i in 0..h {
        c[i * n..i * n + h].copy_from_slice(&c11[i * h..(i + 1) * h]);
        c[i * n + h..(i + 1) * n].copy_from_slice(&c12[i * h..(i + 1) * h]);
        c[(i + h) * n..(i + h) * n + h].copy_from_slice(&c21[i * h..(i + 1) * h]);
        c[(i + h) * n + h..(i + h + 1) * n].copy_from_slice(&c22[i * h..(i + 1) * h]);
    }
    c
}

fn add(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

fn sub(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ndcore::MatMulAlgo;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random(rows: usize, cols: usize, rng: &mut ChaCha8Rng) -> Matrix {
        Matrix::from_fn(rows, cols, |_, _| rng.random_range(-1.0..1.0))
    }

    fn max_diff(a: &Matrix, b: &Matrix) -> f64 {
        a.data().iter().zip(b.data()).fold(0.0, |m, (x, y)| f64::max(m, (x - y).abs()))
    }

    #[test]
    fn matches_naive_above_cutoff_and_off_power_of_two() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for &(n, k, m) in &[(64, 64, 64), (33, 33, 33), (70, 40, 50), (1, 100, 1)] {
            let a = random(n, k, &mut rng);
            let b = random(k, m, &mut rng);
            let naive = a.matmul(&b).unwrap();
            let fast = a.matmul_with(&b, MatMulAlgo::Strassen).unwrap();
            assert_eq!(fast.shape(), (n, m));
            assert!(max_diff(&naive, &fast) < 1e-9, "{n}x{k}x{m}");
        }
    }
}
