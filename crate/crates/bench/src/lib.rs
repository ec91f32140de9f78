//! Seeded workloads shared by the criterion benches.

use desk_numerics::Matrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn random_matrix(rows: usize, cols: usize, seed: u64) -> Matrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Matrix::from_fn(rows, cols, |_, _| rng.random_range(-1.0..1.0))
}

/// Diagonally dominant symmetric matrix, safe for every solver.
pub fn spd_matrix(n: usize, seed: u64) -> Matrix {
    let b = random_matrix(n, n, seed);
    let mut a = b.matmul(&b.transpose()).expect("square");
    for i in 0..n {
        a[(i, i)] += n as f64;
    }
    a
}

pub fn random_signal(n: usize, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| rng.random_range(-1.0..1.0)).collect()
}
