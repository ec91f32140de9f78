//! Linear systems, factorizations, eigenvalues, SVD, PCA and least squares.

mod direct;
mod eigen;
mod iterative;
mod qr;
mod svd;

pub use direct::{cholesky, det, gauss_solve, inv, lu, LuFactors, SINGULAR_RTOL};
pub use eigen::{eig, EigResult};
pub use iterative::{solve_iterative, IterConfig, IterMethod, IterReport};
pub use qr::{least_squares, polyfit, qr, QrFactors};
pub use svd::{pca, svd, SvdResult, SIGMA_RTOL};

use crate::error::{NumError, Result};
use crate::ndcore::Matrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DirectMethod {
    Gauss,
    Lu,
    Qr,
    Cholesky,
    Inverse,
}

impl DirectMethod {
    pub const ALL: [DirectMethod; 5] =
        [DirectMethod::Gauss, DirectMethod::Lu, DirectMethod::Qr, DirectMethod::Cholesky, DirectMethod::Inverse];
}

/// Solves the square system `A x = b`.
pub fn solve_direct(a: &Matrix, b: &[f64], method: DirectMethod) -> Result<Vec<f64>> {
    if !a.is_square() {
        return Err(NumError::shape("solve_direct needs a square matrix"));
    }
    if b.len() != a.rows() {
        return Err(NumError::shape("right-hand side length"));
    }
    match method {
        DirectMethod::Gauss => gauss_solve(a, b),
        DirectMethod::Lu => lu(a)?.solve(b),
        DirectMethod::Qr => least_squares(a, b),
        DirectMethod::Cholesky => direct::cholesky_solve(a, b),
        DirectMethod::Inverse => inv(a)?.mul_vec(b),
    }
}
