//! Named built-in functions, so the CLI needs no expression parser.

use clap::ValueEnum;
use desk_numerics::Matrix;

/// Scalar functions for `roots` and `integrate`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ScalarFn {
    /// x² − 4
    #[value(name = "x2m4")]
    X2m4,
    /// x² + 4x + 4
    Quad,
    Sin,
    /// x³
    Cube,
    /// x²
    Square,
}

impl ScalarFn {
    pub fn eval(self, x: f64) -> f64 {
        match self {
            ScalarFn::X2m4 => x * x - 4.0,
            ScalarFn::Quad => x * x + 4.0 * x + 4.0,
            ScalarFn::Sin => x.sin(),
            ScalarFn::Cube => x * x * x,
            ScalarFn::Square => x * x,
        }
    }

    pub fn derivative(self, x: f64) -> f64 {
        match self {
            ScalarFn::X2m4 | ScalarFn::Square => 2.0 * x,
            ScalarFn::Quad => 2.0 * x + 4.0,
            ScalarFn::Sin => x.cos(),
            ScalarFn::Cube => 3.0 * x * x,
        }
    }

    pub fn antiderivative(self, x: f64) -> f64 {
        match self {
            ScalarFn::X2m4 => x * x * x / 3.0 - 4.0 * x,
            ScalarFn::Quad => x * x * x / 3.0 + 2.0 * x * x + 4.0 * x,
            ScalarFn::Sin => -x.cos(),
            ScalarFn::Cube => x.powi(4) / 4.0,
            ScalarFn::Square => x * x * x / 3.0,
        }
    }
}

/// x² + y² − 1 = 0 together with y − x² = 0.
pub fn circle_parabola(x: &[f64]) -> Vec<f64> {
    vec![x[0] * x[0] + x[1] * x[1] - 1.0, x[1] - x[0] * x[0]]
}

pub fn circle_parabola_jacobian(x: &[f64]) -> Matrix {
    Matrix::from_rows(&[[2.0 * x[0], 2.0 * x[1]], [-2.0 * x[0], 1.0]]).expect("2x2")
}

/// Objectives for `optimize`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Objective {
    /// x² + 4x + 4
    #[value(name = "quadratic1d", alias = "quad")]
    Quadratic1d,
    /// (x − 3)² + (y − 2)²
    Bowl2d,
    /// (1 − x)² + 100(y − x²)²
    Rosenbrock,
}

impl Objective {
    pub fn dim(self) -> usize {
        match self {
            Objective::Quadratic1d => 1,
            _ => 2,
        }
    }

    pub fn default_start(self) -> Vec<f64> {
        match self {
            Objective::Quadratic1d => vec![10.0],
            Objective::Bowl2d => vec![0.0, 0.0],
            Objective::Rosenbrock => vec![-1.2, 1.0],
        }
    }

    pub fn value(self, x: &[f64]) -> f64 {
        match self {
            Objective::Quadratic1d => x[0] * x[0] + 4.0 * x[0] + 4.0,
            Objective::Bowl2d => (x[0] - 3.0).powi(2) + (x[1] - 2.0).powi(2),
            Objective::Rosenbrock => (1.0 - x[0]).powi(2) + 100.0 * (x[1] - x[0] * x[0]).powi(2),
        }
    }

    pub fn gradient(self, x: &[f64]) -> Vec<f64> {
        match self {
            Objective::Quadratic1d => vec![2.0 * x[0] + 4.0],
            Objective::Bowl2d => vec![2.0 * (x[0] - 3.0), 2.0 * (x[1] - 2.0)],
            Objective::Rosenbrock => {
                vec![-2.0 * (1.0 - x[0]) - 400.0 * x[0] * (x[1] - x[0] * x[0]), 200.0 * (x[1] - x[0] * x[0])]
            }
        }
    }

    pub fn hessian(self, x: &[f64]) -> Matrix {
        match self {
            Objective::Quadratic1d => Matrix::from_rows(&[[2.0]]).expect("1x1"),
            Objective::Bowl2d => Matrix::from_diag(&[2.0, 2.0]),
            Objective::Rosenbrock => {
                Matrix::from_rows(&[[2.0 - 400.0 * (x[1] - 3.0 * x[0] * x[0]), -400.0 * x[0]], [-400.0 * x[0], 200.0]])
                    .expect("2x2")
            }
        }
    }
}
