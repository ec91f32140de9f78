//! From-scratch numerical methods for desk-scale work.
//!
//! Modules:
//!
//! * [`ndcore`] dense matrices, products (naive and Strassen), norms, error metrics
//! * [`lindecomp`] LU/QR/Cholesky, direct and iterative solvers, eigen, SVD, PCA, least squares
//! * [`autodiff`] reverse-mode automatic differentiation, Jacobians, Hessians
//! * [`roots`] scalar root finding and nonlinear systems
//! * [`interp`] Lagrange, Newton divided differences, natural cubic splines, linear
//! * [`quadrature`] finite differences, trapezoid, Simpson, Gauss-Legendre
//! * [`spectral`] DFT/FFT, convolution, filtering, spectral pooling
//! * [`optimize`] first-order optimizers, schedules, Newton, BFGS, L-BFGS, Nelder-Mead
//! * [`dynamics`] Euler, RK4, backward Euler, LIF neuron, heat equation, LTI step response
//! * [`microlearn`] XOR MLP, batch normalization, tabular Q-learning
//!
//! Nothing here links against an external math library. All routines are pure
//! functions over their inputs; randomness only enters through explicit seeds.

#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod autodiff;
pub mod dynamics;
pub mod error;
pub mod interp;
pub mod lindecomp;
pub mod microlearn;
pub mod ndcore;
pub mod optimize;
pub mod quadrature;
pub mod roots;
pub mod spectral;

pub use error::{NumError, Result};
pub use ndcore::Matrix;
