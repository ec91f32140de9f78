//! Dense matrix kernel: construction, element-wise arithmetic, products,
//! reshaping, vector geometry, norms and error metrics.

mod matrix;
mod metrics;
mod strassen;

pub use matrix::{ew_binary, ElemOp, MatMulAlgo, Matrix, Operand};
pub use metrics::{
    cosine_similarity, cross3, dot, error_metrics, euclidean_distance, norm, norm_inf, reduce, ErrorPair, NormKind,
    Reduction,
};
pub use strassen::CUTOFF as STRASSEN_CUTOFF;
