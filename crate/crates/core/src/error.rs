use thiserror::Error;

/// Every failure mode surfaced by the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum NumError {
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("size mismatch: cannot reshape {from} elements into {to}")]
    SizeMismatch { from: usize, to: usize },
    #[error("division by zero")]
    DivisionByZero,
    #[error("empty input")]
    EmptyInput,
    #[error("non-finite value encountered")]
    NonFinite,
    #[error("zero-norm vector")]
    ZeroNorm,
    #[error("relative error undefined for an exact value of zero")]
    RelativeUndefined,

    #[error("matrix is singular")]
    Singular,
    #[error("matrix is not symmetric positive definite")]
    NotSpd,
    #[error("zero on the diagonal")]
    ZeroDiagonal,
    #[error("no convergence after {0} iterations")]
    NoConvergence(usize),
    #[error("bad rank: {0}")]
    BadRank(String),
    #[error("rank-deficient least-squares system")]
    RankDeficient,

    #[error("domain error: {0}")]
    DomainError(&'static str),

    #[error("function values at the bracket ends must have opposite signs")]
    NoSignChange,
    #[error("maximum iterations ({0}) reached")]
    MaxIterations(usize),
    #[error("derivative vanished")]
    ZeroDerivative,
    #[error("secant slope is flat")]
    FlatSecant,
    #[error("jacobian is singular")]
    SingularJacobian,
    #[error("jacobian approximation is singular")]
    SingularApproximation,

    #[error("duplicate knots")]
    DuplicateKnots,
    #[error("knots are not strictly increasing")]
    UnsortedKnots,
    #[error("too few points: need at least {0}")]
    TooFewPoints(usize),

    #[error("bad partition: {0}")]
    BadPartition(&'static str),
    #[error("simpson's rule needs an even number of intervals")]
    OddPartition,
    #[error("quadrature order must be in 1..=64")]
    BadOrder,

    #[error("length {0} is not a power of two")]
    NotPowerOfTwo(usize),
    #[error("cutoff must lie strictly between 0 and the Nyquist frequency")]
    BadCutoff,
    #[error("keep must be in 1..=min(rows, cols)")]
    BadKeep,
    #[error("no non-DC peak in the spectrum")]
    NoPeak,

    #[error("hessian is singular")]
    SingularHessian,
    #[error("line search failed to find sufficient decrease")]
    LineSearchFailure,

    #[error("inner newton iteration failed")]
    NewtonFailure,
    #[error("the scheme is unstable (stability factor {0} >= 0.5)")]
    Unstable(f64),

    #[error("bad architecture: {0}")]
    BadArchitecture(&'static str),
    #[error("batch must contain at least two rows")]
    TooSmallBatch,

    #[error("invalid parameter: {0}")]
    InvalidParameter(&'static str),
}

impl NumError {
    /// Stable variant name, used by the CLI in error messages.
    pub fn name(&self) -> &'static str {
        use NumError::*;
        match self {
            ShapeMismatch(_) => "ShapeMismatch",
            SizeMismatch { .. } => "SizeMismatch",
            DivisionByZero => "DivisionByZero",
            EmptyInput => "EmptyInput",
            NonFinite => "NonFinite",
            ZeroNorm => "ZeroNorm",
            RelativeUndefined => "RelativeUndefined",
            Singular => "Singular",
            NotSpd => "NotSpd",
            ZeroDiagonal => "ZeroDiagonal",
            NoConvergence(_) => "NoConvergence",
            BadRank(_) => "BadRank",
            RankDeficient => "RankDeficient",
            DomainError(_) => "DomainError",
            NoSignChange => "NoSignChange",
            MaxIterations(_) => "MaxIterations",
            ZeroDerivative => "ZeroDerivative",
            FlatSecant => "FlatSecant",
            SingularJacobian => "SingularJacobian",
            SingularApproximation => "SingularApproximation",
            DuplicateKnots => "DuplicateKnots",
            UnsortedKnots => "UnsortedKnots",
            TooFewPoints(_) => "TooFewPoints",
            BadPartition(_) => "BadPartition",
            OddPartition => "OddPartition",
            BadOrder => "BadOrder",
            NotPowerOfTwo(_) => "NotPowerOfTwo",
            BadCutoff => "BadCutoff",
            BadKeep => "BadKeep",
            NoPeak => "NoPeak",
            SingularHessian => "SingularHessian",
            LineSearchFailure => "LineSearchFailure",
            NewtonFailure => "NewtonFailure",
            Unstable(_) => "Unstable",
            BadArchitecture(_) => "BadArchitecture",
            TooSmallBatch => "TooSmallBatch",
            InvalidParameter(_) => "InvalidParameter",
        }
    }

    pub(crate) fn shape(msg: impl Into<String>) -> Self {
        NumError::ShapeMismatch(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, NumError>;
