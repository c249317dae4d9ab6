use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix must have at least one row and one column")]
    EmptyMatrix,
    #[error("rows have differing lengths (row {row} has {found} entries, expected {expected})")]
    RaggedRows {
        row: usize,
        expected: usize,
        found: usize,
    },
    #[error("non-finite value encountered")]
    NonFinite,
    #[error("shape mismatch: expected {expected}, found {found}")]
    ShapeMismatch { expected: String, found: String },
    #[error("matrix is not square ({rows}x{cols})")]
    NonSquare { rows: usize, cols: usize },
    #[error("matrix of order {0} is too large for the permutation-sum determinant (max 6)")]
    TooLarge(usize),
    #[error("rank deficient: numerical rank {rank}, expected {expected}")]
    RankDeficient { rank: usize, expected: usize },
    #[error("index {index} out of range for length {len}")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("indices must be strictly increasing: {0:?}")]
    NotIncreasing(Vec<usize>),
    #[error("vector dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("order mismatch: expected {expected}, found {found}")]
    OrderMismatch { expected: usize, found: usize },
    #[error("order {order} exceeds dimension {dim}")]
    OrderExceedsDimension { order: usize, dim: usize },
    #[error("negative radicand {0:e} under square root; form is not positive semidefinite")]
    NegativeSquare(f64),
    #[error("ambient matrix is not symmetric (max asymmetry {0:e})")]
    NotSymmetric(f64),
    #[error("ambient matrix is not positive definite")]
    NotPositiveDefinite,
    #[error("coefficient for {idx:?} must be positive and finite, found {value}")]
    InvalidCoefficient { idx: Vec<usize>, value: f64 },
    #[error("coefficients are not all equal; form cannot be normalized")]
    NonUniformCoefficients,
    #[error("subspace basis is degenerate (n-norm squared {0:e})")]
    DegenerateSubspace(f64),
    #[error("decomposition residual is not orthogonal to the subspace (residual {0:e})")]
    ResidualNotOrthogonal(f64),
    #[error("Cauchy-Schwarz inequality violated: lhs {lhs:e} exceeds rhs {rhs:e}")]
    InequalityViolated { lhs: f64, rhs: f64 },
    #[error("cosine {0} lies outside [-1, 1] beyond tolerance")]
    CosineOutOfRange(f64),
    #[error("subspaces do not share a common ambient dimension and order")]
    MixedSpaces,
    #[error("subspace already spans the whole space; complement is trivial")]
    FullSpace,
    #[error("matrix is not orthogonal (max deviation {0:e})")]
    NotOrthogonal(f64),
    #[error("rows are not orthonormal (max deviation {0:e})")]
    NotOrthonormal(f64),
    #[error("complementary minor identity violated for {idx:?} (residual {residual:e})")]
    MinorIdentityViolated { idx: Vec<usize>, residual: f64 },
    #[error("invalid sample configuration: {0}")]
    InvalidConfig(String),
    #[error("empty input")]
    EmptyInput,
}

impl Error {
    /// True for errors that signal a form or identity failing mathematically,
    /// as opposed to malformed input.
    pub fn is_mathematical(&self) -> bool {
        matches!(
            self,
            Error::NegativeSquare(_)
                | Error::ResidualNotOrthogonal(_)
                | Error::InequalityViolated { .. }
                | Error::CosineOutOfRange(_)
                | Error::MinorIdentityViolated { .. }
        )
    }
}
