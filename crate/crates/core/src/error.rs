use thiserror::Error;

/// Errors raised by state validation and the geodesic machinery.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("unsupported dimension {dim} (allowed {min}..={max})")]
    InvalidDimension { dim: usize, min: usize, max: usize },

    #[error("matrix is not Hermitian (asymmetry {residual:e})")]
    NotHermitian { residual: f64 },

    #[error("matrix is not positive semidefinite (min eigenvalue {min_eigenvalue:e})")]
    NotPositive { min_eigenvalue: f64 },

    #[error(
        "not a state: Bloch vector lies outside the state body (min eigenvalue {min_eigenvalue:e})"
    )]
    NotAState { min_eigenvalue: f64 },

    #[error("not normalized: trace is {trace}")]
    NotNormalized { trace: f64 },

    #[error("operator is not unitary (|U^dag U - I| = {residual:e})")]
    NotUnitary { residual: f64 },

    #[error("vectors are not orthogonal (|<a|b>| = {overlap:e})")]
    NotOrthogonal { overlap: f64 },

    #[error("perturbation is not traceless (trace {trace:e})")]
    Traceful { trace: f64 },

    #[error("{what} = {value} is outside [{lo}, {hi}]")]
    OutOfRange {
        what: &'static str,
        value: f64,
        lo: f64,
        hi: f64,
    },

    #[error("geodesic undefined through rank-deficient start: final state leaves the support of the initial state (residual {residual:e})")]
    SupportViolation { residual: f64 },

    #[error("M singular at s*=pi/2: orthogonal endpoints are not both pure, so no unique geodesic exists")]
    SingularTransport,

    #[error("purification does not project onto the path start (residual {residual:e})")]
    WrongFiber { residual: f64 },

    #[error("path is degenerate (identical endpoints): no initial tangent")]
    DegeneratePath,

    #[error("unitary construction requires invertible inputs (min eigenvalue {min_eigenvalue:e})")]
    RankDeficient { min_eigenvalue: f64 },

    #[error("linear system is singular (condition number {condition:e})")]
    SingularSystem { condition: f64 },

    #[error("numerical failure: {0}")]
    Numerical(String),
}

impl Error {
    /// True for errors caused by the caller's input rather than by a
    /// numerical check failing on a well-formed problem.
    pub fn is_validation(&self) -> bool {
        !matches!(self, Error::Numerical(_) | Error::SingularSystem { .. })
    }
}

pub type Result<T> = std::result::Result<T, Error>;
