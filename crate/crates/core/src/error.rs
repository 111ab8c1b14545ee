use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("unsupported family `{0}`")]
    UnsupportedFamily(String),
    #[error("degenerate parameters: {0}")]
    DegenerateParams(String),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("bracket left the algebra (projection residual {residual:.3e})")]
    ClosureViolation { residual: f64 },
    #[error("Cartan involution is not diagonalizable with eigenvalues ±1")]
    InvolutionNotDiagonalizable,
    #[error("abelian subspace is not maximal: centralizer in p has dimension {found}, rank is {rank}")]
    MaximalityFailure { rank: usize, found: usize },
    #[error("root clusters {0:.3e} apart are too close to separate reliably")]
    ClusteringAmbiguity(f64),
    #[error("no generic chamber witness found")]
    DegenerateWitness,
    #[error("H is not in the positive chamber (min alpha(H) = {0:.3e})")]
    ChamberViolation(f64),
    #[error("vector has a t-component of size {0:.3e}; expected an element of p")]
    NotInP(f64),
    #[error("zero vector where a direction was required")]
    ZeroVector,
    #[error("degenerate 2-plane (area^2 = {0:.3e})")]
    DegeneratePlane(f64),
    #[error("metric scale must be positive, got {0}")]
    NonpositiveScale(f64),
    #[error("domain error: {0}")]
    DomainError(String),
    #[error("matrix is not symmetric positive definite: {0}")]
    NotSpd(String),
    #[error("tangent is not symmetric (asymmetry {0:.3e})")]
    NotSymmetric(f64),
    #[error("tangent is not traceless (trace {0:.3e})")]
    NotTraceless(f64),
    #[error("finite-difference step too large: h and h/2 differ by {0:.3e} relative")]
    StepTooLarge(f64),
    #[error("precondition violated: {0}")]
    Precondition(String),
}

pub type Result<T> = std::result::Result<T, Error>;
