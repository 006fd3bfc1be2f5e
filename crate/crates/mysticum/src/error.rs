use thiserror::Error;

/// Crate-wide error type. Variants are named after the precondition or
/// mathematical check they report; "bug signal" variants (concurrency or
/// collinearity failures) indicate an input outside a theorem's hypotheses
/// or an implementation fault, never a numerically borderline case.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("join of two equal projective points")]
    DegenerateJoin,
    #[error("meet of two equal projective lines")]
    DegenerateMeet,
    #[error("conic through the given points is not unique (evaluation rank {rank} < 5)")]
    UnderdeterminedConic { rank: usize },
    #[error("point does not lie on the conic")]
    NotOnConic,
    #[error("conic is singular at the point")]
    SingularPoint,
    #[error("cannot dualize a degenerate conic")]
    DegenerateConicDual,
    #[error("exact division failed: no quotient exists")]
    NotDivisible,
    #[error("degree mismatch: expected {expected}, got {got}")]
    DegreeMismatch { expected: usize, got: usize },
    #[error("curves are linearly dependent")]
    DependentCurves,
    #[error("curves share a common component")]
    SharedComponent,
    #[error("no admissible auxiliary point found on the base conic")]
    NoAdmissiblePoint,
    #[error("pencil intersection is {dim}-dimensional, expected 0 or 1")]
    AmbiguousIntersection { dim: usize },
    #[error("no common member of the given pencils")]
    NoCommonMember,
    #[error("pencil membership violated for a verified triple")]
    PencilViolation,
    #[error("expected concurrent lines are not concurrent")]
    ConcurrencyFailure,
    #[error("expected collinear points are not collinear")]
    CollinearityFailure,
    #[error("census mismatch: {0}")]
    CensusMismatch(String),
    #[error("stabilizer classification anomaly: {0}")]
    ClassificationAnomaly(String),
    #[error("net condition violated: {0}")]
    NetViolation(String),
    #[error("tangency-constrained space is empty")]
    EmptySpace,
    #[error("invalid scene: {0}")]
    InvalidScene(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("numeric root-finding did not converge")]
    ConvergenceFailure,
}

pub type Result<T> = std::result::Result<T, Error>;
