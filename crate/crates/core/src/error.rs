use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("foreign generator: generators from different models mixed (scopes {0})")]
    ForeignGenerator(String),
    #[error("structure constants not antisymmetric at {0}")]
    NotAntisymmetric(String),
    #[error("Jacobi identity fails at {0}")]
    Jacobi(String),
    #[error("invalid invariant pairing: {0}")]
    InvalidPairing(String),
    #[error("mismatched Lie algebras: {0}")]
    LieMismatch(String),
    #[error("index out of range: {0}")]
    IndexOutOfRange(String),
    #[error("degenerate metric")]
    DegenerateMetric,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("no presymplectic potential declared")]
    NoPresymplecticPotential,
    #[error("no covariant Hamiltonian available")]
    MissingHamiltonian,
    #[error("not d_v-exact: {0} residual terms remain after the homotopy inversion")]
    NotExact(usize),
    #[error("ghost degree mismatch: {0}")]
    GhostMismatch(String),
    #[error("truncation overflow: jets of order {needed} exceed the window of order {order}; increase N")]
    TruncationOverflow { order: usize, needed: usize },
    #[error("invalid truncation order {0}; N must be at least 1")]
    InvalidOrder(usize),
    #[error("evaluation point required for a non-constant presymplectic matrix")]
    EvaluationPointRequired,
    #[error("non-split kernel: {0}")]
    NonSplitKernel(String),
    #[error("rank disagreement across sample points: {0:?}")]
    RankMismatch(Vec<usize>),
    #[error("invalid submanifold: {0}")]
    InvalidSubmanifold(String),
    #[error("{0}")]
    Parse(String),
    #[error("io: {0}")]
    Io(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
