use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("characteristic {0} is neither 0 nor a prime below 2^32")]
    InvalidCharacteristic(u64),

    #[error("cannot parse {0:?} as a field element")]
    InvalidScalar(String),

    #[error("{value} is not invertible in characteristic {characteristic}")]
    NotInvertible { value: String, characteristic: u64 },

    #[error("a quiver needs at least one vertex")]
    EmptyQuiver,

    #[error("arrow {arrow} has an endpoint outside the {vertex_count} vertices")]
    ArrowOutOfRange { arrow: usize, vertex_count: usize },

    #[error("unknown arrow index {0}")]
    UnknownArrow(usize),

    #[error("vertex {vertex} is out of range (quiver has {vertex_count} vertices)")]
    VertexOutOfRange { vertex: usize, vertex_count: usize },

    #[error("arrows {0} and {1} are not composable")]
    NotComposable(usize, usize),

    #[error("path is not a cycle of positive length")]
    NotACycle,

    #[error("cycles of different lengths cannot share an orbit decomposition")]
    MixedCycleLengths,

    #[error("cycle length must be positive")]
    ZeroLength,

    #[error("truncation length must be at least 2, got {0}")]
    InvalidTruncation(usize),

    #[error("path is not a basis path of the algebra")]
    NotABasisPath,

    #[error("operands belong to different algebras")]
    AlgebraMismatch,

    #[error("degree {q} is outside the range {lo}..={hi} required here")]
    InvalidDegree { q: usize, lo: usize, hi: usize },

    #[error("degree {q} is not divisible by the number of vertices {s}")]
    DegreeNotDivisible { q: usize, s: usize },

    #[error("dual slice vector mixes degrees {0} and {1}")]
    MixedDegree(usize, usize),

    #[error("slice index {index} out of range for a slice of size {size}")]
    SliceIndex { index: usize, size: usize },

    #[error("the bilinear map does not satisfy the 2-cocycle relation")]
    NotACocycle,

    #[error("the cocycle does not vanish when an argument is a trivial path")]
    IdempotentHypothesis,

    #[error("expected {expected} coefficients, got {got}")]
    CoefficientCount { expected: usize, got: usize },

    #[error("relation set is not admissible: {0}")]
    NonAdmissible(String),

    #[error("algebra of dimension {dim} exceeds the oracle limit of {limit}")]
    OracleTooLarge { dim: usize, limit: usize },

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("internal consistency check failed: {0}")]
    Consistency(String),
}
