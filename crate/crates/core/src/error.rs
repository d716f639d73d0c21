use thiserror::Error;

pub type Result<T, E = CoreError> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CoreError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("cone is not pointed (it contains a line)")]
    NotPointed,

    #[error("polyhedron needs at least one vertex")]
    EmptyPolyhedron,

    #[error("coefficient at {0} does not have the common tail cone")]
    TailMismatch(String),

    #[error("point {0} does not lie on the curve")]
    PointNotOnCurve(String),

    #[error("point {0} is listed more than once")]
    DuplicatePoint(String),

    #[error("unsupported curve model: {0}")]
    UnsupportedModel(String),

    #[error("unsupported automorphism: {0}")]
    UnsupportedAutomorphism(String),

    #[error("map is not an automorphism of the curve: {0}")]
    NotAnAutomorphism(String),

    #[error("degenerate Möbius matrix (zero determinant)")]
    DegenerateMobius,

    #[error("singular elliptic curve (zero discriminant)")]
    SingularCurve,

    #[error("torsion search out of range: {0}")]
    TorsionSearchTooLarge(String),

    #[error("bad locus is not empty")]
    BadLocusNonEmpty,

    #[error("matrix is not an involution")]
    NotInvolution,

    #[error("matrix is not square")]
    NotSquare,

    #[error("argument out of range: {0}")]
    OutOfRange(String),

    #[error("brute-force cohomology did not stabilize: {0}")]
    Unstable(String),

    #[error("generated group exceeds {cap} elements")]
    GroupTooLarge { cap: usize },

    #[error("datum is not stable under complex conjugation at {0}")]
    NotConjugationStable(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("internal invariant violated: {0}")]
    InvariantBreach(String),
}
