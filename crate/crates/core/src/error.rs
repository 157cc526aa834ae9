use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("zero ray")]
    ZeroRay,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("not full-dimensional")]
    NotFullDimensional,
    #[error("rays are linearly dependent")]
    DependentRays,
    #[error("no unimodular normalization")]
    NoUnimodularNormalization,
    #[error("unbounded polyhedron")]
    UnboundedPolyhedron,
    #[error("invalid fan: {0}")]
    InvalidFan(String),
    #[error("not quasi-transitive: no transitive maximal cone")]
    NotQuasiTransitive,
    #[error("fan is not normalized: {0}")]
    NotNormalized(String),
    #[error("root polytope may be unbounded")]
    RootPolytopeUnbounded,
    #[error("capsule undefined at non-smooth vertex")]
    CapsuleUndefined,
    #[error("point is not a vertex of the polytope")]
    NotAVertex,
    #[error("polytope is not simple at a vertex")]
    NonSimplePolytope,
    #[error("invalid Demazure root: {0}")]
    InvalidRoot(String),
    #[error("not a torus point")]
    NotTorusPoint,
    #[error("sampling produced sub-generic rank; increase trials")]
    SubGenericRank,
    #[error("polytope not in standard form: {0}")]
    NotStandardForm(String),
    #[error("invalid split: {0}")]
    InvalidSplit(String),
    #[error("integer overflow: {0}")]
    Overflow(String),
    #[error("{0}")]
    Input(String),
}
