use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("embedding matrix is not square or is singular ({0})")]
    DegenerateEmbedding(String),
    #[error("torsion order must be at least 1")]
    InvalidOrder,
    #[error("objects live on different lattices: {0}")]
    IncompatibleLattice(String),
    #[error("alternating form is degenerate")]
    DegenerateForm,
    #[error("unsupported lattice rank {0}")]
    InvalidRank(usize),
    #[error("not an alternating form: {0}")]
    NotAlternating(String),
    #[error("invalid lattice: {0}")]
    InvalidLattice(String),
    #[error("expected an index-2 embedding, got index {0}")]
    UnsupportedIndex(u64),
    #[error("inadmissible twist: {0}")]
    InvalidTwist(String),
    #[error("kernel curve ({0}, {1}) is not primitive")]
    NonPrimitive(i64, i64),
    #[error("modulus must be at least 2, got {0}")]
    InvalidModulus(i64),
    #[error("invalid intersection data: {0}")]
    InvalidIntersection(String),
    #[error("invalid torsion list: {0}")]
    InvalidTorsionList(String),
    #[error("invalid decomposition shape: {0}")]
    InvalidShape(String),
    #[error("unsupported bundle: {0}")]
    UnsupportedBundle(String),
    #[error("not applicable: {0}")]
    NotApplicable(String),
    #[error("contradicts Xiao's splitting: {0}")]
    ContradictsXiao(String),
    #[error("slope undefined: Delta(f) = 0")]
    UndefinedSlope,
    #[error("branch point count must be even and non-negative, got {0}")]
    InvalidBranching(i64),
    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// Stable variant name, used by the CLI when reporting domain errors.
    pub fn name(&self) -> &'static str {
        match self {
            Error::DegenerateEmbedding(_) => "DegenerateEmbedding",
            Error::InvalidOrder => "InvalidOrder",
            Error::IncompatibleLattice(_) => "IncompatibleLattice",
            Error::DegenerateForm => "DegenerateForm",
            Error::InvalidRank(_) => "InvalidRank",
            Error::NotAlternating(_) => "NotAlternating",
            Error::InvalidLattice(_) => "InvalidLattice",
            Error::UnsupportedIndex(_) => "UnsupportedIndex",
            Error::InvalidTwist(_) => "InvalidTwist",
            Error::NonPrimitive(..) => "NonPrimitive",
            Error::InvalidModulus(_) => "InvalidModulus",
            Error::InvalidIntersection(_) => "InvalidIntersection",
            Error::InvalidTorsionList(_) => "InvalidTorsionList",
            Error::InvalidShape(_) => "InvalidShape",
            Error::UnsupportedBundle(_) => "UnsupportedBundle",
            Error::NotApplicable(_) => "NotApplicable",
            Error::ContradictsXiao(_) => "ContradictsXiao",
            Error::UndefinedSlope => "UndefinedSlope",
            Error::InvalidBranching(_) => "InvalidBranching",
            Error::Parse(_) => "Parse",
        }
    }
}
