use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    #[error("bond matrix is not symmetric at ({0}, {1})")]
    NonSymmetric(usize, usize),
    #[error("bond matrix diagonal entry {0} is not 1")]
    DiagonalNotOne(usize),
    #[error("bond m({0}, {1}) = {2} is smaller than 2")]
    BondTooSmall(usize, usize, i64),
    #[error("system is not extra-large: m({0}, {1}) = {2}")]
    NotExtraLarge(usize, usize, u32),
    #[error("infinite bonds are not supported")]
    InfiniteBondUnsupported,
    #[error("bond matrix must be square and non-empty")]
    NotSquare,
    #[error("base field has no expression for cos(pi/{0})")]
    FieldMissingConstant(u32),
    #[error("invalid field specification: {0}")]
    InvalidField(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("unknown generator {0:?}")]
    UnknownGenerator(String),
    #[error("word {0} is not reduced")]
    NotReduced(String),
    #[error("internal division failure: {0}")]
    InternalDivisionFailure(String),
    #[error("pairing matrix is singular")]
    SingularPairing,
    #[error("degree budget {0} is insufficient")]
    TruncationInsufficient(usize),
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("matrix is not a bimodule morphism")]
    NotBimoduleMap,
    #[error("normalizing coefficient vanished")]
    ZeroNormalizer,
    #[error("morphism is not idempotent")]
    NotIdempotent,
    #[error("idempotent selection is ambiguous ({0} candidates)")]
    SelectionAmbiguous(usize),
    #[error("move tuple misses interval [{0},{1}]")]
    CoverageFailure(i64, i64),
    #[error("words represent different elements")]
    DifferentElements,
    #[error("basis element for {0} is not unitriangular")]
    TriangularityViolation(String),
    #[error("basis element for {0} has a negative coefficient")]
    NegativeCoefficient(String),
    #[error("index set is not Bruhat-closed (missing {0})")]
    IndexNotBruhatClosed(String),
    #[error("invalid argument: {0}")]
    Invalid(String),
}
