use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("q must be an odd prime (got {0})")]
    NotOddPrime(u32),
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("zero has no square type")]
    ZeroHasNoType,
    #[error("element is not a square")]
    NotASquare,
    #[error("equation has no solution")]
    NoSolution,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("map is not a similitude of the hermitian form")]
    NotSimilitude,
    #[error("map is not a projective involution")]
    NotInvolution,
    #[error("map is not a flip")]
    NotAFlip,
    #[error("enumeration of {estimate} objects exceeds the limit of {limit}")]
    EnumerationTooLarge { estimate: u128, limit: u128 },
    #[error("vectors do not form a polar frame")]
    InvalidFrame,
    #[error("subspace is degenerate")]
    DegenerateSubspace,
    #[error("this variant needs a σ-semilinear flip")]
    VariantRequiresSemilinear,
    #[error("no point with the requested properties exists")]
    NoPoint,
    #[error("subspace is not a point")]
    NotAPoint,
    #[error("subspace is not contained where required")]
    NotContained,
    #[error("not a chamber of the geometry")]
    NotAChamber,
    #[error("chamber does not belong to the requested variant")]
    WrongVariant,
    #[error("flip has the wrong class for this operation")]
    WrongClass,
    #[error("stabilizer membership tests disagree")]
    CharacterizationMismatch,
    #[error("brute-force enumeration is only available for n = 1")]
    TooLarge,
    #[error("malformed input: {0}")]
    Malformed(String),
}
