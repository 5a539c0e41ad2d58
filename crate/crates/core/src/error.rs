use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero in finite field")]
    ZeroDivisor,

    #[error("field level mismatch: expected {expected} coefficients, found {found}")]
    LevelMismatch { expected: usize, found: usize },

    #[error("invalid argument: {0}")]
    Usage(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("polynomial is not monic")]
    NotMonic,

    #[error("polynomial is not irreducible: {0}")]
    NotIrreducible(String),

    #[error("message exceeds code size: message {message}, code size {size}")]
    MessageOutOfRange { message: String, size: String },

    #[error("not a spread codeword")]
    NotSpreadCodeword,

    #[error("not a codeword of this code")]
    NotACodeword,

    #[error("matrix is not in the companion-matrix algebra")]
    NotInCompanionAlgebra,

    #[error("element is not in the subgroup generated by the base")]
    NotInSubgroup,

    #[error("factorization exceeded budget while factoring {0}")]
    FactorBudgetExceeded(String),

    #[error("congruences are inconsistent: {0}")]
    InconsistentCongruences(String),

    #[error("orbits have unequal cardinalities: {0}")]
    UnequalOrbits(String),

    #[error("unknown orbit id {id} (code has {count} orbits)")]
    UnknownOrbit { id: usize, count: usize },

    #[error("matrix is not invertible")]
    NotInvertible,

    #[error("codebook too small: {0}")]
    CodebookTooSmall(String),

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// Stable machine-readable tag for the error variant.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::ZeroDivisor => "zero_divisor",
            Error::LevelMismatch { .. } => "level_mismatch",
            Error::Usage(_) => "usage",
            Error::DimensionMismatch(_) => "dimension_mismatch",
            Error::NotMonic => "not_monic",
            Error::NotIrreducible(_) => "not_irreducible",
            Error::MessageOutOfRange { .. } => "message_out_of_range",
            Error::NotSpreadCodeword => "not_spread_codeword",
            Error::NotACodeword => "not_a_codeword",
            Error::NotInCompanionAlgebra => "not_in_companion_algebra",
            Error::NotInSubgroup => "not_in_subgroup",
            Error::FactorBudgetExceeded(_) => "factor_budget_exceeded",
            Error::InconsistentCongruences(_) => "inconsistent_congruences",
            Error::UnequalOrbits(_) => "unequal_orbits",
            Error::UnknownOrbit { .. } => "unknown_orbit",
            Error::NotInvertible => "not_invertible",
            Error::CodebookTooSmall(_) => "codebook_too_small",
            Error::Parse(_) => "parse",
        }
    }

    pub(crate) fn usage(msg: impl Into<String>) -> Self {
        Error::Usage(msg.into())
    }
}
