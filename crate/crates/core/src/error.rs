use thiserror::Error;

/// Errors raised by the engine.
#[derive(Debug, Error)]
pub enum Error {
    #[error("exp of a series with nonzero constant term")]
    ExpConstantTerm,
    #[error("inverse of a series whose constant term is zero or not a plain scalar")]
    NotInvertible,
    #[error("substitution for t_{var} would lower the t-weight (term weight {weight})")]
    NegativeWeightSubstitution { var: u32, weight: u32 },
    #[error("t_{index} has no q-preimage: index divisible by h = {h}")]
    NoQPreimage { index: u32, h: u32 },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("fractional lambda power (zeta exponent {zeta_exp}) survived the branch sum")]
    FractionalPower { zeta_exp: i64 },
    #[error("pole part did not cancel: residue {residue}")]
    PoleNotCancelled { residue: String },
    #[error("missing correlator in table: genus {g}, insertions {insertions}")]
    MissingEntry { g: u32, insertions: String },
    #[error("no pivot equation for correlator genus {g}, insertions {insertions}")]
    NoPivot { g: u32, insertions: String },
    #[error("inconsistent system for genus {g}, insertions {insertions}: {first} vs {second}")]
    Inconsistent {
        g: u32,
        insertions: String,
        first: String,
        second: String,
    },
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
