use thiserror::Error;

/// Which argument of a two-argument symbol an error refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Argument {
    First,
    Second,
}

impl std::fmt::Display for Argument {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Argument::First => f.write_str("first"),
            Argument::Second => f.write_str("second"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("operands belong to different rings: {0} and {1}")]
    MixedRings(String, String),

    #[error("{0} is not a unit")]
    NonUnit(String),

    #[error("operation `{op}` is not supported over {ring}")]
    UnsupportedRing { op: &'static str, ring: String },

    #[error("not a ring homomorphism: {0}")]
    NotAHomomorphism(String),

    #[error("undecidable at the available precision: {0}")]
    IndeterminateAtPrecision(String),

    #[error(
        "insufficient precision in the {argument} argument: Witt coordinates up to index {needed} \
         are required but only indices below {available} are known"
    )]
    InsufficientPrecision {
        argument: Argument,
        needed: usize,
        available: usize,
    },

    #[error("not a uniformizer: {0}")]
    NotAUniformizer(String),

    #[error("elements live over different base fields or x-precisions: {0}")]
    MixedFields(String),

    #[error("sections {0} and {1} have the same reduction")]
    SectionCollision(String, String),

    #[error("assigned residues sum to {0}, not zero")]
    NonZeroSum(String),

    #[error("invalid ring specification: {0}")]
    InvalidRing(String),

    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("commuting square fails: residue side {residue}, symbol side {symbol}")]
    SquareMismatch { residue: String, symbol: String },
}

pub type Result<T> = std::result::Result<T, Error>;
