use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("unsupported cyclotomic order {0}; expected one of 5, 7, 8, 9, 10, 12, 14, 18")]
    UnsupportedOrder(u32),

    #[error("order mismatch: {left} vs {right}")]
    OrderMismatch { left: u32, right: u32 },

    #[error("exponent {k} is not coprime to {n}")]
    NotCoprime { k: i64, n: u32 },

    #[error("cyclotomic coefficient overflow")]
    Overflow,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("unknown base {name:?} of order {order}")]
    UnknownBase { name: String, order: u32 },

    #[error("resource budget exceeded: {budget} ({limit})")]
    Budget { budget: &'static str, limit: usize },

    #[error("relative density undecided by the available criteria")]
    Undecided,

    #[error("distance undefined for a patch with fewer than two points")]
    UndefinedDistance,

    #[error("patch too small: {0}")]
    IncompletePatch(String),

    #[error("enumeration incomplete: {0}")]
    Incomplete(String),
}

impl Error {
    /// Whether the failure is a resource-budget exhaustion.
    pub fn is_budget(&self) -> bool {
        matches!(self, Error::Budget { .. })
    }
}
