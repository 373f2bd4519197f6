//! Error type shared across the crate.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("non-invertible series")]
    NonInvertibleSeries,

    #[error("square root requires an even leading half-step exponent, got u = {0}")]
    SqrtOddBase(i64),

    #[error("leading coefficient {0} is not the square of a rational")]
    SqrtNonSquareLead(String),

    #[error("coefficient not determined at this truncation (u = {u}, order = {order})")]
    CoefficientNotDetermined { u: i64, order: i64 },

    #[error("invalid truncation to order {requested} for window [{base}, {order})")]
    InvalidTruncation {
        requested: i64,
        base: i64,
        order: i64,
    },

    #[error("series window must be non-empty")]
    EmptyWindow,

    #[error("cannot parse rational from '{0}'")]
    ParseRational(String),

    #[error("unsupported Eisenstein weight {0} (expected 2, 4 or 6)")]
    UnsupportedWeight(i64),

    #[error("argument must be positive, got {0}")]
    NonPositiveArgument(i64),

    #[error("index must be non-negative, got {0}")]
    NegativeIndex(i64),

    #[error("inadmissible depth/weight pair ({depth}, {weight}): {reason}")]
    InadmissiblePair {
        depth: i64,
        weight: i64,
        reason: String,
    },

    #[error("truncation order {order} too small: {reason}")]
    OrderTooSmall { order: i64, reason: String },

    #[error("weight {0} is not congruent to 0 or 2 mod 6")]
    WrongResidueClass(i64),

    #[error("echelonization failed: {0}")]
    RankDeficient(String),

    #[error("not extremal at expected index {0}")]
    NotExtremal(i64),

    #[error("k = {k} outside the family's domain [{lo}, {hi}]")]
    DomainExhausted { k: i64, lo: i64, hi: i64 },

    #[error("route '{route}' cannot produce a form of depth {depth}")]
    RouteUnavailable { route: String, depth: i64 },

    #[error("unknown {what} '{value}'")]
    UnknownName { what: &'static str, value: String },
}

pub type Result<T> = std::result::Result<T, Error>;
