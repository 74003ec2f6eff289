use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("coefficient mode mismatch: {0} vs {1}")]
    ModeMismatch(&'static str, &'static str),
    #[error("leading coefficient is not a unit")]
    NonUnit,
    #[error("operation on the zero series")]
    ZeroSeries,
    #[error("inexact division")]
    InexactDivision,
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("pole: {0}")]
    Pole(String),
    #[error("unbound variable {0}")]
    UnboundVariable(String),
    #[error("invalid exponent {0}: denominator must divide 16")]
    BadExponent(String),
    #[error("divergent request: {0}")]
    Divergent(String),
    #[error("invalid label: {0}")]
    InvalidLabel(String),
    #[error("weight is not dominant: {0}")]
    NotDominant(String),
    #[error("partition is not symmetric")]
    NotSymmetric,
    #[error("operator {0} is not defined in the {1} sector")]
    SectorMismatch(String, String),
    #[error("resource limit exceeded: {0}")]
    ResourceLimit(String),
    #[error("unknown identity {0}")]
    UnknownIdentity(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("internal consistency failure: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
