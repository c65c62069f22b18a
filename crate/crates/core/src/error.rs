use thiserror::Error;

use crate::coeff::Field;
use crate::monomial::{Monomial, OrderKind};
use crate::series::Precision;

/// Errors raised by the algebra, rewriting and confluence routines.
///
/// The `Display` form always starts with the variant name so front ends can
/// surface it verbatim.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("DimensionMismatch: expected {expected} variables, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("FieldMismatch: {0} vs {1}")]
    FieldMismatch(Field, Field),

    #[error("InvalidField: {0}")]
    InvalidField(String),

    #[error("ZeroSeries: the series has empty support")]
    ZeroSeries,

    #[error("NonCompatibleOrder: {0} is not compatible with the degree")]
    NonCompatibleOrder(OrderKind),

    #[error("InvalidOrder: {0}")]
    InvalidOrder(String),

    #[error("InvalidStep: {0}")]
    InvalidStep(String),

    #[error("PrecisionLoss: precision {required} requested but only {available} is available")]
    PrecisionLoss { required: u32, available: Precision },

    #[error("IrreducibleLeadingMonomial: no generator leading monomial divides {0}")]
    IrreducibleLeadingMonomial(Monomial),

    #[error("ParseError at position {pos}: {message}")]
    Parse { pos: usize, message: String },

    #[error("UnknownVariable: '{name}' at position {pos}")]
    UnknownVariable { name: String, pos: usize },

    #[error("InvalidConfig: {0}")]
    Config(String),

    #[error("InvalidArgument: {0}")]
    InvalidArgument(String),

    #[error("DomainViolation: {0}")]
    DomainViolation(String),

    #[error("EqualNormalForms: the two candidate normal forms coincide")]
    EqualNormalForms,
}

pub type Result<T> = std::result::Result<T, Error>;
