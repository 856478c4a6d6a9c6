use thiserror::Error;

use crate::exterior::GeneratorSet;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("no value assigned to variable `{0}`")]
    MissingAssignment(String),

    #[error("generator sets differ: {left} vs {right}")]
    GeneratorSetMismatch {
        left: GeneratorSet,
        right: GeneratorSet,
    },

    #[error("form degrees differ: {left} vs {right}")]
    DegreeMismatch { left: usize, right: usize },

    #[error("generator `{generator}` is not part of the generator set {set}")]
    UnknownGenerator {
        generator: String,
        set: GeneratorSet,
    },

    #[error("coefficient depends on `{variable}`, whose differential is not in {set}")]
    ForeignVariable { variable: String, set: GeneratorSet },

    #[error("variable `{0}` is not a coordinate of the first jet space")]
    NotAJetVariable(String),

    #[error("cannot contract a 0-form")]
    DegreeZero,

    #[error("form of degree {degree} exceeds the base dimension {n}")]
    DegreeTooHigh { degree: usize, n: usize },

    #[error("expected a form of degree {expected}, got degree {found}")]
    WrongDegree { expected: usize, found: usize },

    #[error("dimension {n} outside the supported range {min}..={max}")]
    DimensionOutOfRange { n: usize, min: usize, max: usize },

    #[error("form is not degenerate along the Reeb field (contract with the projection first)")]
    NotDegenerateAlongReeb,

    #[error("Hodge-Lepage residual system has no solution")]
    NoResidual,

    #[error("form is not effective")]
    NotEffective,

    #[error("form uses generators outside dq, du, dp")]
    ExtendedGeneratorPresent,

    #[error("jet order {order} of field `{field}` exceeds 2")]
    OrderTooHigh { field: String, order: usize },

    #[error("no representing form with coefficient degree <= {degree}: {reason}")]
    NotRepresentable { degree: u32, reason: String },

    #[error("unknown catalog equation `{0}`")]
    UnknownEquation(String),

    #[error("parse error at byte {position}: expected {expected}")]
    Parse { position: usize, expected: String },

    #[error("dimension error: {0}")]
    Dimension(String),

    #[error("unknown parameter `{0}`")]
    UnknownParameter(String),

    #[error("invalid document: {0}")]
    Document(String),

    #[error("computation cancelled")]
    Cancelled,

    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
