use thiserror::Error;

/// Errors raised by parsing, normalization and coefficient extraction.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SymError {
    #[error("unknown identifier `{name}` at position {position}")]
    UnknownIdentifier { name: String, position: usize },
    #[error("syntax error at position {position}: {message}")]
    SyntaxError { position: usize, message: String },
    #[error("exponent at position {position} is not an integer")]
    NonIntegerExponent { position: usize },
    #[error("division by an identically zero denominator")]
    ZeroDenominator,
    #[error("expression is not polynomial in the jet variables: {0}")]
    NonPolynomialInJets(String),
    #[error("jet monomial `{0}` is not part of the requested basis")]
    MonomialNotInBasis(String),
    #[error("duplicate variable name `{0}`")]
    DuplicateName(String),
    #[error("invalid variable name `{0}`")]
    InvalidName(String),
    #[error("a context needs at least one field variable")]
    NoFields,
}

pub type Result<T> = std::result::Result<T, SymError>;
