use thiserror::Error;

use crate::algebra::AlgebraError;
use crate::integrate::IntegrateError;
use crate::parser::ParseError;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Integrate(#[from] IntegrateError),
    /// A parameter outside the domain where the object is defined, e.g.
    /// `beta = 0` for the canonical realization.
    #[error("parameter domain: {0}")]
    ParameterDomain(String),
    #[error("{0}")]
    Shape(String),
    /// A build-time identity that must hold exactly did not.
    #[error("certificate failed: {0}")]
    Certificate(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
