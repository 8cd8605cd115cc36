use thiserror::Error;

use crate::datum::Violation;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Clone, Debug, Error)]
pub enum Error {
    /// Malformed curve-spec text. `line`/`column` are 1-based.
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },

    /// Well-formed JSON that does not describe a curve spec.
    #[error("invalid curve spec: {0}")]
    Spec(String),

    #[error("invalid datum: {}", join_violations(.0))]
    Invalid(Vec<Violation>),

    #[error("beta undefined: isolated singularity (every multiplicity is 1)")]
    Isolated,

    #[error("branch {0} is not part of the singular set (multiplicity 1)")]
    NotSingular(usize),

    #[error("operation requires a reduced datum (all multiplicities 1)")]
    NotReduced,

    /// Two independent computation routes disagreed. Never expected on valid
    /// input; it indicates a construction bug or a falsified statement.
    #[error("internal inconsistency in {what}: {left} != {right}")]
    Inconsistent {
        what: &'static str,
        left: String,
        right: String,
    },
}

impl Error {
    pub(crate) fn inconsistent(
        what: &'static str,
        left: impl std::fmt::Display,
        right: impl std::fmt::Display,
    ) -> Self {
        Error::Inconsistent {
            what,
            left: left.to_string(),
            right: right.to_string(),
        }
    }

    pub fn is_internal(&self) -> bool {
        matches!(self, Error::Inconsistent { .. })
    }
}

fn join_violations(v: &[Violation]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join("; ")
}
