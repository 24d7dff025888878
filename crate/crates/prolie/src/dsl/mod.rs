//! The `.lie` language: presentations and cocycles as text.

mod lexer;
mod parser;
mod writer;

pub use parser::{parse_cocycle, parse_presentation, parse_vector};
pub use writer::{cocycle_to_dsl, to_dsl};

#[derive(Debug, thiserror::Error)]
pub enum DslError {
    #[error("line {line}, column {col}: expected {}, found {found}", .expected.join(" or "))]
    Syntax {
        line: usize,
        col: usize,
        expected: Vec<String>,
        found: String,
    },
    #[error("line {line}, column {col}: unknown name `{name}`")]
    UnknownName { line: usize, col: usize, name: String },
    #[error("line {line}, column {col}: {message}")]
    Invalid { line: usize, col: usize, message: String },
    #[error(transparent)]
    Presentation(#[from] prolie_core::Error),
}

impl DslError {
    /// Position of the error in the source, when known.
    pub fn position(&self) -> Option<(usize, usize)> {
        match self {
            DslError::Syntax { line, col, .. }
            | DslError::UnknownName { line, col, .. }
            | DslError::Invalid { line, col, .. } => Some((*line, *col)),
            DslError::Presentation(_) => None,
        }
    }

    pub fn is_overlap(&self) -> bool {
        matches!(self, DslError::Presentation(prolie_core::Error::Overlap(_)))
    }
}
