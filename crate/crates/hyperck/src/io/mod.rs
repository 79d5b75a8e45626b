//! File formats and parsers: the `.hg` text format (with a JSON mirror),
//! DOT emission, and the expression syntax used on the command line.

mod dot;
mod expr;
mod text;

pub use dot::emit_dot;
pub use expr::parse_expression;
pub use text::{parse_hg, serialize_hg, serialize_hg_json, HgDocument};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("syntax error at line {line}, column {col}: expected {expected}")]
pub struct SyntaxError {
    pub line: usize,
    pub col: usize,
    pub expected: String,
}

#[derive(Debug, Error)]
pub enum ParseError {
    #[error(transparent)]
    Syntax(#[from] SyntaxError),
    #[error("validation failed: {0}")]
    Validation(#[from] crate::hypergraph::ValidationError),
    #[error("invalid JSON document: {0}")]
    Json(#[from] serde_json::Error),
    #[error("invalid partition for vertex {0}: {1}")]
    Partition(String, String),
}
