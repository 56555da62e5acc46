//! Error type shared across the crate.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("syntax error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("non-minimal generating set: {divisor} divides {multiple}")]
    NonMinimal { divisor: String, multiple: String },

    #[error("duplicate generator {witness}")]
    DuplicateGenerator { witness: String },

    #[error("input is not a tree: {0}")]
    NotATree(String),

    #[error("tree labels do not match ideal generators: {0}")]
    LabelMismatch(String),

    #[error("ideal is not square-free")]
    NotSquarefree,

    #[error("q+1 = {q_plus_1} generators exceeds n = {n} variables; not projective dimension one")]
    TooManyGenerators { q_plus_1: usize, n: usize },

    #[error("no supporting tree exists; not projective dimension one ({witness})")]
    NotPdOne { witness: String },

    #[error("direction set is not contained in supp(sink): {0}")]
    InvalidCube(String),

    #[error("covering check requires r >= q (got r = {r}, q = {q})")]
    CoveringPrecondition { r: u32, q: usize },

    #[error("instance too large: {cells} cells exceeds limit {limit} (set POWRES_MAX_CELLS to override)")]
    Resource { cells: u64, limit: u64 },

    #[error("complex dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("rendering requires q <= 3 (got q = {0})")]
    RenderDimension(usize),

    #[error("I/O error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("invalid JSON document: {0}")]
    Json(String),
}
