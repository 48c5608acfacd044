use thiserror::Error;

use crate::construct::UnsupportedReason;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("cycle lengths must be at least 3 (got n={n}, m={m})")]
    DimensionTooSmall { n: usize, m: usize },

    #[error("start column {start} is not congruent to diagonal index {index} modulo {d}")]
    InvalidStartColumn { index: usize, start: usize, d: usize },

    #[error("expected {expected} start columns, got {got}")]
    StartCount { expected: usize, got: usize },

    #[error("no explicit construction for C_{n} x C_{m} ({reason}); try `search {n} {m}`")]
    Unsupported { n: usize, m: usize, reason: UnsupportedReason },

    #[error("plan does not fit a {n}x{m} grid: {detail}")]
    PlanShapeMismatch { n: usize, m: usize, detail: String },

    #[error("labeling domain mismatch: {missing} edge(s) unlabeled, {unknown} entr(ies) outside the edge set")]
    DomainMismatch { missing: usize, unknown: usize },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("shape error: {0}")]
    Shape(String),

    #[error("value error: {0}")]
    Value(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
