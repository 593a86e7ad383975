//! Shared domain types: tasks, instances, spans, predictions, demonstrations.

mod instance;
mod prediction;
mod span;
pub mod task;
pub mod text;

pub use instance::{Demonstration, PredicateInfo, TaskInstance};
pub use prediction::{DepArc, EventFrame, Payload, Prediction, RelationTriple};
pub use span::{validate_spans, Span, SpanError};
pub use task::{CodecFamily, TaskId, TaskKind};

use thiserror::Error;

/// Errors from core-type validation.
#[derive(Debug, Error)]
pub enum CoreError {
    #[error("task {task}: {message}")]
    InvalidTask { task: String, message: String },
    #[error("instance {id}: {message}")]
    InvalidInstance { id: String, message: String },
    #[error(transparent)]
    Span(#[from] SpanError),
}
