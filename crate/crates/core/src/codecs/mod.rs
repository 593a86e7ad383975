//! Output-grammar codecs: render instances and demonstrations into prompt
//! text, and decode raw model text into typed payloads.
//!
//! Decoders never normalize away meaning: an output either parses exactly,
//! realigns within a bounded edit budget, or is rejected and counted as an
//! abstention by the voting layer.

mod binary;
mod choice;
mod label_word;
mod marker;
pub mod normalize;
mod qa;
mod render;
mod settings;
mod span_null;

pub use binary::{binary_decode, BinaryAnswer};
pub use choice::{choice_decode, render_option, OptionStyle};
pub use label_word::label_word_decode;
pub use marker::{marker_decode, marker_encode, MarkerGrammar};
pub use qa::{qa_decode, QaAnswer};
pub use render::render_demonstration;
pub use settings::CodecSettings;
pub use span_null::{span_or_null_decode, SpanOrNull};

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// How faithfully a model output matched the expected grammar.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Fidelity {
    /// Output matched the grammar after whitespace normalization only.
    Exact,
    /// Output drifted from the source but every span was recovered by
    /// locating its surface verbatim in the source.
    Realigned,
    /// Output could not be interpreted; the prompt abstains.
    Rejected,
}

/// A decode result: the payload (absent when rejected), its fidelity, and
/// any diagnostics accumulated along the way.
#[derive(Debug, Clone, PartialEq)]
pub struct DecodeOutcome<T> {
    pub payload: Option<T>,
    pub fidelity: Fidelity,
    pub diagnostics: Vec<String>,
}

impl<T> DecodeOutcome<T> {
    pub fn exact(payload: T) -> Self {
        DecodeOutcome { payload: Some(payload), fidelity: Fidelity::Exact, diagnostics: Vec::new() }
    }

    pub fn realigned(payload: T, diagnostics: Vec<String>) -> Self {
        DecodeOutcome { payload: Some(payload), fidelity: Fidelity::Realigned, diagnostics }
    }

    pub fn rejected(reason: impl Into<String>) -> Self {
        DecodeOutcome { payload: None, fidelity: Fidelity::Rejected, diagnostics: vec![reason.into()] }
    }

    pub fn is_rejected(&self) -> bool {
        matches!(self.fidelity, Fidelity::Rejected)
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CodecError {
    #[error("marker grammar invalid: {0}")]
    InvalidGrammar(String),
    #[error("marker string {marker:?} occurs in the source text")]
    MarkerInSource { marker: String },
    #[error("unbalanced markers in output: {0}")]
    UnbalancedMarkers(String),
    #[error("marked surface {surface:?} occurs {count} times in source; realignment is ambiguous")]
    AmbiguousRealign { surface: String, count: usize },
    #[error("encode requires non-overlapping spans: {0}")]
    OverlappingSpans(String),
    #[error("no option matched the output")]
    NoMatch,
    #[error("multiple options matched the output: {0:?}")]
    AmbiguousMatch(Vec<usize>),
    #[error("options invalid: {0}")]
    InvalidOptions(String),
    #[error("sentence index {index} out of range 1..={len}")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("answer {answer:?} is not a substring of sentence {index}")]
    AnswerNotInSentence { answer: String, index: usize },
    #[error("output is not in the expected answer format: {0}")]
    MalformedAnswer(String),
    #[error("output {output:?} does not occur in the source text")]
    NotInSource { output: String },
    #[error("label-word mapping invalid: {0}")]
    InvalidMapping(String),
    #[error("no label word found in output")]
    NoLabelWord,
    #[error("demonstration has no rationale but one was requested")]
    MissingRationale,
    #[error(transparent)]
    Span(#[from] crate::core::SpanError),
}
