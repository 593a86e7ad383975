//! Typed text spans and span-set validation.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::text;

/// A labeled substring of a source text, addressed by character offsets
/// (start inclusive, end exclusive).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Span {
    pub start: usize,
    pub end: usize,
    pub label: String,
    pub surface: String,
}

impl Span {
    pub fn new(start: usize, end: usize, label: impl Into<String>, surface: impl Into<String>) -> Self {
        Span { start, end, label: label.into(), surface: surface.into() }
    }

    /// Build a span from offsets into `source`, deriving the surface.
    pub fn from_source(source: &str, start: usize, end: usize, label: impl Into<String>) -> Option<Self> {
        let surface = text::slice_chars(source, start, end)?.to_string();
        Some(Span { start, end, label: label.into(), surface })
    }

    /// Stable key used for span-level voting and vote maps.
    pub fn vote_key(&self) -> String {
        format!("{}..{}/{}", self.start, self.end, self.label)
    }

    fn overlaps(&self, other: &Span) -> bool {
        self.start < other.end && other.start < self.end
    }
}

impl std::fmt::Display for Span {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "[{}..{}/{} \"{}\"]", self.start, self.end, self.label, self.surface)
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SpanError {
    #[error("span {span} out of bounds for source of {len} chars")]
    SpanOutOfBounds { span: String, len: usize },
    #[error("spans {first} and {second} overlap with the same label")]
    SpanOverlap { first: String, second: String },
    #[error("span {span} surface mismatch: source has \"{actual}\"")]
    SurfaceMismatch { span: String, actual: String },
}

/// Validate a span set against its source text.
///
/// Returns the spans sorted by `(start, end, label)`. Rejects spans that are
/// out of bounds, that disagree with the source text, or that overlap another
/// span of the same label. Overlap across different labels is permitted.
pub fn validate_spans(source: &str, spans: &[Span]) -> Result<Vec<Span>, SpanError> {
    let len = text::char_len(source);
    for s in spans {
        if s.start >= s.end || s.end > len {
            return Err(SpanError::SpanOutOfBounds { span: s.to_string(), len });
        }
        let actual = text::slice_chars(source, s.start, s.end).unwrap_or_default();
        if actual != s.surface {
            return Err(SpanError::SurfaceMismatch { span: s.to_string(), actual: actual.to_string() });
        }
    }
    let mut sorted: Vec<Span> = spans.to_vec();
    sorted.sort();
    for (i, a) in sorted.iter().enumerate() {
        for b in sorted.iter().skip(i + 1) {
            if b.start >= a.end {
                break;
            }
            if a.label == b.label && a.overlaps(b) {
                return Err(SpanError::SpanOverlap { first: a.to_string(), second: b.to_string() });
            }
        }
    }
    Ok(sorted)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn accepts_and_sorts() {
        let src = "he lives in Seattle";
        let spans = vec![Span::from_source(src, 12, 19, "LOC").unwrap()];
        let out = validate_spans(src, &spans).unwrap();
        assert_eq!(out, spans);
        assert_eq!(out[0].surface, "Seattle");
    }

    #[test]
    fn empty_is_ok() {
        assert_eq!(validate_spans("abc", &[]).unwrap(), vec![]);
    }

    #[test]
    fn rejects_same_label_overlap() {
        let spans = vec![Span::new(0, 2, "X", "ab"), Span::new(1, 3, "X", "bc")];
        let err = validate_spans("abc", &spans).unwrap_err();
        assert!(matches!(err, SpanError::SpanOverlap { .. }));
    }

    #[test]
    fn allows_cross_label_overlap() {
        let spans = vec![Span::new(0, 2, "X", "ab"), Span::new(1, 3, "Y", "bc")];
        assert!(validate_spans("abc", &spans).is_ok());
    }

    #[test]
    fn rejects_out_of_bounds_and_mismatch() {
        let err = validate_spans("abc", &[Span::new(1, 9, "X", "bc")]).unwrap_err();
        assert!(matches!(err, SpanError::SpanOutOfBounds { .. }));
        let err = validate_spans("abc", &[Span::new(0, 2, "X", "zz")]).unwrap_err();
        assert!(matches!(err, SpanError::SurfaceMismatch { .. }));
        let err = validate_spans("abc", &[Span::new(2, 2, "X", "")]).unwrap_err();
        assert!(matches!(err, SpanError::SpanOutOfBounds { .. }));
    }

    #[test]
    fn validation_is_idempotent() {
        let src = "a b c d";
        let spans = vec![
            Span::from_source(src, 4, 5, "B").unwrap(),
            Span::from_source(src, 0, 1, "A").unwrap(),
        ];
        let once = validate_spans(src, &spans).unwrap();
        let twice = validate_spans(src, &once).unwrap();
        assert_eq!(once, twice);
    }
}
