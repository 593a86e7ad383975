//! The copy-and-mark grammar: the model reproduces the input with target
//! spans wrapped in marker symbols.

use serde::{Deserialize, Serialize};

use crate::core::text;
use crate::core::{validate_spans, Span};

use super::normalize::{edit_distance, eq_normalized, normalize_ws};
use super::{CodecError, DecodeOutcome, Fidelity};

/// An open/close marker pair, e.g. `##`/`@@` for NER or `@`/`#` for relation
/// extraction and dependency parsing.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MarkerGrammar {
    open: String,
    close: String,
}

impl MarkerGrammar {
    pub fn new(open: impl Into<String>, close: impl Into<String>) -> Result<Self, CodecError> {
        let open = open.into();
        let close = close.into();
        if open.is_empty() || close.is_empty() {
            return Err(CodecError::InvalidGrammar("marker strings must be non-empty".into()));
        }
        if open == close {
            return Err(CodecError::InvalidGrammar("open and close markers must differ".into()));
        }
        Ok(MarkerGrammar { open, close })
    }

    pub fn open(&self) -> &str {
        &self.open
    }

    pub fn close(&self) -> &str {
        &self.close
    }
}

/// Rewrite `source` with each span wrapped in the grammar's markers.
///
/// This is the deterministic inverse of [`marker_decode`], used to render
/// demonstrations. Spans must be valid for the source and pairwise
/// non-overlapping (across labels too; a marked rewrite cannot express
/// overlap), and the source must not already contain a marker string.
pub fn marker_encode(source: &str, spans: &[Span], grammar: &MarkerGrammar) -> Result<String, CodecError> {
    for marker in [&grammar.open, &grammar.close] {
        if source.contains(marker.as_str()) {
            return Err(CodecError::MarkerInSource { marker: marker.clone() });
        }
    }
    let sorted = validate_spans(source, spans)?;
    for pair in sorted.windows(2) {
        if pair[1].start < pair[0].end {
            return Err(CodecError::OverlappingSpans(format!("{} and {}", pair[0], pair[1])));
        }
    }
    let chars: Vec<char> = source.chars().collect();
    let mut out = String::with_capacity(source.len() + sorted.len() * 8);
    let mut pos = 0;
    for span in &sorted {
        out.extend(&chars[pos..span.start]);
        out.push_str(&grammar.open);
        out.extend(&chars[span.start..span.end]);
        out.push_str(&grammar.close);
        pos = span.end;
    }
    out.extend(&chars[pos..]);
    Ok(out)
}

/// Parse a copy-and-mark output back into spans over `source`, all carrying
/// `label`.
///
/// If the output (markers removed) equals the source up to whitespace, spans
/// are placed by character alignment and the outcome is exact. If it drifted
/// but stays within an edit budget of one tenth of the source length, each
/// marked surface is realigned to its unique verbatim occurrence in the
/// source. Beyond the budget the outcome is rejected and the prompt
/// abstains. Markers that cut through a word snap outward to the whole word
/// with a diagnostic.
pub fn marker_decode(
    source: &str,
    output: &str,
    grammar: &MarkerGrammar,
    label: &str,
) -> Result<DecodeOutcome<Vec<Span>>, CodecError> {
    let (stripped, marks) = scan_markers(output, grammar)?;
    let mut diagnostics = Vec::new();

    if eq_normalized(&stripped, source) {
        let spans = align_marks(source, &stripped, &marks, label, &mut diagnostics);
        return Ok(DecodeOutcome { payload: Some(spans), fidelity: Fidelity::Exact, diagnostics });
    }

    let budget = text::char_len(source).div_ceil(10);
    let dist = edit_distance(&normalize_ws(&stripped), &normalize_ws(source));
    if dist > budget {
        return Ok(DecodeOutcome::rejected(format!(
            "output drifted from source by edit distance {dist} (budget {budget})"
        )));
    }

    let stripped_chars: Vec<char> = stripped.chars().collect();
    let mut spans = Vec::new();
    for &(ms, me) in &marks {
        let segment: String = stripped_chars[ms..me].iter().collect();
        let segment = segment.trim();
        if segment.is_empty() {
            diagnostics.push("empty marker pair ignored".into());
            continue;
        }
        let occurrences = text::find_all_chars(source, segment);
        match occurrences.len() {
            0 => diagnostics.push(format!("marked surface {segment:?} not found in source; dropped")),
            1 => {
                let start = occurrences[0];
                let end = start + segment.chars().count();
                push_span(source, start, end, label, &mut spans, &mut diagnostics);
            }
            n => return Err(CodecError::AmbiguousRealign { surface: segment.to_string(), count: n }),
        }
    }
    spans.sort();
    spans.dedup();
    Ok(DecodeOutcome { payload: Some(spans), fidelity: Fidelity::Realigned, diagnostics })
}

/// Remove markers from `output`, returning the stripped text and the marked
/// character ranges in stripped coordinates.
fn scan_markers(output: &str, grammar: &MarkerGrammar) -> Result<(String, Vec<(usize, usize)>), CodecError> {
    let mut stripped = String::with_capacity(output.len());
    let mut stripped_chars = 0usize;
    let mut marks = Vec::new();
    let mut open_at: Option<usize> = None;
    let mut rest = output;
    loop {
        let next_open = rest.find(&grammar.open);
        let next_close = rest.find(&grammar.close);
        let (pos, is_open, mark_len) = match (next_open, next_close) {
            (None, None) => break,
            (Some(o), None) => (o, true, grammar.open.len()),
            (None, Some(c)) => (c, false, grammar.close.len()),
            (Some(o), Some(c)) => {
                if o < c {
                    (o, true, grammar.open.len())
                } else if c < o {
                    (c, false, grammar.close.len())
                } else if grammar.open.len() >= grammar.close.len() {
                    // Same position: maximal munch.
                    (o, true, grammar.open.len())
                } else {
                    (c, false, grammar.close.len())
                }
            }
        };
        let before = &rest[..pos];
        stripped.push_str(before);
        stripped_chars += before.chars().count();
        if is_open {
            if open_at.is_some() {
                return Err(CodecError::UnbalancedMarkers("open marker inside an open mark".into()));
            }
            open_at = Some(stripped_chars);
        } else {
            match open_at.take() {
                Some(s) => marks.push((s, stripped_chars)),
                None => return Err(CodecError::UnbalancedMarkers("close marker without open".into())),
            }
        }
        rest = &rest[pos + mark_len..];
    }
    stripped.push_str(rest);
    if open_at.is_some() {
        return Err(CodecError::UnbalancedMarkers("marker left open at end of output".into()));
    }
    Ok((stripped, marks))
}

/// Map marked ranges from stripped coordinates to source coordinates by
/// aligning the non-whitespace character sequences (equal by construction
/// when the normalized texts are equal).
fn align_marks(
    source: &str,
    stripped: &str,
    marks: &[(usize, usize)],
    label: &str,
    diagnostics: &mut Vec<String>,
) -> Vec<Span> {
    let src_positions: Vec<usize> = source
        .chars()
        .enumerate()
        .filter(|(_, c)| !c.is_whitespace())
        .map(|(i, _)| i)
        .collect();
    let stripped_positions: Vec<usize> = stripped
        .chars()
        .enumerate()
        .filter(|(_, c)| !c.is_whitespace())
        .map(|(i, _)| i)
        .collect();
    let mut spans = Vec::new();
    for &(ms, me) in marks {
        // Indices, within the non-whitespace sequence, of the first and last
        // non-whitespace characters covered by the mark.
        let first = stripped_positions.partition_point(|&p| p < ms);
        let last = stripped_positions.partition_point(|&p| p < me);
        if first == last {
            diagnostics.push("whitespace-only marker pair ignored".into());
            continue;
        }
        let start = src_positions[first];
        let end = src_positions[last - 1] + 1;
        push_span(source, start, end, label, &mut spans, diagnostics);
    }
    spans.sort();
    spans.dedup();
    spans
}

fn push_span(source: &str, start: usize, end: usize, label: &str, spans: &mut Vec<Span>, diagnostics: &mut Vec<String>) {
    let (start, end, snapped) = snap_to_word(source, start, end);
    if snapped {
        diagnostics.push(format!("marker cut through a word; span snapped outward to {start}..{end}"));
    }
    if let Some(span) = Span::from_source(source, start, end, label) {
        spans.push(span);
    }
}

/// Widen `[start, end)` so it never splits a run of alphanumeric characters.
fn snap_to_word(source: &str, mut start: usize, mut end: usize) -> (usize, usize, bool) {
    let chars: Vec<char> = source.chars().collect();
    let alnum = |i: usize| chars.get(i).is_some_and(|c| c.is_alphanumeric());
    let mut snapped = false;
    if start > 0 && alnum(start - 1) && alnum(start) {
        while start > 0 && alnum(start - 1) {
            start -= 1;
        }
        snapped = true;
    }
    if end < chars.len() && end > 0 && alnum(end - 1) && alnum(end) {
        while end < chars.len() && alnum(end) {
            end += 1;
        }
        snapped = true;
    }
    (start, end, snapped)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ner() -> MarkerGrammar {
        MarkerGrammar::new("##", "@@").unwrap()
    }

    fn dep() -> MarkerGrammar {
        MarkerGrammar::new("@", "#").unwrap()
    }

    #[test]
    fn grammar_rejects_degenerate_pairs() {
        assert!(MarkerGrammar::new("", "@@").is_err());
        assert!(MarkerGrammar::new("##", "##").is_err());
    }

    #[test]
    fn decodes_spaced_marks_exactly() {
        let source = "he lives in Seattle";
        let out = marker_decode(source, "he lives in ## Seattle@@", &ner(), "LOC").unwrap();
        assert_eq!(out.fidelity, Fidelity::Exact);
        assert_eq!(out.payload.unwrap(), vec![Span::new(12, 19, "LOC", "Seattle")]);
    }

    #[test]
    fn copy_through_means_no_spans() {
        let out = marker_decode("abc def", "abc def", &ner(), "LOC").unwrap();
        assert_eq!(out.fidelity, Fidelity::Exact);
        assert_eq!(out.payload.unwrap(), vec![]);
    }

    #[test]
    fn decodes_dependency_marks() {
        let source = "I prefer the morning flight to Denver";
        let output = "@I# prefer the morning @flight# to Denver";
        let out = marker_decode(source, output, &dep(), "DEP").unwrap();
        assert_eq!(out.fidelity, Fidelity::Exact);
        assert_eq!(
            out.payload.unwrap(),
            vec![Span::new(0, 1, "DEP", "I"), Span::new(21, 27, "DEP", "flight")]
        );
    }

    #[test]
    fn encode_inverts_decode() {
        let source = "In 2002, Musk founded SpaceX";
        let spans = vec![Span::from_source(source, 22, 28, "ORG").unwrap()];
        let encoded = marker_encode(source, &spans, &dep()).unwrap();
        assert_eq!(encoded, "In 2002, Musk founded @SpaceX#");
        let out = marker_decode(source, &encoded, &dep(), "ORG").unwrap();
        assert_eq!(out.fidelity, Fidelity::Exact);
        assert_eq!(out.payload.unwrap(), spans);
    }

    #[test]
    fn encode_rejects_marker_in_source() {
        let err = marker_encode("a ## b", &[], &ner()).unwrap_err();
        assert!(matches!(err, CodecError::MarkerInSource { .. }));
    }

    #[test]
    fn encode_rejects_overlap() {
        let source = "alpha beta";
        let spans = vec![
            Span::from_source(source, 0, 5, "X").unwrap(),
            Span::from_source(source, 2, 7, "Y").unwrap(),
        ];
        assert!(matches!(marker_encode(source, &spans, &ner()), Err(CodecError::OverlappingSpans(_))));
    }

    #[test]
    fn unbalanced_markers_error() {
        let err = marker_decode("a b", "a ## b", &ner(), "X").unwrap_err();
        assert!(matches!(err, CodecError::UnbalancedMarkers(_)));
        let err = marker_decode("a b", "a @@ b", &ner(), "X").unwrap_err();
        assert!(matches!(err, CodecError::UnbalancedMarkers(_)));
    }

    #[test]
    fn small_drift_realigns() {
        let source = "he lives in Seattle";
        let output = "he livs in ##Seattle@@";
        let out = marker_decode(source, output, &ner(), "LOC").unwrap();
        assert_eq!(out.fidelity, Fidelity::Realigned);
        assert_eq!(out.payload.unwrap(), vec![Span::new(12, 19, "LOC", "Seattle")]);
    }

    #[test]
    fn ambiguous_realignment_is_an_error() {
        let source = "a b a";
        let output = "##a@@ c a";
        let err = marker_decode(source, output, &ner(), "X").unwrap_err();
        assert!(matches!(err, CodecError::AmbiguousRealign { .. }));
    }

    #[test]
    fn large_drift_rejects() {
        let source = "he lives in Seattle";
        let output = "completely different words here ##Seattle@@";
        let out = marker_decode(source, output, &ner(), "LOC").unwrap();
        assert_eq!(out.fidelity, Fidelity::Rejected);
        assert!(out.payload.is_none());
    }

    #[test]
    fn partial_word_marks_snap_outward() {
        let source = "Seattle rain";
        let out = marker_decode(source, "##Sea@@ttle rain", &ner(), "LOC").unwrap();
        assert_eq!(out.fidelity, Fidelity::Exact);
        assert_eq!(out.payload.unwrap(), vec![Span::new(0, 7, "LOC", "Seattle")]);
        assert!(!out.diagnostics.is_empty());
    }

    #[test]
    fn punctuation_boundaries_do_not_snap() {
        let source = "he saw Seattle, then left";
        let spans = vec![Span::from_source(source, 7, 14, "LOC").unwrap()];
        let encoded = marker_encode(source, &spans, &ner()).unwrap();
        let out = marker_decode(source, &encoded, &ner(), "LOC").unwrap();
        assert_eq!(out.payload.unwrap(), spans);
        assert!(out.diagnostics.is_empty());
    }
}
