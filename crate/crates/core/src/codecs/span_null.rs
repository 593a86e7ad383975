//! Span-or-null decoding for trigger and argument prompts: the model either
//! names a substring of the source or answers `null`.

use serde::{Deserialize, Serialize};

use crate::core::text;

use super::normalize::normalize_ws;
use super::CodecError;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum SpanOrNull {
    Null,
    Found { start: usize, end: usize, surface: String, diagnostics: Vec<String> },
}

impl SpanOrNull {
    pub fn found(&self) -> Option<(usize, usize, &str)> {
        match self {
            SpanOrNull::Null => None,
            SpanOrNull::Found { start, end, surface, .. } => Some((*start, *end, surface)),
        }
    }
}

const REPORT_PREFIXES: [&str; 6] = [
    "the answer is",
    "the trigger word is",
    "the trigger is",
    "the argument is",
    "the target is",
    "answer:",
];

/// Decode an output that is either `null` or a substring of `source`.
///
/// A reported sentence like `The answer is X` is unwrapped before the
/// lookup. A surface occurring more than once resolves to its first
/// occurrence with a diagnostic; a surface not in the source is an error.
pub fn span_or_null_decode(output: &str, source: &str) -> Result<SpanOrNull, CodecError> {
    let trimmed = output.trim();
    let lowered = normalize_ws(trimmed).to_lowercase();
    if lowered == "null" || lowered == "null." || lowered == "none" {
        return Ok(SpanOrNull::Null);
    }

    for candidate in candidates(trimmed) {
        if candidate.is_empty() {
            continue;
        }
        let occurrences = text::find_all_chars(source, &candidate);
        if occurrences.is_empty() {
            continue;
        }
        let mut diagnostics = Vec::new();
        if occurrences.len() > 1 {
            diagnostics.push(format!(
                "surface {candidate:?} occurs {} times in source; first occurrence taken",
                occurrences.len()
            ));
        }
        let start = occurrences[0];
        let end = start + candidate.chars().count();
        return Ok(SpanOrNull::Found { start, end, surface: candidate, diagnostics });
    }
    Err(CodecError::NotInSource { output: trimmed.to_string() })
}

/// Progressively unwrapped candidate surfaces, most literal first.
fn candidates(trimmed: &str) -> Vec<String> {
    let mut out = vec![trimmed.to_string()];
    let unquoted = trimmed.trim_matches(|c| c == '"' || c == '\'' || c == '“' || c == '”');
    push_unique(&mut out, unquoted);
    let no_period = unquoted.trim_end_matches('.').trim();
    push_unique(&mut out, no_period);
    let lower = no_period.to_lowercase();
    for prefix in REPORT_PREFIXES {
        if lower.starts_with(prefix) {
            let stripped = no_period[prefix.len()..]
                .trim()
                .trim_matches(|c| c == '"' || c == '\'')
                .trim();
            push_unique(&mut out, stripped);
        }
    }
    out
}

fn push_unique(out: &mut Vec<String>, candidate: &str) {
    if !candidate.is_empty() && !out.iter().any(|c| c == candidate) {
        out.push(candidate.to_string());
    }
}
