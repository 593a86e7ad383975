//! Sentence-indexed answer decoding for extractive QA: outputs look like
//! `(3) Seoul`, or the literal `unanswerable`.

use serde::{Deserialize, Serialize};

use super::normalize::normalize_ws;
use super::CodecError;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum QaAnswer {
    /// 1-based sentence index and the answer substring.
    Indexed { sentence: usize, text: String },
    Unanswerable,
}

/// Parse a `(index) answer` output against the numbered sentences.
///
/// The answer must be a substring of the indexed sentence after whitespace
/// normalization; otherwise the prompt abstains.
pub fn qa_decode(output: &str, sentences: &[String]) -> Result<QaAnswer, CodecError> {
    if sentences.is_empty() {
        return Err(CodecError::MalformedAnswer("no sentences provided".into()));
    }
    let trimmed = output.trim();
    let lowered = normalize_ws(trimmed).to_lowercase();
    if lowered == "unanswerable" || lowered == "unanswerable." {
        return Ok(QaAnswer::Unanswerable);
    }

    let rest = trimmed
        .strip_prefix('(')
        .ok_or_else(|| CodecError::MalformedAnswer(format!("expected leading (index): {trimmed:?}")))?;
    let close = rest
        .find(')')
        .ok_or_else(|| CodecError::MalformedAnswer(format!("unclosed sentence index: {trimmed:?}")))?;
    let index: usize = rest[..close]
        .trim()
        .parse()
        .map_err(|_| CodecError::MalformedAnswer(format!("non-numeric sentence index: {trimmed:?}")))?;
    if index == 0 || index > sentences.len() {
        return Err(CodecError::IndexOutOfRange { index, len: sentences.len() });
    }
    let answer = normalize_ws(&rest[close + 1..]);
    if answer.is_empty() {
        return Err(CodecError::MalformedAnswer("empty answer text".into()));
    }
    let sentence = normalize_ws(&sentences[index - 1]);
    if !sentence.contains(&answer) {
        return Err(CodecError::AnswerNotInSentence { answer, index });
    }
    Ok(QaAnswer::Indexed { sentence: index, text: answer })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sentences() -> Vec<String> {
        vec![
            "The capital of Japan is Tokyo.".to_string(),
            "The capital of China is Beijing.".to_string(),
            "The capital of South Korea is Seoul.".to_string(),
        ]
    }

    #[test]
    fn parses_indexed_answer() {
        let got = qa_decode("(3) Seoul", &sentences()).unwrap();
        assert_eq!(got, QaAnswer::Indexed { sentence: 3, text: "Seoul".into() });
    }

    #[test]
    fn index_out_of_range() {
        assert!(matches!(
            qa_decode("(4) Seoul", &sentences()),
            Err(CodecError::IndexOutOfRange { index: 4, len: 3 })
        ));
    }

    #[test]
    fn unanswerable_literal() {
        assert_eq!(qa_decode("unanswerable", &sentences()).unwrap(), QaAnswer::Unanswerable);
        assert_eq!(qa_decode(" Unanswerable. ", &sentences()).unwrap(), QaAnswer::Unanswerable);
    }

    #[test]
    fn answer_must_come_from_the_sentence() {
        assert!(matches!(
            qa_decode("(1) Seoul", &sentences()),
            Err(CodecError::AnswerNotInSentence { .. })
        ));
    }

    #[test]
    fn malformed_outputs_abstain() {
        assert!(matches!(qa_decode("Seoul", &sentences()), Err(CodecError::MalformedAnswer(_))));
        assert!(matches!(qa_decode("(x) Seoul", &sentences()), Err(CodecError::MalformedAnswer(_))));
        assert!(matches!(qa_decode("(3)", &sentences()), Err(CodecError::MalformedAnswer(_))));
    }
}
