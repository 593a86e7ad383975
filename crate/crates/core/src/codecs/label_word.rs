//! Label-word decoding for sentiment-style tasks: the earliest mapped
//! keyword in the output determines the label.

use super::CodecError;

/// Decode by scanning for the earliest occurrence of any mapping key
/// (case-insensitive). Keys must not be substrings of each other.
pub fn label_word_decode(output: &str, mapping: &[(String, String)]) -> Result<String, CodecError> {
    if mapping.is_empty() {
        return Err(CodecError::InvalidMapping("mapping must be non-empty".into()));
    }
    for (i, (a, _)) in mapping.iter().enumerate() {
        if a.is_empty() {
            return Err(CodecError::InvalidMapping("empty label word".into()));
        }
        for (b, _) in &mapping[i + 1..] {
            let (la, lb) = (a.to_lowercase(), b.to_lowercase());
            if la.contains(&lb) || lb.contains(&la) {
                return Err(CodecError::InvalidMapping(format!(
                    "label words {a:?} and {b:?} are substrings of each other"
                )));
            }
        }
    }
    let haystack = output.to_lowercase();
    let mut best: Option<(usize, &str)> = None;
    for (word, label) in mapping {
        if let Some(pos) = haystack.find(&word.to_lowercase()) {
            if best.is_none_or(|(p, _)| pos < p) {
                best = Some((pos, label));
            }
        }
    }
    best.map(|(_, label)| label.to_string()).ok_or(CodecError::NoLabelWord)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mapping() -> Vec<(String, String)> {
        vec![
            ("positive".into(), "POS".into()),
            ("negative".into(), "NEG".into()),
        ]
    }

    #[test]
    fn direct_key() {
        assert_eq!(label_word_decode("positive", &mapping()).unwrap(), "POS");
    }

    #[test]
    fn key_inside_sentence_case_insensitive() {
        assert_eq!(label_word_decode("The sentiment is Negative.", &mapping()).unwrap(), "NEG");
    }

    #[test]
    fn no_key_is_an_error() {
        assert!(matches!(label_word_decode("great movie", &mapping()), Err(CodecError::NoLabelWord)));
    }

    #[test]
    fn earliest_occurrence_wins() {
        assert_eq!(label_word_decode("negative, not positive", &mapping()).unwrap(), "NEG");
    }

    #[test]
    fn substring_keys_rejected() {
        let bad = vec![("great".to_string(), "A".to_string()), ("greater".to_string(), "B".to_string())];
        assert!(matches!(label_word_decode("x", &bad), Err(CodecError::InvalidMapping(_))));
    }
}
