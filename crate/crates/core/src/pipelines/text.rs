//! Deterministic text segmentation: word tokenization for token-level tasks
//! and abbreviation-safe sentence splitting for QA.

/// A word token with character offsets into its source.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Word {
    pub index: usize,
    pub start: usize,
    pub end: usize,
    pub surface: String,
}

/// Split text into words: alphanumeric runs (apostrophes allowed between
/// letters) plus single-character punctuation tokens.
pub fn tokenize_words(text: &str) -> Vec<Word> {
    let chars: Vec<char> = text.chars().collect();
    let mut words = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        if c.is_alphanumeric() {
            while i < chars.len()
                && (chars[i].is_alphanumeric()
                    || (chars[i] == '\''
                        && i > start
                        && i + 1 < chars.len()
                        && chars[i + 1].is_alphanumeric()))
            {
                i += 1;
            }
        } else {
            i += 1;
        }
        let surface: String = chars[start..i].iter().collect();
        words.push(Word { index: words.len(), start, end: i, surface });
    }
    words
}

/// Sentence boundaries that survive the default abbreviation list.
pub const DEFAULT_ABBREVIATIONS: [&str; 16] = [
    "Mr.", "Mrs.", "Ms.", "Dr.", "Prof.", "St.", "vs.", "etc.", "e.g.", "i.e.", "U.S.", "U.K.",
    "Inc.", "Ltd.", "No.", "Fig.",
];

/// Split into sentences at `.`, `?`, `!` followed by whitespace and an
/// uppercase letter, unless the preceding token is a known abbreviation.
pub fn split_sentences(text: &str, abbreviations: &[&str]) -> Vec<String> {
    let chars: Vec<char> = text.chars().collect();
    let mut sentences = Vec::new();
    let mut sentence_start = 0;
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if matches!(c, '.' | '?' | '!') {
            let mut j = i + 1;
            let mut saw_ws = false;
            while j < chars.len() && chars[j].is_whitespace() {
                saw_ws = true;
                j += 1;
            }
            let next_upper = j < chars.len() && chars[j].is_uppercase();
            let mut boundary = saw_ws && next_upper;
            if boundary && c == '.' {
                // The non-whitespace run ending at the period, e.g. "Mr."
                let mut t = i;
                while t > sentence_start && !chars[t - 1].is_whitespace() {
                    t -= 1;
                }
                let token: String = chars[t..=i].iter().collect();
                if abbreviations.contains(&token.as_str()) {
                    boundary = false;
                }
            }
            if boundary {
                let sentence: String = chars[sentence_start..=i].iter().collect();
                let sentence = sentence.trim().to_string();
                if !sentence.is_empty() {
                    sentences.push(sentence);
                }
                sentence_start = j;
                i = j;
                continue;
            }
        }
        i += 1;
    }
    if sentence_start < chars.len() {
        let tail: String = chars[sentence_start..].iter().collect();
        let tail = tail.trim().to_string();
        if !tail.is_empty() {
            sentences.push(tail);
        }
    }
    sentences
}

/// Render sentences as a numbered context: `(1) first (2) second ...`
pub fn number_sentences(sentences: &[String]) -> String {
    sentences
        .iter()
        .enumerate()
        .map(|(i, s)| format!("({}) {s}", i + 1))
        .collect::<Vec<_>>()
        .join(" ")
}

/// A token consisting entirely of non-alphanumeric characters, used as the
/// surface-based punctuation test when no POS tags are available.
pub fn is_punct_surface(surface: &str) -> bool {
    !surface.is_empty() && surface.chars().all(|c| !c.is_alphanumeric())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tokenizes_words_and_punctuation() {
        let words = tokenize_words("I prefer the flight, honestly.");
        let surfaces: Vec<&str> = words.iter().map(|w| w.surface.as_str()).collect();
        assert_eq!(surfaces, vec!["I", "prefer", "the", "flight", ",", "honestly", "."]);
        assert_eq!(words[3].start, 13);
        assert_eq!(words[3].end, 19);
    }

    #[test]
    fn keeps_contractions_together() {
        let words = tokenize_words("don't stop");
        let surfaces: Vec<&str> = words.iter().map(|w| w.surface.as_str()).collect();
        assert_eq!(surfaces, vec!["don't", "stop"]);
    }

    #[test]
    fn splits_simple_sentences() {
        let text = "The capital of Japan is Tokyo. The capital of China is Beijing. The capital of South Korea is Seoul.";
        let sentences = split_sentences(text, &DEFAULT_ABBREVIATIONS);
        assert_eq!(sentences.len(), 3);
        assert_eq!(sentences[2], "The capital of South Korea is Seoul.");
    }

    #[test]
    fn abbreviations_do_not_split() {
        let text = "Mr. Vinken is chairman. He is 61.";
        let sentences = split_sentences(text, &DEFAULT_ABBREVIATIONS);
        assert_eq!(sentences, vec!["Mr. Vinken is chairman.", "He is 61."]);
    }

    #[test]
    fn lowercase_continuation_does_not_split() {
        let text = "It was 3. something and then more.";
        let sentences = split_sentences(text, &DEFAULT_ABBREVIATIONS);
        assert_eq!(sentences.len(), 1);
    }

    #[test]
    fn numbering_is_one_based() {
        let sents = vec!["A.".to_string(), "B.".to_string()];
        assert_eq!(number_sentences(&sents), "(1) A. (2) B.");
    }

    #[test]
    fn punct_surface_test() {
        assert!(is_punct_surface(","));
        assert!(!is_punct_surface("a,"));
        assert!(!is_punct_surface("word"));
    }
}
