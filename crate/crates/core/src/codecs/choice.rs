//! Multi-choice decoding: match the model's answer to an option by its
//! letter or number first, else by unique option text.

use serde::{Deserialize, Serialize};

use super::normalize::normalize_ws;
use super::CodecError;

/// How options are labeled when rendered into a prompt.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OptionStyle {
    /// `(A) waterfall`
    #[default]
    Alphabetic,
    /// `15. NNPS`
    Numeric,
}

/// Render option `index` (0-based) in the given style.
pub fn render_option(index: usize, option: &str, style: OptionStyle) -> String {
    match style {
        OptionStyle::Alphabetic => {
            let letter = (b'A' + (index % 26) as u8) as char;
            format!("({letter}) {option}")
        }
        OptionStyle::Numeric => format!("{}. {option}", index + 1),
    }
}

/// Decode a multi-choice answer to a 0-based option index.
pub fn choice_decode(output: &str, options: &[String]) -> Result<usize, CodecError> {
    if options.is_empty() {
        return Err(CodecError::InvalidOptions("options must be non-empty".into()));
    }
    for (i, a) in options.iter().enumerate() {
        if options[i + 1..].contains(a) {
            return Err(CodecError::InvalidOptions(format!("duplicate option {a:?}")));
        }
    }

    if let Some(index) = match_marker(output, options.len()) {
        return Ok(index);
    }

    let haystack = normalize_ws(output).to_lowercase();
    let mut matched: Vec<usize> = Vec::new();
    for (i, option) in options.iter().enumerate() {
        let needle = normalize_ws(option).to_lowercase();
        if !needle.is_empty() && haystack.contains(&needle) {
            matched.push(i);
        }
    }
    match matched.len() {
        0 => Err(CodecError::NoMatch),
        1 => Ok(matched[0]),
        _ => Err(CodecError::AmbiguousMatch(matched)),
    }
}

/// Look for an option letter like `(D)` anywhere, or a leading `D.` / `15.`
/// style marker at the start of the answer.
fn match_marker(output: &str, len: usize) -> Option<usize> {
    let trimmed = output.trim();

    // Parenthesized marker anywhere in the output.
    let mut rest = trimmed;
    while let Some(open) = rest.find('(') {
        let after = &rest[open + 1..];
        if let Some(close) = after.find(')') {
            if let Some(idx) = parse_marker_token(&after[..close], len) {
                return Some(idx);
            }
            rest = &after[close + 1..];
        } else {
            break;
        }
    }

    // Leading token followed by '.', ')' or ':'.
    let token: String = trimmed.chars().take_while(|c| c.is_alphanumeric()).collect();
    let after = trimmed[token.len()..].chars().next();
    if matches!(after, Some('.') | Some(')') | Some(':')) {
        return parse_marker_token(&token, len);
    }
    None
}

fn parse_marker_token(token: &str, len: usize) -> Option<usize> {
    let token = token.trim();
    if token.len() == 1 {
        let c = token.chars().next().unwrap();
        if c.is_ascii_alphabetic() {
            let idx = (c.to_ascii_uppercase() as u8 - b'A') as usize;
            return (idx < len).then_some(idx);
        }
    }
    if !token.is_empty() && token.chars().all(|c| c.is_ascii_digit()) {
        let n: usize = token.parse().ok()?;
        if (1..=len).contains(&n) {
            return Some(n - 1);
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    fn opts(items: &[&str]) -> Vec<String> {
        items.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn letter_marker_wins() {
        let options = opts(&["waterfall", "bridge", "valley", "pebble"]);
        assert_eq!(choice_decode("(D) pebble", &options).unwrap(), 3);
        assert_eq!(choice_decode("D) pebble", &options).unwrap(), 3);
        assert_eq!(choice_decode("b. bridge", &options).unwrap(), 1);
    }

    #[test]
    fn numeric_marker_for_large_tagsets() {
        let options: Vec<String> = crate::core::task::PTB_POS_TAGS.iter().map(|s| s.to_string()).collect();
        let idx = choice_decode("15. NNPS Proper noun, plural", &options).unwrap();
        assert_eq!(options[idx], "NNPS");
    }

    #[test]
    fn unique_text_match() {
        let options = opts(&["waterfall", "bridge", "valley", "pebble"]);
        assert_eq!(choice_decode("pebble", &options).unwrap(), 3);
        assert_eq!(choice_decode("I think the answer is Pebble.", &options).unwrap(), 3);
    }

    #[test]
    fn no_match_and_ambiguous() {
        let options = opts(&["waterfall", "bridge"]);
        assert!(matches!(choice_decode("river", &options), Err(CodecError::NoMatch)));
        assert!(matches!(
            choice_decode("waterfall or bridge", &options),
            Err(CodecError::AmbiguousMatch(_))
        ));
    }

    #[test]
    fn rendered_options_self_decode() {
        let options = opts(&["waterfall", "bridge", "valley", "pebble"]);
        for (i, option) in options.iter().enumerate() {
            let rendered = render_option(i, option, OptionStyle::Alphabetic);
            assert_eq!(choice_decode(&rendered, &options).unwrap(), i);
            let rendered = render_option(i, option, OptionStyle::Numeric);
            assert_eq!(choice_decode(&rendered, &options).unwrap(), i);
        }
    }

    #[test]
    fn out_of_range_marker_falls_back_to_text() {
        let options = opts(&["waterfall", "bridge"]);
        assert_eq!(choice_decode("(Z) bridge", &options).unwrap(), 1);
    }

    #[test]
    fn duplicate_options_rejected() {
        let options = opts(&["a", "a"]);
        assert!(matches!(choice_decode("a", &options), Err(CodecError::InvalidOptions(_))));
    }
}
