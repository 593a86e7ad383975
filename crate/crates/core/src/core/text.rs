//! Character-offset helpers. All public offsets in this crate are character
//! offsets, never bytes, so marker insertion and removal survive any
//! tokenizer or encoding.

/// Number of characters in `s`.
pub fn char_len(s: &str) -> usize {
    s.chars().count()
}

/// Byte offset of character index `idx`, or the string length when `idx`
/// equals the character count.
pub fn byte_of_char(s: &str, idx: usize) -> Option<usize> {
    if idx == 0 {
        return Some(0);
    }
    let mut seen = 0;
    for (byte, _) in s.char_indices() {
        if seen == idx {
            return Some(byte);
        }
        seen += 1;
    }
    if seen == idx {
        Some(s.len())
    } else {
        None
    }
}

/// Slice `s` by character offsets `[start, end)`.
pub fn slice_chars(s: &str, start: usize, end: usize) -> Option<&str> {
    if start > end {
        return None;
    }
    let b0 = byte_of_char(s, start)?;
    let b1 = byte_of_char(s, end)?;
    s.get(b0..b1)
}

/// Character offset of the first occurrence of `needle` at or after
/// character offset `from`.
pub fn find_chars(haystack: &str, needle: &str, from: usize) -> Option<usize> {
    let start_byte = byte_of_char(haystack, from)?;
    let rel = haystack[start_byte..].find(needle)?;
    Some(from + haystack[start_byte..start_byte + rel].chars().count())
}

/// All character offsets where `needle` occurs in `haystack` (overlapping
/// occurrences included).
pub fn find_all_chars(haystack: &str, needle: &str) -> Vec<usize> {
    let mut out = Vec::new();
    if needle.is_empty() {
        return out;
    }
    let mut from = 0;
    while let Some(pos) = find_chars(haystack, needle, from) {
        out.push(pos);
        from = pos + 1;
    }
    out
}
