//! Whitespace normalization shared by every decoder: chat models freely
//! reflow whitespace, so equality checks collapse Unicode whitespace runs to
//! a single space and trim the ends.

/// Collapse runs of Unicode whitespace to one space and trim.
pub fn normalize_ws(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    let mut in_ws = false;
    for c in s.trim().chars() {
        if c.is_whitespace() {
            in_ws = true;
        } else {
            if in_ws && !out.is_empty() {
                out.push(' ');
            }
            in_ws = false;
            out.push(c);
        }
    }
    out
}

/// Whitespace-insensitive equality.
pub fn eq_normalized(a: &str, b: &str) -> bool {
    normalize_ws(a) == normalize_ws(b)
}

/// The decision part of a rationale-bearing output: the text after the last
/// line that starts with `sentinel`. Outputs without a sentinel line are
/// returned whole.
pub fn after_sentinel<'a>(output: &'a str, sentinel: &str) -> &'a str {
    let mut result = output;
    let mut offset = 0;
    for line in output.split_inclusive('\n') {
        let trimmed = line.trim_start();
        if let Some(rest) = trimmed.strip_prefix(sentinel) {
            let rest_offset = offset + (line.len() - rest.len());
            result = &output[rest_offset..];
        }
        offset += line.len();
    }
    result.trim()
}

/// Character-level Levenshtein distance.
pub fn edit_distance(a: &str, b: &str) -> usize {
    let a: Vec<char> = a.chars().collect();
    let b: Vec<char> = b.chars().collect();
    if a.is_empty() {
        return b.len();
    }
    if b.is_empty() {
        return a.len();
    }
    let mut prev: Vec<usize> = (0..=b.len()).collect();
    let mut cur = vec![0usize; b.len() + 1];
    for (i, &ca) in a.iter().enumerate() {
        cur[0] = i + 1;
        for (j, &cb) in b.iter().enumerate() {
            let sub = prev[j] + usize::from(ca != cb);
            cur[j + 1] = sub.min(prev[j + 1] + 1).min(cur[j] + 1);
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    prev[b.len()]
}
