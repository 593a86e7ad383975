//! Token counting and the hard prompt budget.

use std::sync::Arc;

/// The hard token limit a single prompt must fit.
pub const DEFAULT_TOKEN_LIMIT: usize = 4096;

/// A named token-counting rule. The default is a conservative heuristic of
/// one token per four characters; an exact provider tokenizer can be plugged
/// in via [`CounterRule::Custom`]. Whatever the rule, it must be monotone in
/// concatenation: `count(a + b) >= max(count(a), count(b))`.
#[derive(Clone)]
pub enum CounterRule {
    /// `ceil(chars / 4)`.
    CharsDiv4,
    /// Whitespace-separated token count.
    Whitespace,
    Custom {
        name: String,
        count: Arc<dyn Fn(&str) -> usize + Send + Sync>,
    },
}

impl CounterRule {
    pub fn name(&self) -> &str {
        match self {
            CounterRule::CharsDiv4 => "chars_div4",
            CounterRule::Whitespace => "whitespace",
            CounterRule::Custom { name, .. } => name,
        }
    }

    pub fn parse(name: &str) -> Option<CounterRule> {
        match name {
            "chars_div4" => Some(CounterRule::CharsDiv4),
            "whitespace" => Some(CounterRule::Whitespace),
            _ => None,
        }
    }

    pub fn count(&self, text: &str) -> usize {
        match self {
            CounterRule::CharsDiv4 => text.chars().count().div_ceil(4),
            CounterRule::Whitespace => text.split_whitespace().count(),
            CounterRule::Custom { count, .. } => count(text),
        }
    }
}

impl Default for CounterRule {
    fn default() -> Self {
        CounterRule::CharsDiv4
    }
}

impl std::fmt::Debug for CounterRule {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "CounterRule({})", self.name())
    }
}

/// Count tokens under a rule.
pub fn count_tokens(text: &str, counter: &CounterRule) -> usize {
    counter.count(text)
}

/// A token limit paired with the counting rule that enforces it.
#[derive(Debug, Clone)]
pub struct TokenBudget {
    pub limit: usize,
    pub counter: CounterRule,
}

impl TokenBudget {
    pub fn new(limit: usize, counter: CounterRule) -> Self {
        TokenBudget { limit, counter }
    }

    pub fn fits(&self, text: &str) -> bool {
        self.counter.count(text) <= self.limit
    }
}

impl Default for TokenBudget {
    fn default() -> Self {
        TokenBudget { limit: DEFAULT_TOKEN_LIMIT, counter: CounterRule::default() }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_counts_zero() {
        assert_eq!(count_tokens("", &CounterRule::CharsDiv4), 0);
    }

    #[test]
    fn heuristic_rounds_up() {
        assert_eq!(count_tokens("abcdefgh", &CounterRule::CharsDiv4), 2);
        assert_eq!(count_tokens("abcdefghi", &CounterRule::CharsDiv4), 3);
        assert_eq!(count_tokens("abc", &CounterRule::CharsDiv4), 1);
    }

    #[test]
    fn monotone_in_concatenation() {
        let c = CounterRule::CharsDiv4;
        for (a, b) in [("hello", " world"), ("", "x"), ("a b", "c d e")] {
            let joined = format!("{a}{b}");
            assert!(c.count(&joined) >= c.count(a).max(c.count(b)));
        }
    }

    #[test]
    fn custom_rule_is_used() {
        let rule = CounterRule::Custom { name: "bytes".into(), count: Arc::new(|s: &str| s.len()) };
        assert_eq!(count_tokens("abc", &rule), 3);
        assert_eq!(rule.name(), "bytes");
    }
}
