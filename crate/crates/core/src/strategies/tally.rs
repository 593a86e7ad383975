//! Majority voting over prompt decisions. Abstentions are tracked but never
//! vote, so adding an abstaining prompt cannot change a winner.

use std::cmp::Ordering;
use std::collections::BTreeMap;

/// Vote counts over candidate payloads plus an abstention count; the total
/// equals the number of contributing prompts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VoteTally<P: Ord + Clone> {
    counts: BTreeMap<P, usize>,
    abstentions: usize,
}

impl<P: Ord + Clone> Default for VoteTally<P> {
    fn default() -> Self {
        VoteTally { counts: BTreeMap::new(), abstentions: 0 }
    }
}

impl<P: Ord + Clone> VoteTally<P> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, payload: P) {
        *self.counts.entry(payload).or_insert(0) += 1;
    }

    pub fn abstain(&mut self) {
        self.abstentions += 1;
    }

    pub fn abstentions(&self) -> usize {
        self.abstentions
    }

    /// Total contributing prompts: votes plus abstentions.
    pub fn total(&self) -> usize {
        self.counts.values().sum::<usize>() + self.abstentions
    }

    pub fn count_of(&self, payload: &P) -> usize {
        self.counts.get(payload).copied().unwrap_or(0)
    }

    pub fn counts(&self) -> &BTreeMap<P, usize> {
        &self.counts
    }

    pub fn is_all_abstained(&self) -> bool {
        self.counts.is_empty()
    }

    /// The payload with the maximum count, ties resolved by the natural
    /// order (smallest wins). `None` when every prompt abstained.
    pub fn winner(&self) -> Option<&P> {
        self.winner_by(P::cmp)
    }

    /// The payload with the maximum count; among tied maxima the one that
    /// `tie_break` orders first wins.
    pub fn winner_by(&self, tie_break: impl Fn(&P, &P) -> Ordering) -> Option<&P> {
        let max = self.counts.values().copied().max()?;
        self.counts
            .iter()
            .filter(|(_, c)| **c == max)
            .map(|(p, _)| p)
            .min_by(|a, b| tie_break(a, b))
    }

    /// The best-voted payload other than the winner.
    pub fn runner_up(&self) -> Option<&P> {
        let winner = self.winner()?;
        self.counts
            .iter()
            .filter(|(p, _)| *p != winner)
            .max_by(|(pa, ca), (pb, cb)| ca.cmp(cb).then_with(|| pb.cmp(pa)))
            .map(|(p, _)| p)
    }
}

impl<P: Ord + Clone> FromIterator<Option<P>> for VoteTally<P> {
    /// Collect decisions where `None` marks an abstention.
    fn from_iter<T: IntoIterator<Item = Option<P>>>(iter: T) -> Self {
        let mut tally = VoteTally::new();
        for item in iter {
            match item {
                Some(p) => tally.add(p),
                None => tally.abstain(),
            }
        }
        tally
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn plain_majority() {
        let mut tally = VoteTally::new();
        for _ in 0..3 {
            tally.add("POS");
        }
        for _ in 0..2 {
            tally.add("NEG");
        }
        assert_eq!(tally.winner(), Some(&"POS"));
        assert_eq!(tally.total(), 5);
    }

    #[test]
    fn sole_valid_vote_wins_over_abstentions() {
        let tally: VoteTally<&str> =
            [Some("A"), None, None, None, None].into_iter().collect();
        assert_eq!(tally.winner(), Some(&"A"));
        assert_eq!(tally.abstentions(), 4);
        assert_eq!(tally.total(), 5);
    }

    #[test]
    fn tie_resolved_by_order() {
        let tally: VoteTally<&str> = [Some("A"), Some("B"), Some("B"), Some("A")].into_iter().collect();
        assert_eq!(tally.winner(), Some(&"A"));
        let reversed = tally.winner_by(|a, b| b.cmp(a));
        assert_eq!(reversed, Some(&"B"));
    }

    #[test]
    fn all_abstained_has_no_winner() {
        let tally: VoteTally<&str> = [None, None].into_iter().collect();
        assert!(tally.winner().is_none());
        assert!(tally.is_all_abstained());
    }

    #[test]
    fn runner_up_lookup() {
        let tally: VoteTally<&str> =
            [Some("POS"), Some("POS"), Some("NEG"), Some("MEH")].into_iter().collect();
        assert_eq!(tally.winner(), Some(&"POS"));
        assert_eq!(tally.runner_up(), Some(&"MEH")); // count tie, natural order
        let tally: VoteTally<&str> = [Some("POS"), Some("POS"), Some("NEG"), Some("NEG"), Some("MEH")]
            .into_iter()
            .collect();
        assert_eq!(tally.runner_up(), Some(&"NEG"));
        let single: VoteTally<&str> = [Some("A")].into_iter().collect();
        assert_eq!(single.runner_up(), None);
    }

    #[test]
    fn adding_abstentions_never_changes_the_winner() {
        let mut tally: VoteTally<&str> = [Some("A"), Some("B"), Some("A")].into_iter().collect();
        let before = tally.winner().copied();
        for _ in 0..10 {
            tally.abstain();
        }
        assert_eq!(tally.winner().copied(), before);
    }
}
