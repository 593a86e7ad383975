//! Task-typed model outputs with voting provenance.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{Span, TaskId};

/// A directed dependency arc between word indices.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct DepArc {
    pub head: usize,
    pub dependent: usize,
    pub relation: String,
}

impl DepArc {
    pub fn new(head: usize, dependent: usize, relation: impl Into<String>) -> Self {
        DepArc { head, dependent, relation: relation.into() }
    }

    pub fn vote_key(&self) -> String {
        format!("w{}->w{}", self.head, self.dependent)
    }
}

/// One extracted event: type, trigger span, and role-to-argument map.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct EventFrame {
    pub event_type: String,
    pub trigger: Span,
    pub arguments: BTreeMap<String, Span>,
}

/// One relation between two extracted entity spans.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct RelationTriple {
    pub subject: Span,
    pub relation: String,
    pub object: Span,
}

impl RelationTriple {
    pub fn vote_key(&self) -> String {
        format!("{}|{}|{}", self.subject.vote_key(), self.relation, self.object.vote_key())
    }
}

/// The task-typed payload of a prediction.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Payload {
    /// Index into the task's label space (or the instance's option list).
    Label(usize),
    /// One label per word; `None` marks a word whose votes all abstained.
    WordLabels(Vec<Option<usize>>),
    Spans(Vec<Span>),
    Answer { sentence: usize, text: String },
    Unanswerable,
    Relations { entities: Vec<Span>, triples: Vec<RelationTriple> },
    Events(Vec<EventFrame>),
    Arcs(Vec<DepArc>),
    Frame { sense: usize, arguments: BTreeMap<String, Span> },
}

impl Payload {
    /// Compact canonical key for whole-payload voting (paraphrase voting).
    pub fn vote_key(&self) -> String {
        match self {
            Payload::Label(i) => format!("label:{i}"),
            Payload::WordLabels(ls) => {
                let parts: Vec<String> = ls
                    .iter()
                    .map(|l| l.map(|i| i.to_string()).unwrap_or_else(|| "-".into()))
                    .collect();
                format!("words:{}", parts.join(","))
            }
            Payload::Spans(spans) => {
                let parts: Vec<String> = spans.iter().map(Span::vote_key).collect();
                format!("spans:{}", parts.join(";"))
            }
            Payload::Answer { sentence, text } => format!("answer:{sentence}:{text}"),
            Payload::Unanswerable => "unanswerable".into(),
            Payload::Relations { triples, .. } => {
                let parts: Vec<String> = triples.iter().map(RelationTriple::vote_key).collect();
                format!("relations:{}", parts.join(";"))
            }
            Payload::Events(frames) => {
                let parts: Vec<String> = frames
                    .iter()
                    .map(|f| format!("{}@{}", f.event_type, f.trigger.vote_key()))
                    .collect();
                format!("events:{}", parts.join(";"))
            }
            Payload::Arcs(arcs) => {
                let parts: Vec<String> =
                    arcs.iter().map(|a| format!("{}:{}", a.vote_key(), a.relation)).collect();
                format!("arcs:{}", parts.join(";"))
            }
            Payload::Frame { sense, arguments } => {
                let parts: Vec<String> =
                    arguments.iter().map(|(r, s)| format!("{r}={}", s.vote_key())).collect();
                format!("frame:{sense}:{}", parts.join(";"))
            }
        }
    }

    /// Whether this payload shape is legal for `task`.
    pub fn matches_task(&self, task: TaskId) -> bool {
        match (task, self) {
            (TaskId::Qa, Payload::Answer { .. } | Payload::Unanswerable) => true,
            (TaskId::Commonsense | TaskId::Nli | TaskId::Sentiment, Payload::Label(_)) => true,
            (TaskId::Ner, Payload::Spans(_)) => true,
            (TaskId::RelationExtraction, Payload::Relations { .. }) => true,
            (TaskId::EventExtraction, Payload::Events(_)) => true,
            (TaskId::Pos, Payload::WordLabels(_)) => true,
            (TaskId::Dependency, Payload::Arcs(_)) => true,
            (TaskId::Srl, Payload::Frame { .. }) => true,
            _ => false,
        }
    }
}

/// A task-typed output plus provenance: which prompts contributed and how
/// the votes fell.
///
/// For single-decision tasks the vote counts sum to the number of
/// contributing (non-abstaining) prompts. For span-shaped payloads votes are
/// per unit, keyed by the unit's `vote_key`, each bounded by the prompt
/// count for its fan-out arm.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Prediction {
    pub task: TaskId,
    pub payload: Payload,
    #[serde(default)]
    pub votes: BTreeMap<String, usize>,
    #[serde(default)]
    pub source_prompts: Vec<String>,
    #[serde(default)]
    pub diagnostics: Vec<String>,
}

impl Prediction {
    pub fn new(task: TaskId, payload: Payload) -> Self {
        Prediction { task, payload, votes: BTreeMap::new(), source_prompts: Vec::new(), diagnostics: Vec::new() }
    }

    /// A gold annotation: no votes, no source prompts.
    pub fn gold(task: TaskId, payload: Payload) -> Self {
        Prediction::new(task, payload)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn payload_shapes_match_tasks() {
        assert!(Payload::Label(0).matches_task(TaskId::Sentiment));
        assert!(!Payload::Label(0).matches_task(TaskId::Ner));
        assert!(Payload::Unanswerable.matches_task(TaskId::Qa));
        assert!(Payload::Spans(vec![]).matches_task(TaskId::Ner));
    }

    #[test]
    fn vote_keys_are_stable() {
        let a = Payload::Answer { sentence: 3, text: "Seoul".into() };
        assert_eq!(a.vote_key(), "answer:3:Seoul");
        let arc = DepArc::new(1, 0, "nsubj");
        assert_eq!(arc.vote_key(), "w1->w0");
    }
}
