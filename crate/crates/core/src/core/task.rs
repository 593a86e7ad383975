//! Task registry: the ten supported tasks, their label inventories, and the
//! output-grammar family used at each pipeline step.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::CoreError;

/// The ten supported tasks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TaskId {
    Qa,
    Commonsense,
    Nli,
    Sentiment,
    Ner,
    RelationExtraction,
    EventExtraction,
    Pos,
    Dependency,
    Srl,
}

impl TaskId {
    pub const ALL: [TaskId; 10] = [
        TaskId::Qa,
        TaskId::Commonsense,
        TaskId::Nli,
        TaskId::Sentiment,
        TaskId::Ner,
        TaskId::RelationExtraction,
        TaskId::EventExtraction,
        TaskId::Pos,
        TaskId::Dependency,
        TaskId::Srl,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            TaskId::Qa => "qa",
            TaskId::Commonsense => "commonsense",
            TaskId::Nli => "nli",
            TaskId::Sentiment => "sentiment",
            TaskId::Ner => "ner",
            TaskId::RelationExtraction => "relation_extraction",
            TaskId::EventExtraction => "event_extraction",
            TaskId::Pos => "pos",
            TaskId::Dependency => "dependency",
            TaskId::Srl => "srl",
        }
    }

    pub fn parse(s: &str) -> Option<TaskId> {
        TaskId::ALL.iter().copied().find(|t| t.as_str() == s)
    }

    /// Sentence-level tasks admit paraphrase voting; token-level tasks do
    /// not, because paraphrased words cannot be aligned back to the input.
    pub fn is_sentence_level(&self) -> bool {
        matches!(self, TaskId::Qa | TaskId::Commonsense | TaskId::Nli | TaskId::Sentiment)
    }
}

impl std::fmt::Display for TaskId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Output-grammar family used for one pipeline step.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CodecFamily {
    MarkerSpan,
    BinaryQuestion,
    SpanOrNull,
    MultiChoice,
    QaSentenceIndex,
    LabelWord,
}

/// A task with its label inventories.
///
/// `label_space` is the task's primary inventory: entity types for NER and
/// relation extraction, event types for event extraction, the three logical
/// relations for NLI, sentiment labels, the POS tagset, dependency relation
/// labels, and the semantic-role inventory for SRL. Two-step tasks with a
/// second inventory (relation labels for relation extraction) carry it in
/// `step2_labels`; event extraction's per-type role inventories live in
/// `role_inventories`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TaskKind {
    pub id: TaskId,
    pub label_space: Vec<String>,
    #[serde(default)]
    pub step2_labels: Vec<String>,
    #[serde(default)]
    pub role_inventories: BTreeMap<String, Vec<String>>,
    codec_families: Vec<CodecFamily>,
}

fn codec_families_for(id: TaskId) -> Vec<CodecFamily> {
    use CodecFamily::*;
    match id {
        TaskId::Qa => vec![QaSentenceIndex],
        TaskId::Commonsense => vec![MultiChoice],
        TaskId::Nli => vec![BinaryQuestion],
        TaskId::Sentiment => vec![LabelWord],
        TaskId::Ner => vec![MarkerSpan],
        TaskId::RelationExtraction => vec![MarkerSpan, BinaryQuestion],
        TaskId::EventExtraction => vec![SpanOrNull, SpanOrNull],
        TaskId::Pos => vec![MultiChoice],
        TaskId::Dependency => vec![MarkerSpan, BinaryQuestion],
        TaskId::Srl => vec![BinaryQuestion, SpanOrNull],
    }
}

impl TaskKind {
    /// Build a task with its primary label inventory. Two-step tasks still
    /// need their second inventory attached before [`TaskKind::validate`]
    /// passes.
    pub fn new(id: TaskId, label_space: Vec<String>) -> Result<Self, CoreError> {
        if label_space.is_empty() {
            return Err(CoreError::InvalidTask {
                task: id.to_string(),
                message: "label_space must be non-empty".into(),
            });
        }
        Ok(TaskKind {
            id,
            label_space,
            step2_labels: Vec::new(),
            role_inventories: BTreeMap::new(),
            codec_families: codec_families_for(id),
        })
    }

    pub fn with_step2_labels(mut self, labels: Vec<String>) -> Self {
        self.step2_labels = labels;
        self
    }

    pub fn with_role_inventory(mut self, event_type: impl Into<String>, roles: Vec<String>) -> Self {
        self.role_inventories.insert(event_type.into(), roles);
        self
    }

    /// One codec family per pipeline step.
    pub fn codec_families(&self) -> &[CodecFamily] {
        &self.codec_families
    }

    pub fn codec_family(&self, step: usize) -> Option<CodecFamily> {
        self.codec_families.get(step).copied()
    }

    pub fn steps(&self) -> usize {
        self.codec_families.len()
    }

    pub fn label_index(&self, label: &str) -> Option<usize> {
        self.label_space.iter().position(|l| l == label)
    }

    /// Roles for one event type (event extraction).
    pub fn roles_for(&self, event_type: &str) -> &[String] {
        self.role_inventories.get(event_type).map(|v| v.as_slice()).unwrap_or(&[])
    }

    pub fn validate(&self) -> Result<(), CoreError> {
        let fail = |message: String| CoreError::InvalidTask { task: self.id.to_string(), message };
        if self.label_space.is_empty() {
            return Err(fail("label_space must be non-empty".into()));
        }
        if self.codec_families != codec_families_for(self.id) {
            return Err(fail("codec families do not match the task's pipeline steps".into()));
        }
        match self.id {
            TaskId::RelationExtraction if self.step2_labels.is_empty() => {
                Err(fail("relation labels (step2_labels) required".into()))
            }
            TaskId::EventExtraction => {
                for ty in &self.label_space {
                    if self.roles_for(ty).is_empty() {
                        return Err(fail(format!("event type {ty} has no role inventory")));
                    }
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }

    /// Desk-scale default inventories for each task.
    pub fn standard(id: TaskId) -> TaskKind {
        let labels: Vec<String> = match id {
            TaskId::Qa => vec!["answerable", "unanswerable"],
            TaskId::Commonsense => vec!["A", "B", "C", "D", "E"],
            TaskId::Nli => vec!["entailment", "contradiction", "neutral"],
            TaskId::Sentiment => vec!["positive", "negative"],
            TaskId::Ner => vec!["PER", "ORG", "LOC", "MISC"],
            TaskId::RelationExtraction => vec!["PER", "ORG", "LOC"],
            TaskId::EventExtraction => vec!["attack", "meet", "transport"],
            TaskId::Pos => return standard_pos(),
            TaskId::Dependency => vec!["nsubj", "dobj", "det", "amod", "nmod", "advmod"],
            TaskId::Srl => vec!["A0", "A1", "A2", "AM-TMP", "AM-LOC"],
        }
        .into_iter()
        .map(String::from)
        .collect();
        let mut kind = TaskKind {
            id,
            label_space: labels,
            step2_labels: Vec::new(),
            role_inventories: BTreeMap::new(),
            codec_families: codec_families_for(id),
        };
        kind = match id {
            TaskId::RelationExtraction => kind.with_step2_labels(str_vec(&[
                "founded",
                "works_for",
                "based_in",
                "born_in",
                "part_of",
                "located_in",
            ])),
            TaskId::EventExtraction => kind
                .with_role_inventory("attack", str_vec(&["attacker", "target", "instrument", "place"]))
                .with_role_inventory("meet", str_vec(&["entity", "place", "time"]))
                .with_role_inventory("transport", str_vec(&["agent", "artifact", "origin", "destination"])),
            _ => kind,
        };
        kind.validate().expect("standard inventory is valid");
        kind
    }
}

fn str_vec(items: &[&str]) -> Vec<String> {
    items.iter().map(|s| s.to_string()).collect()
}

/// The 45-tag WSJ part-of-speech inventory in its conventional order
/// (NNPS is option 15 when rendered 1-based).
pub const PTB_POS_TAGS: [&str; 45] = [
    "CC", "CD", "DT", "EX", "FW", "IN", "JJ", "JJR", "JJS", "LS", "MD", "NN", "NNS", "NNP",
    "NNPS", "PDT", "POS", "PRP", "PRP$", "RB", "RBR", "RBS", "RP", "SYM", "TO", "UH", "VB",
    "VBD", "VBG", "VBN", "VBP", "VBZ", "WDT", "WP", "WP$", "WRB", "#", "$", "''", "(", ")",
    ",", ".", ":", "``",
];

/// Human-readable gloss for a PTB tag, used when rendering multi-choice
/// option lists.
pub fn pos_tag_gloss(tag: &str) -> &'static str {
    match tag {
        "CC" => "Coordinating conjunction",
        "CD" => "Cardinal number",
        "DT" => "Determiner",
        "EX" => "Existential there",
        "FW" => "Foreign word",
        "IN" => "Preposition or subordinating conjunction",
        "JJ" => "Adjective",
        "JJR" => "Adjective, comparative",
        "JJS" => "Adjective, superlative",
        "LS" => "List item marker",
        "MD" => "Modal",
        "NN" => "Noun, singular or mass",
        "NNS" => "Noun, plural",
        "NNP" => "Proper noun, singular",
        "NNPS" => "Proper noun, plural",
        "PDT" => "Predeterminer",
        "POS" => "Possessive ending",
        "PRP" => "Personal pronoun",
        "PRP$" => "Possessive pronoun",
        "RB" => "Adverb",
        "RBR" => "Adverb, comparative",
        "RBS" => "Adverb, superlative",
        "RP" => "Particle",
        "SYM" => "Symbol",
        "TO" => "to",
        "UH" => "Interjection",
        "VB" => "Verb, base form",
        "VBD" => "Verb, past tense",
        "VBG" => "Verb, gerund or present participle",
        "VBN" => "Verb, past participle",
        "VBP" => "Verb, non-3rd person singular present",
        "VBZ" => "Verb, 3rd person singular present",
        "WDT" => "Wh-determiner",
        "WP" => "Wh-pronoun",
        "WP$" => "Possessive wh-pronoun",
        "WRB" => "Wh-adverb",
        "#" => "Pound sign",
        "$" => "Dollar sign",
        "''" => "Closing quotation mark",
        "(" => "Opening parenthesis",
        ")" => "Closing parenthesis",
        "," => "Comma",
        "." => "Sentence-final punctuation",
        ":" => "Colon or ellipsis",
        "``" => "Opening quotation mark",
        _ => "",
    }
}

fn standard_pos() -> TaskKind {
    TaskKind::new(TaskId::Pos, PTB_POS_TAGS.iter().map(|s| s.to_string()).collect())
        .expect("POS inventory is valid")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_task_has_one_family_per_step() {
        for id in TaskId::ALL {
            let kind = TaskKind::standard(id);
            assert!(!kind.label_space.is_empty());
            assert!(kind.steps() >= 1 && kind.steps() <= 2);
            kind.validate().unwrap();
        }
    }

    #[test]
    fn two_step_tasks_declare_both_families() {
        let re = TaskKind::standard(TaskId::RelationExtraction);
        assert_eq!(re.codec_families(), &[CodecFamily::MarkerSpan, CodecFamily::BinaryQuestion]);
        assert_eq!(re.step2_labels.len(), 6);
        let srl = TaskKind::standard(TaskId::Srl);
        assert_eq!(srl.codec_families(), &[CodecFamily::BinaryQuestion, CodecFamily::SpanOrNull]);
    }

    #[test]
    fn empty_label_space_rejected() {
        assert!(TaskKind::new(TaskId::Ner, vec![]).is_err());
    }

    #[test]
    fn pos_inventory_places_nnps_fifteenth() {
        let pos = TaskKind::standard(TaskId::Pos);
        assert_eq!(pos.label_space.len(), 45);
        assert_eq!(pos.label_space[14], "NNPS");
    }
}
