//! Task instances and demonstrations.

use serde::{Deserialize, Serialize};

use super::{CoreError, Prediction, TaskId, TaskKind};

/// Predicate annotation for semantic role labeling: where the predicate sits
/// in the text and which sense candidates apply to it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PredicateInfo {
    pub start: usize,
    pub end: usize,
    pub surface: String,
    pub senses: Vec<String>,
}

/// One input unit of any task.
///
/// Only the fields required by the instance's task may be present;
/// [`TaskInstance::validate_for`] enforces the per-task shape.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TaskInstance {
    pub id: String,
    pub text: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub question: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub options: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub premise: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hypothesis: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub predicate: Option<PredicateInfo>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gold: Option<Prediction>,
}

impl TaskInstance {
    pub fn new(id: impl Into<String>, text: impl Into<String>) -> Self {
        TaskInstance {
            id: id.into(),
            text: text.into(),
            question: None,
            options: None,
            premise: None,
            hypothesis: None,
            predicate: None,
            gold: None,
        }
    }

    pub fn with_question(mut self, q: impl Into<String>) -> Self {
        self.question = Some(q.into());
        self
    }

    pub fn with_options(mut self, options: Vec<String>) -> Self {
        self.options = Some(options);
        self
    }

    pub fn with_premise_hypothesis(mut self, premise: impl Into<String>, hypothesis: impl Into<String>) -> Self {
        self.premise = Some(premise.into());
        self.hypothesis = Some(hypothesis.into());
        self
    }

    pub fn with_predicate(mut self, predicate: PredicateInfo) -> Self {
        self.predicate = Some(predicate);
        self
    }

    pub fn with_gold(mut self, gold: Prediction) -> Self {
        self.gold = Some(gold);
        self
    }

    /// Check that exactly the fields required by `task` are present and that
    /// any gold payload has the right shape.
    pub fn validate_for(&self, task: &TaskKind) -> Result<(), CoreError> {
        let fail = |message: String| CoreError::InvalidInstance { id: self.id.clone(), message };
        if self.text.is_empty() {
            return Err(fail("text must be non-empty".into()));
        }
        let (need_q, need_opts, need_ph, need_pred) = match task.id {
            TaskId::Qa => (true, false, false, false),
            TaskId::Commonsense => (true, true, false, false),
            TaskId::Nli => (false, false, true, false),
            TaskId::Srl => (false, false, false, true),
            _ => (false, false, false, false),
        };
        let check = |present: bool, required: bool, field: &str| -> Result<(), CoreError> {
            if required && !present {
                Err(fail(format!("{field} required for task {}", task.id)))
            } else if !required && present {
                Err(fail(format!("{field} not allowed for task {}", task.id)))
            } else {
                Ok(())
            }
        };
        check(self.question.is_some(), need_q, "question")?;
        check(self.options.is_some(), need_opts, "options")?;
        check(self.premise.is_some() && self.hypothesis.is_some(), need_ph, "premise/hypothesis")?;
        check(self.predicate.is_some(), need_pred, "predicate")?;
        if let Some(opts) = &self.options {
            if opts.is_empty() {
                return Err(fail("options must be non-empty".into()));
            }
        }
        if let Some(pred) = &self.predicate {
            if pred.senses.is_empty() {
                return Err(fail("predicate sense inventory must be non-empty".into()));
            }
        }
        if let Some(gold) = &self.gold {
            if gold.task != task.id || !gold.payload.matches_task(task.id) {
                return Err(fail("gold payload does not match the task".into()));
            }
        }
        Ok(())
    }
}

/// A labeled training example rendered into the codec's output grammar,
/// optionally carrying a generated rationale.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Demonstration {
    pub instance: TaskInstance,
    pub rendered_label: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rationale: Option<String>,
}

impl Demonstration {
    pub fn new(instance: TaskInstance, rendered_label: impl Into<String>) -> Self {
        Demonstration { instance, rendered_label: rendered_label.into(), rationale: None }
    }

    pub fn with_rationale(mut self, rationale: impl Into<String>) -> Self {
        self.rationale = Some(rationale.into());
        self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::core::Payload;

    #[test]
    fn validates_required_fields() {
        let task = TaskKind::standard(TaskId::Qa);
        let inst = TaskInstance::new("q1", "The capital of Japan is Tokyo.");
        assert!(inst.validate_for(&task).is_err());
        let inst = inst.with_question("What is the capital of Japan?");
        inst.validate_for(&task).unwrap();
    }

    #[test]
    fn rejects_extraneous_fields() {
        let task = TaskKind::standard(TaskId::Ner);
        let inst = TaskInstance::new("n1", "he lives in Seattle").with_question("?");
        assert!(inst.validate_for(&task).is_err());
    }

    #[test]
    fn rejects_mismatched_gold() {
        let task = TaskKind::standard(TaskId::Sentiment);
        let inst = TaskInstance::new("s1", "great film")
            .with_gold(Prediction::gold(TaskId::Sentiment, Payload::Spans(vec![])));
        assert!(inst.validate_for(&task).is_err());
    }
}
