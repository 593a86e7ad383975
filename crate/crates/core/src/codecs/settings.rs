//! Per-task codec configuration: marker strings, label words, option style,
//! and the rationale sentinel.

use serde::{Deserialize, Serialize};

use crate::core::{TaskId, TaskKind};

use super::{choice::OptionStyle, marker::MarkerGrammar};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CodecSettings {
    pub marker_open: String,
    pub marker_close: String,
    /// `(label word, label name)` pairs for label-word tasks.
    pub label_words: Vec<(String, String)>,
    pub option_style: OptionStyle,
    pub sentinel: String,
}

impl CodecSettings {
    /// Defaults per task: `##`/`@@` for NER, event, SRL and POS word
    /// marking; `@`/`#` for relation extraction and dependency parsing.
    pub fn defaults(task: &TaskKind) -> Self {
        let (open, close) = match task.id {
            TaskId::RelationExtraction | TaskId::Dependency => ("@", "#"),
            _ => ("##", "@@"),
        };
        let label_words = match task.id {
            TaskId::Sentiment => task
                .label_space
                .iter()
                .map(|label| (label.to_lowercase(), label.clone()))
                .collect(),
            _ => Vec::new(),
        };
        let option_style = match task.id {
            TaskId::Pos => OptionStyle::Numeric,
            _ => OptionStyle::Alphabetic,
        };
        CodecSettings {
            marker_open: open.into(),
            marker_close: close.into(),
            label_words,
            option_style,
            sentinel: "Answer:".into(),
        }
    }

    pub fn grammar(&self) -> Result<MarkerGrammar, super::CodecError> {
        MarkerGrammar::new(self.marker_open.clone(), self.marker_close.clone())
    }
}
