//! Prompt templates: a skeleton with named placeholders, rendered
//! deterministically for demonstrations and the test instance.
//!
//! Skeletons use `{header}`, `{demos}`, `{input}`, `{question}`, `{options}`,
//! `{premise}`, `{hypothesis}` and fan-out variables like `{label}`. The text
//! after `{demos}` doubles as the rendering rule for each demonstration: a
//! demonstration is that block applied to its own instance, followed by its
//! gold output (and, when rationales are on, the rationale and an
//! `Answer:`-sentinel line).

use std::path::Path;

use crate::codecs::{render_option, OptionStyle};
use crate::core::{TaskId, TaskInstance};

use super::PromptError;

pub(crate) const DEMOS_SLOT: &str = "{demos}";

#[derive(Debug, Clone)]
pub struct PromptTemplate {
    pub task: TaskId,
    pub header: String,
    pub skeleton: String,
    pub with_rationale: bool,
    pub sentinel: String,
    pub option_style: OptionStyle,
}

impl PromptTemplate {
    pub fn new(task: TaskId, header: impl Into<String>, skeleton: impl Into<String>) -> Result<Self, PromptError> {
        let skeleton = skeleton.into();
        if skeleton.matches(DEMOS_SLOT).count() != 1 {
            return Err(PromptError::InvalidTemplate(
                "skeleton must contain exactly one {demos} placeholder".into(),
            ));
        }
        Ok(PromptTemplate {
            task,
            header: header.into(),
            skeleton,
            with_rationale: false,
            sentinel: "Answer:".into(),
            option_style: OptionStyle::default(),
        })
    }

    /// Load a skeleton from a UTF-8 template file.
    pub fn from_file(task: TaskId, header: impl Into<String>, path: &Path) -> Result<Self, PromptError> {
        let skeleton = std::fs::read_to_string(path).map_err(|source| PromptError::TemplateIo {
            path: path.display().to_string(),
            source,
        })?;
        PromptTemplate::new(task, header, skeleton)
    }

    pub fn with_rationale(mut self, on: bool) -> Self {
        self.with_rationale = on;
        self
    }

    pub fn with_option_style(mut self, style: OptionStyle) -> Self {
        self.option_style = style;
        self
    }

    pub fn with_sentinel(mut self, sentinel: impl Into<String>) -> Self {
        self.sentinel = sentinel.into();
        self
    }

    /// Substitute fan-out variables like `{label}` in the header and
    /// skeleton, returning the bound template.
    pub fn bind(&self, vars: &[(&str, &str)]) -> PromptTemplate {
        let mut bound = self.clone();
        for (key, value) in vars {
            let placeholder = format!("{{{key}}}");
            bound.header = bound.header.replace(&placeholder, value);
            bound.skeleton = bound.skeleton.replace(&placeholder, value);
        }
        bound
    }

    /// The skeleton split at the demos slot, with `{header}` and instance
    /// fields substituted: everything before the slot, and the query block
    /// after it.
    pub fn render_parts(&self, instance: &TaskInstance) -> (String, String) {
        let slot = self.skeleton.find(DEMOS_SLOT).expect("validated at construction");
        let prefix = &self.skeleton[..slot];
        let suffix = &self.skeleton[slot + DEMOS_SLOT.len()..];
        (self.render_text(prefix, instance), self.render_text(suffix, instance))
    }

    /// The query block (text after the demos slot) rendered for an instance.
    /// This is also the demonstration rendering rule.
    pub fn render_query_block(&self, instance: &TaskInstance) -> String {
        self.render_parts(instance).1
    }

    fn render_text(&self, text: &str, instance: &TaskInstance) -> String {
        let question = instance.question.clone().unwrap_or_else(|| instance.text.clone());
        let options = instance
            .options
            .as_deref()
            .map(|opts| self.render_options(opts))
            .unwrap_or_default();
        text.replace("{header}", &self.header)
            .replace("{input}", &instance.text)
            .replace("{question}", &question)
            .replace("{options}", &options)
            .replace("{premise}", instance.premise.as_deref().unwrap_or(""))
            .replace("{hypothesis}", instance.hypothesis.as_deref().unwrap_or(""))
    }

    pub fn render_options(&self, options: &[String]) -> String {
        options
            .iter()
            .enumerate()
            .map(|(i, o)| render_option(i, o, self.option_style))
            .collect::<Vec<_>>()
            .join("; ")
    }
}
