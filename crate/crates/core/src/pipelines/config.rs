//! Pipeline configuration.

use crate::codecs::CodecSettings;
use crate::core::TaskKind;
use crate::prompting::TokenBudget;
use crate::retrieval::{RetrievalConfig, RetrievalStrategy};

use super::PipelineError;

#[derive(Debug, Clone)]
pub struct PipelineConfig {
    pub task: TaskKind,
    pub retrieval: RetrievalConfig,
    /// Number of prompts per input (the multi-prompt N).
    pub n_prompts: usize,
    pub with_rationale: bool,
    pub self_verify: bool,
    /// Prompts per verification check; defaults to `n_prompts`.
    pub verify_n: Option<usize>,
    /// Paraphrase count K; the voting pool is K+1 including the original.
    pub paraphrase_k: usize,
    pub budget: TokenBudget,
    pub codec: CodecSettings,
    pub temperature: f64,
    pub max_output_tokens: usize,
}

impl PipelineConfig {
    pub fn new(task: TaskKind) -> Self {
        let codec = CodecSettings::defaults(&task);
        PipelineConfig {
            task,
            retrieval: RetrievalConfig::new(2, RetrievalStrategy::Random, 0),
            n_prompts: 1,
            with_rationale: false,
            self_verify: false,
            verify_n: None,
            paraphrase_k: 0,
            budget: TokenBudget::default(),
            codec,
            temperature: 0.0,
            max_output_tokens: 512,
        }
    }

    pub fn verify_n(&self) -> usize {
        self.verify_n.unwrap_or(self.n_prompts).max(1)
    }

    pub fn validate(&self) -> Result<(), PipelineError> {
        if self.n_prompts == 0 {
            return Err(PipelineError::Invalid("n_prompts must be at least 1".into()));
        }
        if self.retrieval.k == 0 {
            return Err(PipelineError::Invalid("retrieval k must be at least 1".into()));
        }
        if self.paraphrase_k > 0 && !self.task.id.is_sentence_level() {
            return Err(PipelineError::Invalid(format!(
                "paraphrase voting applies only to sentence-level tasks, not {}",
                self.task.id
            )));
        }
        self.task.validate()?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::core::TaskId;

    #[test]
    fn paraphrase_limited_to_sentence_level() {
        let mut cfg = PipelineConfig::new(TaskKind::standard(TaskId::Ner));
        cfg.paraphrase_k = 2;
        assert!(cfg.validate().is_err());
        let mut cfg = PipelineConfig::new(TaskKind::standard(TaskId::Sentiment));
        cfg.paraphrase_k = 2;
        cfg.validate().unwrap();
    }
}
