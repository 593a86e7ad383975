//! Template rendering, token budgeting, and the one-input-multiple-prompts
//! partition: N prompts per input, each with a disjoint demonstration set,
//! every prompt within the hard token limit.

mod budget;
mod plan;
mod template;
pub mod templates;

pub use budget::{count_tokens, CounterRule, TokenBudget, DEFAULT_TOKEN_LIMIT};
pub use plan::{assemble_prompt, build_prompt_plan, PlannedPrompt, PromptPlan};
pub use template::PromptTemplate;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum PromptError {
    #[error("header and query alone exceed the token budget ({count} > {limit})")]
    QueryTooLarge { count: usize, limit: usize },
    #[error("template invalid: {0}")]
    InvalidTemplate(String),
    #[error("failed to read template {path}: {source}")]
    TemplateIo {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Codec(#[from] crate::codecs::CodecError),
}
