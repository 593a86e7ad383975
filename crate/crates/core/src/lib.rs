//! Prompt orchestration for applying a chat LLM to ten classic NLP tasks.
//!
//! The crate is organized around a small set of ideas:
//!
//! - **Demonstration retrieval** ([`retrieval`]): seeded random sampling and
//!   exact cosine kNN over precomputed sentence- or token-level embeddings.
//! - **Multi-prompt voting** ([`prompting`], [`strategies`]): one input is
//!   expanded into N prompts with disjoint demonstration sets under a hard
//!   token budget, and the N decisions are majority-voted.
//! - **Generative task codecs** ([`codecs`]): strict output grammars
//!   (copy-and-mark spans, yes/no, multi-choice, sentence-indexed answers,
//!   span-or-null, label words) with decoders that either accept exactly,
//!   realign fuzzily within an edit budget, or reject.
//! - **Per-task pipelines** ([`pipelines`]): fan-out over entity types,
//!   relations, words, roles, and senses, including the two-step
//!   decompositions for relation extraction, event extraction, dependency
//!   parsing, and semantic role labeling.
//! - **Cross-cutting strategies** ([`strategies`]): offline rationale
//!   generation, removal-only self-verification, and paraphrase voting.
//! - **Evaluation** ([`eval`]): dataset loaders (jsonl, CoNLL columns) and
//!   the standard metrics (accuracy, span-level micro F1, UAS/LAS,
//!   trigger/argument F1).
//!
//! Everything runs hermetically against [`backend::ScriptedBackend`]; the
//! [`backend::HttpBackend`] speaks a single-turn chat-completion API for live
//! runs.

pub mod backend;
pub mod codecs;
pub mod core;
pub mod eval;
pub mod pipelines;
pub mod prompting;
pub mod retrieval;
pub mod strategies;

pub use crate::core::{
    CodecFamily, CoreError, Demonstration, Payload, PredicateInfo, Prediction, Span, SpanError,
    TaskId, TaskInstance, TaskKind,
};
