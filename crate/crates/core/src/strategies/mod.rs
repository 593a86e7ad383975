//! Cross-cutting strategies: vote aggregation, offline rationale
//! generation, removal-only self-verification, and paraphrase voting.

mod paraphrase;
mod rationale;
mod tally;
mod verify;

pub use paraphrase::{paraphrase_vote, PARAPHRASE_TEMPERATURE};
pub use rationale::{generate_rationales, RationaleRecord, RationaleStore, RationaleSummary};
pub use tally::VoteTally;
pub use verify::self_verify;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum StrategyError {
    #[error("every prompt abstained; no vote was cast")]
    AllAbstained,
    #[error(transparent)]
    Backend(#[from] crate::backend::BackendError),
    #[error("rationale store corrupt at line {line}: {message}")]
    StoreCorrupt { line: usize, message: String },
    #[error("rationale store io error: {0}")]
    StoreIo(#[from] std::io::Error),
    #[error(transparent)]
    Codec(#[from] crate::codecs::CodecError),
}
