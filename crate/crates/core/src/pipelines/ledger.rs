//! The call ledger: one entry per backend call, carrying the step, the
//! request tag, the decode fidelity, and whether the cache served it. Ledger
//! length is exactly the task's call-count formula.

use serde::{Deserialize, Serialize};

use crate::backend::RequestTag;
use crate::codecs::Fidelity;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LedgerEntry {
    pub step: String,
    pub prompt_id: String,
    pub tag: RequestTag,
    pub fidelity: Fidelity,
    pub cached: bool,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct CallLedger {
    entries: Vec<LedgerEntry>,
}

impl CallLedger {
    pub fn new() -> Self {
        CallLedger::default()
    }

    pub fn push(&mut self, entry: LedgerEntry) {
        self.entries.push(entry);
    }

    pub fn record(&mut self, step: &str, prompt_id: &str, tag: RequestTag, fidelity: Fidelity, cached: bool) {
        self.entries.push(LedgerEntry {
            step: step.to_string(),
            prompt_id: prompt_id.to_string(),
            tag,
            fidelity,
            cached,
        });
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[LedgerEntry] {
        &self.entries
    }

    pub fn count_step(&self, step: &str) -> usize {
        self.entries.iter().filter(|e| e.step == step).count()
    }

    pub fn extend(&mut self, other: CallLedger) {
        self.entries.extend(other.entries);
    }
}
