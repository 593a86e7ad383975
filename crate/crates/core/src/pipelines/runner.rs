//! Shared pipeline machinery: retrieval of ranked demonstrations, fan-out of
//! N prompts per arm, and decode-vote plumbing.

use crate::backend::{Backend, CompletionRequest, RequestTag};
use crate::codecs::normalize::after_sentinel;
use crate::codecs::{binary_decode, BinaryAnswer, Fidelity};
use crate::core::{Demonstration, TaskInstance};
use crate::prompting::{build_prompt_plan, PromptTemplate};
use crate::retrieval::{retrieve_filtered, EmbeddingStore, Query, RetrievalConfig, RetrievalStrategy};
use crate::strategies::RationaleStore;

use super::demos::{Arm, DemoSource};
use super::ledger::CallLedger;
use super::{PipelineConfig, PipelineError};

/// Everything a pipeline run needs, shared across instances.
pub struct PipelineContext<'a> {
    pub backend: &'a dyn Backend,
    pub cfg: &'a PipelineConfig,
    pub demos: &'a DemoSource,
    pub store: Option<&'a EmbeddingStore>,
    pub rationales: Option<&'a RationaleStore>,
    /// Prepended to prompt ids so paraphrase runs get distinct tags.
    pub tag_prefix: String,
}

impl<'a> PipelineContext<'a> {
    pub fn new(backend: &'a dyn Backend, cfg: &'a PipelineConfig, demos: &'a DemoSource) -> Self {
        PipelineContext { backend, cfg, demos, store: None, rationales: None, tag_prefix: String::new() }
    }

    pub fn with_store(mut self, store: &'a EmbeddingStore) -> Self {
        self.store = Some(store);
        self
    }

    pub fn with_rationales(mut self, store: &'a RationaleStore) -> Self {
        self.rationales = Some(store);
        self
    }

    pub(crate) fn prefixed(&self, prefix: &str) -> PipelineContext<'a> {
        PipelineContext {
            backend: self.backend,
            cfg: self.cfg,
            demos: self.demos,
            store: self.store,
            rationales: self.rationales,
            tag_prefix: format!("{}{prefix}", self.tag_prefix),
        }
    }

    /// Ranked demonstration ids for one instance: `N*k` neighbors (or fewer
    /// when the pool is small), leave-one-out by default. Random retrieval
    /// derives a per-instance seed so different instances draw different
    /// demonstrations while the run stays reproducible.
    pub fn ranked_ids(&self, instance: &TaskInstance) -> Result<Vec<String>, PipelineError> {
        let k_total = self.cfg.retrieval.k * self.cfg.n_prompts;
        let mut cfg = self.cfg.retrieval.clone();
        cfg.k = k_total;
        match cfg.strategy {
            RetrievalStrategy::Random => {
                cfg.seed = cfg.seed ^ fnv1a64(&instance.id);
                let pool: Vec<&str> = self
                    .demos
                    .ids()
                    .filter(|id| !(cfg.exclude_self && *id == instance.id))
                    .collect();
                if pool.is_empty() {
                    return Err(PipelineError::Retrieval(crate::retrieval::RetrievalError::EmptyPool));
                }
                Ok(seeded_sample(&pool, k_total, cfg.seed))
            }
            RetrievalStrategy::KnnSentence | RetrievalStrategy::KnnToken => {
                let store = self.store.ok_or_else(|| {
                    PipelineError::Invalid("kNN retrieval requires an embedding store".into())
                })?;
                let ids = retrieve_filtered(store, Query::Id(&instance.id), &cfg, |id| {
                    self.demos.contains(id)
                })?;
                Ok(ids)
            }
        }
    }

    /// Render ranked ids into demonstrations for an arm, attaching stored
    /// rationales when the run uses them.
    pub fn demos_for(&self, ranked: &[String], arm: &Arm<'_>) -> Vec<Demonstration> {
        ranked
            .iter()
            .filter_map(|id| self.demos.render(id, arm, &self.cfg.task, &self.cfg.codec))
            .map(|mut demo| {
                if self.cfg.with_rationale {
                    if let Some(store) = self.rationales {
                        if let Some(record) = store.get(&demo.instance.id) {
                            demo.rationale = Some(record.rationale.clone());
                        }
                    }
                }
                demo
            })
            .collect()
    }

    /// Issue the N prompts for one arm and return the raw responses.
    pub fn fan(
        &self,
        instance: &TaskInstance,
        variant: &TaskInstance,
        template: &PromptTemplate,
        step: &str,
        arm_key: &str,
        demos_ranked: &[Demonstration],
    ) -> Result<Vec<PromptResult>, PipelineError> {
        let template = template.clone().with_rationale(self.cfg.with_rationale);
        let plan = build_prompt_plan(
            &template,
            demos_ranked,
            self.cfg.n_prompts,
            self.cfg.retrieval.k,
            variant,
            &self.cfg.budget,
        )?;
        let mut results = Vec::with_capacity(plan.prompts.len());
        for prompt in &plan.prompts {
            let prompt_id = format!("{}{step}/{arm_key}/{}", self.tag_prefix, prompt.prompt_id);
            let tag = RequestTag::new(self.cfg.task.id, instance.id.clone(), prompt_id.clone());
            let request = CompletionRequest::new(prompt.text.clone(), tag.clone())?
                .with_temperature(self.cfg.temperature);
            let response = self.backend.complete(&request)?;
            results.push(PromptResult {
                step: step.to_string(),
                prompt_id,
                tag,
                text: response.text,
                cached: response.cached,
            });
        }
        Ok(results)
    }

    /// The decision portion of a response: everything after the last
    /// rationale sentinel when rationales are on.
    pub fn decision_text<'t>(&self, text: &'t str) -> &'t str {
        if self.cfg.with_rationale {
            after_sentinel(text, &self.cfg.codec.sentinel)
        } else {
            text
        }
    }
}

/// One raw completion for one prompt of one arm.
#[derive(Debug, Clone)]
pub struct PromptResult {
    pub step: String,
    pub prompt_id: String,
    pub tag: RequestTag,
    pub text: String,
    pub cached: bool,
}

impl PromptResult {
    pub fn record(&self, ledger: &mut CallLedger, fidelity: Fidelity) {
        ledger.record(&self.step, &self.prompt_id, self.tag.clone(), fidelity, self.cached);
    }
}

/// Decode yes/no answers for one arm, recording ledger entries. Returns
/// `(yes_count, valid_count)`.
pub fn binary_votes(ctx: &PipelineContext<'_>, results: &[PromptResult], ledger: &mut CallLedger) -> (usize, usize) {
    let mut yes = 0;
    let mut valid = 0;
    for result in results {
        match binary_decode(ctx.decision_text(&result.text)) {
            BinaryAnswer::Yes => {
                yes += 1;
                valid += 1;
                result.record(ledger, Fidelity::Exact);
            }
            BinaryAnswer::No => {
                valid += 1;
                result.record(ledger, Fidelity::Exact);
            }
            BinaryAnswer::Invalid => result.record(ledger, Fidelity::Rejected),
        }
    }
    (yes, valid)
}

/// Majority threshold over valid (non-abstaining) outputs.
pub fn majority_threshold(valid: usize) -> usize {
    valid / 2 + 1
}

/// Argmax over `(yes, valid)` scores compared as exact rationals
/// (`yes_a/valid_a > yes_b/valid_b` iff `yes_a*valid_b > yes_b*valid_a`).
/// Returns `None` when every score is zero; ties resolve to the earliest
/// index.
pub fn argmax_yes_score(scores: &[(usize, usize)]) -> Option<usize> {
    let mut best: Option<usize> = None;
    for (i, &(yes, valid)) in scores.iter().enumerate() {
        if yes == 0 {
            continue;
        }
        match best {
            None => best = Some(i),
            Some(b) => {
                let (by, bv) = scores[b];
                if yes * bv > by * valid {
                    best = Some(i);
                }
            }
        }
    }
    best
}

/// Deterministic per-instance seed derivation (FNV-1a).
fn fnv1a64(s: &str) -> u64 {
    let mut hash = 0xcbf29ce484222325u64;
    for byte in s.as_bytes() {
        hash ^= u64::from(*byte);
        hash = hash.wrapping_mul(0x100000001b3);
    }
    hash
}

/// Seeded uniform sample without replacement from a sorted pool.
fn seeded_sample(pool: &[&str], k: usize, seed: u64) -> Vec<String> {
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let amount = k.min(pool.len());
    rand::seq::index::sample(&mut rng, pool.len(), amount)
        .iter()
        .map(|i| pool[i].to_string())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn argmax_uses_exact_rational_compare() {
        // 2/3 vs 3/3: the second wins.
        assert_eq!(argmax_yes_score(&[(2, 3), (3, 3)]), Some(1));
        // 1/2 == 2/4: tie resolves to the earlier index.
        assert_eq!(argmax_yes_score(&[(1, 2), (2, 4)]), Some(0));
        assert_eq!(argmax_yes_score(&[(0, 3), (0, 3)]), None);
        assert_eq!(argmax_yes_score(&[(0, 0)]), None);
    }

    #[test]
    fn majority_is_strict() {
        assert_eq!(majority_threshold(3), 2);
        assert_eq!(majority_threshold(2), 2);
        assert_eq!(majority_threshold(1), 1);
        assert_eq!(majority_threshold(0), 1);
    }

    #[test]
    fn per_instance_seeds_differ_but_are_stable() {
        assert_eq!(fnv1a64("s1"), fnv1a64("s1"));
        assert_ne!(fnv1a64("s1"), fnv1a64("s2"));
    }
}
