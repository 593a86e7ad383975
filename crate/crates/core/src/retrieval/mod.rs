//! Demonstration selection: seeded random sampling, exact sentence-level
//! cosine kNN, and token-level kNN over precomputed embeddings.
//!
//! Retrieval is exact by design: pools are desk-scale and downstream voting
//! depends on true neighbors, so there is no approximate index. Ties break
//! by ascending instance id for cross-platform reproducibility.

mod store;

pub use store::{EmbeddingStore, StoreLevel};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum RetrievalError {
    #[error("embedding file format error at line {line}: {message}")]
    FormatError { line: usize, message: String },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("retrieval pool is empty after exclusion")]
    EmptyPool,
    #[error("invalid vector: {0}")]
    InvalidVector(String),
    #[error("unknown instance id {0:?}")]
    UnknownId(String),
    #[error("failed to read embedding file: {0}")]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RetrievalStrategy {
    Random,
    KnnSentence,
    KnnToken,
}

/// How demonstrations are selected. `k` is the number of neighbors per
/// prompt; `exclude_self` removes the query's own id from the pool
/// (leave-one-out), which is the default whenever the query id exists in
/// the store.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RetrievalConfig {
    pub k: usize,
    pub strategy: RetrievalStrategy,
    pub seed: u64,
    pub exclude_self: bool,
}

impl RetrievalConfig {
    pub fn new(k: usize, strategy: RetrievalStrategy, seed: u64) -> Self {
        RetrievalConfig { k, strategy, seed, exclude_self: true }
    }
}

/// A retrieval query: either an id already in the store or a raw vector.
#[derive(Debug, Clone, Copy)]
pub enum Query<'a> {
    Id(&'a str),
    Vector(&'a [f32]),
}

/// Cosine similarity, accumulated in f64. Symmetric, and 1 for any nonzero
/// vector against itself.
pub fn cosine(u: &[f32], v: &[f32]) -> f64 {
    let mut dot = 0.0f64;
    let mut nu = 0.0f64;
    let mut nv = 0.0f64;
    for (a, b) in u.iter().zip(v.iter()) {
        dot += f64::from(*a) * f64::from(*b);
        nu += f64::from(*a) * f64::from(*a);
        nv += f64::from(*b) * f64::from(*b);
    }
    if nu == 0.0 || nv == 0.0 {
        return 0.0;
    }
    dot / (nu.sqrt() * nv.sqrt())
}

/// Retrieve an ordered list of up to `k` instance ids.
pub fn retrieve(store: &EmbeddingStore, query: Query<'_>, cfg: &RetrievalConfig) -> Result<Vec<String>, RetrievalError> {
    retrieve_filtered(store, query, cfg, |_| true)
}

/// [`retrieve`] restricted to candidate ids accepted by `allow` (used to
/// keep retrieval inside the demonstration pool when the store also carries
/// query vectors).
pub fn retrieve_filtered(
    store: &EmbeddingStore,
    query: Query<'_>,
    cfg: &RetrievalConfig,
    allow: impl Fn(&str) -> bool,
) -> Result<Vec<String>, RetrievalError> {
    let self_id = match query {
        Query::Id(id) => Some(id),
        Query::Vector(_) => None,
    };
    let candidates: Vec<&str> = store
        .ids()
        .filter(|id| allow(id))
        .filter(|id| !(cfg.exclude_self && Some(*id) == self_id))
        .collect();
    if candidates.is_empty() {
        return Err(RetrievalError::EmptyPool);
    }

    match cfg.strategy {
        RetrievalStrategy::Random => {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            let amount = cfg.k.min(candidates.len());
            let picked = rand::seq::index::sample(&mut rng, candidates.len(), amount);
            Ok(picked.iter().map(|i| candidates[i].to_string()).collect())
        }
        RetrievalStrategy::KnnSentence => {
            let query_vec = match query {
                Query::Vector(v) => v.to_vec(),
                Query::Id(id) => store
                    .sentence_vector(id)
                    .ok_or_else(|| RetrievalError::UnknownId(id.to_string()))?
                    .to_vec(),
            };
            check_query_vector(&query_vec, store.dim())?;
            let scored = candidates.into_iter().map(|id| {
                let sim = cosine(&query_vec, store.sentence_vector(id).expect("candidate id in store"));
                (sim, id)
            });
            Ok(top_k(scored, cfg.k))
        }
        RetrievalStrategy::KnnToken => {
            let query_tokens: Vec<Vec<f32>> = match query {
                Query::Vector(v) => vec![v.to_vec()],
                Query::Id(id) => store
                    .token_vectors(id)
                    .ok_or_else(|| RetrievalError::UnknownId(id.to_string()))?
                    .to_vec(),
            };
            token_knn(store, &query_tokens, cfg, &candidates)
        }
    }
}

/// Token-level retrieval: a candidate's score is the mean, over query
/// tokens, of the best cosine similarity against any of its tokens.
pub fn retrieve_token_level(
    store: &EmbeddingStore,
    query_tokens: &[Vec<f32>],
    cfg: &RetrievalConfig,
) -> Result<Vec<String>, RetrievalError> {
    let candidates: Vec<&str> = store.ids().collect();
    if candidates.is_empty() {
        return Err(RetrievalError::EmptyPool);
    }
    token_knn(store, query_tokens, cfg, &candidates)
}

fn token_knn(
    store: &EmbeddingStore,
    query_tokens: &[Vec<f32>],
    cfg: &RetrievalConfig,
    candidates: &[&str],
) -> Result<Vec<String>, RetrievalError> {
    if query_tokens.is_empty() {
        return Err(RetrievalError::InvalidVector("query has no token vectors".into()));
    }
    for token in query_tokens {
        check_query_vector(token, store.dim())?;
    }
    let scored = candidates.iter().map(|id| {
        let cand_tokens = store.token_vectors(id).expect("candidate id in store");
        let mut sum = 0.0f64;
        for q in query_tokens {
            let best = cand_tokens
                .iter()
                .map(|t| cosine(q, t))
                .fold(f64::NEG_INFINITY, f64::max);
            sum += best;
        }
        (sum / query_tokens.len() as f64, *id)
    });
    Ok(top_k(scored, cfg.k))
}

fn check_query_vector(v: &[f32], dim: usize) -> Result<(), RetrievalError> {
    if v.len() != dim {
        return Err(RetrievalError::DimensionMismatch { expected: dim, got: v.len() });
    }
    if v.iter().any(|x| !x.is_finite()) {
        return Err(RetrievalError::InvalidVector("query vector has NaN or Inf components".into()));
    }
    Ok(())
}

/// Sort by similarity descending, ties by ascending id; take k.
fn top_k<'a>(scored: impl Iterator<Item = (f64, &'a str)>, k: usize) -> Vec<String> {
    let mut all: Vec<(f64, &str)> = scored.collect();
    all.sort_by(|(sa, ia), (sb, ib)| sb.total_cmp(sa).then_with(|| ia.cmp(ib)));
    all.into_iter().take(k).map(|(_, id)| id.to_string()).collect()
}
