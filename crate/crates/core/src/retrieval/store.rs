//! Embedding store ingest.
//!
//! File format: a header line `dim=<D> level=<sentence|token> provider=<tag>`
//! followed by one record per line, `<id>\t<token-index or ->\t<D
//! space-separated floats>`. Ids are opaque UTF-8 without tabs; floats are
//! parsed round-to-nearest. Zero vectors are rejected because cosine
//! similarity is undefined for them.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::RetrievalError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StoreLevel {
    Sentence,
    Token,
}

/// Precomputed embeddings keyed by instance id. Read-only after ingest;
/// sharing across concurrent retrieval is safe.
#[derive(Debug, Clone)]
pub struct EmbeddingStore {
    provider_tag: String,
    dim: usize,
    level: StoreLevel,
    sentence: BTreeMap<String, Vec<f32>>,
    tokens: BTreeMap<String, Vec<Vec<f32>>>,
}

impl EmbeddingStore {
    pub fn new(provider_tag: impl Into<String>, dim: usize, level: StoreLevel) -> Self {
        EmbeddingStore {
            provider_tag: provider_tag.into(),
            dim,
            level,
            sentence: BTreeMap::new(),
            tokens: BTreeMap::new(),
        }
    }

    pub fn provider_tag(&self) -> &str {
        &self.provider_tag
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn level(&self) -> StoreLevel {
        self.level
    }

    pub fn len(&self) -> usize {
        match self.level {
            StoreLevel::Sentence => self.sentence.len(),
            StoreLevel::Token => self.tokens.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn contains(&self, id: &str) -> bool {
        self.sentence.contains_key(id) || self.tokens.contains_key(id)
    }

    /// Ids in ascending order.
    pub fn ids(&self) -> impl Iterator<Item = &str> {
        match self.level {
            StoreLevel::Sentence => itertools_keys(&self.sentence),
            StoreLevel::Token => itertools_keys(&self.tokens),
        }
    }

    pub fn sentence_vector(&self, id: &str) -> Option<&[f32]> {
        self.sentence.get(id).map(Vec::as_slice)
    }

    pub fn token_vectors(&self, id: &str) -> Option<&[Vec<f32>]> {
        self.tokens.get(id).map(Vec::as_slice)
    }

    pub fn insert_sentence(&mut self, id: String, vector: Vec<f32>) -> Result<(), RetrievalError> {
        self.check_vector(&vector)?;
        if self.sentence.insert(id.clone(), vector).is_some() {
            return Err(RetrievalError::FormatError {
                line: 0,
                message: format!("duplicate id {id:?}"),
            });
        }
        Ok(())
    }

    pub fn insert_token(&mut self, id: String, vector: Vec<f32>) -> Result<(), RetrievalError> {
        self.check_vector(&vector)?;
        self.tokens.entry(id).or_default().push(vector);
        Ok(())
    }

    fn check_vector(&self, vector: &[f32]) -> Result<(), RetrievalError> {
        if vector.len() != self.dim {
            return Err(RetrievalError::DimensionMismatch { expected: self.dim, got: vector.len() });
        }
        if vector.iter().any(|x| !x.is_finite()) {
            return Err(RetrievalError::InvalidVector("NaN or Inf component".into()));
        }
        if vector.iter().all(|x| *x == 0.0) {
            return Err(RetrievalError::InvalidVector("zero vector (cosine undefined)".into()));
        }
        Ok(())
    }

    /// Load a store from the embedding file format.
    pub fn ingest(path: &Path) -> Result<EmbeddingStore, RetrievalError> {
        let content = std::fs::read_to_string(path)?;
        EmbeddingStore::parse(&content)
    }

    pub fn parse(content: &str) -> Result<EmbeddingStore, RetrievalError> {
        let mut lines = content.lines().enumerate();
        let (_, header) = lines.next().ok_or(RetrievalError::FormatError {
            line: 1,
            message: "missing header line".into(),
        })?;
        let (dim, level, provider) = parse_header(header)?;
        let mut store = EmbeddingStore::new(provider, dim, level);

        for (idx, line) in lines {
            let line_no = idx + 1;
            if line.trim().is_empty() {
                continue;
            }
            let mut parts = line.splitn(3, '\t');
            let id = parts.next().unwrap_or_default();
            let token_idx = parts.next().ok_or_else(|| RetrievalError::FormatError {
                line: line_no,
                message: "expected <id>\\t<token-index or ->\\t<floats>".into(),
            })?;
            let floats = parts.next().ok_or_else(|| RetrievalError::FormatError {
                line: line_no,
                message: "missing vector field".into(),
            })?;
            if id.is_empty() {
                return Err(RetrievalError::FormatError { line: line_no, message: "empty id".into() });
            }
            let vector: Vec<f32> = floats
                .split_whitespace()
                .map(|t| {
                    t.parse::<f32>().map_err(|_| RetrievalError::FormatError {
                        line: line_no,
                        message: format!("bad float {t:?}"),
                    })
                })
                .collect::<Result<_, _>>()?;
            if vector.len() != dim {
                return Err(RetrievalError::DimensionMismatch { expected: dim, got: vector.len() });
            }
            match (level, token_idx) {
                (StoreLevel::Sentence, "-") => {
                    store.insert_sentence(id.to_string(), vector).map_err(|e| at_line(e, line_no))?
                }
                (StoreLevel::Sentence, other) => {
                    return Err(RetrievalError::FormatError {
                        line: line_no,
                        message: format!("sentence-level record must use '-' token index, got {other:?}"),
                    })
                }
                (StoreLevel::Token, idx_str) => {
                    let token_index: usize = idx_str.parse().map_err(|_| RetrievalError::FormatError {
                        line: line_no,
                        message: format!("bad token index {idx_str:?}"),
                    })?;
                    let expected = store.tokens.get(id).map(Vec::len).unwrap_or(0);
                    if token_index != expected {
                        return Err(RetrievalError::FormatError {
                            line: line_no,
                            message: format!("token index {token_index} out of order (expected {expected})"),
                        });
                    }
                    store.insert_token(id.to_string(), vector).map_err(|e| at_line(e, line_no))?
                }
            }
        }
        Ok(store)
    }
}

fn at_line(err: RetrievalError, line: usize) -> RetrievalError {
    match err {
        RetrievalError::FormatError { message, .. } => RetrievalError::FormatError { line, message },
        other => other,
    }
}

fn itertools_keys<V>(map: &BTreeMap<String, V>) -> Box<dyn Iterator<Item = &str> + '_> {
    Box::new(map.keys().map(String::as_str))
}

fn parse_header(header: &str) -> Result<(usize, StoreLevel, String), RetrievalError> {
    let mut dim = None;
    let mut level = None;
    let mut provider = None;
    for field in header.split_whitespace() {
        let (key, value) = field.split_once('=').ok_or_else(|| RetrievalError::FormatError {
            line: 1,
            message: format!("bad header field {field:?}"),
        })?;
        match key {
            "dim" => {
                let d: usize = value.parse().map_err(|_| RetrievalError::FormatError {
                    line: 1,
                    message: format!("bad dim {value:?}"),
                })?;
                if d == 0 {
                    return Err(RetrievalError::FormatError { line: 1, message: "dim must be positive".into() });
                }
                dim = Some(d);
            }
            "level" => {
                level = Some(match value {
                    "sentence" => StoreLevel::Sentence,
                    "token" => StoreLevel::Token,
                    other => {
                        return Err(RetrievalError::FormatError {
                            line: 1,
                            message: format!("bad level {other:?}"),
                        })
                    }
                });
            }
            "provider" => provider = Some(value.to_string()),
            other => {
                return Err(RetrievalError::FormatError {
                    line: 1,
                    message: format!("unknown header key {other:?}"),
                })
            }
        }
    }
    match (dim, level, provider) {
        (Some(d), Some(l), Some(p)) => Ok((d, l, p)),
        _ => Err(RetrievalError::FormatError {
            line: 1,
            message: "header must declare dim=, level= and provider=".into(),
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ingests_sentence_store() {
        let content = "dim=4 level=sentence provider=simcse\n\
                       a\t-\t1 0 0 0\n\
                       b\t-\t0 1 0 0\n\
                       c\t-\t0 0 0.5 0.5\n";
        let store = EmbeddingStore::parse(content).unwrap();
        assert_eq!(store.len(), 3);
        assert_eq!(store.dim(), 4);
        assert_eq!(store.provider_tag(), "simcse");
        assert_eq!(store.sentence_vector("b"), Some([0.0, 1.0, 0.0, 0.0].as_slice()));
    }

    #[test]
    fn record_length_must_match_header_dim() {
        let content = "dim=4 level=sentence provider=ft\nx\t-\t1 0 0\n";
        assert!(matches!(
            EmbeddingStore::parse(content),
            Err(RetrievalError::DimensionMismatch { expected: 4, got: 3 })
        ));
    }

    #[test]
    fn empty_body_is_an_empty_store() {
        let store = EmbeddingStore::parse("dim=2 level=sentence provider=ft\n").unwrap();
        assert!(store.is_empty());
        let cfg = crate::retrieval::RetrievalConfig::new(1, crate::retrieval::RetrievalStrategy::KnnSentence, 0);
        assert!(matches!(
            crate::retrieval::retrieve(&store, crate::retrieval::Query::Vector(&[1.0, 0.0]), &cfg),
            Err(RetrievalError::EmptyPool)
        ));
    }

    #[test]
    fn token_store_requires_ordered_indices() {
        let good = "dim=2 level=token provider=ft\nx\t0\t1 0\nx\t1\t0 1\n";
        let store = EmbeddingStore::parse(good).unwrap();
        assert_eq!(store.token_vectors("x").unwrap().len(), 2);
        let bad = "dim=2 level=token provider=ft\nx\t1\t1 0\n";
        assert!(matches!(EmbeddingStore::parse(bad), Err(RetrievalError::FormatError { line: 2, .. })));
    }

    #[test]
    fn rejects_zero_and_nonfinite_vectors() {
        let zero = "dim=2 level=sentence provider=ft\nx\t-\t0 0\n";
        assert!(matches!(EmbeddingStore::parse(zero), Err(RetrievalError::InvalidVector(_))));
        let nan = "dim=2 level=sentence provider=ft\nx\t-\tNaN 1\n";
        assert!(matches!(EmbeddingStore::parse(nan), Err(RetrievalError::InvalidVector(_))));
    }

    #[test]
    fn rejects_duplicate_ids_and_bad_header() {
        let dup = "dim=2 level=sentence provider=ft\nx\t-\t1 0\nx\t-\t0 1\n";
        assert!(matches!(EmbeddingStore::parse(dup), Err(RetrievalError::FormatError { line: 3, .. })));
        assert!(EmbeddingStore::parse("dim=2 level=sentence\n").is_err());
        assert!(EmbeddingStore::parse("dim=0 level=sentence provider=x\n").is_err());
    }
}
