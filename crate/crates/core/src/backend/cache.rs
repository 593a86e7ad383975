//! Append-only response cache keyed by request digest, persisted one record
//! per line as `<key>\t<base64 response text>` so expensive live runs can be
//! audited and replayed.

use std::collections::HashMap;
use std::fs::{File, OpenOptions};
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::{Mutex, RwLock};

use base64::engine::general_purpose::STANDARD as BASE64;
use base64::Engine;

use super::{cache_key, Backend, BackendError, CompletionRequest, CompletionResponse};

/// Concurrent-read, serialized-append completion cache.
pub struct CompletionCache {
    path: PathBuf,
    entries: RwLock<HashMap<String, String>>,
    appender: Mutex<File>,
}

impl CompletionCache {
    /// Open (or create) a cache file and load its entries.
    pub fn open(path: &Path) -> Result<Self, BackendError> {
        let mut entries = HashMap::new();
        if path.exists() {
            let content = std::fs::read_to_string(path)?;
            for (idx, line) in content.lines().enumerate() {
                if line.is_empty() {
                    continue;
                }
                let (key, encoded) = line.split_once('\t').ok_or(BackendError::CacheCorrupt {
                    line: idx + 1,
                    message: "expected <key>\\t<base64>".into(),
                })?;
                let bytes = BASE64.decode(encoded).map_err(|e| BackendError::CacheCorrupt {
                    line: idx + 1,
                    message: format!("bad base64: {e}"),
                })?;
                let text = String::from_utf8(bytes).map_err(|e| BackendError::CacheCorrupt {
                    line: idx + 1,
                    message: format!("response is not utf-8: {e}"),
                })?;
                entries.insert(key.to_string(), text);
            }
        }
        let appender = OpenOptions::new().create(true).append(true).open(path)?;
        Ok(CompletionCache { path: path.to_path_buf(), entries: RwLock::new(entries), appender: Mutex::new(appender) })
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    pub fn len(&self) -> usize {
        self.entries.read().expect("cache lock poisoned").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn get(&self, key: &str) -> Option<String> {
        self.entries.read().expect("cache lock poisoned").get(key).cloned()
    }

    pub fn put(&self, key: &str, text: &str) -> Result<(), BackendError> {
        {
            let mut file = self.appender.lock().expect("cache appender poisoned");
            writeln!(file, "{key}\t{}", BASE64.encode(text.as_bytes()))?;
            file.flush()?;
        }
        self.entries.write().expect("cache lock poisoned").insert(key.to_string(), text.to_string());
        Ok(())
    }
}

/// Wrap a backend with a persistent cache. Hits return `cached = true`
/// with byte-identical text.
pub struct CachedBackend<B> {
    inner: B,
    cache: CompletionCache,
}

impl<B: Backend> CachedBackend<B> {
    pub fn new(inner: B, cache: CompletionCache) -> Self {
        CachedBackend { inner, cache }
    }

    pub fn cache(&self) -> &CompletionCache {
        &self.cache
    }
}

impl<B: Backend> Backend for CachedBackend<B> {
    fn id(&self) -> &str {
        self.inner.id()
    }

    fn complete(&self, request: &CompletionRequest) -> Result<CompletionResponse, BackendError> {
        let key = cache_key(request, self.inner.id());
        if let Some(text) = self.cache.get(&key) {
            return Ok(CompletionResponse {
                text,
                backend_id: self.inner.id().to_string(),
                cached: true,
                latency: std::time::Duration::ZERO,
            });
        }
        let response = self.inner.complete(request)?;
        self.cache.put(&key, &response.text)?;
        Ok(response)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::backend::{RequestTag, ScriptedBackend};
    use crate::core::TaskId;

    fn request(prompt: &str) -> CompletionRequest {
        CompletionRequest::new(prompt, RequestTag::new(TaskId::Sentiment, "s1", "p0")).unwrap()
    }

    #[test]
    fn second_call_is_a_cache_hit() {
        let dir = tempfile::tempdir().unwrap();
        let cache = CompletionCache::open(&dir.path().join("cache.tsv")).unwrap();
        let backend = CachedBackend::new(ScriptedBackend::new().default_response("positive"), cache);
        let first = backend.complete(&request("hello")).unwrap();
        assert!(!first.cached);
        let second = backend.complete(&request("hello")).unwrap();
        assert!(second.cached);
        assert_eq!(first.text, second.text);
    }

    #[test]
    fn cache_persists_across_reopen() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("cache.tsv");
        {
            let cache = CompletionCache::open(&path).unwrap();
            cache.put("k1", "multi\nline\ttext").unwrap();
        }
        let cache = CompletionCache::open(&path).unwrap();
        assert_eq!(cache.get("k1").as_deref(), Some("multi\nline\ttext"));
        assert_eq!(cache.len(), 1);
    }

    #[test]
    fn corrupt_lines_are_reported_with_numbers() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("cache.tsv");
        std::fs::write(&path, "k1\tAAAA\nnot a record\n").unwrap();
        match CompletionCache::open(&path) {
            Err(BackendError::CacheCorrupt { line, .. }) => assert_eq!(line, 2),
            Err(other) => panic!("unexpected error {other:?}"),
            Ok(_) => panic!("corrupt cache accepted"),
        }
    }
}
