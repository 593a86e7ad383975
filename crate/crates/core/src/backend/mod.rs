//! The LLM completion contract: a deterministic scripted mock for tests, a
//! live HTTP chat client, response caching, and rate limiting. Responses are
//! never normalized here; decoding owns all tolerance.

mod cache;
mod http;
mod limiter;
mod scripted;

pub use cache::{CachedBackend, CompletionCache};
pub use http::{HttpBackend, HttpBackendConfig, API_KEY_ENV};
pub use limiter::{Clock, RateLimiter, RateLimiterConfig, SystemClock, VirtualClock};
pub use scripted::{Matcher, ScriptRule, ScriptedBackend};

use std::time::Duration;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::core::TaskId;

/// Identifies one prompt within one instance of one task.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct RequestTag {
    pub task: TaskId,
    pub instance_id: String,
    pub prompt_id: String,
}

impl RequestTag {
    pub fn new(task: TaskId, instance_id: impl Into<String>, prompt_id: impl Into<String>) -> Self {
        RequestTag { task, instance_id: instance_id.into(), prompt_id: prompt_id.into() }
    }
}

impl std::fmt::Display for RequestTag {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}, {}, {})", self.task, self.instance_id, self.prompt_id)
    }
}

#[derive(Debug, Clone)]
pub struct CompletionRequest {
    pub prompt: String,
    pub temperature: f64,
    pub max_output_tokens: usize,
    pub tag: RequestTag,
}

impl CompletionRequest {
    pub fn new(prompt: impl Into<String>, tag: RequestTag) -> Result<Self, BackendError> {
        let prompt = prompt.into();
        if prompt.is_empty() {
            return Err(BackendError::EmptyPrompt);
        }
        Ok(CompletionRequest { prompt, temperature: 0.0, max_output_tokens: 512, tag })
    }

    pub fn with_temperature(mut self, temperature: f64) -> Self {
        self.temperature = temperature;
        self
    }
}

/// Raw model output plus provenance.
#[derive(Debug, Clone, PartialEq)]
pub struct CompletionResponse {
    pub text: String,
    pub backend_id: String,
    pub cached: bool,
    pub latency: Duration,
}

#[derive(Debug, Error)]
pub enum BackendError {
    #[error("prompt must be non-empty")]
    EmptyPrompt,
    #[error("backend unavailable after {attempts} attempts: {message}")]
    BackendUnavailable { attempts: u32, message: String },
    #[error("authentication failed: {0}")]
    AuthError(String),
    #[error("no script rule matched request {tag}")]
    ScriptMiss { tag: RequestTag },
    #[error("cache file corrupt at line {line}: {message}")]
    CacheCorrupt { line: usize, message: String },
    #[error("cache io error: {0}")]
    CacheIo(#[from] std::io::Error),
}

/// A chat-completion backend. Implementations must be safe to call from
/// multiple workers concurrently.
pub trait Backend: Send + Sync {
    fn id(&self) -> &str;
    fn complete(&self, request: &CompletionRequest) -> Result<CompletionResponse, BackendError>;
}

impl<B: Backend + ?Sized> Backend for &B {
    fn id(&self) -> &str {
        (**self).id()
    }

    fn complete(&self, request: &CompletionRequest) -> Result<CompletionResponse, BackendError> {
        (**self).complete(request)
    }
}

/// Stable cache key: a digest of the backend id, prompt bytes, temperature,
/// and output cap. Tags are excluded so identical prompts share an entry.
pub fn cache_key(request: &CompletionRequest, backend_id: &str) -> String {
    let mut hasher = Sha256::new();
    hasher.update(backend_id.as_bytes());
    hasher.update([0u8]);
    hasher.update(request.prompt.as_bytes());
    hasher.update([0u8]);
    hasher.update(request.temperature.to_bits().to_le_bytes());
    hasher.update((request.max_output_tokens as u64).to_le_bytes());
    let digest = hasher.finalize();
    let mut out = String::with_capacity(64);
    for byte in digest {
        out.push_str(&format!("{byte:02x}"));
    }
    out
}
