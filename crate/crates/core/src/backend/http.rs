//! Live chat-completion client. Each request is a single-turn conversation:
//! one user message, one completion. Credentials come from the
//! `PROMPTFORGE_API_KEY` environment variable.

use std::sync::Arc;
use std::time::Duration;

use serde_json::json;

use super::limiter::{Clock, RateLimiter, RateLimiterConfig, SystemClock};
use super::{Backend, BackendError, CompletionRequest, CompletionResponse};

pub const API_KEY_ENV: &str = "PROMPTFORGE_API_KEY";

#[derive(Debug, Clone)]
pub struct HttpBackendConfig {
    /// Full URL of the chat-completion endpoint.
    pub endpoint: String,
    /// Model name forwarded in the request body, when the API wants one.
    pub model: Option<String>,
    pub max_retries: u32,
    pub initial_backoff: Duration,
    pub request_timeout: Duration,
    pub limiter: RateLimiterConfig,
}

impl Default for HttpBackendConfig {
    fn default() -> Self {
        HttpBackendConfig {
            endpoint: String::new(),
            model: None,
            max_retries: 3,
            initial_backoff: Duration::from_millis(500),
            request_timeout: Duration::from_secs(60),
            limiter: RateLimiterConfig::default(),
        }
    }
}

pub struct HttpBackend {
    id: String,
    config: HttpBackendConfig,
    api_key: String,
    agent: ureq::Agent,
    limiter: Arc<RateLimiter>,
    clock: Arc<dyn Clock>,
}

impl HttpBackend {
    /// Build a live backend, reading the credential from the environment.
    pub fn from_env(config: HttpBackendConfig) -> Result<Self, BackendError> {
        let api_key = std::env::var(API_KEY_ENV)
            .map_err(|_| BackendError::AuthError(format!("{API_KEY_ENV} is not set")))?;
        Ok(Self::new(config, api_key))
    }

    pub fn new(config: HttpBackendConfig, api_key: String) -> Self {
        let agent: ureq::Agent = ureq::Agent::config_builder()
            .timeout_global(Some(config.request_timeout))
            .build()
            .into();
        let clock: Arc<dyn Clock> = Arc::new(SystemClock::new());
        let limiter = Arc::new(RateLimiter::new(config.limiter.clone(), clock.clone()));
        let id = match &config.model {
            Some(model) => format!("http:{model}"),
            None => "http".to_string(),
        };
        HttpBackend { id, config, api_key, agent, limiter, clock }
    }

    fn body_for(&self, request: &CompletionRequest) -> serde_json::Value {
        let mut body = json!({
            "messages": [{"role": "user", "content": request.prompt}],
            "temperature": request.temperature,
            "max_tokens": request.max_output_tokens,
        });
        if let Some(model) = &self.config.model {
            body["model"] = json!(model);
        }
        body
    }

    fn send_once(&self, request: &CompletionRequest) -> Result<String, Transient> {
        let result = self
            .agent
            .post(&self.config.endpoint)
            .header("Authorization", &format!("Bearer {}", self.api_key))
            .send_json(self.body_for(request));
        let mut response = match result {
            Ok(response) => response,
            Err(ureq::Error::StatusCode(code)) if code == 401 || code == 403 => {
                return Err(Transient::Fatal(BackendError::AuthError(format!("HTTP {code}"))))
            }
            Err(ureq::Error::StatusCode(code)) if code == 429 || code >= 500 => {
                return Err(Transient::Retry(format!("HTTP {code}")))
            }
            Err(ureq::Error::StatusCode(code)) => {
                return Err(Transient::Fatal(BackendError::BackendUnavailable {
                    attempts: 1,
                    message: format!("HTTP {code}"),
                }))
            }
            Err(other) => return Err(Transient::Retry(other.to_string())),
        };
        let value: serde_json::Value = response
            .body_mut()
            .read_json()
            .map_err(|e| Transient::Retry(format!("bad response body: {e}")))?;
        value["choices"][0]["message"]["content"]
            .as_str()
            .map(str::to_string)
            .ok_or_else(|| Transient::Retry("response missing choices[0].message.content".into()))
    }
}

enum Transient {
    Retry(String),
    Fatal(BackendError),
}

impl Backend for HttpBackend {
    fn id(&self) -> &str {
        &self.id
    }

    fn complete(&self, request: &CompletionRequest) -> Result<CompletionResponse, BackendError> {
        let started = self.clock.now();
        let mut last_message = String::new();
        for attempt in 0..=self.config.max_retries {
            if attempt > 0 {
                let backoff = self.config.initial_backoff * 2u32.saturating_pow(attempt - 1);
                self.clock.sleep(backoff);
            }
            let _slot = self.limiter.acquire();
            match self.send_once(request) {
                Ok(text) => {
                    return Ok(CompletionResponse {
                        text,
                        backend_id: self.id.clone(),
                        cached: false,
                        latency: self.clock.now().saturating_sub(started),
                    })
                }
                Err(Transient::Fatal(err)) => return Err(err),
                Err(Transient::Retry(message)) => last_message = message,
            }
        }
        Err(BackendError::BackendUnavailable {
            attempts: self.config.max_retries + 1,
            message: last_message,
        })
    }
}
