//! A deterministic scripted backend: ordered match rules against the
//! request, first match wins. The test oracle for every pipeline.

use std::path::Path;
use std::time::Duration;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::{Backend, BackendError, CompletionRequest, CompletionResponse, RequestTag};

/// How a rule matches a request.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Matcher {
    /// Hex SHA-256 of the exact prompt text.
    PromptSha256(String),
    /// The prompt contains this substring.
    Substring(String),
    /// The request tag equals this tag.
    Tag(RequestTag),
}

impl Matcher {
    fn matches(&self, request: &CompletionRequest) -> bool {
        match self {
            Matcher::PromptSha256(expected) => prompt_sha256(&request.prompt) == *expected,
            Matcher::Substring(needle) => request.prompt.contains(needle),
            Matcher::Tag(tag) => request.tag == *tag,
        }
    }
}

/// Hex SHA-256 of a prompt, for building exact-prompt rules.
pub fn prompt_sha256(prompt: &str) -> String {
    let digest = Sha256::digest(prompt.as_bytes());
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ScriptRule {
    pub matcher: Matcher,
    pub response: String,
}

#[derive(Debug, Clone, Default)]
pub struct ScriptedBackend {
    id: String,
    rules: Vec<ScriptRule>,
    default: Option<String>,
}

impl ScriptedBackend {
    pub fn new() -> Self {
        ScriptedBackend { id: "scripted".into(), rules: Vec::new(), default: None }
    }

    pub fn with_id(mut self, id: impl Into<String>) -> Self {
        self.id = id.into();
        self
    }

    pub fn rule(mut self, matcher: Matcher, response: impl Into<String>) -> Self {
        self.rules.push(ScriptRule { matcher, response: response.into() });
        self
    }

    pub fn on_tag(self, tag: RequestTag, response: impl Into<String>) -> Self {
        self.rule(Matcher::Tag(tag), response)
    }

    pub fn on_substring(self, needle: impl Into<String>, response: impl Into<String>) -> Self {
        self.rule(Matcher::Substring(needle.into()), response)
    }

    pub fn on_prompt(self, prompt: &str, response: impl Into<String>) -> Self {
        self.rule(Matcher::PromptSha256(prompt_sha256(prompt)), response)
    }

    pub fn default_response(mut self, response: impl Into<String>) -> Self {
        self.default = Some(response.into());
        self
    }

    pub fn push_rule(&mut self, matcher: Matcher, response: impl Into<String>) {
        self.rules.push(ScriptRule { matcher, response: response.into() });
    }

    pub fn rules(&self) -> &[ScriptRule] {
        &self.rules
    }

    /// Load rules from a jsonl file: one `{"matcher": ..., "response": ...}`
    /// object per line, or `{"default": "..."}`.
    pub fn from_file(path: &Path) -> Result<Self, BackendError> {
        let content = std::fs::read_to_string(path)?;
        let mut backend = ScriptedBackend::new();
        for (idx, line) in content.lines().enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            #[derive(Deserialize)]
            struct Line {
                #[serde(default)]
                matcher: Option<Matcher>,
                #[serde(default)]
                response: Option<String>,
                #[serde(default)]
                default: Option<String>,
            }
            let parsed: Line = serde_json::from_str(line).map_err(|e| BackendError::CacheCorrupt {
                line: idx + 1,
                message: format!("bad script rule: {e}"),
            })?;
            match (parsed.matcher, parsed.response, parsed.default) {
                (Some(m), Some(r), None) => backend.push_rule(m, r),
                (None, None, Some(d)) => backend.default = Some(d),
                _ => {
                    return Err(BackendError::CacheCorrupt {
                        line: idx + 1,
                        message: "rule must have matcher+response or default".into(),
                    })
                }
            }
        }
        Ok(backend)
    }
}

impl Backend for ScriptedBackend {
    fn id(&self) -> &str {
        &self.id
    }

    fn complete(&self, request: &CompletionRequest) -> Result<CompletionResponse, BackendError> {
        let text = self
            .rules
            .iter()
            .find(|rule| rule.matcher.matches(request))
            .map(|rule| rule.response.clone())
            .or_else(|| self.default.clone())
            .ok_or_else(|| BackendError::ScriptMiss { tag: request.tag.clone() })?;
        Ok(CompletionResponse {
            text,
            backend_id: self.id.clone(),
            cached: false,
            latency: Duration::ZERO,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::core::TaskId;

    fn tag(instance: &str, prompt: &str) -> RequestTag {
        RequestTag::new(TaskId::Ner, instance, prompt)
    }

    fn request(prompt: &str, t: RequestTag) -> CompletionRequest {
        CompletionRequest::new(prompt, t).unwrap()
    }

    #[test]
    fn tag_rule_hits() {
        let backend = ScriptedBackend::new().on_tag(tag("s1", "p1"), "he lives in ## Seattle@@");
        let got = backend.complete(&request("whatever", tag("s1", "p1"))).unwrap();
        assert_eq!(got.text, "he lives in ## Seattle@@");
        assert!(!got.cached);
    }

    #[test]
    fn first_matching_rule_wins() {
        let backend = ScriptedBackend::new()
            .on_substring("Seattle", "first")
            .on_substring("Seattle", "second");
        let got = backend.complete(&request("about Seattle", tag("s1", "p0"))).unwrap();
        assert_eq!(got.text, "first");
    }

    #[test]
    fn miss_without_default_names_the_tag() {
        let backend = ScriptedBackend::new();
        let err = backend.complete(&request("x", tag("s9", "p3"))).unwrap_err();
        match err {
            BackendError::ScriptMiss { tag } => {
                assert_eq!(tag.instance_id, "s9");
                assert_eq!(tag.prompt_id, "p3");
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn default_catches_everything_else() {
        let backend = ScriptedBackend::new().default_response("null");
        assert_eq!(backend.complete(&request("x", tag("s1", "p0"))).unwrap().text, "null");
    }

    #[test]
    fn prompt_hash_rule() {
        let backend = ScriptedBackend::new().on_prompt("exact prompt", "hit");
        assert_eq!(backend.complete(&request("exact prompt", tag("a", "p0"))).unwrap().text, "hit");
        assert!(backend.complete(&request("exact prompt!", tag("a", "p0"))).is_err());
    }
}
