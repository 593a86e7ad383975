//! Offline rationale generation: one backend call per training example,
//! persisted so the pass is resumable and idempotent.

use std::collections::BTreeMap;
use std::fs::OpenOptions;
use std::io::Write;
use std::path::{Path, PathBuf};

use base64::engine::general_purpose::STANDARD as BASE64;
use base64::Engine;

use crate::backend::{Backend, BackendError, CompletionRequest, RequestTag};
use crate::core::Demonstration;
use crate::prompting::PromptTemplate;

use super::StrategyError;

/// One generated rationale, stored verbatim.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationaleRecord {
    pub instance_id: String,
    pub rationale: String,
    pub generator_backend_id: String,
}

/// File-backed rationale store: one record per line,
/// `<instance_id>\t<backend_id>\t<base64 rationale>`. Single writer,
/// many readers.
#[derive(Debug)]
pub struct RationaleStore {
    path: PathBuf,
    records: BTreeMap<String, RationaleRecord>,
}

impl RationaleStore {
    pub fn open(path: &Path) -> Result<Self, StrategyError> {
        let mut records = BTreeMap::new();
        if path.exists() {
            let content = std::fs::read_to_string(path)?;
            for (idx, line) in content.lines().enumerate() {
                if line.is_empty() {
                    continue;
                }
                let mut parts = line.splitn(3, '\t');
                let (id, backend_id, encoded) = match (parts.next(), parts.next(), parts.next()) {
                    (Some(a), Some(b), Some(c)) => (a, b, c),
                    _ => {
                        return Err(StrategyError::StoreCorrupt {
                            line: idx + 1,
                            message: "expected <id>\\t<backend_id>\\t<base64>".into(),
                        })
                    }
                };
                let bytes = BASE64.decode(encoded).map_err(|e| StrategyError::StoreCorrupt {
                    line: idx + 1,
                    message: format!("bad base64: {e}"),
                })?;
                let rationale = String::from_utf8(bytes).map_err(|e| StrategyError::StoreCorrupt {
                    line: idx + 1,
                    message: format!("not utf-8: {e}"),
                })?;
                records.insert(
                    id.to_string(),
                    RationaleRecord {
                        instance_id: id.to_string(),
                        rationale,
                        generator_backend_id: backend_id.to_string(),
                    },
                );
            }
        }
        Ok(RationaleStore { path: path.to_path_buf(), records })
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn contains(&self, instance_id: &str) -> bool {
        self.records.contains_key(instance_id)
    }

    pub fn get(&self, instance_id: &str) -> Option<&RationaleRecord> {
        self.records.get(instance_id)
    }

    pub fn append(&mut self, record: RationaleRecord) -> Result<(), StrategyError> {
        let mut file = OpenOptions::new().create(true).append(true).open(&self.path)?;
        writeln!(
            file,
            "{}\t{}\t{}",
            record.instance_id,
            record.generator_backend_id,
            BASE64.encode(record.rationale.as_bytes())
        )?;
        file.flush()?;
        self.records.insert(record.instance_id.clone(), record);
        Ok(())
    }
}

/// Outcome of one generation pass.
#[derive(Debug, Default, PartialEq, Eq)]
pub struct RationaleSummary {
    pub generated: usize,
    pub skipped: usize,
    pub failed: Vec<(String, String)>,
}

/// Generate rationales for every training example that does not already
/// have one: a single call per example with a prompt carrying the input and
/// its gold label, the raw response stored verbatim.
///
/// Backend unavailability aborts the pass with all progress persisted;
/// rerunning skips completed ids.
pub fn generate_rationales(
    train: &[Demonstration],
    backend: &dyn Backend,
    template: &PromptTemplate,
    store: &mut RationaleStore,
) -> Result<RationaleSummary, StrategyError> {
    let mut summary = RationaleSummary::default();
    for demo in train {
        let id = &demo.instance.id;
        if store.contains(id) {
            summary.skipped += 1;
            continue;
        }
        let bound = template.bind(&[("gold", &demo.rendered_label)]);
        let (prefix, suffix) = bound.render_parts(&demo.instance);
        let prompt = format!("{prefix}{suffix}");
        let tag = RequestTag::new(template.task, id.clone(), "rationale");
        let request = CompletionRequest::new(prompt, tag)?;
        match backend.complete(&request) {
            Ok(response) => {
                if response.text.trim().is_empty() {
                    summary.failed.push((id.clone(), "empty rationale".into()));
                    continue;
                }
                store.append(RationaleRecord {
                    instance_id: id.clone(),
                    rationale: response.text,
                    generator_backend_id: response.backend_id,
                })?;
                summary.generated += 1;
            }
            Err(err @ BackendError::BackendUnavailable { .. }) => {
                return Err(StrategyError::Backend(err));
            }
            Err(other) => summary.failed.push((id.clone(), other.to_string())),
        }
    }
    Ok(summary)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::backend::ScriptedBackend;
    use crate::core::{TaskId, TaskInstance, TaskKind};
    use crate::prompting::templates;

    fn demos(n: usize) -> Vec<Demonstration> {
        (0..n)
            .map(|i| {
                let inst = TaskInstance::new(format!("d{i}"), format!("text {i}"))
                    .with_premise_hypothesis("A man inspects the uniform.", "The man is sleeping.");
                Demonstration::new(inst, "contradiction")
            })
            .collect()
    }

    fn template() -> PromptTemplate {
        templates::rationale_template(TaskKind::standard(TaskId::Nli))
    }

    #[test]
    fn generates_one_record_per_example() {
        let dir = tempfile::tempdir().unwrap();
        let mut store = RationaleStore::open(&dir.path().join("rationales.tsv")).unwrap();
        let backend = ScriptedBackend::new()
            .default_response("the man is sleeping contradicts the premise that the man is inspecting");
        let summary = generate_rationales(&demos(5), &backend, &template(), &mut store).unwrap();
        assert_eq!(summary.generated, 5);
        assert_eq!(store.len(), 5);
        assert!(store.get("d0").unwrap().rationale.contains("contradicts the premise"));
    }

    #[test]
    fn empty_train_means_zero_calls() {
        let dir = tempfile::tempdir().unwrap();
        let mut store = RationaleStore::open(&dir.path().join("r.tsv")).unwrap();
        let backend = ScriptedBackend::new(); // any call would ScriptMiss
        let summary = generate_rationales(&[], &backend, &template(), &mut store).unwrap();
        assert_eq!(summary, RationaleSummary::default());
    }

    #[test]
    fn rerun_is_idempotent_and_resumable() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("r.tsv");
        let all = demos(20);
        {
            let mut store = RationaleStore::open(&path).unwrap();
            let backend = ScriptedBackend::new().default_response("because");
            generate_rationales(&all[..10], &backend, &template(), &mut store).unwrap();
            assert_eq!(store.len(), 10);
        }
        let mut store = RationaleStore::open(&path).unwrap();
        let backend = ScriptedBackend::new().default_response("because");
        let summary = generate_rationales(&all, &backend, &template(), &mut store).unwrap();
        assert_eq!(summary.generated, 10);
        assert_eq!(summary.skipped, 10);
        let again = generate_rationales(&all, &backend, &template(), &mut store).unwrap();
        assert_eq!(again.generated, 0);
        assert_eq!(again.skipped, 20);
    }

    #[test]
    fn script_misses_are_recorded_not_fatal() {
        let dir = tempfile::tempdir().unwrap();
        let mut store = RationaleStore::open(&dir.path().join("r.tsv")).unwrap();
        let examples = demos(3);
        let backend = ScriptedBackend::new()
            .on_substring("text 0", "fine")
            .on_substring("text 2", "fine");
        let summary = generate_rationales(&examples, &backend, &template(), &mut store).unwrap();
        assert_eq!(summary.generated, 2);
        assert_eq!(summary.failed.len(), 1);
        assert_eq!(summary.failed[0].0, "d1");
    }
}
