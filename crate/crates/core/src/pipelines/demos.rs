//! Per-arm demonstration rendering: the same training instance renders
//! differently depending on which fan-out arm (entity type, relation, role,
//! sense, word) is asking. Every rendered label parses back to the gold
//! annotation under the arm's decoder.

use std::collections::BTreeMap;

use crate::codecs::{marker_encode, render_option, CodecSettings, OptionStyle};
use crate::core::task::pos_tag_gloss;
use crate::core::{Demonstration, Payload, Span, TaskInstance, TaskKind};

use super::text::{number_sentences, split_sentences, tokenize_words, DEFAULT_ABBREVIATIONS};

/// Which fan-out arm a demonstration is rendered for.
#[derive(Debug, Clone)]
pub enum Arm<'a> {
    /// Single-decision classification (sentiment, commonsense).
    Classify,
    /// POS tagging of one word; demonstrations mark their own first word.
    PosWord,
    NliRelation { relation: &'a str },
    /// Copy-and-mark extraction of one entity type (NER, relation step 1).
    Extract { entity_type: &'a str },
    /// Relation yes/no between a marked entity pair (relation step 2).
    Relate { relation: &'a str },
    Trigger { event_type: &'a str },
    Argument { event_type: &'a str, role: &'a str },
    /// Dependent marking for a head word (dependency step 1).
    DepHeads,
    /// Relation yes/no for one arc (dependency step 2).
    DepRelation { relation: &'a str },
    /// Predicate sense yes/no (SRL step 1).
    Sense,
    /// Argument for one semantic role (SRL step 2).
    Role { role: &'a str },
    /// Sentence-indexed QA answer.
    Answer,
}

/// The training pool demonstrations are drawn from; instances must carry
/// gold annotations.
#[derive(Debug, Clone, Default)]
pub struct DemoSource {
    instances: BTreeMap<String, TaskInstance>,
}

impl DemoSource {
    pub fn new(instances: Vec<TaskInstance>) -> Self {
        DemoSource {
            instances: instances.into_iter().map(|i| (i.id.clone(), i)).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.instances.len()
    }

    pub fn is_empty(&self) -> bool {
        self.instances.is_empty()
    }

    pub fn contains(&self, id: &str) -> bool {
        self.instances.contains_key(id)
    }

    pub fn get(&self, id: &str) -> Option<&TaskInstance> {
        self.instances.get(id)
    }

    /// Ids in ascending order.
    pub fn ids(&self) -> impl Iterator<Item = &str> {
        self.instances.keys().map(String::as_str)
    }

    /// Render the demonstration for `id` under `arm`, or `None` when the
    /// instance cannot illustrate that arm.
    pub fn render(&self, id: &str, arm: &Arm<'_>, task: &TaskKind, codec: &CodecSettings) -> Option<Demonstration> {
        let instance = self.instances.get(id)?;
        render_demo(instance, arm, task, codec)
    }
}

/// Question phrasing shared by relate arms and their demonstrations.
pub fn relate_question(subject: &Span, object: &Span, relation: &str) -> String {
    format!(
        "Is the relationship between the entities '{}' ({}) and '{}' ({}) in the INPUT '{relation}'?",
        subject.surface, subject.label, object.surface, object.label
    )
}

/// Question phrasing for dependency relation checks.
pub fn dep_relation_question(head: &str, dependent: &str, relation: &str) -> String {
    format!("Is the dependency relation between the head word '{head}' and the dependent word '{dependent}' '{relation}'?")
}

/// Question phrasing for predicate sense checks.
pub fn sense_question(predicate: &str, sense: &str) -> String {
    format!("Does the predicate '{predicate}' have the sense '{sense}'?")
}

/// The numeric POS answer form: `15. NNPS Proper noun, plural`.
pub fn render_pos_answer(index: usize, tag: &str) -> String {
    let gloss = pos_tag_gloss(tag);
    if gloss.is_empty() {
        format!("{}. {tag}", index + 1)
    } else {
        format!("{}. {tag} {gloss}", index + 1)
    }
}

fn mark(text: &str, spans: &[Span], codec: &CodecSettings) -> Option<String> {
    let grammar = codec.grammar().ok()?;
    marker_encode(text, spans, &grammar).ok()
}

fn render_demo(
    instance: &TaskInstance,
    arm: &Arm<'_>,
    task: &TaskKind,
    codec: &CodecSettings,
) -> Option<Demonstration> {
    let gold = instance.gold.as_ref()?;
    match arm {
        Arm::Classify => {
            let Payload::Label(index) = &gold.payload else { return None };
            let rendered = match &instance.options {
                Some(options) => render_option(*index, options.get(*index)?, codec.option_style),
                None => {
                    let label = task.label_space.get(*index)?;
                    codec
                        .label_words
                        .iter()
                        .find(|(_, l)| l == label)
                        .map(|(word, _)| word.clone())
                        .unwrap_or_else(|| label.to_lowercase())
                }
            };
            Some(Demonstration::new(instance.clone(), rendered))
        }
        Arm::PosWord => {
            let Payload::WordLabels(labels) = &gold.payload else { return None };
            let words = tokenize_words(&instance.text);
            let word = words.first()?;
            let tag_index = (*labels.first()?)?;
            let tag = task.label_space.get(tag_index)?;
            let span = Span::from_source(&instance.text, word.start, word.end, "WORD")?;
            let marked = mark(&instance.text, &[span], codec)?;
            let mut variant = instance.clone();
            variant.text = marked;
            variant.question = Some(word.surface.clone());
            Some(Demonstration::new(variant, render_pos_answer(tag_index, tag)))
        }
        Arm::NliRelation { relation } => {
            let Payload::Label(index) = &gold.payload else { return None };
            let gold_relation = task.label_space.get(*index)?;
            let answer = if gold_relation == relation { "yes" } else { "no" };
            Some(Demonstration::new(instance.clone(), answer))
        }
        Arm::Extract { entity_type } => {
            let spans: Vec<Span> = match &gold.payload {
                Payload::Spans(spans) => spans.clone(),
                Payload::Relations { entities, .. } => entities.clone(),
                _ => return None,
            };
            let of_type: Vec<Span> = spans.into_iter().filter(|s| s.label == *entity_type).collect();
            let rendered = mark(&instance.text, &of_type, codec)?;
            Some(Demonstration::new(instance.clone(), rendered))
        }
        Arm::Relate { relation } => {
            let Payload::Relations { entities, triples } = &gold.payload else { return None };
            let (subject, object, answer) = match triples.iter().find(|t| t.relation == *relation) {
                Some(triple) => (&triple.subject, &triple.object, "yes"),
                None => {
                    if entities.len() < 2 {
                        return None;
                    }
                    (&entities[0], &entities[1], "no")
                }
            };
            let marked = mark(&instance.text, &[subject.clone(), object.clone()], codec)
                .unwrap_or_else(|| instance.text.clone());
            let mut variant = instance.clone();
            variant.text = marked;
            variant.question = Some(relate_question(subject, object, relation));
            Some(Demonstration::new(variant, answer))
        }
        Arm::Trigger { event_type } => {
            let Payload::Events(frames) = &gold.payload else { return None };
            let rendered = frames
                .iter()
                .find(|f| f.event_type == *event_type)
                .map(|f| f.trigger.surface.clone())
                .unwrap_or_else(|| "null".into());
            Some(Demonstration::new(instance.clone(), rendered))
        }
        Arm::Argument { event_type, role } => {
            let Payload::Events(frames) = &gold.payload else { return None };
            let frame = frames.iter().find(|f| f.event_type == *event_type)?;
            let marked = mark(&instance.text, &[frame.trigger.clone()], codec)?;
            let rendered = frame
                .arguments
                .get(*role)
                .map(|s| s.surface.clone())
                .unwrap_or_else(|| "null".into());
            let mut variant = instance.clone();
            variant.text = marked;
            Some(Demonstration::new(variant, rendered))
        }
        Arm::DepHeads => {
            let Payload::Arcs(arcs) = &gold.payload else { return None };
            let words = tokenize_words(&instance.text);
            // The head with the most dependents makes the clearest example.
            let mut counts: BTreeMap<usize, usize> = BTreeMap::new();
            for arc in arcs {
                *counts.entry(arc.head).or_insert(0) += 1;
            }
            let head_index = counts
                .iter()
                .max_by(|(ia, ca), (ib, cb)| ca.cmp(cb).then_with(|| ib.cmp(ia)))
                .map(|(i, _)| *i)
                .unwrap_or(0);
            let head = words.get(head_index)?;
            let head_span = Span::from_source(&instance.text, head.start, head.end, "HEAD")?;
            let marked = mark(&instance.text, &[head_span], codec)?;
            let dependents: Vec<Span> = arcs
                .iter()
                .filter(|a| a.head == head_index)
                .filter_map(|a| {
                    let w = words.get(a.dependent)?;
                    Span::from_source(&instance.text, w.start, w.end, "DEP")
                })
                .collect();
            let rendered = mark(&instance.text, &dependents, codec)?;
            let mut variant = instance.clone();
            variant.text = marked;
            Some(Demonstration::new(variant, rendered))
        }
        Arm::DepRelation { relation } => {
            let Payload::Arcs(arcs) = &gold.payload else { return None };
            let words = tokenize_words(&instance.text);
            let (arc, answer) = match arcs.iter().find(|a| a.relation == *relation) {
                Some(arc) => (arc, "yes"),
                None => (arcs.first()?, "no"),
            };
            let head = words.get(arc.head)?;
            let dependent = words.get(arc.dependent)?;
            let spans = vec![
                Span::from_source(&instance.text, head.start, head.end, "HEAD")?,
                Span::from_source(&instance.text, dependent.start, dependent.end, "DEP")?,
            ];
            let marked = mark(&instance.text, &spans, codec).unwrap_or_else(|| instance.text.clone());
            let mut variant = instance.clone();
            variant.text = marked;
            variant.question = Some(dep_relation_question(&head.surface, &dependent.surface, relation));
            Some(Demonstration::new(variant, answer))
        }
        Arm::Sense => {
            let Payload::Frame { sense, .. } = &gold.payload else { return None };
            let predicate = instance.predicate.as_ref()?;
            let gold_sense = predicate.senses.get(*sense)?;
            let span = Span::from_source(&instance.text, predicate.start, predicate.end, "PRED")?;
            let marked = mark(&instance.text, &[span], codec)?;
            let mut variant = instance.clone();
            variant.text = marked;
            variant.question = Some(sense_question(&predicate.surface, gold_sense));
            Some(Demonstration::new(variant, "yes"))
        }
        Arm::Role { role } => {
            let Payload::Frame { arguments, .. } = &gold.payload else { return None };
            let predicate = instance.predicate.as_ref()?;
            let span = Span::from_source(&instance.text, predicate.start, predicate.end, "PRED")?;
            let marked = mark(&instance.text, &[span], codec)?;
            let rendered = arguments
                .get(*role)
                .map(|s| s.surface.clone())
                .unwrap_or_else(|| "null".into());
            let mut variant = instance.clone();
            variant.text = marked;
            Some(Demonstration::new(variant, rendered))
        }
        Arm::Answer => {
            let rendered = match &gold.payload {
                Payload::Answer { sentence, text } => format!("({sentence}) {text}"),
                Payload::Unanswerable => "unanswerable".into(),
                _ => return None,
            };
            let sentences = split_sentences(&instance.text, &DEFAULT_ABBREVIATIONS);
            let mut variant = instance.clone();
            variant.text = number_sentences(&sentences);
            Some(Demonstration::new(variant, rendered))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::core::{DepArc, Prediction, TaskId};

    fn codec(task: &TaskKind) -> CodecSettings {
        CodecSettings::defaults(task)
    }

    #[test]
    fn ner_demo_marks_only_the_arm_type() {
        let task = TaskKind::standard(TaskId::Ner);
        let text = "Alice moved to Berlin";
        let gold = Prediction::gold(
            TaskId::Ner,
            Payload::Spans(vec![
                Span::from_source(text, 0, 5, "PER").unwrap(),
                Span::from_source(text, 15, 21, "LOC").unwrap(),
            ]),
        );
        let instance = TaskInstance::new("t1", text).with_gold(gold);
        let source = DemoSource::new(vec![instance]);
        let demo = source
            .render("t1", &Arm::Extract { entity_type: "LOC" }, &task, &codec(&task))
            .unwrap();
        assert_eq!(demo.rendered_label, "Alice moved to ##Berlin@@");
        let demo = source
            .render("t1", &Arm::Extract { entity_type: "ORG" }, &task, &codec(&task))
            .unwrap();
        assert_eq!(demo.rendered_label, text);
    }

    #[test]
    fn nli_demo_answers_per_relation() {
        let task = TaskKind::standard(TaskId::Nli);
        let instance = TaskInstance::new("n1", "p h")
            .with_premise_hypothesis("p", "h")
            .with_gold(Prediction::gold(TaskId::Nli, Payload::Label(1)));
        let source = DemoSource::new(vec![instance]);
        let yes = source.render("n1", &Arm::NliRelation { relation: "contradiction" }, &task, &codec(&task));
        assert_eq!(yes.unwrap().rendered_label, "yes");
        let no = source.render("n1", &Arm::NliRelation { relation: "entailment" }, &task, &codec(&task));
        assert_eq!(no.unwrap().rendered_label, "no");
    }

    #[test]
    fn dep_demo_marks_head_and_dependents() {
        let task = TaskKind::standard(TaskId::Dependency);
        let text = "I prefer the morning flight to Denver";
        let gold = Prediction::gold(
            TaskId::Dependency,
            Payload::Arcs(vec![DepArc::new(1, 0, "nsubj"), DepArc::new(1, 4, "dobj")]),
        );
        let instance = TaskInstance::new("d1", text).with_gold(gold);
        let source = DemoSource::new(vec![instance]);
        let demo = source.render("d1", &Arm::DepHeads, &task, &codec(&task)).unwrap();
        assert_eq!(demo.instance.text, "I @prefer# the morning flight to Denver");
        assert_eq!(demo.rendered_label, "@I# prefer the morning @flight# to Denver");
    }

    #[test]
    fn qa_demo_numbers_its_context() {
        let task = TaskKind::standard(TaskId::Qa);
        let text = "The capital of Japan is Tokyo. The capital of South Korea is Seoul.";
        let instance = TaskInstance::new("q1", text)
            .with_question("What is the capital of South Korea?")
            .with_gold(Prediction::gold(
                TaskId::Qa,
                Payload::Answer { sentence: 2, text: "Seoul".into() },
            ));
        let source = DemoSource::new(vec![instance]);
        let demo = source.render("q1", &Arm::Answer, &task, &codec(&task)).unwrap();
        assert!(demo.instance.text.starts_with("(1) The capital of Japan"));
        assert_eq!(demo.rendered_label, "(2) Seoul");
    }
}
