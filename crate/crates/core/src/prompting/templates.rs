//! Built-in prompt skeletons for each task and pipeline step. Fan-out
//! variables (`{label}`, `{role}`, `{open}`, `{close}`, `{question_form}`)
//! are bound by the pipelines; instance fields are substituted at assembly.

use crate::codecs::OptionStyle;
use crate::core::{TaskId, TaskKind};

use super::template::PromptTemplate;

/// The built-in template for `(task, step)`. Steps are 0-based; single-step
/// tasks only define step 0.
pub fn builtin(task: TaskId, step: usize) -> Option<PromptTemplate> {
    let (header, skeleton, style): (&str, &str, OptionStyle) = match (task, step) {
        (TaskId::Ner, 0) | (TaskId::RelationExtraction, 0) => (
            "Please mark the start and end of {label} entities in the INPUT with {open} and {close}, respectively. If there is no {label} entity, copy the INPUT unchanged.",
            "{header}\n\n{demos}INPUT: {input}\nOUTPUT:",
            OptionStyle::Alphabetic,
        ),
        (TaskId::RelationExtraction, 1) | (TaskId::Dependency, 1) => (
            "Please answer the QUESTION about the INPUT with yes or no.",
            "{header}\n\n{demos}INPUT: {input}\nQUESTION: {question}\nANSWER:",
            OptionStyle::Alphabetic,
        ),
        (TaskId::Nli, 0) => (
            "{question_form} Please answer yes or no.",
            "{header}\n\n{demos}Premise: {premise}\nHypothesis: {hypothesis}\nAnswer:",
            OptionStyle::Alphabetic,
        ),
        (TaskId::Sentiment, 0) => (
            "Decide the sentiment of the following text. Answer with one word: positive or negative.",
            "{header}\n\n{demos}Text: {input}\nSentiment:",
            OptionStyle::Alphabetic,
        ),
        (TaskId::Commonsense, 0) => (
            "Please select the answer to the question from several options.",
            "{header}\n\n{demos}Question: {question}\nOptions: {options}\nAnswer:",
            OptionStyle::Alphabetic,
        ),
        (TaskId::Pos, 0) => (
            "Part-of-speech categories are as follows:\n{categories}",
            "{header}\n\n{demos}INPUT: {input}\nQUESTION: What is the POS tag for the word '{question}' which is marked by {open}{close} in the INPUT?\nANSWER:",
            OptionStyle::Numeric,
        ),
        (TaskId::EventExtraction, 0) => (
            "Decide whether the INPUT contains a {label} event. Answer with the trigger word copied from the INPUT, or null if there is no {label} event.",
            "{header}\n\n{demos}INPUT: {input}\nQUESTION: What is the trigger word of the {label} event?\nANSWER:",
            OptionStyle::Alphabetic,
        ),
        (TaskId::EventExtraction, 1) => (
            "The INPUT contains a {label} event whose trigger is marked with {open}{close}. Answer with the argument copied from the INPUT, or null if the role is absent.",
            "{header}\n\n{demos}INPUT: {input}\nQUESTION: What is the {role} of the {label} event?\nANSWER:",
            OptionStyle::Alphabetic,
        ),
        (TaskId::Dependency, 0) => (
            "The head word in the INPUT is marked with {open} and {close}. Rewrite the INPUT and mark each dependent of the head word with {open} and {close}. If the head word has no dependents, copy the INPUT unchanged.",
            "{header}\n\n{demos}INPUT: {input}\nOUTPUT:",
            OptionStyle::Alphabetic,
        ),
        (TaskId::Srl, 0) => (
            "The predicate in the INPUT is marked with {open}{close}. Please answer the QUESTION with yes or no.",
            "{header}\n\n{demos}INPUT: {input}\nQUESTION: {question}\nANSWER:",
            OptionStyle::Alphabetic,
        ),
        (TaskId::Srl, 1) => (
            "The predicate in the INPUT is marked with {open}{close}. Answer with the argument copied from the INPUT, or null if there is no such argument.",
            "{header}\n\n{demos}INPUT: {input}\nQUESTION: What are the arguments representing the meaning of '{role}' for the marked predicate?\nANSWER:",
            OptionStyle::Alphabetic,
        ),
        (TaskId::Qa, 0) => (
            "Read the numbered context and answer the question. Answer with the index of the sentence that contains the answer followed by the answer substring, like (3) Seoul. If the question cannot be answered from the context, answer unanswerable.",
            "{header}\n\n{demos}Context: {input}\nQuestion: {question}\nAnswer:",
            OptionStyle::Alphabetic,
        ),
        _ => return None,
    };
    Some(
        PromptTemplate::new(task, header, skeleton)
            .expect("builtin skeletons are valid")
            .with_option_style(style),
    )
}

/// The numbered category list for the POS header.
pub fn pos_categories(tagset: &[String]) -> String {
    tagset
        .iter()
        .enumerate()
        .map(|(i, tag)| {
            let gloss = crate::core::task::pos_tag_gloss(tag);
            if gloss.is_empty() {
                format!("{}. {tag}", i + 1)
            } else {
                format!("{}. {tag} {gloss}", i + 1)
            }
        })
        .collect::<Vec<_>>()
        .join("\n")
}

/// Binary-question phrasing for one NLI relation.
pub fn nli_question(relation: &str) -> String {
    match relation {
        "entailment" => "Does the premise entail the hypothesis?".into(),
        "contradiction" => "Does the premise contradict the hypothesis?".into(),
        "neutral" => "Is the hypothesis undetermined (neither entailed nor contradicted) given the premise?".into(),
        other => format!("Does the relation '{other}' hold between the premise and the hypothesis?"),
    }
}

/// Template for the offline rationale-generation pass.
pub fn rationale_template(task: TaskKind) -> PromptTemplate {
    let skeleton = match task.id {
        TaskId::Nli => "{header}\n\n{demos}Premise: {premise}\nHypothesis: {hypothesis}\nANSWER: {gold}\nEXPLANATION:",
        TaskId::Commonsense => "{header}\n\n{demos}Question: {question}\nOptions: {options}\nANSWER: {gold}\nEXPLANATION:",
        TaskId::Qa => "{header}\n\n{demos}Context: {input}\nQuestion: {question}\nANSWER: {gold}\nEXPLANATION:",
        _ => "{header}\n\n{demos}INPUT: {input}\nANSWER: {gold}\nEXPLANATION:",
    };
    PromptTemplate::new(
        task.id,
        "Explain briefly why the given answer is correct for the input. Reply with the explanation only.",
        skeleton,
    )
    .expect("rationale skeleton is valid")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_task_step_has_a_template() {
        for id in TaskId::ALL {
            let kind = TaskKind::standard(id);
            for step in 0..kind.steps() {
                assert!(builtin(id, step).is_some(), "missing template for {id} step {step}");
            }
            assert!(builtin(id, kind.steps()).is_none());
        }
    }

    #[test]
    fn pos_categories_number_from_one() {
        let tags: Vec<String> = vec!["CC".into(), "CD".into()];
        let lines = pos_categories(&tags);
        assert!(lines.starts_with("1. CC Coordinating conjunction"));
        assert!(lines.contains("2. CD Cardinal number"));
    }
}
