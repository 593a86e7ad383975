//! Demonstration rendering: input, optional rationale, then the gold output
//! in the codec's grammar.

use crate::core::Demonstration;
use crate::prompting::PromptTemplate;

use super::CodecError;

/// Render one demonstration under a template's query block.
///
/// Without a rationale the demonstration is the rendered input followed by
/// the gold output. With one, the rationale comes first and the gold output
/// moves onto an `Answer:` sentinel line, mirroring how a reasoning model is
/// expected to respond.
pub fn render_demonstration(
    demo: &Demonstration,
    template: &PromptTemplate,
    with_rationale: bool,
) -> Result<String, CodecError> {
    let query = template.render_query_block(&demo.instance);
    let sep = if query.ends_with(':') { " " } else { "\n" };
    if with_rationale {
        let rationale = demo.rationale.as_deref().ok_or(CodecError::MissingRationale)?;
        Ok(format!(
            "{query}{sep}{rationale}\n{} {}",
            template.sentinel, demo.rendered_label
        ))
    } else {
        Ok(format!("{query}{sep}{}", demo.rendered_label))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::core::{TaskId, TaskInstance};

    fn template() -> PromptTemplate {
        PromptTemplate::new(
            TaskId::Nli,
            "Does the premise entail the hypothesis? Please answer yes or no.",
            "{header}\n\n{demos}Premise: {premise}\nHypothesis: {hypothesis}\nAnswer:",
        )
        .unwrap()
    }

    fn demo() -> Demonstration {
        let instance = TaskInstance::new("d1", "premise hypothesis").with_premise_hypothesis(
            "A man inspects the uniform of a figure.",
            "The man is sleeping.",
        );
        Demonstration::new(instance, "contradiction").with_rationale(
            "The hypothesis that the man is sleeping contradicts the premise that the man is inspecting the uniform.",
        )
    }

    #[test]
    fn rationale_form_uses_sentinel() {
        let text = render_demonstration(&demo(), &template(), true).unwrap();
        assert!(text.contains("contradicts the premise"));
        assert!(text.ends_with("Answer: contradiction"));
        let rationale_pos = text.find("contradicts the premise").unwrap();
        let answer_pos = text.rfind("Answer:").unwrap();
        assert!(rationale_pos < answer_pos);
    }

    #[test]
    fn plain_form_is_input_plus_label() {
        let mut d = demo();
        d.rationale = None;
        let text = render_demonstration(&d, &template(), false).unwrap();
        assert!(text.ends_with("Answer: contradiction"));
        assert!(!text.contains("sleeping contradicts"));
    }

    #[test]
    fn missing_rationale_is_an_error() {
        let mut d = demo();
        d.rationale = None;
        assert!(matches!(
            render_demonstration(&d, &template(), true),
            Err(CodecError::MissingRationale)
        ));
    }
}
