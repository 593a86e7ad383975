//! Prompt assembly under a token budget, and the round-robin partition of
//! ranked demonstrations across N prompts.

use crate::codecs::render_demonstration;
use crate::core::{Demonstration, TaskInstance};

use super::budget::TokenBudget;
use super::template::PromptTemplate;
use super::PromptError;

/// One fully assembled prompt and the demonstrations that survived the
/// budget.
#[derive(Debug, Clone, PartialEq)]
pub struct PlannedPrompt {
    pub prompt_id: String,
    pub text: String,
    pub demo_ids: Vec<String>,
}

/// N assembled prompts for one instance with pairwise-disjoint
/// demonstration sets.
#[derive(Debug, Clone, PartialEq)]
pub struct PromptPlan {
    pub instance_id: String,
    pub prompts: Vec<PlannedPrompt>,
    pub n: usize,
}

impl PromptPlan {
    /// Check the plan invariants: at least one prompt, disjoint demo sets,
    /// every prompt within budget.
    pub fn check(&self, budget: &TokenBudget) -> Result<(), PromptError> {
        if self.prompts.is_empty() || self.n != self.prompts.len() {
            return Err(PromptError::InvalidTemplate("plan must contain N >= 1 prompts".into()));
        }
        let mut seen = std::collections::BTreeSet::new();
        for prompt in &self.prompts {
            for id in &prompt.demo_ids {
                if !seen.insert(id.clone()) {
                    return Err(PromptError::InvalidTemplate(format!(
                        "demo {id} appears in more than one prompt"
                    )));
                }
            }
            let count = budget.counter.count(&prompt.text);
            if count > budget.limit {
                return Err(PromptError::QueryTooLarge { count, limit: budget.limit });
            }
        }
        Ok(())
    }
}

/// Assemble one prompt: header and query must fit on their own, then
/// demonstrations are appended in the given order and trailing ones dropped
/// whole until the prompt fits. Returns the text and the ids of the
/// demonstrations that survived.
pub fn assemble_prompt(
    template: &PromptTemplate,
    demos: &[Demonstration],
    instance: &TaskInstance,
    budget: &TokenBudget,
) -> Result<(String, Vec<String>), PromptError> {
    let (prefix, suffix) = template.render_parts(instance);
    let base = format!("{prefix}{suffix}");
    let base_count = budget.counter.count(&base);
    if base_count > budget.limit {
        return Err(PromptError::QueryTooLarge { count: base_count, limit: budget.limit });
    }

    let mut block = String::new();
    let mut text = base;
    let mut used = Vec::new();
    for demo in demos {
        // A demonstration missing its rationale falls back to the plain
        // form; the strict path is exercised by codecs::render_demonstration.
        let include_rationale = template.with_rationale && demo.rationale.is_some();
        let body = render_demonstration(demo, template, include_rationale)?;
        let candidate_block = format!("{block}{body}\n\n");
        let candidate = format!("{prefix}{candidate_block}{suffix}");
        if budget.counter.count(&candidate) > budget.limit {
            break;
        }
        block = candidate_block;
        text = candidate;
        used.push(demo.instance.id.clone());
    }
    Ok((text, used))
}

/// Partition ranked demonstrations across N prompts round-robin (prompt `i`
/// receives ranks `i`, `i+N`, `i+2N`, ...), so every prompt mixes high- and
/// low-rank demonstrations and the N votes stay comparable. When fewer than
/// `N*k` demonstrations exist, N is lowered to `floor(available / k)`, with
/// a minimum of one prompt.
pub fn build_prompt_plan(
    template: &PromptTemplate,
    demos_ranked: &[Demonstration],
    n: usize,
    k: usize,
    instance: &TaskInstance,
    budget: &TokenBudget,
) -> Result<PromptPlan, PromptError> {
    if n == 0 || k == 0 {
        return Err(PromptError::InvalidTemplate("N and k must be at least 1".into()));
    }
    let available = demos_ranked.len();
    let n_eff = if available >= n * k { n } else { (available / k).max(1) };
    let take = available.min(n_eff * k);

    let mut prompts = Vec::with_capacity(n_eff);
    for i in 0..n_eff {
        let assigned: Vec<Demonstration> = (i..take).step_by(n_eff).map(|r| demos_ranked[r].clone()).collect();
        let (text, demo_ids) = assemble_prompt(template, &assigned, instance, budget)?;
        prompts.push(PlannedPrompt { prompt_id: format!("p{i}"), text, demo_ids });
    }
    Ok(PromptPlan { instance_id: instance.id.clone(), prompts, n: n_eff })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::core::TaskId;
    use crate::prompting::budget::CounterRule;

    fn template() -> PromptTemplate {
        PromptTemplate::new(TaskId::Sentiment, "Decide the sentiment.", "{header}\n\n{demos}Text: {input}\nSentiment:")
            .unwrap()
    }

    fn demo(id: &str, text: &str, label: &str) -> Demonstration {
        Demonstration::new(TaskInstance::new(id, text), label)
    }

    fn instance() -> TaskInstance {
        TaskInstance::new("t1", "a fine film")
    }

    #[test]
    fn zero_demos_is_header_plus_query() {
        let budget = TokenBudget::default();
        let (text, used) = assemble_prompt(&template(), &[], &instance(), &budget).unwrap();
        assert_eq!(text, "Decide the sentiment.\n\nText: a fine film\nSentiment:");
        assert!(used.is_empty());
    }

    #[test]
    fn all_fitting_demos_kept_in_order() {
        let budget = TokenBudget::default();
        let demos = vec![demo("d1", "good", "positive"), demo("d2", "bad", "negative")];
        let (text, used) = assemble_prompt(&template(), &demos, &instance(), &budget).unwrap();
        assert_eq!(used, vec!["d1", "d2"]);
        let p1 = text.find("Text: good").unwrap();
        let p2 = text.find("Text: bad").unwrap();
        assert!(p1 < p2);
    }

    #[test]
    fn tight_budget_drops_trailing_demo() {
        let demos = vec![
            demo("d1", "good", "positive"),
            demo("d2", "this one is rather longer than the rest", "negative"),
        ];
        // Base prompt plus first demo fits; the second demo does not.
        let t = template();
        let budget = TokenBudget::new(30, CounterRule::CharsDiv4);
        let (_, used) = assemble_prompt(&t, &demos, &instance(), &budget).unwrap();
        assert_eq!(used, vec!["d1"]);
    }

    #[test]
    fn oversized_query_is_an_error() {
        let budget = TokenBudget::new(3, CounterRule::CharsDiv4);
        let err = assemble_prompt(&template(), &[], &instance(), &budget).unwrap_err();
        assert!(matches!(err, PromptError::QueryTooLarge { .. }));
    }

    #[test]
    fn single_prompt_takes_top_k() {
        let demos: Vec<Demonstration> =
            (0..4).map(|i| demo(&format!("d{i}"), "t", "positive")).collect();
        let plan = build_prompt_plan(&template(), &demos, 1, 2, &instance(), &TokenBudget::default()).unwrap();
        assert_eq!(plan.n, 1);
        assert_eq!(plan.prompts[0].demo_ids, vec!["d0", "d1"]);
    }

    #[test]
    fn round_robin_interleaves_ranks() {
        let demos: Vec<Demonstration> =
            (1..=4).map(|i| demo(&format!("d{i}"), "t", "positive")).collect();
        let plan = build_prompt_plan(&template(), &demos, 2, 2, &instance(), &TokenBudget::default()).unwrap();
        assert_eq!(plan.n, 2);
        assert_eq!(plan.prompts[0].demo_ids, vec!["d1", "d3"]);
        assert_eq!(plan.prompts[1].demo_ids, vec!["d2", "d4"]);
        plan.check(&TokenBudget::default()).unwrap();
    }

    #[test]
    fn n_lowered_when_demos_short() {
        let demos: Vec<Demonstration> =
            (0..4).map(|i| demo(&format!("d{i}"), "t", "positive")).collect();
        let plan = build_prompt_plan(&template(), &demos, 3, 2, &instance(), &TokenBudget::default()).unwrap();
        assert_eq!(plan.n, 2);
        let plan = build_prompt_plan(&template(), &demos[..1], 3, 2, &instance(), &TokenBudget::default()).unwrap();
        assert_eq!(plan.n, 1);
        assert_eq!(plan.prompts[0].demo_ids, vec!["d0"]);
    }
}
