//! Classification pipelines: sentiment (label words), commonsense
//! (multi-choice), and POS tagging (multi-choice per word).

use crate::codecs::{choice_decode, label_word_decode, marker_encode, Fidelity};
use crate::core::{Payload, Prediction, Span, TaskId, TaskInstance};
use crate::prompting::templates;
use crate::strategies::VoteTally;

use super::demos::Arm;
use super::ledger::CallLedger;
use super::runner::{majority_threshold, PipelineContext};
use super::text::tokenize_words;
use super::PipelineError;

pub fn run_classification(
    instance: &TaskInstance,
    ctx: &PipelineContext<'_>,
    ledger: &mut CallLedger,
) -> Result<Prediction, PipelineError> {
    match ctx.cfg.task.id {
        TaskId::Sentiment => run_sentiment(instance, ctx, ledger),
        TaskId::Commonsense => run_commonsense(instance, ctx, ledger),
        TaskId::Pos => run_pos(instance, ctx, ledger),
        other => Err(PipelineError::Invalid(format!("{other} is not a classification task"))),
    }
}

fn run_sentiment(
    instance: &TaskInstance,
    ctx: &PipelineContext<'_>,
    ledger: &mut CallLedger,
) -> Result<Prediction, PipelineError> {
    let template = templates::builtin(TaskId::Sentiment, 0)
        .expect("sentiment template exists")
        .with_option_style(ctx.cfg.codec.option_style);
    let ranked = ctx.ranked_ids(instance)?;
    let demos = ctx.demos_for(&ranked, &Arm::Classify);
    let results = ctx.fan(instance, instance, &template, "classify", "-", &demos)?;

    let mut tally: VoteTally<usize> = VoteTally::new();
    for result in &results {
        let decoded = label_word_decode(ctx.decision_text(&result.text), &ctx.cfg.codec.label_words)
            .ok()
            .and_then(|label| ctx.cfg.task.label_index(&label));
        match decoded {
            Some(index) => {
                tally.add(index);
                result.record(ledger, Fidelity::Exact);
            }
            None => {
                tally.abstain();
                result.record(ledger, Fidelity::Rejected);
            }
        }
    }
    let space = ctx.cfg.task.label_space.clone();
    finish_single_label_with(instance, ctx, tally, move |i: &usize| {
        space.get(*i).cloned().unwrap_or_default()
    })
}

fn run_commonsense(
    instance: &TaskInstance,
    ctx: &PipelineContext<'_>,
    ledger: &mut CallLedger,
) -> Result<Prediction, PipelineError> {
    let options = instance
        .options
        .as_ref()
        .ok_or_else(|| PipelineError::Invalid("commonsense instance needs options".into()))?;
    let template = templates::builtin(TaskId::Commonsense, 0)
        .expect("commonsense template exists")
        .with_option_style(ctx.cfg.codec.option_style);
    let ranked = ctx.ranked_ids(instance)?;
    let demos = ctx.demos_for(&ranked, &Arm::Classify);
    let results = ctx.fan(instance, instance, &template, "classify", "-", &demos)?;

    let mut tally: VoteTally<usize> = VoteTally::new();
    for result in &results {
        match choice_decode(ctx.decision_text(&result.text), options) {
            Ok(index) => {
                tally.add(index);
                result.record(ledger, Fidelity::Exact);
            }
            Err(_) => {
                tally.abstain();
                result.record(ledger, Fidelity::Rejected);
            }
        }
    }
    let votes_named = |i: &usize| options.get(*i).cloned().unwrap_or_default();
    finish_single_label_with(instance, ctx, tally, votes_named)
}

fn finish_single_label(
    instance: &TaskInstance,
    ctx: &PipelineContext<'_>,
    tally: VoteTally<usize>,
    _n: usize,
) -> Result<Prediction, PipelineError> {
    let space = ctx.cfg.task.label_space.clone();
    finish_single_label_with(instance, ctx, tally, move |i: &usize| {
        space.get(*i).cloned().unwrap_or_default()
    })
}

fn finish_single_label_with(
    instance: &TaskInstance,
    ctx: &PipelineContext<'_>,
    tally: VoteTally<usize>,
    name_of: impl Fn(&usize) -> String,
) -> Result<Prediction, PipelineError> {
    let winner = *tally
        .winner()
        .ok_or_else(|| PipelineError::AllAbstained { unit: instance.id.clone() })?;
    let mut prediction = Prediction::new(ctx.cfg.task.id, Payload::Label(winner));
    for (index, count) in tally.counts() {
        prediction.votes.insert(format!("{index}:{}", name_of(index)), *count);
    }
    if tally.abstentions() > 0 {
        prediction.diagnostics.push(format!("{} prompt(s) abstained", tally.abstentions()));
    }
    Ok(prediction)
}

fn run_pos(
    instance: &TaskInstance,
    ctx: &PipelineContext<'_>,
    ledger: &mut CallLedger,
) -> Result<Prediction, PipelineError> {
    let tagset = &ctx.cfg.task.label_space;
    let grammar = ctx.cfg.codec.grammar()?;
    let categories = templates::pos_categories(tagset);
    let base = templates::builtin(TaskId::Pos, 0)
        .expect("pos template exists")
        .with_option_style(ctx.cfg.codec.option_style)
        .bind(&[
            ("categories", categories.as_str()),
            ("open", grammar.open()),
            ("close", grammar.close()),
        ]);
    let ranked = ctx.ranked_ids(instance)?;
    let demos = ctx.demos_for(&ranked, &Arm::PosWord);

    let words = tokenize_words(&instance.text);
    if words.is_empty() {
        return Err(PipelineError::Invalid("POS instance has no words".into()));
    }
    let mut labels: Vec<Option<usize>> = Vec::with_capacity(words.len());
    let mut prediction = Prediction::new(TaskId::Pos, Payload::WordLabels(Vec::new()));
    for word in &words {
        let span = Span::from_source(&instance.text, word.start, word.end, "WORD")
            .ok_or_else(|| PipelineError::Invalid("word offsets out of range".into()))?;
        let marked = marker_encode(&instance.text, &[span], &grammar)?;
        let mut variant = instance.clone();
        variant.text = marked;
        variant.question = Some(word.surface.clone());
        let arm_key = format!("w{}", word.index);
        let results = ctx.fan(instance, &variant, &base, "classify", &arm_key, &demos)?;

        let mut tally: VoteTally<usize> = VoteTally::new();
        for result in &results {
            match choice_decode(ctx.decision_text(&result.text), tagset) {
                Ok(index) => {
                    tally.add(index);
                    result.record(ledger, Fidelity::Exact);
                }
                Err(_) => {
                    tally.abstain();
                    result.record(ledger, Fidelity::Rejected);
                }
            }
        }
        let winner = tally.winner().copied();
        if let Some(index) = winner {
            for (tag_index, count) in tally.counts() {
                prediction
                    .votes
                    .insert(format!("w{}:{}", word.index, tagset[*tag_index]), *count);
            }
            labels.push(Some(index));
        } else {
            prediction
                .diagnostics
                .push(format!("word {} ({:?}): all prompts abstained", word.index, word.surface));
            labels.push(None);
        }
    }
    if labels.iter().all(Option::is_none) {
        return Err(PipelineError::AllAbstained { unit: instance.id.clone() });
    }
    prediction.payload = Payload::WordLabels(labels);
    Ok(prediction)
}
