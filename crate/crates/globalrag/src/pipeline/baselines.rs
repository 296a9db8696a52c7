//! Baseline strategies: single-shot retrieve-and-read, and iterative
//! reasoning with interleaved retrieval. Both produce free-text answers
//! straight from the reader model, with no filtering or aggregation.

use std::collections::HashSet;

use crate::corpus::Document;
use crate::gateway::ChatRequest;
use crate::prompts;

use super::intent;
use super::{IterationTrace, PipelineRunner, RunTrace, Strategy};

pub(super) fn run_standard_rag(runner: &PipelineRunner, id: &str, query: &str) -> RunTrace {
    let mut trace = RunTrace::new(id, query, Strategy::StandardRag);
    trace.task = intent::classify_by_rules(query);

    let hits = match runner.retriever.retrieve(query, runner.config.retrieve_k) {
        Ok(hits) => hits,
        Err(e) => {
            trace.errors.push(format!("retrieval failed: {e}"));
            return trace;
        }
    };
    let retrieved_ids: Vec<String> = hits.iter().map(|h| h.doc_id.clone()).collect();
    trace.iterations.push(IterationTrace {
        step: 0,
        subquery: query.to_string(),
        retrieved_ids: retrieved_ids.clone(),
        surviving_ids: retrieved_ids.clone(),
    });
    trace.retrieved_ids_at_k = retrieved_ids.clone();

    let docs = resolve_docs(runner, &retrieved_ids);
    let pairs: Vec<(&str, &str)> = docs
        .iter()
        .map(|d| (d.id.as_str(), d.text.as_str()))
        .collect();
    let request = ChatRequest::new(prompts::READER_SYSTEM, &prompts::reader_user_prompt(query, &pairs));
    match runner.gateway.complete(&request) {
        Ok(response) => trace.answer_text = response.text.trim().to_string(),
        Err(e) => trace.errors.push(format!("reader failed: {e}")),
    }
    trace
}

pub(super) fn run_iterative(runner: &PipelineRunner, id: &str, query: &str) -> RunTrace {
    let mut trace = RunTrace::new(id, query, Strategy::Iterative);
    trace.task = intent::classify_by_rules(query);

    let mut seen: HashSet<String> = HashSet::new();
    let mut gathered: Vec<String> = Vec::new();
    let mut issued: Vec<String> = Vec::new();
    let mut current_query = query.to_string();
    let mut answered = false;

    for step in 0..runner.config.max_iterations {
        let hits = match runner.retriever.retrieve(&current_query, runner.config.retrieve_k) {
            Ok(hits) => hits,
            Err(e) => {
                trace.errors.push(format!("retrieval failed at step {step}: {e}"));
                break;
            }
        };
        let retrieved_ids: Vec<String> = hits.iter().map(|h| h.doc_id.clone()).collect();
        for doc_id in &retrieved_ids {
            if seen.insert(doc_id.clone()) {
                gathered.push(doc_id.clone());
            }
        }
        issued.push(current_query.clone());
        trace.iterations.push(IterationTrace {
            step,
            subquery: current_query.clone(),
            retrieved_ids: retrieved_ids.clone(),
            surviving_ids: retrieved_ids,
        });

        let docs = resolve_docs(runner, &gathered);
        let pairs: Vec<(&str, &str)> = docs
            .iter()
            .map(|d| (d.id.as_str(), d.text.as_str()))
            .collect();
        let request = ChatRequest::new(
            prompts::ITERATIVE_SYSTEM,
            &prompts::iterative_user_prompt(query, &pairs, &issued),
        );
        let reply = match runner.gateway.complete(&request) {
            Ok(response) => response.text.trim().to_string(),
            Err(e) => {
                trace.errors.push(format!("reasoning failed at step {step}: {e}"));
                break;
            }
        };
        if let Some(answer) = parse_final_answer(&reply) {
            trace.answer_text = answer;
            answered = true;
            break;
        }
        match reply.lines().next().map(str::trim) {
            Some(next) if !next.is_empty() => current_query = next.to_string(),
            _ => {
                trace.errors.push(format!("empty reasoning reply at step {step}"));
                break;
            }
        }
    }

    if !answered && trace.answer_text.is_empty() {
        trace.errors.push(format!(
            "no final answer after {} iteration(s)",
            trace.iterations.len()
        ));
    }
    trace.retrieved_ids_at_k = gathered;
    trace
}

fn parse_final_answer(reply: &str) -> Option<String> {
    let trimmed = reply.trim();
    let lower = trimmed.to_ascii_lowercase();
    lower
        .starts_with("answer:")
        .then(|| trimmed["answer:".len()..].trim().to_string())
}

fn resolve_docs<'a>(runner: &PipelineRunner<'a>, ids: &[String]) -> Vec<&'a Document> {
    ids.iter().filter_map(|id| runner.corpus.get(id)).collect()
}
