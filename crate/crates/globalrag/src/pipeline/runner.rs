//! The full pipeline strategy: iterated retrieval with per-document
//! relevance filtering, structured record extraction over the surviving
//! documents, and a symbolic aggregation tool computing the final answer.

use std::collections::HashSet;
use std::sync::OnceLock;

use regex::Regex;

use crate::corpus::{AttrValue, Document};
use crate::filter::{self, FilterError, RelevanceFilter};
use crate::gateway::{ChatRequest, Gateway};
use crate::prompts;
use crate::tools::{
    self, AttributeRecord, Extremum, RecordValue, SortOrder,
};

use super::intent;
use super::{PipelineRunner, RunTrace, Strategy, TaskType};

/// Fallback answer when no document survives filtering or aggregation
/// cannot run.
pub(super) const NO_MATCH_ANSWER: &str = "no matching documents";

pub(super) fn run_globalrag(runner: &PipelineRunner, id: &str, query: &str) -> RunTrace {
    let mut trace = RunTrace::new(id, query, Strategy::Globalrag);

    let task = match intent::classify_task(query, Some(runner.gateway)) {
        Ok(task) => task,
        Err(e) => {
            trace.errors.push(format!("classification failed: {e}"));
            return trace;
        }
    };
    trace.task = Some(task);

    let relevance = RelevanceFilter::new(runner.gateway);
    let mut seen: HashSet<String> = HashSet::new();
    let mut gathered: Vec<String> = Vec::new();
    let mut issued: Vec<String> = Vec::new();

    for step in 0..runner.config.max_iterations {
        let subquery = if step == 0 {
            query.to_string()
        } else {
            match next_subquery(runner.gateway, query, step, &issued, gathered.len()) {
                Ok(Some(q)) => q,
                Ok(None) => break,
                Err(e) => {
                    trace.errors.push(format!("planning failed at step {step}: {e}"));
                    break;
                }
            }
        };
        issued.push(subquery.clone());

        let hits = match runner.retriever.retrieve(&subquery, runner.config.retrieve_k) {
            Ok(hits) => hits,
            Err(e) => {
                trace.errors.push(format!("retrieval failed at step {step}: {e}"));
                break;
            }
        };
        let retrieved_ids: Vec<String> = hits.iter().map(|h| h.doc_id.clone()).collect();

        let candidates = filter::prefilter(&hits, runner.config.prefilter_min_score);
        let docs: Vec<&Document> = candidates
            .iter()
            .filter_map(|h| runner.corpus.get(&h.doc_id))
            .collect();

        let (verdicts, filter_failed) = match relevance.judge(query, &docs) {
            Ok(verdicts) => (verdicts, false),
            Err(FilterError::Gateway { partial, source }) => {
                trace
                    .errors
                    .push(format!("filtering failed at step {step}: {source}"));
                (partial, true)
            }
        };
        for verdict in &verdicts {
            if verdict.rationale.as_deref() == Some("unparseable") {
                trace.errors.push(format!(
                    "unparseable relevance verdict for document {}",
                    verdict.doc_id
                ));
            }
        }
        let surviving_ids: Vec<String> = verdicts
            .iter()
            .filter(|v| v.relevant)
            .map(|v| v.doc_id.clone())
            .collect();
        for doc_id in &surviving_ids {
            if seen.insert(doc_id.clone()) {
                gathered.push(doc_id.clone());
            }
        }
        trace.iterations.push(super::IterationTrace {
            step,
            subquery,
            retrieved_ids,
            surviving_ids,
        });
        if filter_failed {
            break;
        }
    }

    trace.retrieved_ids_at_k = gathered.clone();
    let docs: Vec<&Document> = gathered
        .iter()
        .filter_map(|id| runner.corpus.get(id))
        .collect();

    if docs.is_empty() {
        trace.answer_text = NO_MATCH_ANSWER.to_string();
        if task == TaskType::Count {
            let result = tools::count_tool(&[]);
            trace.answer_text = result.answer_text.clone();
            trace.result = Some(result);
        }
        return trace;
    }

    aggregate(runner, task, query, &docs, &mut trace);
    trace
}

/// Asks the planner for the next retrieval query; DONE or an empty reply
/// ends the loop.
fn next_subquery(
    gateway: &Gateway,
    original: &str,
    completed_rounds: usize,
    issued: &[String],
    gathered_docs: usize,
) -> Result<Option<String>, crate::gateway::GatewayError> {
    let request = ChatRequest::new(
        prompts::PLAN_SYSTEM,
        &prompts::plan_user_prompt(original, completed_rounds, issued, gathered_docs),
    );
    let reply = gateway.complete(&request)?.text;
    let line = reply.lines().next().unwrap_or("").trim();
    if line.is_empty() || line.eq_ignore_ascii_case("done") {
        return Ok(None);
    }
    Ok(Some(line.to_string()))
}

fn aggregate(
    runner: &PipelineRunner,
    task: TaskType,
    query: &str,
    docs: &[&Document],
    trace: &mut RunTrace,
) {
    if task == TaskType::Count {
        let records = membership_records(docs);
        let result = tools::count_tool(&records);
        trace.extracted = records;
        trace.answer_text = result.answer_text.clone();
        trace.result = Some(result);
        return;
    }

    let attribute = intent::infer_attribute(query).unwrap_or_else(|| {
        trace
            .errors
            .push("could not infer target attribute; defaulting to years_experience".to_string());
        crate::corpus::ATTR_YEARS.to_string()
    });
    let outcome = extract_records(docs, &attribute, Some(runner.gateway));
    trace.errors.extend(outcome.notes);
    trace.extracted = outcome.records.clone();

    let tool_result = match task {
        TaskType::MinMax => {
            let direction = intent::infer_extremum(query).unwrap_or_else(|| {
                trace
                    .errors
                    .push("could not infer direction; defaulting to max".to_string());
                Extremum::Max
            });
            tools::extremum_tool(&outcome.records, direction)
        }
        TaskType::Sort => {
            let order = intent::infer_sort_order(query).unwrap_or_else(|| {
                trace
                    .errors
                    .push("could not infer sort order; defaulting to descending".to_string());
                SortOrder::Desc
            });
            tools::sort_tool(&outcome.records, order)
        }
        TaskType::TopK => {
            let k = intent::parse_topk_k(query).unwrap_or_else(|| {
                trace.errors.push("could not parse k; defaulting to 5".to_string());
                5
            });
            let order = intent::infer_sort_order(query).unwrap_or(SortOrder::Desc);
            tools::topk_tool(&outcome.records, k, order)
        }
        TaskType::Count => unreachable!("count handled above"),
    };
    match tool_result {
        Ok(result) => {
            trace.answer_text = result.answer_text.clone();
            trace.result = Some(result);
        }
        Err(e) => {
            trace.errors.push(format!("aggregation failed: {e}"));
            trace.answer_text = NO_MATCH_ANSWER.to_string();
        }
    }
}

/// One presence record per document, for counting.
pub(super) fn membership_records(docs: &[&Document]) -> Vec<AttributeRecord> {
    docs.iter()
        .map(|d| AttributeRecord::numeric(&d.id, d.label(), "membership", 1.0))
        .collect()
}

/// Records plus human-readable notes about documents that yielded none.
pub struct ExtractOutcome {
    pub records: Vec<AttributeRecord>,
    pub notes: Vec<String>,
}

fn number_regex() -> &'static Regex {
    static RE: OnceLock<Regex> = OnceLock::new();
    RE.get_or_init(|| Regex::new(r"-?\d+(?:\.\d+)?").expect("valid regex"))
}

/// Extracts one numeric record per document for the given attribute:
/// straight from structured attributes when present, otherwise through one
/// model extraction call per document. Documents that yield no usable value
/// are skipped with a note.
pub fn extract_records(
    docs: &[&Document],
    attribute: &str,
    gateway: Option<&Gateway>,
) -> ExtractOutcome {
    let mut outcome = ExtractOutcome {
        records: Vec::with_capacity(docs.len()),
        notes: Vec::new(),
    };
    let unit = if attribute == crate::corpus::ATTR_YEARS {
        Some("years")
    } else {
        None
    };
    let mut gateway_down = false;
    for doc in docs {
        match doc.attributes.get(attribute) {
            Some(AttrValue::Number(value)) => {
                outcome.records.push(AttributeRecord {
                    entity_id: doc.id.clone(),
                    entity_label: doc.label().to_string(),
                    attribute: attribute.to_string(),
                    value: match unit {
                        Some(u) => RecordValue::number_with_unit(*value, u),
                        None => RecordValue::number(*value),
                    },
                });
            }
            Some(_) => {
                outcome.notes.push(format!(
                    "attribute {attribute:?} on document {} is not numeric; skipped",
                    doc.id
                ));
            }
            None => {
                let Some(gateway) = gateway else {
                    outcome.notes.push(format!(
                        "document {} lacks attribute {attribute:?}; no gateway for extraction",
                        doc.id
                    ));
                    continue;
                };
                if gateway_down {
                    continue;
                }
                let request = ChatRequest::new(
                    prompts::EXTRACT_SYSTEM,
                    &prompts::extract_user_prompt(&doc.id, attribute, &doc.text),
                );
                match gateway.complete(&request) {
                    Ok(response) => {
                        match number_regex()
                            .find(&response.text)
                            .and_then(|m| m.as_str().parse::<f64>().ok())
                        {
                            Some(value) => outcome.records.push(AttributeRecord {
                                entity_id: doc.id.clone(),
                                entity_label: doc.label().to_string(),
                                attribute: attribute.to_string(),
                                value: match unit {
                                    Some(u) => RecordValue::number_with_unit(value, u),
                                    None => RecordValue::number(value),
                                },
                            }),
                            None => outcome.notes.push(format!(
                                "extraction for document {} returned no number: {:?}",
                                doc.id, response.text
                            )),
                        }
                    }
                    Err(e) => {
                        outcome
                            .notes
                            .push(format!("extraction gateway failure on {}: {e}", doc.id));
                        gateway_down = true;
                    }
                }
            }
        }
    }
    outcome
}
