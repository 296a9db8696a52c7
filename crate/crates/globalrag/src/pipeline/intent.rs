//! Question understanding: task classification (rules first, model
//! fallback) and recovery of task parameters (k, direction, order,
//! attribute) from question text.

use std::sync::OnceLock;

use regex::Regex;
use thiserror::Error;

use crate::corpus::ATTR_YEARS;
use crate::gateway::{ChatRequest, Gateway, GatewayError};
use crate::prompts;
use crate::tools::{Extremum, SortOrder};

use super::TaskType;

#[derive(Debug, Error)]
pub enum IntentError {
    #[error("no classification rule matched and no gateway was provided")]
    NoRuleMatched,
    #[error("classifier reply {reply:?} is not a task label")]
    Unparseable { reply: String },
    #[error(transparent)]
    Gateway(#[from] GatewayError),
}

fn topk_regex() -> &'static Regex {
    static RE: OnceLock<Regex> = OnceLock::new();
    RE.get_or_init(|| Regex::new(r"top\s*-?\s*(\d+)").expect("valid regex"))
}

/// Comparative phrases that contain superlative words without expressing a
/// ranking direction; masked before direction checks.
fn mask_comparatives(lower: &str) -> String {
    lower
        .replace("at least", "")
        .replace("at most", "")
        .replace("more than", "")
        .replace("fewer than", "")
}

/// Deterministic classification rules, checked in a fixed order: a
/// `top <n>` mention wins, then counting phrasing, then ordering phrasing,
/// then a bare superlative.
pub fn classify_by_rules(query: &str) -> Option<TaskType> {
    let lower = query.to_lowercase();
    if topk_regex().is_match(&lower) {
        return Some(TaskType::TopK);
    }
    if lower.contains("how many") || lower.contains("count the") {
        return Some(TaskType::Count);
    }
    let masked = mask_comparatives(&lower);
    const SORT_CUES: [&str; 7] = [
        "sort",
        "rank",
        "ordered by",
        "order by",
        "ascending",
        "descending",
        " to least",
    ];
    if SORT_CUES.iter().any(|cue| masked.contains(cue)) || masked.contains("least to most") {
        return Some(TaskType::Sort);
    }
    const SUPERLATIVES: [&str; 5] = ["most", "least", "highest", "lowest", "fewest"];
    if SUPERLATIVES.iter().any(|word| masked.contains(word)) {
        return Some(TaskType::MinMax);
    }
    None
}

/// Classifies a question, falling back to one model call when no rule
/// matches and a gateway is available.
pub fn classify_task(query: &str, gateway: Option<&Gateway>) -> Result<TaskType, IntentError> {
    if let Some(task) = classify_by_rules(query) {
        return Ok(task);
    }
    let Some(gateway) = gateway else {
        return Err(IntentError::NoRuleMatched);
    };
    let request = ChatRequest::new(
        prompts::CLASSIFY_SYSTEM,
        &prompts::classify_user_prompt(query),
    );
    let reply = gateway.complete(&request)?.text;
    TaskType::parse_label(&reply).ok_or(IntentError::Unparseable { reply })
}

/// Reads the ranking direction for extremum questions.
pub fn infer_extremum(query: &str) -> Option<Extremum> {
    let masked = mask_comparatives(&query.to_lowercase());
    if ["least", "lowest", "fewest"].iter().any(|w| masked.contains(w)) {
        return Some(Extremum::Min);
    }
    if ["most", "highest"].iter().any(|w| masked.contains(w)) {
        return Some(Extremum::Max);
    }
    None
}

/// Reads the sort direction for ordering questions.
pub fn infer_sort_order(query: &str) -> Option<SortOrder> {
    let masked = mask_comparatives(&query.to_lowercase());
    if masked.contains("ascending")
        || masked.contains("least to most")
        || masked.contains("lowest first")
    {
        return Some(SortOrder::Asc);
    }
    if masked.contains("descending")
        || masked.contains("most to least")
        || masked.contains("highest first")
    {
        return Some(SortOrder::Desc);
    }
    // Fall back to the superlative direction for top-k phrasing.
    infer_extremum(query).map(|direction| match direction {
        Extremum::Max => SortOrder::Desc,
        Extremum::Min => SortOrder::Asc,
    })
}

/// Reads n from a `top <n>` mention.
pub fn parse_topk_k(query: &str) -> Option<usize> {
    let lower = query.to_lowercase();
    let captures = topk_regex().captures(&lower)?;
    captures[1].parse().ok()
}

/// Maps question wording onto the structured attribute to aggregate over.
pub fn infer_attribute(query: &str) -> Option<String> {
    let lower = query.to_lowercase();
    if lower.contains("experience") || lower.contains("years") {
        return Some(ATTR_YEARS.to_string());
    }
    None
}
