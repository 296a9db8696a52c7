//! Two-stage relevance filtering: a similarity prefilter that trims the
//! candidate list, then one model verdict per surviving document.

use std::collections::HashMap;
use std::sync::Mutex;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::corpus::Document;
use crate::embed::RetrievalHit;
use crate::gateway::{ChatRequest, Gateway, GatewayError};
use crate::prompts;

/// Which stage produced a verdict.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum VerdictStage {
    Prefilter,
    Llm,
}

/// One per-document relevance decision.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FilterVerdict {
    pub doc_id: String,
    pub relevant: bool,
    pub stage: VerdictStage,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rationale: Option<String>,
}

#[derive(Debug, Error)]
pub enum FilterError {
    #[error("gateway failure after {} completed verdict(s): {source}", partial.len())]
    Gateway {
        /// Verdicts completed before the failure, in candidate order.
        partial: Vec<FilterVerdict>,
        #[source]
        source: GatewayError,
    },
}

/// Keeps hits scoring at least `min_score`, preserving input order. If the
/// threshold would drop everything, the single best hit is kept so the
/// model filter always sees at least one candidate.
pub fn prefilter(hits: &[RetrievalHit], min_score: f64) -> Vec<RetrievalHit> {
    let kept: Vec<RetrievalHit> = hits
        .iter()
        .filter(|h| h.score >= min_score)
        .cloned()
        .collect();
    if kept.is_empty() {
        if let Some(best) = hits.iter().cloned().reduce(|best, h| {
            if h.score > best.score {
                h
            } else {
                best
            }
        }) {
            return vec![best];
        }
    }
    kept
}

/// Maps a model reply onto a relevance verdict. A reply whose first word
/// starts with `yes` (any case) is relevant, `no` is irrelevant; anything
/// else is irrelevant with the rationale `"unparseable"`.
pub fn parse_verdict(reply: &str) -> (bool, Option<String>) {
    let trimmed = reply
        .trim()
        .trim_start_matches(|c: char| !c.is_ascii_alphanumeric());
    let lower = trimmed.to_ascii_lowercase();
    if lower.starts_with("yes") {
        (true, None)
    } else if lower.starts_with("no") {
        (false, None)
    } else {
        (false, Some("unparseable".to_string()))
    }
}

type VerdictKey = (String, String);

/// Judges candidate documents against a query, one model call per document,
/// caching verdicts per (query, document) pair for the filter's lifetime.
pub struct RelevanceFilter<'g> {
    gateway: &'g Gateway,
    cache: Mutex<HashMap<VerdictKey, (bool, Option<String>)>>,
}

impl<'g> RelevanceFilter<'g> {
    pub fn new(gateway: &'g Gateway) -> Self {
        RelevanceFilter {
            gateway,
            cache: Mutex::new(HashMap::new()),
        }
    }

    /// Returns one verdict per candidate, in candidate order. On a gateway
    /// failure the verdicts completed so far ride along in the error.
    pub fn judge(
        &self,
        query: &str,
        candidates: &[&Document],
    ) -> Result<Vec<FilterVerdict>, FilterError> {
        let mut verdicts = Vec::with_capacity(candidates.len());
        for doc in candidates {
            match self.judge_one(query, doc) {
                Ok((relevant, rationale)) => verdicts.push(FilterVerdict {
                    doc_id: doc.id.clone(),
                    relevant,
                    stage: VerdictStage::Llm,
                    rationale,
                }),
                Err(source) => {
                    return Err(FilterError::Gateway {
                        partial: verdicts,
                        source,
                    });
                }
            }
        }
        Ok(verdicts)
    }

    fn judge_one(
        &self,
        query: &str,
        doc: &Document,
    ) -> Result<(bool, Option<String>), GatewayError> {
        let key = (query.to_string(), doc.id.clone());
        if let Some(cached) = self.cache.lock().expect("verdict cache").get(&key) {
            return Ok(cached.clone());
        }
        let request = ChatRequest::new(
            prompts::FILTER_SYSTEM,
            &prompts::filter_user_prompt(&doc.id, query, &doc.text),
        );
        let response = self.gateway.complete(&request)?;
        let verdict = parse_verdict(&response.text);
        self.cache
            .lock()
            .expect("verdict cache")
            .insert(key, verdict.clone());
        Ok(verdict)
    }
}
