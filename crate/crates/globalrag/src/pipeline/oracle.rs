//! A ground-truth chat backend for offline runs and tests: it answers the
//! pipeline's internal prompts (filtering, planning, classification,
//! extraction) from the dataset and corpus instead of a model. Reader-style
//! prompts that would require free-form answers return "unknown", so it
//! never fabricates a baseline's final answer.

use std::collections::{BTreeMap, HashMap};

use crate::corpus::{AttrValue, Corpus};
use crate::gateway::{ChatBackend, ChatRequest, ChatResponse, GatewayError};
use crate::generator::QueryRecord;
use crate::prompts;
use crate::tools::format_number;

use super::TaskType;

pub struct OracleChat {
    gold_docs: HashMap<String, std::collections::BTreeSet<String>>,
    tasks: HashMap<String, TaskType>,
    attributes: HashMap<String, BTreeMap<String, AttrValue>>,
    /// Number of reformulation rounds suggested before replying DONE.
    plan_rounds: usize,
}

impl OracleChat {
    pub fn new(dataset: &[QueryRecord], corpus: &Corpus) -> Self {
        let mut gold_docs = HashMap::with_capacity(dataset.len());
        let mut tasks = HashMap::with_capacity(dataset.len());
        for record in dataset {
            gold_docs.insert(record.question.clone(), record.gold_doc_ids.clone());
            tasks.insert(record.question.clone(), record.task);
        }
        let attributes = corpus
            .iter()
            .map(|d| (d.id.clone(), d.attributes.clone()))
            .collect();
        OracleChat {
            gold_docs,
            tasks,
            attributes,
            plan_rounds: 2,
        }
    }

    pub fn with_plan_rounds(mut self, plan_rounds: usize) -> Self {
        self.plan_rounds = plan_rounds;
        self
    }

    fn answer_filter(&self, user_prompt: &str) -> String {
        let Some((doc_id, query)) = prompts::parse_filter_prompt(user_prompt) else {
            return "no".to_string();
        };
        let relevant = self
            .gold_docs
            .get(&query)
            .is_some_and(|gold| gold.contains(&doc_id));
        if relevant { "yes" } else { "no" }.to_string()
    }

    fn answer_plan(&self, user_prompt: &str) -> String {
        let Some((original, completed_rounds)) = prompts::parse_plan_prompt(user_prompt) else {
            return "DONE".to_string();
        };
        if completed_rounds <= self.plan_rounds {
            format!("{original} (coverage pass {completed_rounds})")
        } else {
            "DONE".to_string()
        }
    }

    fn answer_classify(&self, user_prompt: &str) -> String {
        prompts::parse_classify_prompt(user_prompt)
            .and_then(|query| self.tasks.get(&query))
            .map(|task| task.label().to_string())
            .unwrap_or_else(|| "unknown".to_string())
    }

    fn answer_extract(&self, user_prompt: &str) -> String {
        let Some((doc_id, attribute)) = prompts::parse_extract_prompt(user_prompt) else {
            return "unknown".to_string();
        };
        match self.attributes.get(&doc_id).and_then(|attrs| attrs.get(&attribute)) {
            Some(AttrValue::Number(v)) => format_number(*v),
            Some(AttrValue::Text(s)) => s.clone(),
            Some(AttrValue::List(items)) => items.join(", "),
            None => "unknown".to_string(),
        }
    }
}

impl ChatBackend for OracleChat {
    fn complete(&self, request: &ChatRequest) -> Result<ChatResponse, GatewayError> {
        let reply = match request.system_prompt.as_str() {
            s if s == prompts::FILTER_SYSTEM => self.answer_filter(&request.user_prompt),
            s if s == prompts::PLAN_SYSTEM => self.answer_plan(&request.user_prompt),
            s if s == prompts::CLASSIFY_SYSTEM => self.answer_classify(&request.user_prompt),
            s if s == prompts::EXTRACT_SYSTEM => self.answer_extract(&request.user_prompt),
            s if s == prompts::ITERATIVE_SYSTEM => "ANSWER: unknown".to_string(),
            _ => "unknown".to_string(),
        };
        Ok(ChatResponse::text(&reply))
    }
}
