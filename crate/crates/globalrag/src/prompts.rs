//! Versioned prompt texts shared by the pipeline stages, plus parsers that
//! recover the structured fields from rendered prompts (used by scripted
//! backends that answer from ground truth).

/// Version tag persisted alongside any output produced with the relevance
/// prompt, so recorded runs can be tied to the exact prompt wording.
pub const FILTER_PROMPT_VERSION: &str = "filter/v1";

const FILTER_PROMPT_TEMPLATE: &str = include_str!("../assets/filter_prompt.txt");

pub const FILTER_SYSTEM: &str =
    "You judge document relevance. Reply with \"yes\" or \"no\" only.";

pub const PLAN_SYSTEM: &str = "You plan retrieval for corpus-wide questions. \
Reply with the next retrieval query to issue, or DONE when coverage is sufficient.";

pub const CLASSIFY_SYSTEM: &str = "You classify questions by the aggregation they \
require. Reply with exactly one of: count, minmax, sort, topk.";

pub const EXTRACT_SYSTEM: &str = "You extract one attribute value from a document. \
Reply with the value only.";

pub const READER_SYSTEM: &str =
    "You answer the question using only the provided documents. Reply with the answer only.";

pub const ITERATIVE_SYSTEM: &str = "You answer step by step, retrieving as you go. \
Reply with a retrieval query for missing evidence, or ANSWER: <final answer> when confident.";

/// Renders the per-document relevance question.
pub fn filter_user_prompt(document_id: &str, query: &str, document_text: &str) -> String {
    FILTER_PROMPT_TEMPLATE
        .replace("{document_id}", document_id)
        .replace("{query}", query)
        .replace("{document_text}", document_text)
}

/// Recovers (document id, query) from a rendered relevance prompt.
pub fn parse_filter_prompt(user_prompt: &str) -> Option<(String, String)> {
    let first_line = user_prompt.lines().next()?;
    let rest = first_line.strip_prefix("Does document ")?;
    let (doc_id, rest) = rest.split_once(" contain information to answer query \"")?;
    let query = rest.strip_suffix("\"?")?;
    Some((doc_id.to_string(), query.to_string()))
}

pub fn plan_user_prompt(
    original_query: &str,
    completed_rounds: usize,
    prior_subqueries: &[String],
    gathered_docs: usize,
) -> String {
    let mut prompt = format!(
        "Original question: {original_query}\nCompleted retrieval rounds: {completed_rounds}\nRelevant documents gathered so far: {gathered_docs}\n"
    );
    if !prior_subqueries.is_empty() {
        prompt.push_str("Queries already issued:\n");
        for q in prior_subqueries {
            prompt.push_str("- ");
            prompt.push_str(q);
            prompt.push('\n');
        }
    }
    prompt.push_str("Next retrieval query (or DONE):");
    prompt
}

/// Recovers (original query, completed rounds) from a rendered plan prompt.
pub fn parse_plan_prompt(user_prompt: &str) -> Option<(String, usize)> {
    let mut original = None;
    let mut rounds = None;
    for line in user_prompt.lines() {
        if let Some(q) = line.strip_prefix("Original question: ") {
            original = Some(q.to_string());
        } else if let Some(n) = line.strip_prefix("Completed retrieval rounds: ") {
            rounds = n.trim().parse().ok();
        }
    }
    Some((original?, rounds?))
}

pub fn classify_user_prompt(query: &str) -> String {
    format!("Question: {query}\nTask:")
}

pub fn parse_classify_prompt(user_prompt: &str) -> Option<String> {
    let rest = user_prompt.strip_prefix("Question: ")?;
    let (query, _) = rest.rsplit_once("\nTask:")?;
    Some(query.to_string())
}

pub fn extract_user_prompt(document_id: &str, attribute: &str, document_text: &str) -> String {
    format!(
        "Document {document_id}:\n{document_text}\n\nValue of attribute \"{attribute}\" for document {document_id}:"
    )
}

/// Recovers (document id, attribute) from a rendered extraction prompt.
pub fn parse_extract_prompt(user_prompt: &str) -> Option<(String, String)> {
    let last_line = user_prompt.lines().last()?;
    let rest = last_line.strip_prefix("Value of attribute \"")?;
    let (attribute, rest) = rest.split_once("\" for document ")?;
    let doc_id = rest.strip_suffix(':')?;
    Some((doc_id.to_string(), attribute.to_string()))
}

pub fn reader_user_prompt(query: &str, documents: &[(&str, &str)]) -> String {
    let mut prompt = String::new();
    for (id, text) in documents {
        prompt.push_str(&format!("Document {id}:\n{text}\n\n"));
    }
    prompt.push_str(&format!("Question: {query}\nAnswer:"));
    prompt
}

pub fn iterative_user_prompt(
    query: &str,
    documents: &[(&str, &str)],
    prior_queries: &[String],
) -> String {
    let mut prompt = format!("Question: {query}\n\n");
    if !documents.is_empty() {
        prompt.push_str("Evidence so far:\n");
        for (id, text) in documents {
            prompt.push_str(&format!("Document {id}:\n{text}\n\n"));
        }
    }
    if !prior_queries.is_empty() {
        prompt.push_str("Queries already issued:\n");
        for q in prior_queries {
            prompt.push_str("- ");
            prompt.push_str(q);
            prompt.push('\n');
        }
    }
    prompt.push_str("Next query, or ANSWER: <final answer>:");
    prompt
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn filter_prompt_round_trips_its_fields() {
        let prompt = filter_user_prompt("doc-7", "who has the most experience?", "Body text.");
        assert!(prompt.contains("contain information to answer query"));
        let (doc_id, query) = parse_filter_prompt(&prompt).unwrap();
        assert_eq!(doc_id, "doc-7");
        assert_eq!(query, "who has the most experience?");
    }

    #[test]
    fn plan_prompt_round_trips_its_fields() {
        let prompt = plan_user_prompt("big question", 3, &["q1".into()], 12);
        let (original, rounds) = parse_plan_prompt(&prompt).unwrap();
        assert_eq!(original, "big question");
        assert_eq!(rounds, 3);
    }

    #[test]
    fn classify_prompt_round_trips_the_query() {
        let prompt = classify_user_prompt("How many candidates are there?");
        assert_eq!(
            parse_classify_prompt(&prompt).unwrap(),
            "How many candidates are there?"
        );
    }

    #[test]
    fn extract_prompt_round_trips_its_fields() {
        let prompt = extract_user_prompt("doc-3", "years_experience", "Some resume text.");
        let (doc_id, attribute) = parse_extract_prompt(&prompt).unwrap();
        assert_eq!(doc_id, "doc-3");
        assert_eq!(attribute, "years_experience");
    }
}
