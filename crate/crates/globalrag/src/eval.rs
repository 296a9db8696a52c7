//! Metrics and batch evaluation: normalized token F1 over answer text,
//! document-set F1 at a retrieval cutoff, and per-task report aggregation.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::generator::QueryRecord;
use crate::pipeline::{RunTrace, TaskType};

#[derive(Debug, Error, PartialEq)]
pub enum EvalError {
    #[error("k must be at least 1")]
    InvalidK,
    #[error("retrieved list contains duplicate document id {id:?}")]
    DuplicateRetrieved { id: String },
    #[error("gold document set is empty")]
    EmptyGold,
    #[error("trace {id:?} has no matching dataset record")]
    OrphanTrace { id: String },
}

/// Answer-text normalization: lowercase, strip ASCII punctuation, collapse
/// whitespace, drop the articles a/an/the.
pub fn normalize_tokens(text: &str) -> Vec<String> {
    let lower = text.to_lowercase();
    let stripped: String = lower
        .chars()
        .filter(|c| !c.is_ascii_punctuation())
        .collect();
    stripped
        .split_whitespace()
        .filter(|t| !matches!(*t, "a" | "an" | "the"))
        .map(str::to_string)
        .collect()
}

/// Token-level F1 between a predicted and gold answer, with multiset token
/// overlap. Two empty (post-normalization) answers score 1; exactly one
/// empty scores 0.
pub fn token_f1(predicted: &str, gold: &str) -> f64 {
    let p = normalize_tokens(predicted);
    let g = normalize_tokens(gold);
    if p.is_empty() && g.is_empty() {
        return 1.0;
    }
    if p.is_empty() || g.is_empty() {
        return 0.0;
    }
    let mut gold_counts: HashMap<&str, usize> = HashMap::new();
    for token in &g {
        *gold_counts.entry(token.as_str()).or_insert(0) += 1;
    }
    let mut overlap = 0usize;
    for token in &p {
        if let Some(count) = gold_counts.get_mut(token.as_str()) {
            if *count > 0 {
                *count -= 1;
                overlap += 1;
            }
        }
    }
    if overlap == 0 {
        return 0.0;
    }
    let precision = overlap as f64 / p.len() as f64;
    let recall = overlap as f64 / g.len() as f64;
    2.0 * precision * recall / (precision + recall)
}

/// Document-set F1 over the first k retrieved ids against the gold set.
/// The retrieved list must be duplicate-free; the gold set must be
/// non-empty (callers skip such records).
pub fn doc_f1_at_k(
    retrieved: &[String],
    gold: &BTreeSet<String>,
    k: usize,
) -> Result<f64, EvalError> {
    if k == 0 {
        return Err(EvalError::InvalidK);
    }
    let mut seen = std::collections::HashSet::with_capacity(retrieved.len());
    for id in retrieved {
        if !seen.insert(id.as_str()) {
            return Err(EvalError::DuplicateRetrieved { id: id.clone() });
        }
    }
    if gold.is_empty() {
        return Err(EvalError::EmptyGold);
    }
    let cut = &retrieved[..retrieved.len().min(k)];
    if cut.is_empty() {
        return Ok(0.0);
    }
    let intersection = cut.iter().filter(|id| gold.contains(*id)).count();
    if intersection == 0 {
        return Ok(0.0);
    }
    let precision = intersection as f64 / cut.len() as f64;
    let recall = intersection as f64 / gold.len() as f64;
    Ok(2.0 * precision * recall / (precision + recall))
}

/// Mean metrics for one task.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TaskStats {
    pub f1: f64,
    pub d_f1: f64,
    pub n: usize,
}

/// Mean metrics over a pool of queries or tasks.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AvgStats {
    pub f1: f64,
    pub d_f1: f64,
}

/// Batch evaluation output: per-task means, the unweighted mean over tasks
/// (macro), the pooled mean over queries (micro), and how many records were
/// skipped for having no gold documents.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub k: usize,
    pub per_task: BTreeMap<TaskType, TaskStats>,
    pub macro_avg: Option<AvgStats>,
    pub micro_avg: Option<AvgStats>,
    pub skipped: usize,
    pub evaluated: usize,
}

/// Scores traces against their dataset records, joining by id. A trace
/// whose id is missing from the dataset is an error; dataset records with
/// no trace are ignored; records with empty gold sets are skipped and
/// counted.
pub fn evaluate_batch(
    traces: &[RunTrace],
    dataset: &[QueryRecord],
    k: usize,
) -> Result<EvalReport, EvalError> {
    if k == 0 {
        return Err(EvalError::InvalidK);
    }
    let by_id: HashMap<&str, &QueryRecord> =
        dataset.iter().map(|r| (r.id.as_str(), r)).collect();
    let mut sums: BTreeMap<TaskType, (f64, f64, usize)> = BTreeMap::new();
    let mut skipped = 0usize;
    for trace in traces {
        let record = by_id
            .get(trace.id.as_str())
            .ok_or_else(|| EvalError::OrphanTrace {
                id: trace.id.clone(),
            })?;
        if record.gold_doc_ids.is_empty() {
            skipped += 1;
            continue;
        }
        let f1 = token_f1(&trace.answer_text, &record.gold_answer);
        let d_f1 = doc_f1_at_k(&trace.retrieved_ids_at_k, &record.gold_doc_ids, k)?;
        let entry = sums.entry(record.task).or_insert((0.0, 0.0, 0));
        entry.0 += f1;
        entry.1 += d_f1;
        entry.2 += 1;
    }
    let per_task: BTreeMap<TaskType, TaskStats> = sums
        .iter()
        .map(|(task, (f1, d_f1, n))| {
            (
                *task,
                TaskStats {
                    f1: f1 / *n as f64,
                    d_f1: d_f1 / *n as f64,
                    n: *n,
                },
            )
        })
        .collect();
    let evaluated: usize = per_task.values().map(|s| s.n).sum();
    let macro_avg = (!per_task.is_empty()).then(|| {
        let count = per_task.len() as f64;
        AvgStats {
            f1: per_task.values().map(|s| s.f1).sum::<f64>() / count,
            d_f1: per_task.values().map(|s| s.d_f1).sum::<f64>() / count,
        }
    });
    let micro_avg = (evaluated > 0).then(|| {
        let total = evaluated as f64;
        AvgStats {
            f1: sums.values().map(|(f1, _, _)| f1).sum::<f64>() / total,
            d_f1: sums.values().map(|(_, d, _)| d).sum::<f64>() / total,
        }
    });
    Ok(EvalReport {
        k,
        per_task,
        macro_avg,
        micro_avg,
        skipped,
        evaluated,
    })
}

/// Column order for rendered tables.
const TABLE_TASKS: [TaskType; 4] = [
    TaskType::TopK,
    TaskType::Count,
    TaskType::Sort,
    TaskType::MinMax,
];

const EMPTY_CELL: &str = "—";

impl EvalReport {
    /// Plain-text table: one column per task plus the macro average, one
    /// row per metric. Empty cells render as a dash.
    pub fn render_table(&self) -> String {
        let headers: Vec<String> = TABLE_TASKS
            .iter()
            .map(|t| display_task(*t).to_string())
            .chain(std::iter::once("Avg".to_string()))
            .collect();
        let cell = |value: Option<f64>| -> String {
            value
                .map(|v| format!("{v:.4}"))
                .unwrap_or_else(|| EMPTY_CELL.to_string())
        };
        let task_cell = |task: TaskType, pick: &dyn Fn(&TaskStats) -> f64| -> String {
            cell(self.per_task.get(&task).map(pick))
        };

        let mut rows: Vec<Vec<String>> = Vec::new();
        let mut d_f1_row = vec![format!("D-F1@{}", self.k)];
        let mut f1_row = vec!["F1".to_string()];
        let mut n_row = vec!["n".to_string()];
        for task in TABLE_TASKS {
            d_f1_row.push(task_cell(task, &|s| s.d_f1));
            f1_row.push(task_cell(task, &|s| s.f1));
            n_row.push(
                self.per_task
                    .get(&task)
                    .map(|s| s.n.to_string())
                    .unwrap_or_else(|| EMPTY_CELL.to_string()),
            );
        }
        d_f1_row.push(cell(self.macro_avg.map(|a| a.d_f1)));
        f1_row.push(cell(self.macro_avg.map(|a| a.f1)));
        n_row.push(self.evaluated.to_string());
        rows.push(d_f1_row);
        rows.push(f1_row);
        rows.push(n_row);

        let mut out = String::new();
        out.push_str(&format!("{:<10}", "Metric"));
        for h in &headers {
            out.push_str(&format!("{h:>10}"));
        }
        out.push('\n');
        for row in rows {
            out.push_str(&format!("{:<10}", row[0]));
            for value in &row[1..] {
                out.push_str(&format!("{value:>10}"));
            }
            out.push('\n');
        }
        if self.skipped > 0 {
            out.push_str(&format!("(skipped {} record(s) with empty gold sets)\n", self.skipped));
        }
        out
    }
}

fn display_task(task: TaskType) -> &'static str {
    match task {
        TaskType::TopK => "TopK",
        TaskType::Count => "Count",
        TaskType::Sort => "Sort",
        TaskType::MinMax => "MinMax",
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pipeline::Strategy;

    fn ids(items: &[&str]) -> Vec<String> {
        items.iter().map(|s| s.to_string()).collect()
    }

    fn gold(items: &[&str]) -> BTreeSet<String> {
        items.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn token_f1_fixture_two_thirds() {
        // Overlap 2, |pred| = 3, |gold| = 3: F1 = 2*2/(3+3) = 2/3.
        let f1 = token_f1("alpha beta gamma", "alpha beta delta");
        assert!((f1 - 2.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn token_f1_normalization_rules() {
        assert_eq!(token_f1("The Answer!", "answer"), 1.0);
        assert_eq!(token_f1("An  apple,  a day", "apple day"), 1.0);
        assert_eq!(token_f1("", ""), 1.0);
        assert_eq!(token_f1("something", ""), 0.0);
        assert_eq!(token_f1("", "something"), 0.0);
        // Articles-only answers normalize to empty.
        assert_eq!(token_f1("the a an", "the"), 1.0);
    }

    #[test]
    fn token_f1_uses_multiset_overlap() {
        // pred: [x, x], gold: [x] -> overlap 1, p = 1/2, r = 1 -> 2/3.
        let f1 = token_f1("x x", "x");
        assert!((f1 - 2.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn doc_f1_fixture_four_sevenths() {
        // |retrieved| = 3, |gold| = 4, intersection 2: F1 = 2*2/(3+4) = 4/7.
        let f1 = doc_f1_at_k(&ids(&["a", "b", "x"]), &gold(&["a", "b", "c", "d"]), 10).unwrap();
        assert!((f1 - 4.0 / 7.0).abs() < 1e-15);
    }

    #[test]
    fn doc_f1_truncates_to_k() {
        let retrieved = ids(&["a", "x", "b"]);
        let g = gold(&["a", "b"]);
        // At k = 2 only [a, x] count: precision 1/2, recall 1/2.
        let f1 = doc_f1_at_k(&retrieved, &g, 2).unwrap();
        assert!((f1 - 0.5).abs() < 1e-15);
    }

    #[test]
    fn doc_f1_zero_on_no_intersection_and_empty_retrieval() {
        assert_eq!(doc_f1_at_k(&ids(&["x"]), &gold(&["a"]), 5).unwrap(), 0.0);
        assert_eq!(doc_f1_at_k(&[], &gold(&["a"]), 5).unwrap(), 0.0);
    }

    #[test]
    fn doc_f1_rejects_duplicates_and_bad_inputs() {
        assert_eq!(
            doc_f1_at_k(&ids(&["a", "a"]), &gold(&["a"]), 5).unwrap_err(),
            EvalError::DuplicateRetrieved { id: "a".to_string() }
        );
        assert_eq!(
            doc_f1_at_k(&ids(&["a"]), &gold(&[]), 5).unwrap_err(),
            EvalError::EmptyGold
        );
        assert_eq!(
            doc_f1_at_k(&ids(&["a"]), &gold(&["a"]), 0).unwrap_err(),
            EvalError::InvalidK
        );
    }

    fn record(id: &str, task: TaskType, answer: &str, gold_ids: &[&str]) -> QueryRecord {
        QueryRecord {
            id: id.to_string(),
            question: format!("question {id}"),
            task,
            gold_answer: answer.to_string(),
            gold_doc_ids: gold(gold_ids),
            trajectory: None,
            bucket: None,
        }
    }

    fn trace(id: &str, answer: &str, retrieved: &[&str]) -> RunTrace {
        RunTrace {
            id: id.to_string(),
            query: format!("question {id}"),
            strategy: Strategy::Globalrag,
            task: None,
            iterations: Vec::new(),
            extracted: Vec::new(),
            result: None,
            retrieved_ids_at_k: ids(retrieved),
            answer_text: answer.to_string(),
            errors: Vec::new(),
        }
    }

    #[test]
    fn batch_eval_joins_by_id_and_averages() {
        let dataset = vec![
            record("q1", TaskType::Count, "3", &["a", "b", "c"]),
            record("q2", TaskType::Count, "5", &["a", "b"]),
            record("q3", TaskType::Sort, "x, y", &["a"]),
        ];
        let traces = vec![
            trace("q1", "3", &["a", "b", "c"]),
            trace("q2", "4", &["a", "b"]),
            trace("q3", "x, y", &["a"]),
        ];
        let report = evaluate_batch(&traces, &dataset, 10).unwrap();
        let count = report.per_task[&TaskType::Count];
        assert_eq!(count.n, 2);
        assert!((count.f1 - 0.5).abs() < 1e-15);
        assert!((count.d_f1 - 1.0).abs() < 1e-15);
        let macro_avg = report.macro_avg.unwrap();
        assert!((macro_avg.f1 - (0.5 + 1.0) / 2.0).abs() < 1e-15);
        let micro_avg = report.micro_avg.unwrap();
        assert!((micro_avg.f1 - (0.0 + 1.0 + 1.0) / 3.0).abs() < 1e-15);
        assert_eq!(report.evaluated, 3);
    }

    #[test]
    fn orphan_trace_is_an_error() {
        let dataset = vec![record("q1", TaskType::Count, "3", &["a"])];
        let traces = vec![trace("zz", "3", &["a"])];
        assert_eq!(
            evaluate_batch(&traces, &dataset, 10).unwrap_err(),
            EvalError::OrphanTrace { id: "zz".to_string() }
        );
    }

    #[test]
    fn empty_gold_records_are_skipped_and_counted() {
        let dataset = vec![
            record("q1", TaskType::Count, "3", &[]),
            record("q2", TaskType::Count, "2", &["a"]),
        ];
        let traces = vec![trace("q1", "3", &["a"]), trace("q2", "2", &["a"])];
        let report = evaluate_batch(&traces, &dataset, 10).unwrap();
        assert_eq!(report.skipped, 1);
        assert_eq!(report.evaluated, 1);
    }

    #[test]
    fn report_table_has_fixed_column_order_and_dashes() {
        let dataset = vec![record("q1", TaskType::Count, "3", &["a"])];
        let traces = vec![trace("q1", "3", &["a"])];
        let report = evaluate_batch(&traces, &dataset, 20).unwrap();
        let table = report.render_table();
        let header = table.lines().next().unwrap();
        let topk_pos = header.find("TopK").unwrap();
        let count_pos = header.find("Count").unwrap();
        let sort_pos = header.find("Sort").unwrap();
        let minmax_pos = header.find("MinMax").unwrap();
        let avg_pos = header.find("Avg").unwrap();
        assert!(topk_pos < count_pos && count_pos < sort_pos);
        assert!(sort_pos < minmax_pos && minmax_pos < avg_pos);
        assert!(table.contains(EMPTY_CELL));
        assert!(table.contains("D-F1@20"));
    }

    #[test]
    fn report_round_trips_through_json() {
        let dataset = vec![record("q1", TaskType::TopK, "x, y", &["a", "b"])];
        let traces = vec![trace("q1", "x, y", &["a"])];
        let report = evaluate_batch(&traces, &dataset, 5).unwrap();
        let json = serde_json::to_string(&report).unwrap();
        let back: EvalReport = serde_json::from_str(&json).unwrap();
        assert_eq!(back, report);
    }
}
