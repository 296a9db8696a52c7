//! Query execution strategies over a corpus: the full
//! retrieve-filter-aggregate loop, plus single-shot and iterative reader
//! baselines, with per-run traces suitable for batch evaluation.

pub mod intent;

mod baselines;
mod oracle;
mod runner;

pub use oracle::OracleChat;
pub use runner::extract_records;

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::corpus::Corpus;
use crate::embed::{self, Embedder, IndexError, RetrievalHit, VectorIndex};
use crate::gateway::Gateway;
use crate::generator::QueryRecord;
use crate::tools::{AggregationResult, AttributeRecord};

/// The aggregation a question calls for.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TaskType {
    Count,
    MinMax,
    Sort,
    TopK,
}

impl TaskType {
    pub const ALL: [TaskType; 4] = [
        TaskType::Count,
        TaskType::MinMax,
        TaskType::Sort,
        TaskType::TopK,
    ];

    pub fn label(self) -> &'static str {
        match self {
            TaskType::Count => "count",
            TaskType::MinMax => "minmax",
            TaskType::Sort => "sort",
            TaskType::TopK => "topk",
        }
    }

    pub fn parse_label(label: &str) -> Option<TaskType> {
        match label.trim().to_ascii_lowercase().as_str() {
            "count" => Some(TaskType::Count),
            "minmax" => Some(TaskType::MinMax),
            "sort" => Some(TaskType::Sort),
            "topk" => Some(TaskType::TopK),
            _ => None,
        }
    }
}

impl std::fmt::Display for TaskType {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.label())
    }
}

/// Answering strategy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Strategy {
    /// Iterative retrieve, filter, and aggregate.
    Globalrag,
    /// One retrieval round, then a reader prompt over the hits.
    StandardRag,
    /// Interleaved reasoning and retrieval with a free-text answer.
    Iterative,
}

impl Strategy {
    pub fn label(self) -> &'static str {
        match self {
            Strategy::Globalrag => "globalrag",
            Strategy::StandardRag => "standard_rag",
            Strategy::Iterative => "iterative",
        }
    }

    pub fn parse_label(label: &str) -> Option<Strategy> {
        match label.trim().to_ascii_lowercase().as_str() {
            "globalrag" => Some(Strategy::Globalrag),
            "standard_rag" => Some(Strategy::StandardRag),
            "iterative" => Some(Strategy::Iterative),
            _ => None,
        }
    }
}

impl std::fmt::Display for Strategy {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.label())
    }
}

/// Knobs shared by all strategies.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PipelineConfig {
    pub strategy: Strategy,
    /// Retrieval rounds cap.
    pub max_iterations: usize,
    /// Candidates fetched per retrieval round.
    pub retrieve_k: usize,
    /// Similarity floor applied before the per-document model filter.
    pub prefilter_min_score: f64,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            strategy: Strategy::Globalrag,
            max_iterations: 10,
            retrieve_k: 20,
            prefilter_min_score: 0.0,
        }
    }
}

/// One retrieval round in a trace.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IterationTrace {
    pub step: usize,
    pub subquery: String,
    pub retrieved_ids: Vec<String>,
    pub surviving_ids: Vec<String>,
}

/// Full record of one query run. `retrieved_ids_at_k` is the document list
/// the run submits for retrieval scoring; `answer_text` is the final answer
/// (empty when the run could not produce one). Failures degrade into
/// `errors` notes rather than aborting the run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunTrace {
    pub id: String,
    pub query: String,
    pub strategy: Strategy,
    pub task: Option<TaskType>,
    pub iterations: Vec<IterationTrace>,
    pub extracted: Vec<AttributeRecord>,
    pub result: Option<AggregationResult>,
    pub retrieved_ids_at_k: Vec<String>,
    pub answer_text: String,
    pub errors: Vec<String>,
}

impl RunTrace {
    fn new(id: &str, query: &str, strategy: Strategy) -> Self {
        RunTrace {
            id: id.to_string(),
            query: query.to_string(),
            strategy,
            task: None,
            iterations: Vec::new(),
            extracted: Vec::new(),
            result: None,
            retrieved_ids_at_k: Vec::new(),
            answer_text: String::new(),
            errors: Vec::new(),
        }
    }
}

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error("failed to access {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("line {line}: malformed trace record: {message}")]
    Parse { line: usize, message: String },
}

/// Retrieval abstraction so runs can use a dense index, or a test double.
pub trait Retriever: Send + Sync {
    fn retrieve(&self, query: &str, k: usize) -> Result<Vec<RetrievalHit>, IndexError>;
}

/// Dense retrieval over a built index.
pub struct DenseRetriever<'a> {
    pub index: &'a VectorIndex,
    pub embedder: &'a dyn Embedder,
}

impl Retriever for DenseRetriever<'_> {
    fn retrieve(&self, query: &str, k: usize) -> Result<Vec<RetrievalHit>, IndexError> {
        embed::retrieve(self.index, query, self.embedder, k)
    }
}

/// Everything a strategy needs to answer queries.
pub struct PipelineRunner<'a> {
    pub corpus: &'a Corpus,
    pub retriever: &'a dyn Retriever,
    pub gateway: &'a Gateway,
    pub config: PipelineConfig,
}

impl PipelineRunner<'_> {
    /// Runs one query under the configured strategy. Never panics or
    /// errors: failures are recorded in the trace.
    pub fn run(&self, id: &str, query: &str) -> RunTrace {
        match self.config.strategy {
            Strategy::Globalrag => runner::run_globalrag(self, id, query),
            Strategy::StandardRag => baselines::run_standard_rag(self, id, query),
            Strategy::Iterative => baselines::run_iterative(self, id, query),
        }
    }
}

/// Runs every record, optionally in parallel. Output order always matches
/// input order.
pub fn run_batch(runner: &PipelineRunner, records: &[QueryRecord], jobs: usize) -> Vec<RunTrace> {
    if jobs <= 1 {
        return records
            .iter()
            .map(|r| runner.run(&r.id, &r.question))
            .collect();
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .expect("worker pool builds");
    pool.install(|| {
        use rayon::prelude::*;
        records
            .par_iter()
            .map(|r| runner.run(&r.id, &r.question))
            .collect()
    })
}

/// Writes traces as JSONL, one object per line.
pub fn save_traces(traces: &[RunTrace], path: &Path) -> Result<(), PipelineError> {
    let io_err = |source| PipelineError::Io {
        path: path.display().to_string(),
        source,
    };
    let file = File::create(path).map_err(io_err)?;
    let mut writer = BufWriter::new(file);
    for trace in traces {
        let mut line = serde_json::to_string(trace).expect("trace serializes");
        line.push('\n');
        writer.write_all(line.as_bytes()).map_err(io_err)?;
    }
    writer.flush().map_err(io_err)
}

pub fn load_traces(path: &Path) -> Result<Vec<RunTrace>, PipelineError> {
    let file = File::open(path).map_err(|source| PipelineError::Io {
        path: path.display().to_string(),
        source,
    })?;
    let reader = BufReader::new(file);
    let mut traces = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line.map_err(|source| PipelineError::Io {
            path: path.display().to_string(),
            source,
        })?;
        if line.trim().is_empty() {
            continue;
        }
        let trace: RunTrace = serde_json::from_str(&line).map_err(|e| PipelineError::Parse {
            line: i + 1,
            message: e.to_string(),
        })?;
        traces.push(trace);
    }
    Ok(traces)
}
