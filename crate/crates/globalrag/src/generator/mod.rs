//! Reverse benchmark construction: synthesize a corpus with known structured
//! attributes, sample a filtering trajectory whose execution yields the gold
//! document set and answer, then render the question last. Every record is
//! re-executable, so dataset consistency is checkable by construction.

mod banks;
mod templates;

pub use templates::{condition_clause, phrase_for_predicate, render_question};

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::corpus::{
    AttrValue, Corpus, Document, ATTR_NAME, ATTR_SKILLS, ATTR_YEARS,
};
use crate::corpus::Predicate;
use crate::pipeline::TaskType;
use crate::tools::{
    self, format_number, AttributeRecord, Extremum, SetOp, SortOrder,
};

/// Gold-set size buckets. Sizes partition the valid range 2..=50.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Bucket {
    #[serde(rename = "2-5")]
    Small,
    #[serde(rename = "5-10")]
    Medium,
    #[serde(rename = "10-20")]
    Large,
    #[serde(rename = "20+")]
    Huge,
}

impl Bucket {
    pub const ALL: [Bucket; 4] = [Bucket::Small, Bucket::Medium, Bucket::Large, Bucket::Huge];

    /// Integer size range covered by this bucket.
    pub fn range(self) -> (usize, usize) {
        match self {
            Bucket::Small => (2, 5),
            Bucket::Medium => (6, 10),
            Bucket::Large => (11, 20),
            Bucket::Huge => (21, 50),
        }
    }

    pub fn contains(self, n: usize) -> bool {
        let (lo, hi) = self.range();
        (lo..=hi).contains(&n)
    }

    pub fn for_size(n: usize) -> Option<Bucket> {
        Bucket::ALL.into_iter().find(|b| b.contains(n))
    }

    pub fn label(self) -> &'static str {
        match self {
            Bucket::Small => "2-5",
            Bucket::Medium => "5-10",
            Bucket::Large => "10-20",
            Bucket::Huge => "20+",
        }
    }
}

impl std::fmt::Display for Bucket {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.label())
    }
}

/// How a trajectory step would be realized against a live pipeline.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StepKind {
    /// Exact attribute condition.
    Keyword,
    /// Matches a group of related attribute values.
    Semantic,
}

/// One filtering step: the predicate that defines it and the retrieval
/// query text a live run would issue for it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryStep {
    pub kind: StepKind,
    pub predicate: Predicate,
    pub query_text: String,
}

/// Task parameters carried by a trajectory; absent fields do not apply.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct TaskParams {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub attribute: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub direction: Option<Extremum>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub order: Option<SortOrder>,
}

/// A complete recipe for one benchmark question: steps, how their result
/// sets combine (left fold, one op between consecutive steps), the task,
/// and its parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub steps: Vec<TrajectoryStep>,
    pub set_ops: Vec<SetOp>,
    pub task: TaskType,
    pub params: TaskParams,
}

/// One benchmark record. `trajectory` is optional on ingest so externally
/// produced datasets can be evaluated; records without it cannot be
/// consistency-checked.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QueryRecord {
    pub id: String,
    pub question: String,
    pub task: TaskType,
    pub gold_answer: String,
    pub gold_doc_ids: BTreeSet<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trajectory: Option<Trajectory>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bucket: Option<Bucket>,
}

#[derive(Debug, Error)]
pub enum GeneratorError {
    #[error("invalid generator configuration: {0}")]
    InvalidConfig(String),
    #[error("sampling budget exhausted for bucket {bucket}")]
    SamplingExhausted { bucket: Bucket },
    #[error("trajectory matched no documents")]
    DegenerateTrajectory,
    #[error("malformed trajectory: {0}")]
    MalformedTrajectory(String),
    #[error("document {doc_id} lacks numeric attribute {attribute:?}")]
    MissingAttribute { doc_id: String, attribute: String },
    #[error(transparent)]
    Tool(#[from] tools::ToolError),
    #[error(transparent)]
    Corpus(#[from] crate::corpus::CorpusError),
    #[error("line {line}: malformed dataset record: {message}")]
    Parse { line: usize, message: String },
    #[error("failed to access {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

/// Derives an independent, reproducible stream for the i-th draw.
fn derive_seed(seed: u64, i: u64) -> u64 {
    let mut z = seed.wrapping_add(i.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn pick<'a, T>(rng: &mut impl Rng, items: &'a [T]) -> &'a T {
    &items[rng.random_range(0..items.len())]
}

fn weighted_index(rng: &mut impl Rng, weights: &[f64]) -> usize {
    let total: f64 = weights.iter().sum();
    let mut x = rng.random::<f64>() * total;
    for (i, w) in weights.iter().enumerate() {
        x -= w;
        if x < 0.0 {
            return i;
        }
    }
    weights.len() - 1
}

/// Synthesizes a reproducible corpus of professional profiles. Every
/// attribute value appears verbatim in the document text. `n_domains`
/// selects the first n of the built-in domain banks (at most 23).
pub fn generate_corpus(seed: u64, n_docs: usize, n_domains: usize) -> Result<Corpus, GeneratorError> {
    if n_domains == 0 || n_domains > banks::DOMAINS.len() {
        return Err(GeneratorError::InvalidConfig(format!(
            "n_domains must be between 1 and {}, got {n_domains}",
            banks::DOMAINS.len()
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut used_names: HashSet<String> = HashSet::with_capacity(n_docs);
    let mut documents = Vec::with_capacity(n_docs);
    for i in 0..n_docs {
        let (domain, own_skills) = banks::DOMAINS[rng.random_range(0..n_domains)];
        let years = rng.random_range(0..=40) as f64;
        let n_skills = rng.random_range(3..=8);
        let mut skills: Vec<String> = Vec::with_capacity(n_skills);
        while skills.len() < n_skills {
            let candidate = if rng.random_bool(0.7) {
                *pick(&mut rng, own_skills.as_slice())
            } else {
                *pick(&mut rng, banks::SHARED_SKILLS)
            };
            if !skills.iter().any(|s| s == candidate) {
                skills.push(candidate.to_string());
            }
        }
        let name = fresh_name(&mut rng, &mut used_names, i);
        let city = *pick(&mut rng, banks::CITIES);

        let skill_list = skills.join(", ");
        let years_text = format_number(years);
        let text = match rng.random_range(0..3) {
            0 => format!(
                "{name} is a {domain} professional based in {city} with {years_text} years of experience. Core skills: {skill_list}."
            ),
            1 => format!(
                "Resume of {name}: {years_text} years in the {domain} sector, located in {city}. Proficient in {skill_list}."
            ),
            _ => format!(
                "{name} has spent {years_text} years working in {domain}. Skills include {skill_list}. Currently in {city}."
            ),
        };

        let mut attributes = BTreeMap::new();
        attributes.insert(ATTR_NAME.to_string(), AttrValue::Text(name));
        attributes.insert(ATTR_YEARS.to_string(), AttrValue::Number(years));
        attributes.insert(ATTR_SKILLS.to_string(), AttrValue::List(skills));
        attributes.insert("city".to_string(), AttrValue::Text(city.to_string()));

        documents.push(Document {
            id: format!("r{i:05}"),
            domain: domain.to_string(),
            text,
            attributes,
        });
    }
    Ok(Corpus::from_documents(documents)?)
}

fn fresh_name(rng: &mut impl Rng, used: &mut HashSet<String>, index: usize) -> String {
    for _ in 0..20 {
        let name = format!(
            "{} {}",
            pick(rng, banks::FIRST_NAMES),
            pick(rng, banks::LAST_NAMES)
        );
        if used.insert(name.clone()) {
            return name;
        }
    }
    // Name banks exhausted for practical purposes; disambiguate by index.
    let name = format!(
        "{} {} {}",
        pick(rng, banks::FIRST_NAMES),
        pick(rng, banks::LAST_NAMES),
        index
    );
    used.insert(name.clone());
    name
}

/// Result of one successful trajectory draw.
#[derive(Debug, Clone)]
pub struct SampledTrajectory {
    pub trajectory: Trajectory,
    pub gold_doc_ids: BTreeSet<String>,
    pub gold_answer: String,
}

/// Draws trajectories against a fixed corpus by rejection sampling: propose
/// steps and set operations, execute, and keep the draw only if the result
/// set lands in the requested bucket.
pub struct TrajectorySampler<'c> {
    corpus: &'c Corpus,
    domains: Vec<String>,
    semantic_groups: Vec<Vec<String>>,
    skills: Vec<String>,
}

impl<'c> TrajectorySampler<'c> {
    pub fn new(corpus: &'c Corpus) -> Self {
        let skill_universe = corpus.list_attribute_values(ATTR_SKILLS);
        let semantic_groups = banks::SEMANTIC_GROUPS
            .iter()
            .filter_map(|group| {
                let present: Vec<String> = group
                    .iter()
                    .filter(|s| skill_universe.contains(**s))
                    .map(|s| s.to_string())
                    .collect();
                (present.len() >= 2).then_some(present)
            })
            .collect();
        TrajectorySampler {
            corpus,
            domains: corpus.domains().into_iter().collect(),
            semantic_groups,
            skills: skill_universe.into_iter().collect(),
        }
    }

    /// Attempts up to `budget` draws for the given bucket and task.
    pub fn sample(
        &self,
        rng: &mut impl Rng,
        bucket: Bucket,
        task: TaskType,
        budget: u32,
    ) -> Result<SampledTrajectory, GeneratorError> {
        if self.domains.is_empty() || self.skills.is_empty() {
            return Err(GeneratorError::InvalidConfig(
                "corpus has no domains or no skills to sample conditions from".to_string(),
            ));
        }
        for _ in 0..budget {
            let trajectory = self.propose(rng, bucket, task);
            let Ok((gold_doc_ids, gold_answer)) = execute_trajectory(&trajectory, self.corpus)
            else {
                continue;
            };
            if !bucket.contains(gold_doc_ids.len()) {
                continue;
            }
            let trajectory = clamp_topk(trajectory, gold_doc_ids.len());
            // Re-derive the answer in case clamping k changed it.
            let (_, gold_answer) = match execute_trajectory(&trajectory, self.corpus) {
                Ok(out) => out,
                Err(_) => (gold_doc_ids.clone(), gold_answer),
            };
            return Ok(SampledTrajectory {
                trajectory,
                gold_doc_ids,
                gold_answer,
            });
        }
        Err(GeneratorError::SamplingExhausted { bucket })
    }

    fn propose(&self, rng: &mut impl Rng, bucket: Bucket, task: TaskType) -> Trajectory {
        let (n_steps_lo, n_steps_hi, p_intersect) = match bucket {
            Bucket::Small => (3, 5, 0.85),
            Bucket::Medium => (2, 4, 0.75),
            Bucket::Large => (2, 3, 0.65),
            Bucket::Huge => (2, 3, 0.55),
        };
        let n_steps = rng.random_range(n_steps_lo..=n_steps_hi);
        let mut steps: Vec<TrajectoryStep> = Vec::with_capacity(n_steps);
        while steps.len() < n_steps {
            let step = self.propose_step(rng);
            if steps.iter().any(|s| s.predicate == step.predicate) {
                continue;
            }
            steps.push(step);
        }
        let set_ops = (1..n_steps)
            .map(|_| {
                if rng.random_bool(p_intersect) {
                    SetOp::Intersection
                } else {
                    SetOp::Union
                }
            })
            .collect();
        let params = match task {
            TaskType::Count => TaskParams::default(),
            TaskType::MinMax => TaskParams {
                attribute: Some(ATTR_YEARS.to_string()),
                direction: Some(if rng.random_bool(0.5) {
                    Extremum::Max
                } else {
                    Extremum::Min
                }),
                ..TaskParams::default()
            },
            TaskType::Sort => TaskParams {
                attribute: Some(ATTR_YEARS.to_string()),
                order: Some(random_order(rng)),
                ..TaskParams::default()
            },
            TaskType::TopK => TaskParams {
                attribute: Some(ATTR_YEARS.to_string()),
                k: Some(rng.random_range(2..=10)),
                order: Some(random_order(rng)),
                ..TaskParams::default()
            },
        };
        Trajectory {
            steps,
            set_ops,
            task,
            params,
        }
    }

    fn propose_step(&self, rng: &mut impl Rng) -> TrajectoryStep {
        let semantic_weight = if self.semantic_groups.is_empty() { 0.0 } else { 0.15 };
        let kind = weighted_index(rng, &[0.30, 0.30, 0.25, semantic_weight]);
        match kind {
            0 => {
                let domain = pick(rng, &self.domains).clone();
                TrajectoryStep {
                    kind: StepKind::Keyword,
                    query_text: format!("professionals in the {domain} domain"),
                    predicate: Predicate::Eq {
                        attr: "domain".to_string(),
                        value: AttrValue::Text(domain),
                    },
                }
            }
            1 => {
                let threshold = rng.random_range(1..=39) as f64;
                let (predicate, query_text) = match rng.random_range(0..4) {
                    0 => (
                        Predicate::Ge {
                            attr: ATTR_YEARS.to_string(),
                            value: threshold,
                        },
                        format!("candidates with at least {} years of experience", format_number(threshold)),
                    ),
                    1 => (
                        Predicate::Gt {
                            attr: ATTR_YEARS.to_string(),
                            value: threshold,
                        },
                        format!("candidates with more than {} years of experience", format_number(threshold)),
                    ),
                    2 => (
                        Predicate::Le {
                            attr: ATTR_YEARS.to_string(),
                            value: threshold,
                        },
                        format!("candidates with at most {} years of experience", format_number(threshold)),
                    ),
                    _ => (
                        Predicate::Lt {
                            attr: ATTR_YEARS.to_string(),
                            value: threshold,
                        },
                        format!("candidates with fewer than {} years of experience", format_number(threshold)),
                    ),
                };
                TrajectoryStep {
                    kind: StepKind::Keyword,
                    predicate,
                    query_text,
                }
            }
            _ if kind == 2 || self.semantic_groups.is_empty() => {
                let skill = pick(rng, &self.skills).clone();
                TrajectoryStep {
                    kind: StepKind::Keyword,
                    query_text: format!("candidates skilled in {skill}"),
                    predicate: Predicate::Contains {
                        attr: ATTR_SKILLS.to_string(),
                        value: skill,
                    },
                }
            }
            _ => {
                let group = pick(rng, &self.semantic_groups).clone();
                TrajectoryStep {
                    kind: StepKind::Semantic,
                    query_text: format!("candidates experienced in {}", group[0]),
                    predicate: Predicate::ContainsAny {
                        attr: ATTR_SKILLS.to_string(),
                        values: group,
                    },
                }
            }
        }
    }
}

fn random_order(rng: &mut impl Rng) -> SortOrder {
    if rng.random_bool(0.5) {
        SortOrder::Desc
    } else {
        SortOrder::Asc
    }
}

/// Caps a top-k trajectory's k at the result-set size so the question never
/// asks for more entries than the gold answer holds.
fn clamp_topk(mut trajectory: Trajectory, result_size: usize) -> Trajectory {
    if trajectory.task == TaskType::TopK {
        if let Some(k) = trajectory.params.k {
            trajectory.params.k = Some(k.min(result_size));
        }
    }
    trajectory
}

/// Executes a trajectory against a corpus: scans each step, folds the result
/// sets with the set operations, and computes the answer with the matching
/// aggregation tool. Returns the gold document ids and the gold answer text.
pub fn execute_trajectory(
    trajectory: &Trajectory,
    corpus: &Corpus,
) -> Result<(BTreeSet<String>, String), GeneratorError> {
    if trajectory.steps.is_empty() {
        return Err(GeneratorError::MalformedTrajectory("no steps".to_string()));
    }
    if trajectory.set_ops.len() + 1 != trajectory.steps.len() {
        return Err(GeneratorError::MalformedTrajectory(format!(
            "{} steps require {} set ops, got {}",
            trajectory.steps.len(),
            trajectory.steps.len() - 1,
            trajectory.set_ops.len()
        )));
    }
    let mut combined = corpus.scan(&trajectory.steps[0].predicate);
    for (step, op) in trajectory.steps[1..].iter().zip(&trajectory.set_ops) {
        let next = corpus.scan(&step.predicate);
        combined = tools::set_combine(&[combined, next], *op)?;
    }
    if combined.is_empty() {
        return Err(GeneratorError::DegenerateTrajectory);
    }
    let answer = answer_for(trajectory, corpus, &combined)?;
    Ok((combined, answer))
}

fn answer_for(
    trajectory: &Trajectory,
    corpus: &Corpus,
    ids: &BTreeSet<String>,
) -> Result<String, GeneratorError> {
    match trajectory.task {
        TaskType::Count => {
            let records = membership_records(corpus, ids);
            Ok(tools::count_tool(&records).answer_text)
        }
        TaskType::MinMax => {
            let records = numeric_records(corpus, ids, trajectory)?;
            let direction = trajectory.params.direction.ok_or_else(|| {
                GeneratorError::MalformedTrajectory("minmax task without direction".to_string())
            })?;
            Ok(tools::extremum_tool(&records, direction)?.answer_text)
        }
        TaskType::Sort => {
            let records = numeric_records(corpus, ids, trajectory)?;
            let order = trajectory.params.order.ok_or_else(|| {
                GeneratorError::MalformedTrajectory("sort task without order".to_string())
            })?;
            Ok(tools::sort_tool(&records, order)?.answer_text)
        }
        TaskType::TopK => {
            let records = numeric_records(corpus, ids, trajectory)?;
            let k = trajectory.params.k.ok_or_else(|| {
                GeneratorError::MalformedTrajectory("topk task without k".to_string())
            })?;
            let order = trajectory.params.order.ok_or_else(|| {
                GeneratorError::MalformedTrajectory("topk task without order".to_string())
            })?;
            Ok(tools::topk_tool(&records, k, order)?.answer_text)
        }
    }
}

/// One presence record per gold document, for counting.
fn membership_records(corpus: &Corpus, ids: &BTreeSet<String>) -> Vec<AttributeRecord> {
    ids.iter()
        .map(|id| {
            let label = corpus.get(id).map(|d| d.label().to_string()).unwrap_or_else(|| id.clone());
            AttributeRecord::numeric(id, &label, "membership", 1.0)
        })
        .collect()
}

fn numeric_records(
    corpus: &Corpus,
    ids: &BTreeSet<String>,
    trajectory: &Trajectory,
) -> Result<Vec<AttributeRecord>, GeneratorError> {
    let attribute = trajectory.params.attribute.as_deref().ok_or_else(|| {
        GeneratorError::MalformedTrajectory("ranked task without attribute".to_string())
    })?;
    let mut records = Vec::with_capacity(ids.len());
    for id in ids {
        let doc = corpus.get(id).ok_or_else(|| GeneratorError::MissingAttribute {
            doc_id: id.clone(),
            attribute: attribute.to_string(),
        })?;
        let value = doc
            .attributes
            .get(attribute)
            .and_then(AttrValue::as_number)
            .ok_or_else(|| GeneratorError::MissingAttribute {
                doc_id: id.clone(),
                attribute: attribute.to_string(),
            })?;
        records.push(AttributeRecord {
            entity_id: id.clone(),
            entity_label: doc.label().to_string(),
            attribute: attribute.to_string(),
            value: crate::tools::RecordValue::number_with_unit(value, "years"),
        });
    }
    Ok(records)
}

/// Default relative weights for task sampling, in the order
/// [count, minmax, sort, topk].
pub const DEFAULT_TASK_MIX: [f64; 4] = [16.7, 33.9, 16.3, 33.9];

/// Default relative weights for bucket sampling, in `Bucket::ALL` order.
pub const DEFAULT_BUCKET_MIX: [f64; 4] = [18.1, 13.4, 25.9, 42.6];

const TASK_ORDER: [TaskType; 4] = [TaskType::Count, TaskType::MinMax, TaskType::Sort, TaskType::TopK];

#[derive(Debug, Clone)]
pub struct DatasetConfig {
    pub seed: u64,
    pub count: usize,
    /// Relative weights over [count, minmax, sort, topk].
    pub task_mix: [f64; 4],
    /// Relative weights over `Bucket::ALL`.
    pub bucket_mix: [f64; 4],
    /// Rejection-sampling attempts per record before giving up on a draw.
    pub retry_budget: u32,
}

impl Default for DatasetConfig {
    fn default() -> Self {
        DatasetConfig {
            seed: 0,
            count: 200,
            task_mix: DEFAULT_TASK_MIX,
            bucket_mix: DEFAULT_BUCKET_MIX,
            retry_budget: 200,
        }
    }
}

/// Counters from one dataset generation run.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct GenerationStats {
    pub requested: usize,
    pub generated: usize,
    pub draws: u64,
    pub sampling_failures: u64,
    pub duplicate_questions: u64,
}

/// Generates `config.count` records against the corpus. Each record draw
/// runs on its own derived random stream, so output is a pure function of
/// (corpus, config). Questions are unique within the dataset.
pub fn generate_dataset(
    corpus: &Corpus,
    config: &DatasetConfig,
) -> Result<(Vec<QueryRecord>, GenerationStats), GeneratorError> {
    if config.count == 0 {
        return Ok((Vec::new(), GenerationStats::default()));
    }
    if config.task_mix.iter().any(|w| *w < 0.0) || config.task_mix.iter().sum::<f64>() <= 0.0 {
        return Err(GeneratorError::InvalidConfig(
            "task mix weights must be non-negative and sum to a positive value".to_string(),
        ));
    }
    if config.bucket_mix.iter().any(|w| *w < 0.0) || config.bucket_mix.iter().sum::<f64>() <= 0.0 {
        return Err(GeneratorError::InvalidConfig(
            "bucket mix weights must be non-negative and sum to a positive value".to_string(),
        ));
    }
    let sampler = TrajectorySampler::new(corpus);
    let mut stats = GenerationStats {
        requested: config.count,
        ..GenerationStats::default()
    };
    let mut records = Vec::with_capacity(config.count);
    let mut seen_questions: HashSet<String> = HashSet::with_capacity(config.count);
    let max_draws = config.count as u64 * 4 + 64;
    let mut draw: u64 = 0;
    while records.len() < config.count && draw < max_draws {
        let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(config.seed, draw));
        draw += 1;
        stats.draws = draw;
        let task = TASK_ORDER[weighted_index(&mut rng, &config.task_mix)];
        let bucket = Bucket::ALL[weighted_index(&mut rng, &config.bucket_mix)];
        let sampled = match sampler.sample(&mut rng, bucket, task, config.retry_budget) {
            Ok(s) => s,
            Err(_) => {
                stats.sampling_failures += 1;
                continue;
            }
        };
        let question = render_question(&sampled.trajectory, &mut rng);
        if !seen_questions.insert(question.clone()) {
            stats.duplicate_questions += 1;
            continue;
        }
        records.push(QueryRecord {
            id: format!("q{:06}", records.len()),
            question,
            task,
            gold_answer: sampled.gold_answer,
            gold_doc_ids: sampled.gold_doc_ids,
            trajectory: Some(sampled.trajectory),
            bucket: Some(bucket),
        });
    }
    stats.generated = records.len();
    Ok((records, stats))
}

/// Why records were dropped during validation, keyed by reason.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct ValidationReport {
    pub saved: usize,
    pub rejected: BTreeMap<String, usize>,
}

/// Gold-set size bounds enforced on every saved record.
pub const MIN_GOLD_DOCS: usize = 2;
pub const MAX_GOLD_DOCS: usize = 50;

/// Validates records (size bounds, re-execution consistency, duplicate
/// questions) and writes survivors atomically: the file is written to a
/// temporary sibling and renamed into place only when complete.
pub fn validate_and_save(
    records: &[QueryRecord],
    corpus: &Corpus,
    path: &Path,
) -> Result<ValidationReport, GeneratorError> {
    let mut report = ValidationReport::default();
    let reject = |report: &mut ValidationReport, reason: &str| {
        *report.rejected.entry(reason.to_string()).or_insert(0) += 1;
    };
    let mut survivors: Vec<&QueryRecord> = Vec::with_capacity(records.len());
    let mut seen_questions: HashSet<&str> = HashSet::with_capacity(records.len());
    for record in records {
        let n = record.gold_doc_ids.len();
        if n > MAX_GOLD_DOCS {
            reject(&mut report, "doc_count_exceeded");
            continue;
        }
        if n < MIN_GOLD_DOCS {
            reject(&mut report, "doc_count_too_small");
            continue;
        }
        if !seen_questions.insert(&record.question) {
            reject(&mut report, "duplicate_question");
            continue;
        }
        if let Some(trajectory) = &record.trajectory {
            match execute_trajectory(trajectory, corpus) {
                Ok((ids, answer))
                    if ids == record.gold_doc_ids && answer == record.gold_answer => {}
                _ => {
                    reject(&mut report, "consistency");
                    seen_questions.remove(record.question.as_str());
                    continue;
                }
            }
        }
        survivors.push(record);
    }
    let tmp = path.with_file_name(format!(
        "{}.tmp",
        path.file_name()
            .map(|n| n.to_string_lossy().to_string())
            .unwrap_or_else(|| "dataset.jsonl".to_string())
    ));
    write_records(&survivors, &tmp)?;
    std::fs::rename(&tmp, path).map_err(|source| GeneratorError::Io {
        path: path.display().to_string(),
        source,
    })?;
    report.saved = survivors.len();
    Ok(report)
}

fn write_records(records: &[&QueryRecord], path: &Path) -> Result<(), GeneratorError> {
    let io_err = |source| GeneratorError::Io {
        path: path.display().to_string(),
        source,
    };
    let file = File::create(path).map_err(io_err)?;
    let mut writer = BufWriter::new(file);
    for record in records {
        let mut line = serde_json::to_string(record).expect("record serializes");
        line.push('\n');
        writer.write_all(line.as_bytes()).map_err(io_err)?;
    }
    writer.flush().map_err(io_err)
}

/// Writes records as JSONL without validation.
pub fn save_dataset(records: &[QueryRecord], path: &Path) -> Result<(), GeneratorError> {
    let refs: Vec<&QueryRecord> = records.iter().collect();
    write_records(&refs, path)
}

/// Reads a dataset from JSONL, reporting the line number of any malformed
/// record.
pub fn load_dataset(path: &Path) -> Result<Vec<QueryRecord>, GeneratorError> {
    let file = File::open(path).map_err(|source| GeneratorError::Io {
        path: path.display().to_string(),
        source,
    })?;
    let reader = BufReader::new(file);
    let mut records = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line.map_err(|source| GeneratorError::Io {
            path: path.display().to_string(),
            source,
        })?;
        if line.trim().is_empty() {
            continue;
        }
        let record: QueryRecord =
            serde_json::from_str(&line).map_err(|e| GeneratorError::Parse {
                line: i + 1,
                message: e.to_string(),
            })?;
        records.push(record);
    }
    Ok(records)
}
