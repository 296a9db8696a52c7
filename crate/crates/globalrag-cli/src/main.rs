//! Command-line front end: corpus and dataset generation, index building,
//! pipeline runs, evaluation, and parameter sweeps.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use globalrag::corpus::{self, Corpus};
use globalrag::embed::{build_index, BuildOptions, Embedder, HashEmbedder, HttpEmbedder};
use globalrag::embed::VectorIndex;
use globalrag::eval::{evaluate_batch, EvalReport};
use globalrag::gateway::{ChatBackend, Gateway, HttpChat, ReplayChat, RetryPolicy, API_KEY_ENV};
use globalrag::generator::{self, DatasetConfig, QueryRecord};
use globalrag::pipeline::{
    self, DenseRetriever, OracleChat, PipelineConfig, PipelineRunner, Strategy,
};

const DEFAULT_EMBEDDER: &str = "hash:dim=256,seed=7";
const DEFAULT_GATEWAY: &str = "oracle";
const DEFAULT_FILTER_MODEL: &str = "default";

#[derive(Parser)]
#[command(name = "globalrag", version, about = "Corpus-level retrieval pipeline toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a synthetic professional-profile corpus.
    GenCorpus(GenCorpusArgs),
    /// Generate an aggregation-query dataset against a corpus.
    GenDataset(GenDatasetArgs),
    /// Build a dense vector index over a corpus.
    Index(IndexArgs),
    /// Answer dataset queries with a retrieval strategy.
    Run(RunArgs),
    /// Score traces against dataset gold labels.
    Eval(EvalArgs),
    /// Rerun one configuration per axis value and merge the reports.
    Sweep(SweepArgs),
    /// Render a saved evaluation report as a table.
    Report(ReportArgs),
}

#[derive(Args)]
struct GenCorpusArgs {
    /// Random seed.
    #[arg(long, default_value_t = 7)]
    seed: u64,
    /// Number of documents.
    #[arg(long, default_value_t = 200)]
    docs: usize,
    /// Number of industry domains drawn from the built-in banks.
    #[arg(long, default_value_t = 8)]
    domains: usize,
    /// Output corpus JSONL path.
    #[arg(short, long)]
    output: PathBuf,
    /// Overwrite an existing output file.
    #[arg(long)]
    force: bool,
}

#[derive(Args)]
struct GenDatasetArgs {
    /// Corpus JSONL path.
    #[arg(long)]
    corpus: PathBuf,
    /// Random seed.
    #[arg(long, default_value_t = 11)]
    seed: u64,
    /// Number of records to generate.
    #[arg(long, default_value_t = 200)]
    count: usize,
    /// Task mix weights as count,minmax,sort,topk.
    #[arg(long, value_delimiter = ',')]
    task_mix: Option<Vec<f64>>,
    /// Gold-set size mix weights for the 2-5, 5-10, 10-20, 20+ buckets.
    #[arg(long, value_delimiter = ',')]
    bucket_mix: Option<Vec<f64>>,
    /// Sampling attempts per record.
    #[arg(long, default_value_t = 200)]
    retry_budget: u32,
    /// Output dataset JSONL path.
    #[arg(short, long)]
    output: PathBuf,
    /// Also write generation and validation counters as JSON.
    #[arg(long)]
    report: Option<PathBuf>,
    /// Overwrite existing output files.
    #[arg(long)]
    force: bool,
}

#[derive(Args)]
struct IndexArgs {
    /// Corpus JSONL path.
    #[arg(long)]
    corpus: PathBuf,
    /// Embedder spec: hash:dim=D,seed=S or http:URL,model=M,dim=D.
    #[arg(long, default_value = DEFAULT_EMBEDDER)]
    embedder: String,
    /// Texts per embedding request.
    #[arg(long, default_value_t = 32)]
    batch_size: usize,
    /// Concurrent embedding requests.
    #[arg(long, default_value_t = 1)]
    workers: usize,
    /// Output index path.
    #[arg(short, long)]
    output: PathBuf,
    /// Overwrite an existing output file.
    #[arg(long)]
    force: bool,
}

/// Knobs shared by `run` and `sweep`. Every value resolves as
/// flag > config file > default.
#[derive(Args)]
struct RunFlags {
    /// JSON config file; explicit flags override its values.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Strategy: globalrag, standard_rag, or iterative.
    #[arg(long)]
    strategy: Option<String>,
    /// Retrieval rounds cap.
    #[arg(long)]
    max_iterations: Option<usize>,
    /// Candidates fetched per retrieval round.
    #[arg(short, long = "k")]
    retrieve_k: Option<usize>,
    /// Similarity floor applied before the per-document model filter.
    #[arg(long)]
    prefilter_min_score: Option<f64>,
    /// Embedder spec: hash:dim=D,seed=S or http:URL,model=M,dim=D.
    #[arg(long)]
    embedder: Option<String>,
    /// Chat backend: oracle, replay:PATH, or http:URL.
    #[arg(long)]
    gateway: Option<String>,
    /// Model name sent to http chat backends.
    #[arg(long, alias = "model")]
    filter_model: Option<String>,
    /// Parallel query workers.
    #[arg(long)]
    jobs: Option<usize>,
}

#[derive(Args)]
struct RunArgs {
    /// Corpus JSONL path.
    #[arg(long)]
    corpus: PathBuf,
    /// Dataset JSONL path.
    #[arg(long)]
    dataset: PathBuf,
    /// Vector index path built by `index`.
    #[arg(long)]
    index: PathBuf,
    #[command(flatten)]
    flags: RunFlags,
    /// Record chat exchanges to a replay cassette.
    #[arg(long)]
    record: Option<PathBuf>,
    /// Output traces JSONL path.
    #[arg(short, long)]
    output: PathBuf,
    /// Overwrite existing output files.
    #[arg(long)]
    force: bool,
}

#[derive(Args)]
struct EvalArgs {
    /// Dataset JSONL path.
    #[arg(long)]
    dataset: PathBuf,
    /// Traces JSONL path written by `run`.
    #[arg(long)]
    traces: PathBuf,
    /// Retrieval cutoff for document F1.
    #[arg(short, long, default_value_t = 20)]
    k: usize,
    /// Also write the report as JSON.
    #[arg(short, long)]
    output: Option<PathBuf>,
    /// Overwrite an existing output file.
    #[arg(long)]
    force: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SweepAxis {
    #[value(alias = "max_iterations")]
    MaxIterations,
    #[value(alias = "retrieve_k")]
    RetrieveK,
    Embedder,
    #[value(alias = "filter_model")]
    FilterModel,
}

impl SweepAxis {
    fn label(self) -> &'static str {
        match self {
            SweepAxis::MaxIterations => "max_iterations",
            SweepAxis::RetrieveK => "retrieve_k",
            SweepAxis::Embedder => "embedder",
            SweepAxis::FilterModel => "filter_model",
        }
    }
}

#[derive(Args)]
struct SweepArgs {
    /// Corpus JSONL path.
    #[arg(long)]
    corpus: PathBuf,
    /// Dataset JSONL path.
    #[arg(long)]
    dataset: PathBuf,
    /// Configuration knob varied across points.
    #[arg(long)]
    axis: SweepAxis,
    /// Comma-separated axis values, one pipeline run per value.
    #[arg(long, value_delimiter = ',', required = true)]
    values: Vec<String>,
    #[command(flatten)]
    flags: RunFlags,
    /// Retrieval cutoff for document F1 (the retrieve_k axis evaluates
    /// each point at its own k instead).
    #[arg(long, default_value_t = 20)]
    eval_k: usize,
    /// Output directory for per-point reports and the merged CSV.
    #[arg(short, long)]
    output: PathBuf,
    /// Overwrite existing output files.
    #[arg(long)]
    force: bool,
}

#[derive(Args)]
struct ReportArgs {
    /// Report JSON path written by `eval`.
    #[arg(long)]
    input: PathBuf,
}

enum CliFailure {
    Usage(String),
    Runtime(String),
}

impl<E: std::error::Error> From<E> for CliFailure {
    fn from(error: E) -> Self {
        let mut message = error.to_string();
        let mut source = error.source();
        while let Some(cause) = source {
            let text = cause.to_string();
            if !message.contains(&text) {
                let _ = write!(message, ": {text}");
            }
            source = cause.source();
        }
        CliFailure::Runtime(message)
    }
}

fn usage(message: impl Into<String>) -> CliFailure {
    CliFailure::Usage(message.into())
}

fn refuse(message: impl Into<String>) -> CliFailure {
    CliFailure::Runtime(message.into())
}

fn main() -> ExitCode {
    env_logger::init();
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliFailure::Usage(message)) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
        Err(CliFailure::Runtime(message)) => {
            eprintln!("error: {message}");
            ExitCode::from(1)
        }
    }
}

fn dispatch(cli: Cli) -> Result<(), CliFailure> {
    match cli.command {
        Command::GenCorpus(args) => gen_corpus(args),
        Command::GenDataset(args) => gen_dataset(args),
        Command::Index(args) => index(args),
        Command::Run(args) => run(args),
        Command::Eval(args) => eval(args),
        Command::Sweep(args) => sweep(args),
        Command::Report(args) => report(args),
    }
}

fn check_output(path: &Path, force: bool) -> Result<(), CliFailure> {
    if path.exists() && !force {
        return Err(refuse(format!(
            "output {} already exists; pass --force to overwrite",
            path.display()
        )));
    }
    Ok(())
}

fn gen_corpus(args: GenCorpusArgs) -> Result<(), CliFailure> {
    check_output(&args.output, args.force)?;
    let corpus = generator::generate_corpus(args.seed, args.docs, args.domains)?;
    corpus::save_jsonl(&corpus, &args.output)?;
    println!(
        "wrote {} document(s) to {}",
        corpus.len(),
        args.output.display()
    );
    Ok(())
}

fn parse_mix(values: Option<Vec<f64>>, flag: &str) -> Result<Option<[f64; 4]>, CliFailure> {
    match values {
        None => Ok(None),
        Some(v) => {
            let arr: [f64; 4] = v
                .try_into()
                .map_err(|_| usage(format!("--{flag} needs exactly four comma-separated weights")))?;
            Ok(Some(arr))
        }
    }
}

#[derive(Serialize)]
struct DatasetReport {
    stats: generator::GenerationStats,
    validation: generator::ValidationReport,
}

fn gen_dataset(args: GenDatasetArgs) -> Result<(), CliFailure> {
    check_output(&args.output, args.force)?;
    if let Some(report_path) = &args.report {
        check_output(report_path, args.force)?;
    }
    let corpus = corpus::ingest_jsonl(&args.corpus)?;
    let mut config = DatasetConfig {
        seed: args.seed,
        count: args.count,
        retry_budget: args.retry_budget,
        ..DatasetConfig::default()
    };
    if let Some(mix) = parse_mix(args.task_mix, "task-mix")? {
        config.task_mix = mix;
    }
    if let Some(mix) = parse_mix(args.bucket_mix, "bucket-mix")? {
        config.bucket_mix = mix;
    }
    let (records, stats) = generator::generate_dataset(&corpus, &config)?;
    let validation = generator::validate_and_save(&records, &corpus, &args.output)?;
    let rejected: usize = validation.rejected.values().sum();
    println!(
        "wrote {} record(s) to {} ({} rejected)",
        validation.saved,
        args.output.display(),
        rejected
    );
    if let Some(report_path) = &args.report {
        let body = serde_json::to_string_pretty(&DatasetReport { stats, validation })?;
        fs::write(report_path, body + "\n")?;
    }
    Ok(())
}

fn parse_embedder_spec(spec: &str) -> Result<Box<dyn Embedder>, CliFailure> {
    if let Some(rest) = spec.strip_prefix("hash:") {
        let mut dim: Option<usize> = None;
        let mut seed: Option<u64> = None;
        for part in rest.split(',') {
            let (key, value) = part
                .split_once('=')
                .ok_or_else(|| usage(format!("embedder spec {spec:?}: expected key=value, got {part:?}")))?;
            match key {
                "dim" => {
                    dim = Some(value.parse().map_err(|_| {
                        usage(format!("embedder spec {spec:?}: dim must be a positive integer"))
                    })?)
                }
                "seed" => {
                    seed = Some(value.parse().map_err(|_| {
                        usage(format!("embedder spec {spec:?}: seed must be an integer"))
                    })?)
                }
                _ => return Err(usage(format!("embedder spec {spec:?}: unknown key {key:?}"))),
            }
        }
        let dim = dim.ok_or_else(|| usage(format!("embedder spec {spec:?}: missing dim")))?;
        if dim == 0 {
            return Err(usage(format!("embedder spec {spec:?}: dim must be at least 1")));
        }
        Ok(Box::new(HashEmbedder::new(dim, seed.unwrap_or(7))))
    } else if let Some(rest) = spec.strip_prefix("http:") {
        let mut url_parts: Vec<&str> = Vec::new();
        let mut model: Option<&str> = None;
        let mut dim: Option<usize> = None;
        for part in rest.split(',') {
            if let Some(value) = part.strip_prefix("model=") {
                model = Some(value);
            } else if let Some(value) = part.strip_prefix("dim=") {
                dim = Some(value.parse().map_err(|_| {
                    usage(format!("embedder spec {spec:?}: dim must be a positive integer"))
                })?);
            } else {
                url_parts.push(part);
            }
        }
        let url = url_parts.join(",");
        if url.is_empty() {
            return Err(usage(format!("embedder spec {spec:?}: missing URL")));
        }
        let model = model.ok_or_else(|| usage(format!("embedder spec {spec:?}: missing model=")))?;
        let dim = dim.ok_or_else(|| usage(format!("embedder spec {spec:?}: missing dim=")))?;
        let token = std::env::var(API_KEY_ENV).ok();
        Ok(Box::new(HttpEmbedder::new(&url, model, dim, token)))
    } else {
        Err(usage(format!(
            "embedder spec {spec:?}: expected hash:dim=D,seed=S or http:URL,model=M,dim=D"
        )))
    }
}

fn index(args: IndexArgs) -> Result<(), CliFailure> {
    check_output(&args.output, args.force)?;
    let corpus = corpus::ingest_jsonl(&args.corpus)?;
    let embedder = parse_embedder_spec(&args.embedder)?;
    let options = BuildOptions {
        batch_size: args.batch_size,
        workers: args.workers,
    };
    let index = build_index(&corpus, embedder.as_ref(), &options)?;
    index.save(&args.output)?;
    println!(
        "wrote {} vector(s) of dimension {} to {}",
        index.len(),
        index.dim(),
        args.output.display()
    );
    Ok(())
}

/// Config-file counterpart of `RunFlags`.
#[derive(Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    strategy: Option<String>,
    max_iterations: Option<usize>,
    retrieve_k: Option<usize>,
    prefilter_min_score: Option<f64>,
    embedder: Option<String>,
    gateway: Option<String>,
    filter_model: Option<String>,
    jobs: Option<usize>,
}

#[derive(Clone)]
struct RunSettings {
    config: PipelineConfig,
    embedder: String,
    gateway: String,
    filter_model: String,
    jobs: usize,
}

fn resolve_settings(flags: &RunFlags) -> Result<RunSettings, CliFailure> {
    let file: FileConfig = match &flags.config {
        None => FileConfig::default(),
        Some(path) => serde_json::from_str(&fs::read_to_string(path)?)
            .map_err(|e| usage(format!("config file {}: {e}", path.display())))?,
    };
    let defaults = PipelineConfig::default();
    let strategy_label = flags
        .strategy
        .clone()
        .or(file.strategy)
        .unwrap_or_else(|| defaults.strategy.label().to_string());
    let strategy = Strategy::parse_label(&strategy_label).ok_or_else(|| {
        usage(format!(
            "unknown strategy {strategy_label:?}; expected globalrag, standard_rag, or iterative"
        ))
    })?;
    let settings = RunSettings {
        config: PipelineConfig {
            strategy,
            max_iterations: flags
                .max_iterations
                .or(file.max_iterations)
                .unwrap_or(defaults.max_iterations),
            retrieve_k: flags
                .retrieve_k
                .or(file.retrieve_k)
                .unwrap_or(defaults.retrieve_k),
            prefilter_min_score: flags
                .prefilter_min_score
                .or(file.prefilter_min_score)
                .unwrap_or(defaults.prefilter_min_score),
        },
        embedder: flags
            .embedder
            .clone()
            .or(file.embedder)
            .unwrap_or_else(|| DEFAULT_EMBEDDER.to_string()),
        gateway: flags
            .gateway
            .clone()
            .or(file.gateway)
            .unwrap_or_else(|| DEFAULT_GATEWAY.to_string()),
        filter_model: flags
            .filter_model
            .clone()
            .or(file.filter_model)
            .unwrap_or_else(|| DEFAULT_FILTER_MODEL.to_string()),
        jobs: flags.jobs.or(file.jobs).unwrap_or(1),
    };
    if settings.config.retrieve_k == 0 {
        return Err(usage("retrieve_k must be at least 1"));
    }
    Ok(settings)
}

fn build_backend(
    spec: &str,
    dataset: &[QueryRecord],
    corpus: &Corpus,
    model: &str,
) -> Result<Box<dyn ChatBackend>, CliFailure> {
    if spec == "oracle" {
        Ok(Box::new(OracleChat::new(dataset, corpus)))
    } else if let Some(path) = spec.strip_prefix("replay:") {
        Ok(Box::new(ReplayChat::load(Path::new(path))?))
    } else if let Some(url) = spec.strip_prefix("http:") {
        Ok(Box::new(HttpChat::from_env(url, model)))
    } else {
        Err(usage(format!(
            "gateway spec {spec:?}: expected oracle, replay:PATH, or http:URL"
        )))
    }
}

fn run(args: RunArgs) -> Result<(), CliFailure> {
    check_output(&args.output, args.force)?;
    if let Some(record) = &args.record {
        check_output(record, args.force)?;
    }
    let settings = resolve_settings(&args.flags)?;
    let corpus = corpus::ingest_jsonl(&args.corpus)?;
    let dataset = generator::load_dataset(&args.dataset)?;
    let index = VectorIndex::load(&args.index)?;
    let embedder = parse_embedder_spec(&settings.embedder)?;
    if embedder.name() != index.embedder_name() {
        return Err(refuse(format!(
            "index {} was built with embedder {} but --embedder resolves to {}",
            args.index.display(),
            index.embedder_name(),
            embedder.name()
        )));
    }
    let backend = build_backend(&settings.gateway, &dataset, &corpus, &settings.filter_model)?;
    let mut gateway = Gateway::new(backend).with_retry(RetryPolicy::default());
    if let Some(record) = &args.record {
        gateway = gateway.with_recorder(record)?;
    }
    let retriever = DenseRetriever {
        index: &index,
        embedder: embedder.as_ref(),
    };
    let runner = PipelineRunner {
        corpus: &corpus,
        retriever: &retriever,
        gateway: &gateway,
        config: settings.config,
    };
    let traces = pipeline::run_batch(&runner, &dataset, settings.jobs);
    pipeline::save_traces(&traces, &args.output)?;
    let failures = traces.iter().filter(|t| !t.errors.is_empty()).count();
    println!(
        "wrote {} trace(s) to {} ({} with recorded errors)",
        traces.len(),
        args.output.display(),
        failures
    );
    Ok(())
}

fn eval(args: EvalArgs) -> Result<(), CliFailure> {
    if let Some(output) = &args.output {
        check_output(output, args.force)?;
    }
    let dataset = generator::load_dataset(&args.dataset)?;
    let traces = pipeline::load_traces(&args.traces)?;
    let report = evaluate_batch(&traces, &dataset, args.k)?;
    if let Some(output) = &args.output {
        fs::write(output, serde_json::to_string_pretty(&report)? + "\n")?;
    }
    print!("{}", report.render_table());
    Ok(())
}

struct SweepPoint {
    raw: String,
    settings: RunSettings,
    eval_k: usize,
    report_path: PathBuf,
}

fn sanitize(value: &str) -> String {
    value
        .chars()
        .map(|c| if c.is_ascii_alphanumeric() || c == '.' || c == '-' { c } else { '-' })
        .take(40)
        .collect()
}

fn plan_sweep(args: &SweepArgs, base: &RunSettings) -> Result<Vec<SweepPoint>, CliFailure> {
    if args.values.is_empty() {
        return Err(usage("--values needs at least one entry"));
    }
    let mut points = Vec::with_capacity(args.values.len());
    for (i, raw) in args.values.iter().enumerate() {
        let mut settings = base.clone();
        let mut eval_k = args.eval_k;
        match args.axis {
            SweepAxis::MaxIterations => {
                settings.config.max_iterations = raw.parse().map_err(|_| {
                    usage(format!("axis max_iterations: {raw:?} is not a non-negative integer"))
                })?;
            }
            SweepAxis::RetrieveK => {
                let k: usize = raw.parse().map_err(|_| {
                    usage(format!("axis retrieve_k: {raw:?} is not a positive integer"))
                })?;
                if k == 0 {
                    return Err(usage("axis retrieve_k: values must be at least 1"));
                }
                settings.config.retrieve_k = k;
                eval_k = k;
            }
            SweepAxis::Embedder => {
                parse_embedder_spec(raw)?;
                settings.embedder = raw.clone();
            }
            SweepAxis::FilterModel => {
                settings.filter_model = raw.clone();
            }
        }
        points.push(SweepPoint {
            raw: raw.clone(),
            settings,
            eval_k,
            report_path: args
                .output
                .join(format!("point_{i:02}_{}.json", sanitize(raw))),
        });
    }
    Ok(points)
}

#[derive(Serialize)]
struct PointReport<'a> {
    axis: &'a str,
    value: &'a str,
    report: &'a EvalReport,
}

fn csv_field(value: &str) -> String {
    if value.contains(',') || value.contains('"') {
        format!("\"{}\"", value.replace('"', "\"\""))
    } else {
        value.to_string()
    }
}

fn sweep(args: SweepArgs) -> Result<(), CliFailure> {
    let base = resolve_settings(&args.flags)?;
    let points = plan_sweep(&args, &base)?;
    fs::create_dir_all(&args.output)?;
    let csv_path = args.output.join("sweep.csv");
    check_output(&csv_path, args.force)?;
    for point in &points {
        check_output(&point.report_path, args.force)?;
    }
    let corpus = corpus::ingest_jsonl(&args.corpus)?;
    let dataset = generator::load_dataset(&args.dataset)?;

    let mut csv =
        String::from("axis,value,eval_k,evaluated,skipped,macro_f1,macro_d_f1,micro_f1,micro_d_f1\n");
    for point in &points {
        let embedder = parse_embedder_spec(&point.settings.embedder)?;
        let index = build_index(&corpus, embedder.as_ref(), &BuildOptions::default())?;
        let backend = build_backend(
            &point.settings.gateway,
            &dataset,
            &corpus,
            &point.settings.filter_model,
        )?;
        let gateway = Gateway::new(backend).with_retry(RetryPolicy::default());
        let retriever = DenseRetriever {
            index: &index,
            embedder: embedder.as_ref(),
        };
        let runner = PipelineRunner {
            corpus: &corpus,
            retriever: &retriever,
            gateway: &gateway,
            config: point.settings.config.clone(),
        };
        let traces = pipeline::run_batch(&runner, &dataset, point.settings.jobs);
        let report = evaluate_batch(&traces, &dataset, point.eval_k)?;
        let body = serde_json::to_string_pretty(&PointReport {
            axis: args.axis.label(),
            value: &point.raw,
            report: &report,
        })?;
        fs::write(&point.report_path, body + "\n")?;
        let fmt = |v: Option<f64>| v.map(|x| format!("{x:.6}")).unwrap_or_default();
        let _ = writeln!(
            csv,
            "{},{},{},{},{},{},{},{},{}",
            args.axis.label(),
            csv_field(&point.raw),
            report.k,
            report.evaluated,
            report.skipped,
            fmt(report.macro_avg.map(|a| a.f1)),
            fmt(report.macro_avg.map(|a| a.d_f1)),
            fmt(report.micro_avg.map(|a| a.f1)),
            fmt(report.micro_avg.map(|a| a.d_f1)),
        );
        println!(
            "point {}={} done ({} of {} queries scored)",
            args.axis.label(),
            point.raw,
            report.evaluated,
            dataset.len()
        );
    }
    fs::write(&csv_path, &csv)?;
    println!("wrote {} point(s) and {}", points.len(), csv_path.display());
    Ok(())
}

fn report(args: ReportArgs) -> Result<(), CliFailure> {
    let text = fs::read_to_string(&args.input)?;
    let report: EvalReport = serde_json::from_str(&text)
        .map_err(|e| refuse(format!("report file {}: {e}", args.input.display())))?;
    print!("{}", report.render_table());
    Ok(())
}
