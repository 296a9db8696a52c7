//! Document-level dense retrieval: embedding providers and an exact
//! top-k cosine index over whole documents (no chunking, no ANN).

use std::cmp::Ordering;
use std::collections::{BinaryHeap, HashSet};
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;
use std::sync::atomic::{AtomicUsize, Ordering as AtomicOrdering};
use std::sync::Mutex;
use std::time::Duration;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::corpus::Corpus;

/// Produces fixed-dimension embeddings for batches of texts.
pub trait Embedder: Send + Sync {
    /// Versioned provider name, persisted with indexes so a stored index is
    /// never queried with a different embedding space.
    fn name(&self) -> String;
    fn dim(&self) -> usize;
    fn embed(&self, texts: &[&str]) -> Result<Vec<Vec<f64>>, EmbedError>;
}

#[derive(Debug, Error)]
pub enum EmbedError {
    #[error("embedding transport failure: {0}")]
    Transport(String),
    #[error("embedding protocol error: {0}")]
    Protocol(String),
    #[error("embedding count mismatch: sent {sent} texts, got {got} vectors")]
    CountMismatch { sent: usize, got: usize },
}

#[derive(Debug, Error)]
pub enum IndexError {
    #[error("embedding failed for document {doc_id}: {source}")]
    DocEmbed {
        doc_id: String,
        #[source]
        source: EmbedError,
    },
    #[error("query embedding failed: {source}")]
    QueryEmbed {
        #[source]
        source: EmbedError,
    },
    #[error("document {doc_id} embedded to {got} dimensions, index expects {expected}")]
    DimensionMismatch {
        doc_id: String,
        expected: usize,
        got: usize,
    },
    #[error("index was built with embedder {index_embedder:?} but {query_embedder:?} was supplied")]
    EmbedderMismatch {
        index_embedder: String,
        query_embedder: String,
    },
    #[error("k must be at least 1")]
    InvalidK,
    #[error("failed to access {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("line {line}: malformed index record: {message}")]
    Parse { line: usize, message: String },
    #[error("index header is invalid: {0}")]
    Header(String),
    #[error("duplicate document id {id:?} in index")]
    DuplicateId { id: String },
}

/// One scored retrieval candidate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RetrievalHit {
    pub doc_id: String,
    pub score: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct IndexEntry {
    id: String,
    vector: Vec<f64>,
}

/// Flat exact-scan vector index: every document embedded once, queries
/// scored against all of them.
#[derive(Debug, Clone)]
pub struct VectorIndex {
    dim: usize,
    embedder_name: String,
    entries: Vec<IndexEntry>,
}

impl VectorIndex {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn embedder_name(&self) -> &str {
        &self.embedder_name
    }

    pub fn ids(&self) -> impl Iterator<Item = &str> {
        self.entries.iter().map(|e| e.id.as_str())
    }

    pub fn vector(&self, id: &str) -> Option<&[f64]> {
        self.entries
            .iter()
            .find(|e| e.id == id)
            .map(|e| e.vector.as_slice())
    }
}

/// Cosine similarity; either vector having zero norm yields 0.
pub fn cosine(a: &[f64], b: &[f64]) -> f64 {
    let mut dot = 0.0;
    let mut na = 0.0;
    let mut nb = 0.0;
    for i in 0..a.len().min(b.len()) {
        dot += a[i] * b[i];
        na += a[i] * a[i];
        nb += b[i] * b[i];
    }
    if na == 0.0 || nb == 0.0 {
        return 0.0;
    }
    dot / (na.sqrt() * nb.sqrt())
}

#[derive(Debug, Clone)]
pub struct BuildOptions {
    /// Texts per embed() call.
    pub batch_size: usize,
    /// Concurrent embed() calls; 1 means sequential.
    pub workers: usize,
}

impl Default for BuildOptions {
    fn default() -> Self {
        BuildOptions {
            batch_size: 32,
            workers: 1,
        }
    }
}

/// Embeds every document and assembles the index in corpus order.
/// Batches may be embedded concurrently; assembly order is unaffected.
pub fn build_index(
    corpus: &Corpus,
    embedder: &dyn Embedder,
    options: &BuildOptions,
) -> Result<VectorIndex, IndexError> {
    let expected = embedder.dim();
    let docs = corpus.documents();
    let batch_size = options.batch_size.max(1);
    let batches: Vec<(usize, Vec<&str>)> = docs
        .chunks(batch_size)
        .enumerate()
        .map(|(i, chunk)| (i * batch_size, chunk.iter().map(|d| d.text.as_str()).collect()))
        .collect();

    let mut vectors: Vec<Option<Vec<Vec<f64>>>> = vec![None; batches.len()];
    if options.workers <= 1 || batches.len() <= 1 {
        for (slot, (start, texts)) in vectors.iter_mut().zip(&batches) {
            *slot = Some(embed_batch(embedder, docs, *start, texts, expected)?);
        }
    } else {
        type BatchSlot = Mutex<Option<Result<Vec<Vec<f64>>, IndexError>>>;
        let next = AtomicUsize::new(0);
        let slots: Vec<BatchSlot> = batches.iter().map(|_| Mutex::new(None)).collect();
        std::thread::scope(|scope| {
            for _ in 0..options.workers.min(batches.len()) {
                scope.spawn(|| loop {
                    let i = next.fetch_add(1, AtomicOrdering::SeqCst);
                    if i >= batches.len() {
                        break;
                    }
                    let (start, texts) = &batches[i];
                    let result = embed_batch(embedder, docs, *start, texts, expected);
                    *slots[i].lock().expect("slot lock") = Some(result);
                });
            }
        });
        for (slot, cell) in vectors.iter_mut().zip(slots) {
            let result = cell.into_inner().expect("slot lock").expect("worker filled slot");
            *slot = Some(result?);
        }
    }

    let mut entries = Vec::with_capacity(docs.len());
    for (batch, (start, _)) in vectors.into_iter().zip(&batches) {
        for (offset, vector) in batch.expect("batch filled").into_iter().enumerate() {
            entries.push(IndexEntry {
                id: docs[start + offset].id.clone(),
                vector,
            });
        }
    }
    Ok(VectorIndex {
        dim: expected,
        embedder_name: embedder.name(),
        entries,
    })
}

fn embed_batch(
    embedder: &dyn Embedder,
    docs: &[crate::corpus::Document],
    start: usize,
    texts: &[&str],
    expected: usize,
) -> Result<Vec<Vec<f64>>, IndexError> {
    let vectors = embedder.embed(texts).map_err(|source| IndexError::DocEmbed {
        doc_id: docs[start].id.clone(),
        source,
    })?;
    if vectors.len() != texts.len() {
        return Err(IndexError::DocEmbed {
            doc_id: docs[start].id.clone(),
            source: EmbedError::CountMismatch {
                sent: texts.len(),
                got: vectors.len(),
            },
        });
    }
    for (offset, v) in vectors.iter().enumerate() {
        if v.len() != expected {
            return Err(IndexError::DimensionMismatch {
                doc_id: docs[start + offset].id.clone(),
                expected,
                got: v.len(),
            });
        }
    }
    Ok(vectors)
}

/// Heap element ordered so the max-heap's top is the worst of the current
/// best k under (score descending, then ascending doc id).
struct HitItem {
    hit: RetrievalHit,
}

impl HitItem {
    fn rank_cmp(a: &RetrievalHit, b: &RetrievalHit) -> Ordering {
        b.score
            .partial_cmp(&a.score)
            .expect("scores are finite")
            .then_with(|| a.doc_id.cmp(&b.doc_id))
    }
}

impl PartialEq for HitItem {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for HitItem {}
impl PartialOrd for HitItem {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for HitItem {
    fn cmp(&self, other: &Self) -> Ordering {
        // Rank order puts the best hit first, so the max-heap's greatest
        // element is the worst of the kept set.
        Self::rank_cmp(&self.hit, &other.hit)
    }
}

/// Scores the query against every indexed document and returns the best
/// `min(k, len)` hits sorted by score descending, ties by ascending id.
pub fn retrieve(
    index: &VectorIndex,
    query: &str,
    embedder: &dyn Embedder,
    k: usize,
) -> Result<Vec<RetrievalHit>, IndexError> {
    if k == 0 {
        return Err(IndexError::InvalidK);
    }
    if embedder.name() != index.embedder_name {
        return Err(IndexError::EmbedderMismatch {
            index_embedder: index.embedder_name.clone(),
            query_embedder: embedder.name(),
        });
    }
    let mut q = embedder
        .embed(&[query])
        .map_err(|source| IndexError::QueryEmbed { source })?;
    let q = q.pop().ok_or(IndexError::QueryEmbed {
        source: EmbedError::CountMismatch { sent: 1, got: 0 },
    })?;
    if q.len() != index.dim {
        return Err(IndexError::DimensionMismatch {
            doc_id: "(query)".to_string(),
            expected: index.dim,
            got: q.len(),
        });
    }

    let mut heap: BinaryHeap<HitItem> = BinaryHeap::with_capacity(k + 1);
    for entry in &index.entries {
        let score = cosine(&q, &entry.vector).clamp(-1.0, 1.0);
        let item = HitItem {
            hit: RetrievalHit {
                doc_id: entry.id.clone(),
                score,
            },
        };
        if heap.len() < k {
            heap.push(item);
        } else if let Some(worst) = heap.peek() {
            if item.cmp(worst) == Ordering::Less {
                heap.pop();
                heap.push(item);
            }
        }
    }
    let mut hits: Vec<RetrievalHit> = heap.into_iter().map(|i| i.hit).collect();
    hits.sort_by(HitItem::rank_cmp);
    Ok(hits)
}

/// Deterministic local embedder: seeded feature hashing of lowercase
/// alphanumeric tokens with a sign trick, L2-normalized. Equal texts map to
/// equal vectors for a given (dim, seed).
#[derive(Debug, Clone)]
pub struct HashEmbedder {
    dim: usize,
    seed: u64,
}

impl HashEmbedder {
    /// `dim` must be at least 1.
    pub fn new(dim: usize, seed: u64) -> Self {
        assert!(dim >= 1, "embedding dimension must be at least 1");
        HashEmbedder { dim, seed }
    }

    fn embed_one(&self, text: &str) -> Vec<f64> {
        let mut v = vec![0.0f64; self.dim];
        for token in tokenize(text) {
            let h = token_hash(self.seed, &token);
            let bucket = ((h >> 1) % self.dim as u64) as usize;
            let sign = if h & 1 == 0 { 1.0 } else { -1.0 };
            v[bucket] += sign;
        }
        let norm: f64 = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 0.0 {
            for x in &mut v {
                *x /= norm;
            }
        }
        v
    }
}

fn tokenize(text: &str) -> impl Iterator<Item = String> + '_ {
    text.split(|c: char| !c.is_alphanumeric())
        .filter(|t| !t.is_empty())
        .map(|t| t.to_lowercase())
}

fn token_hash(seed: u64, token: &str) -> u64 {
    let mut h = 0xcbf29ce484222325u64 ^ seed.wrapping_mul(0x9e3779b97f4a7c15);
    for b in token.bytes() {
        h ^= u64::from(b);
        h = h.wrapping_mul(0x100000001b3);
    }
    h ^= h >> 30;
    h = h.wrapping_mul(0xbf58476d1ce4e5b9);
    h ^= h >> 27;
    h = h.wrapping_mul(0x94d049bb133111eb);
    h ^ (h >> 31)
}

impl Embedder for HashEmbedder {
    fn name(&self) -> String {
        format!("hash-v1-d{}-s{}", self.dim, self.seed)
    }

    fn dim(&self) -> usize {
        self.dim
    }

    fn embed(&self, texts: &[&str]) -> Result<Vec<Vec<f64>>, EmbedError> {
        Ok(texts.iter().map(|t| self.embed_one(t)).collect())
    }
}

#[derive(Serialize)]
struct EmbedHttpRequest<'a> {
    input: &'a [&'a str],
    model: &'a str,
}

#[derive(Deserialize)]
struct EmbedHttpResponse {
    data: Vec<EmbedHttpDatum>,
}

#[derive(Deserialize)]
struct EmbedHttpDatum {
    index: usize,
    embedding: Vec<f64>,
}

/// Remote embedding provider speaking the common `/v1/embeddings` JSON shape:
/// request `{"input": [texts], "model": name}`, response `{"data": [{"index",
/// "embedding"}]}`.
pub struct HttpEmbedder {
    url: String,
    model: String,
    dim: usize,
    bearer_token: Option<String>,
    agent: ureq::Agent,
}

impl HttpEmbedder {
    pub fn new(url: &str, model: &str, dim: usize, bearer_token: Option<String>) -> Self {
        let agent = ureq::Agent::config_builder()
            .timeout_global(Some(Duration::from_secs(60)))
            .build()
            .into();
        HttpEmbedder {
            url: url.to_string(),
            model: model.to_string(),
            dim,
            bearer_token,
            agent,
        }
    }
}

impl Embedder for HttpEmbedder {
    fn name(&self) -> String {
        format!("http-{}-d{}", self.model, self.dim)
    }

    fn dim(&self) -> usize {
        self.dim
    }

    fn embed(&self, texts: &[&str]) -> Result<Vec<Vec<f64>>, EmbedError> {
        let body = EmbedHttpRequest {
            input: texts,
            model: &self.model,
        };
        let mut request = self.agent.post(&self.url);
        if let Some(token) = &self.bearer_token {
            request = request.header("Authorization", &format!("Bearer {token}"));
        }
        let mut response = request
            .send_json(&body)
            .map_err(|e| EmbedError::Transport(e.to_string()))?;
        let parsed: EmbedHttpResponse = response
            .body_mut()
            .read_json()
            .map_err(|e| EmbedError::Protocol(e.to_string()))?;
        let mut data = parsed.data;
        data.sort_by_key(|d| d.index);
        if data.len() != texts.len() {
            return Err(EmbedError::CountMismatch {
                sent: texts.len(),
                got: data.len(),
            });
        }
        Ok(data.into_iter().map(|d| d.embedding).collect())
    }
}

#[derive(Serialize, Deserialize)]
struct IndexHeader {
    schema: String,
    dim: usize,
    embedder: String,
    count: usize,
}

const INDEX_SCHEMA: &str = "globalrag.vecindex.v1";

impl VectorIndex {
    /// Writes the index as JSONL: a header line, then one `{id, vector}`
    /// record per document.
    pub fn save(&self, path: &Path) -> Result<(), IndexError> {
        let io_err = |source| IndexError::Io {
            path: path.display().to_string(),
            source,
        };
        let file = File::create(path).map_err(io_err)?;
        let mut writer = BufWriter::new(file);
        let header = IndexHeader {
            schema: INDEX_SCHEMA.to_string(),
            dim: self.dim,
            embedder: self.embedder_name.clone(),
            count: self.entries.len(),
        };
        let mut line = serde_json::to_string(&header).expect("header serializes");
        line.push('\n');
        writer.write_all(line.as_bytes()).map_err(io_err)?;
        for entry in &self.entries {
            let mut line = serde_json::to_string(entry).expect("entry serializes");
            line.push('\n');
            writer.write_all(line.as_bytes()).map_err(io_err)?;
        }
        writer.flush().map_err(io_err)
    }

    pub fn load(path: &Path) -> Result<Self, IndexError> {
        let io_err = |source| IndexError::Io {
            path: path.display().to_string(),
            source,
        };
        let file = File::open(path).map_err(io_err)?;
        let reader = BufReader::new(file);
        let mut lines = reader.lines().enumerate();
        let (_, header_line) = lines
            .next()
            .ok_or_else(|| IndexError::Header("file is empty".to_string()))?;
        let header_line = header_line.map_err(io_err)?;
        let header: IndexHeader = serde_json::from_str(&header_line)
            .map_err(|e| IndexError::Header(e.to_string()))?;
        if header.schema != INDEX_SCHEMA {
            return Err(IndexError::Header(format!(
                "unsupported schema {:?}",
                header.schema
            )));
        }
        let mut entries = Vec::with_capacity(header.count);
        let mut seen = HashSet::with_capacity(header.count);
        for (i, line) in lines {
            let line_no = i + 1;
            let line = line.map_err(io_err)?;
            if line.trim().is_empty() {
                continue;
            }
            let entry: IndexEntry =
                serde_json::from_str(&line).map_err(|e| IndexError::Parse {
                    line: line_no,
                    message: e.to_string(),
                })?;
            if entry.vector.len() != header.dim {
                return Err(IndexError::DimensionMismatch {
                    doc_id: entry.id,
                    expected: header.dim,
                    got: entry.vector.len(),
                });
            }
            if !seen.insert(entry.id.clone()) {
                return Err(IndexError::DuplicateId { id: entry.id });
            }
            entries.push(entry);
        }
        if entries.len() != header.count {
            return Err(IndexError::Header(format!(
                "header declares {} entries, file has {}",
                header.count,
                entries.len()
            )));
        }
        Ok(VectorIndex {
            dim: header.dim,
            embedder_name: header.embedder,
            entries,
        })
    }
}
