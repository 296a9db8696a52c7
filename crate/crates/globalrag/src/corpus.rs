//! Document store: typed attributes, JSONL ingestion, and exact-match scanning.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Attribute key for the display name of an entity.
pub const ATTR_NAME: &str = "name";
/// Attribute key for years of professional experience.
pub const ATTR_YEARS: &str = "years_experience";
/// Attribute key for the skill list.
pub const ATTR_SKILLS: &str = "skills";

/// A typed attribute value attached to a document.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum AttrValue {
    Number(f64),
    Text(String),
    List(Vec<String>),
}

impl AttrValue {
    pub fn as_number(&self) -> Option<f64> {
        match self {
            AttrValue::Number(v) => Some(*v),
            _ => None,
        }
    }

    pub fn as_text(&self) -> Option<&str> {
        match self {
            AttrValue::Text(s) => Some(s),
            _ => None,
        }
    }

    pub fn as_list(&self) -> Option<&[String]> {
        match self {
            AttrValue::List(v) => Some(v),
            _ => None,
        }
    }
}

/// One document in the collection. `text` is the retrievable surface form;
/// `attributes` carry the structured facts the text was rendered from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Document {
    pub id: String,
    pub domain: String,
    pub text: String,
    #[serde(default)]
    pub attributes: BTreeMap<String, AttrValue>,
}

impl Document {
    /// Human-readable label: the `name` attribute when present, else the id.
    pub fn label(&self) -> &str {
        self.attributes
            .get(ATTR_NAME)
            .and_then(AttrValue::as_text)
            .unwrap_or(&self.id)
    }
}

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("failed to access {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("line {line}: malformed document record: {message}")]
    Parse { line: usize, message: String },
    #[error("document {id:?} is invalid: {reason}")]
    InvalidDocument { id: String, reason: String },
    #[error("duplicate document id {id:?}")]
    DuplicateId { id: String },
}

/// An immutable collection of documents with unique ids.
#[derive(Debug, Clone, Default)]
pub struct Corpus {
    documents: Vec<Document>,
    by_id: HashMap<String, usize>,
}

impl Corpus {
    /// Builds a corpus, rejecting duplicate ids and structurally invalid
    /// documents (empty id or text, non-finite numeric attributes).
    pub fn from_documents(documents: Vec<Document>) -> Result<Self, CorpusError> {
        let mut by_id = HashMap::with_capacity(documents.len());
        for (i, doc) in documents.iter().enumerate() {
            validate_document(doc)?;
            if by_id.insert(doc.id.clone(), i).is_some() {
                return Err(CorpusError::DuplicateId { id: doc.id.clone() });
            }
        }
        Ok(Corpus { documents, by_id })
    }

    pub fn len(&self) -> usize {
        self.documents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.documents.is_empty()
    }

    pub fn get(&self, id: &str) -> Option<&Document> {
        self.by_id.get(id).map(|&i| &self.documents[i])
    }

    pub fn contains_id(&self, id: &str) -> bool {
        self.by_id.contains_key(id)
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Document> {
        self.documents.iter()
    }

    pub fn documents(&self) -> &[Document] {
        &self.documents
    }

    /// All distinct domain labels, sorted.
    pub fn domains(&self) -> BTreeSet<String> {
        self.documents.iter().map(|d| d.domain.clone()).collect()
    }

    /// All distinct values appearing in a string-list attribute, sorted.
    pub fn list_attribute_values(&self, attr: &str) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        for doc in &self.documents {
            if let Some(items) = doc.attributes.get(attr).and_then(AttrValue::as_list) {
                out.extend(items.iter().cloned());
            }
        }
        out
    }

    /// Ids of every document matched by the predicate, in sorted order.
    pub fn scan(&self, predicate: &Predicate) -> BTreeSet<String> {
        self.documents
            .iter()
            .filter(|d| predicate.matches(d))
            .map(|d| d.id.clone())
            .collect()
    }
}

fn validate_document(doc: &Document) -> Result<(), CorpusError> {
    let invalid = |reason: &str| CorpusError::InvalidDocument {
        id: doc.id.clone(),
        reason: reason.to_string(),
    };
    if doc.id.is_empty() {
        return Err(invalid("empty id"));
    }
    if doc.text.is_empty() {
        return Err(invalid("empty text"));
    }
    for (key, value) in &doc.attributes {
        if let AttrValue::Number(v) = value {
            if !v.is_finite() {
                return Err(invalid(&format!("attribute {key:?} is not finite")));
            }
        }
    }
    Ok(())
}

/// An exact-match condition over one document attribute. The document's
/// `domain` field is addressable as the pseudo-attribute `"domain"`.
/// A missing attribute or a type mismatch makes the document a non-match.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "snake_case")]
pub enum Predicate {
    /// Attribute equals the given value exactly.
    Eq { attr: String, value: AttrValue },
    /// Numeric attribute is >= the threshold.
    Ge { attr: String, value: f64 },
    /// Numeric attribute is > the threshold.
    Gt { attr: String, value: f64 },
    /// Numeric attribute is <= the threshold.
    Le { attr: String, value: f64 },
    /// Numeric attribute is < the threshold.
    Lt { attr: String, value: f64 },
    /// String-list attribute contains the given item.
    Contains { attr: String, value: String },
    /// String-list attribute contains at least one of the given items.
    ContainsAny { attr: String, values: Vec<String> },
}

/// Borrowed view of an attribute used during predicate evaluation.
enum AttrRef<'a> {
    Number(f64),
    Text(&'a str),
    List(&'a [String]),
}

fn attr_of<'a>(doc: &'a Document, attr: &str) -> Option<AttrRef<'a>> {
    if attr == "domain" {
        return Some(AttrRef::Text(&doc.domain));
    }
    doc.attributes.get(attr).map(|v| match v {
        AttrValue::Number(n) => AttrRef::Number(*n),
        AttrValue::Text(s) => AttrRef::Text(s),
        AttrValue::List(items) => AttrRef::List(items),
    })
}

impl Predicate {
    pub fn matches(&self, doc: &Document) -> bool {
        match self {
            Predicate::Eq { attr, value } => match (attr_of(doc, attr), value) {
                (Some(AttrRef::Number(a)), AttrValue::Number(b)) => a == *b,
                (Some(AttrRef::Text(a)), AttrValue::Text(b)) => a == b,
                (Some(AttrRef::List(a)), AttrValue::List(b)) => a == b.as_slice(),
                _ => false,
            },
            Predicate::Ge { attr, value } => numeric(doc, attr).is_some_and(|a| a >= *value),
            Predicate::Gt { attr, value } => numeric(doc, attr).is_some_and(|a| a > *value),
            Predicate::Le { attr, value } => numeric(doc, attr).is_some_and(|a| a <= *value),
            Predicate::Lt { attr, value } => numeric(doc, attr).is_some_and(|a| a < *value),
            Predicate::Contains { attr, value } => match attr_of(doc, attr) {
                Some(AttrRef::List(items)) => items.iter().any(|i| i == value),
                _ => false,
            },
            Predicate::ContainsAny { attr, values } => match attr_of(doc, attr) {
                Some(AttrRef::List(items)) => {
                    items.iter().any(|i| values.iter().any(|v| v == i))
                }
                _ => false,
            },
        }
    }
}

fn numeric(doc: &Document, attr: &str) -> Option<f64> {
    match attr_of(doc, attr) {
        Some(AttrRef::Number(v)) => Some(v),
        _ => None,
    }
}

/// Reads a corpus from a JSONL file, one document object per line.
pub fn ingest_jsonl(path: &Path) -> Result<Corpus, CorpusError> {
    let file = File::open(path).map_err(|source| CorpusError::Io {
        path: path.display().to_string(),
        source,
    })?;
    let reader = BufReader::new(file);
    let mut documents = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line_no = i + 1;
        let line = line.map_err(|source| CorpusError::Io {
            path: path.display().to_string(),
            source,
        })?;
        if line.trim().is_empty() {
            continue;
        }
        let doc: Document =
            serde_json::from_str(&line).map_err(|e| CorpusError::Parse {
                line: line_no,
                message: e.to_string(),
            })?;
        documents.push(doc);
    }
    Corpus::from_documents(documents)
}

/// Writes a corpus as JSONL, one document object per line, LF-terminated.
pub fn save_jsonl(corpus: &Corpus, path: &Path) -> Result<(), CorpusError> {
    let io_err = |source| CorpusError::Io {
        path: path.display().to_string(),
        source,
    };
    let file = File::create(path).map_err(io_err)?;
    let mut writer = BufWriter::new(file);
    for doc in corpus.iter() {
        let line = serde_json::to_string(doc).expect("document serializes");
        writer.write_all(line.as_bytes()).map_err(io_err)?;
        writer.write_all(b"\n").map_err(io_err)?;
    }
    writer.flush().map_err(io_err)
}
