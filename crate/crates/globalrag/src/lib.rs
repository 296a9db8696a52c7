//! Corpus-level retrieval-augmented generation.
//!
//! The pipeline answers questions whose evidence is scattered across an
//! entire document collection rather than a single passage: dense
//! document-level retrieval proposes candidates, a relevance filter keeps
//! the documents that actually bear on the question, and symbolic
//! aggregation tools (count, extremum, sort, top-k) compute the final
//! answer from extracted attribute records.
//!
//! The companion generator builds evaluation datasets by working
//! backwards: it samples a filtering trajectory over a synthetic corpus,
//! executes it to obtain the gold document set and answer, and only then
//! renders the natural-language question.

pub mod corpus;
pub mod embed;
pub mod eval;
pub mod filter;
pub mod gateway;
pub mod generator;
pub mod pipeline;
pub mod prompts;
pub mod tools;
