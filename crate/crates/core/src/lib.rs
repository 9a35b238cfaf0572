//! Diagnostics for question-answering subcomponents over annotated corpora.
//!
//! The crate measures what term-overlap sentence ranking and answer-type
//! extraction can and cannot achieve on a given set of questions:
//!
//! - [`judging`]: automatic correctness labels from answer keys
//!   (a sentence is correct when it holds at least half of a key's content words).
//! - [`scoring`]: overlap and IDF scorers, tie tiers, and exact expected,
//!   best-case and worst-case top-1 / MRR@5 scores over tie-breaking.
//! - [`curves`]: score and rank distributions by correctness, log odds and mass.
//! - [`maxoset`]: overlap sets, maximal overlap sets, and the bounds they put on
//!   every positive term weighting.
//! - [`confusability`]: expected extraction accuracy under oracle answer typing.
//! - [`frequency`]: answer-opportunity histograms against system correctness.
//! - [`report`]: CSV/JSON writers shared by the `qa-diag` binary.
//!
//! ```
//! use qa_diag::{corpus::Corpus, judging::{Labels, LabelPolicy}, maxoset, text::NormalizationConfig};
//!
//! let line = r#"{"id":"q","text":"Who founded Acme?","answer_keys":["Jane Doe"],
//!   "candidates":[{"id":"a","doc_id":"d","sentence":"Jane Doe founded Acme.","gold_correct":true},
//!                 {"id":"b","doc_id":"d","sentence":"Acme sells anvils.","gold_correct":false}]}"#
//!     .replace('\n', "");
//! let corpus = Corpus::from_jsonl(&line, "inline".as_ref()).unwrap();
//! let labels = Labels::resolve(&corpus, &NormalizationConfig::judging(), LabelPolicy::GoldOnly).unwrap();
//! let stats = maxoset::bound_stats(&corpus, &labels, &NormalizationConfig::overlap()).unwrap();
//! assert_eq!(stats.max, 1.0);
//! ```

pub mod cli;
pub mod confusability;
pub mod corpus;
pub mod curves;
pub mod error;
pub mod frequency;
pub mod judging;
pub mod maxoset;
pub mod report;
pub mod scoring;
pub mod text;

pub use error::{Error, Result};
