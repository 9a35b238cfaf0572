//! Automatic correctness judging against answer keys, and resolution of the
//! correctness label each analysis uses (gold annotation first, automatic
//! judgment as fallback).

use std::fmt;

use rayon::prelude::*;
use serde::Serialize;

use crate::corpus::{Candidate, Corpus, Question};
use crate::error::{Error, Result};
use crate::text::{content_words, tokenize, NormalizationConfig, TokenSet};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct JudgedLabel {
    pub correct: bool,
    /// First answer key the sentence satisfies.
    pub matched_key_index: Option<usize>,
    /// Best `m / |k|` over all keys.
    pub matched_fraction: f64,
    /// Keys that normalized to no content words and were matched on their raw
    /// lowercase tokens instead.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub degenerate_keys: Vec<usize>,
}

/// Answer keys reduced to the word sets the judge compares against.
#[derive(Debug, Clone)]
struct PreparedKeys {
    keys: Vec<PreparedKey>,
}

#[derive(Debug, Clone)]
struct PreparedKey {
    words: TokenSet,
    /// Built from raw tokens because content words came out empty.
    degenerate: bool,
}

impl PreparedKeys {
    fn new(question: &Question, config: &NormalizationConfig) -> Self {
        let keys = question
            .answer_keys
            .iter()
            .map(|key| {
                let words = content_words(key, config);
                if words.is_empty() {
                    PreparedKey {
                        words: raw_tokens(key),
                        degenerate: true,
                    }
                } else {
                    PreparedKey {
                        words,
                        degenerate: false,
                    }
                }
            })
            .collect();
        Self { keys }
    }

    fn judge(&self, sentence: &str, config: &NormalizationConfig) -> JudgedLabel {
        let content = content_words(sentence, config);
        let raw = if self.keys.iter().any(|k| k.degenerate) {
            raw_tokens(sentence)
        } else {
            TokenSet::new()
        };

        let mut matched_key_index = None;
        let mut matched_fraction: f64 = 0.0;
        let mut degenerate_keys = Vec::new();
        for (i, key) in self.keys.iter().enumerate() {
            if key.degenerate {
                degenerate_keys.push(i);
            }
            if key.words.is_empty() {
                continue;
            }
            let against = if key.degenerate { &raw } else { &content };
            let m = key.words.intersection_len(against);
            let k = key.words.len();
            matched_fraction = matched_fraction.max(m as f64 / k as f64);
            if 2 * m >= k && matched_key_index.is_none() {
                matched_key_index = Some(i);
            }
        }
        JudgedLabel {
            correct: matched_key_index.is_some(),
            matched_key_index,
            matched_fraction,
            degenerate_keys,
        }
    }
}

fn raw_tokens(text: &str) -> TokenSet {
    let cfg = NormalizationConfig::new(true, Default::default(), false);
    tokenize(text, &cfg).into_iter().collect()
}

/// A sentence is correct when, for some answer key with content words `k`, it
/// contains `m` of them with `2m >= |k|`.
pub fn judge_candidate(
    candidate: &Candidate,
    question: &Question,
    config: &NormalizationConfig,
) -> JudgedLabel {
    PreparedKeys::new(question, config).judge(&candidate.sentence, config)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QuestionJudgments {
    pub question_id: String,
    /// `(candidate id, label)` in candidate order.
    pub labels: Vec<(String, JudgedLabel)>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Judgments {
    pub questions: Vec<QuestionJudgments>,
}

impl Judgments {
    pub fn get(&self, question_id: &str, candidate_id: &str) -> Option<&JudgedLabel> {
        self.questions
            .iter()
            .find(|q| q.question_id == question_id)?
            .labels
            .iter()
            .find(|(id, _)| id == candidate_id)
            .map(|(_, l)| l)
    }

    pub fn len(&self) -> usize {
        self.questions.iter().map(|q| q.labels.len()).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

pub fn judge_question(question: &Question, config: &NormalizationConfig) -> QuestionJudgments {
    let keys = PreparedKeys::new(question, config);
    QuestionJudgments {
        question_id: question.id.clone(),
        labels: question
            .candidates
            .iter()
            .map(|c| (c.id.clone(), keys.judge(&c.sentence, config)))
            .collect(),
    }
}

pub fn judge_corpus(corpus: &Corpus, config: &NormalizationConfig) -> Judgments {
    Judgments {
        questions: corpus
            .questions
            .par_iter()
            .map(|q| judge_question(q, config))
            .collect(),
    }
}

/// Fraction of gold-labeled candidates whose automatic label matches gold.
pub fn agreement_rate(auto: &Judgments, gold: &Corpus) -> Result<f64> {
    let mut total = 0usize;
    let mut agree = 0usize;
    for q in &gold.questions {
        for c in &q.candidates {
            let (Some(g), Some(a)) = (c.gold_correct, auto.get(&q.id, &c.id)) else {
                continue;
            };
            total += 1;
            if g == a.correct {
                agree += 1;
            }
        }
    }
    if total == 0 {
        return Err(Error::NoGoldLabels);
    }
    Ok(agree as f64 / total as f64)
}

/// Where a question's correctness labels came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum LabelSource {
    Gold,
    Auto,
    Mixed,
    /// The question has no candidates.
    None,
}

impl fmt::Display for LabelSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LabelSource::Gold => "gold",
            LabelSource::Auto => "auto",
            LabelSource::Mixed => "mixed",
            LabelSource::None => "none",
        })
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum LabelPolicy {
    /// Gold label when present, automatic judgment otherwise.
    #[default]
    PreferGold,
    /// Every candidate must carry a gold label.
    GoldOnly,
    /// Ignore gold labels.
    AutoOnly,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QuestionLabels {
    pub question_id: String,
    /// Aligned with the question's candidates.
    pub correct: Vec<bool>,
    pub source: LabelSource,
}

impl QuestionLabels {
    pub fn correct_count(&self) -> usize {
        self.correct.iter().filter(|&&c| c).count()
    }
}

/// Correctness labels for a whole corpus, aligned question by question.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Labels {
    pub questions: Vec<QuestionLabels>,
}

impl Labels {
    pub fn resolve(
        corpus: &Corpus,
        judge_config: &NormalizationConfig,
        policy: LabelPolicy,
    ) -> Result<Self> {
        let questions = corpus
            .questions
            .par_iter()
            .map(|q| resolve_question(q, judge_config, policy))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { questions })
    }

    /// Labels taken verbatim from caller-supplied flags, e.g. in tests.
    pub fn from_flags(corpus: &Corpus, flags: Vec<Vec<bool>>) -> Result<Self> {
        if flags.len() != corpus.len() {
            return Err(Error::LabelMismatch {
                expected: corpus.len(),
                got: flags.len(),
            });
        }
        let questions = corpus
            .questions
            .iter()
            .zip(flags)
            .map(|(q, correct)| {
                if correct.len() != q.candidates.len() {
                    return Err(Error::LabelMismatch {
                        expected: q.candidates.len(),
                        got: correct.len(),
                    });
                }
                Ok(QuestionLabels {
                    question_id: q.id.clone(),
                    correct,
                    source: LabelSource::Gold,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { questions })
    }

    pub fn question(&self, idx: usize) -> &QuestionLabels {
        &self.questions[idx]
    }

    pub(crate) fn check(&self, corpus: &Corpus) -> Result<()> {
        if self.questions.len() != corpus.len() {
            return Err(Error::LabelMismatch {
                expected: corpus.len(),
                got: self.questions.len(),
            });
        }
        Ok(())
    }
}

fn resolve_question(
    q: &Question,
    judge_config: &NormalizationConfig,
    policy: LabelPolicy,
) -> Result<QuestionLabels> {
    let mut keys = None;
    let mut gold_used = 0usize;
    let mut correct = Vec::with_capacity(q.candidates.len());
    for c in &q.candidates {
        let gold = match policy {
            LabelPolicy::AutoOnly => None,
            _ => c.gold_correct,
        };
        match (gold, policy) {
            (Some(g), _) => {
                gold_used += 1;
                correct.push(g);
            }
            (None, LabelPolicy::GoldOnly) => {
                return Err(Error::MissingLabel {
                    question: q.id.clone(),
                    candidate: c.id.clone(),
                })
            }
            (None, _) => {
                let keys = keys.get_or_insert_with(|| PreparedKeys::new(q, judge_config));
                correct.push(keys.judge(&c.sentence, judge_config).correct);
            }
        }
    }
    let source = match (gold_used, q.candidates.len()) {
        (_, 0) => LabelSource::None,
        (g, n) if g == n => LabelSource::Gold,
        (0, _) => LabelSource::Auto,
        _ => LabelSource::Mixed,
    };
    Ok(QuestionLabels {
        question_id: q.id.clone(),
        correct,
        source,
    })
}
