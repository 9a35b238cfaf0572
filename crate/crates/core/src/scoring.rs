//! Overlap scoring, tie-tier ranking, and tie-aware question/corpus scores.
//!
//! Scores are sums of positive term weights over the overlap between a
//! question's and a candidate's content words. Candidates with equal scores
//! form a tier; since the order inside a tier is arbitrary, every score is
//! reported as an exact expectation over uniformly random within-tier
//! orderings together with its best-case and worst-case values.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use crate::corpus::{Candidate, Corpus, Question};
use crate::error::{Error, Result};
use crate::judging::{LabelSource, Labels};
use crate::text::{content_words, NormalizationConfig, TokenSet};

/// Per-term weights. Implementations must return strictly positive weights.
pub trait TermWeights: Sync {
    fn weight(&self, word: &str) -> f64;

    /// Sum of weights over `words`, in sorted word order.
    fn score(&self, words: &TokenSet) -> f64 {
        words.iter().map(|w| self.weight(w)).sum()
    }
}

/// Every term weighs 1, so the score is the overlap size.
#[derive(Debug, Clone, Copy, Default)]
pub struct Unweighted;

impl TermWeights for Unweighted {
    fn weight(&self, _word: &str) -> f64 {
        1.0
    }
}

/// `idf(w) = ln(N / df(w)) + 1`, where `N` counts candidate sentences and
/// `df(w)` counts the sentences containing `w`. Unseen words get `df = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct IdfTable {
    sentences: usize,
    df: HashMap<String, usize>,
}

impl IdfTable {
    pub fn from_corpus(corpus: &Corpus, config: &NormalizationConfig) -> Result<Self> {
        let mut df: HashMap<String, usize> = HashMap::new();
        let mut sentences = 0;
        for c in corpus.questions.iter().flat_map(|q| &q.candidates) {
            sentences += 1;
            for w in content_words(&c.sentence, config).iter() {
                *df.entry(w.to_owned()).or_default() += 1;
            }
        }
        if sentences == 0 {
            return Err(Error::EmptyCorpus);
        }
        Ok(Self { sentences, df })
    }

    pub fn sentences(&self) -> usize {
        self.sentences
    }

    pub fn document_frequency(&self, word: &str) -> usize {
        self.df.get(word).copied().unwrap_or(0)
    }
}

impl TermWeights for IdfTable {
    fn weight(&self, word: &str) -> f64 {
        let df = self.document_frequency(word).max(1);
        (self.sentences as f64 / df as f64).ln() + 1.0
    }
}

/// Explicit weights, with a fallback for unlisted words.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightTable {
    weights: HashMap<String, f64>,
    fallback: f64,
}

impl WeightTable {
    pub fn new(weights: HashMap<String, f64>, fallback: f64) -> Result<Self> {
        for (word, &weight) in weights
            .iter()
            .chain([(&String::from("<fallback>"), &fallback)])
        {
            if !(weight > 0.0 && weight.is_finite()) {
                return Err(Error::NonPositiveWeight {
                    word: word.clone(),
                    weight,
                });
            }
        }
        Ok(Self { weights, fallback })
    }
}

impl TermWeights for WeightTable {
    fn weight(&self, word: &str) -> f64 {
        self.weights.get(word).copied().unwrap_or(self.fallback)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ScorerKind {
    Overlap,
    Idf,
}

impl fmt::Display for ScorerKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ScorerKind::Overlap => "overlap",
            ScorerKind::Idf => "idf",
        })
    }
}

/// Scoring function: plain overlap count or IDF-weighted overlap.
#[derive(Debug, Clone, PartialEq)]
pub enum Scorer {
    Overlap,
    Idf(IdfTable),
}

impl Scorer {
    pub fn idf(corpus: &Corpus, config: &NormalizationConfig) -> Result<Self> {
        IdfTable::from_corpus(corpus, config).map(Scorer::Idf)
    }

    pub fn kind(&self) -> ScorerKind {
        match self {
            Scorer::Overlap => ScorerKind::Overlap,
            Scorer::Idf(_) => ScorerKind::Idf,
        }
    }

    /// True when every score is an integer (bins are exact).
    pub fn is_integral(&self) -> bool {
        matches!(self, Scorer::Overlap)
    }
}

impl TermWeights for Scorer {
    fn weight(&self, word: &str) -> f64 {
        match self {
            Scorer::Overlap => 1.0,
            Scorer::Idf(t) => t.weight(word),
        }
    }
}

/// Content words shared by the question and the candidate sentence.
pub fn overlap_words(
    question: &Question,
    candidate: &Candidate,
    config: &NormalizationConfig,
) -> TokenSet {
    content_words(&question.text, config).intersection(&content_words(&candidate.sentence, config))
}

/// Overlap sets of every candidate of `question`, in candidate order.
pub fn candidate_overlaps(question: &Question, config: &NormalizationConfig) -> Vec<TokenSet> {
    let q = content_words(&question.text, config);
    question
        .candidates
        .iter()
        .map(|c| q.intersection(&content_words(&c.sentence, config)))
        .collect()
}

pub fn score_candidate<W: TermWeights + ?Sized>(
    question: &Question,
    candidate: &Candidate,
    weights: &W,
    config: &NormalizationConfig,
) -> f64 {
    weights.score(&overlap_words(question, candidate, config))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RankedEntry {
    pub candidate_id: String,
    /// Position of the candidate in the question's candidate list.
    pub index: usize,
    pub score: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Tier {
    pub score: f64,
    /// Candidate indices, in input order.
    pub members: Vec<usize>,
    /// Number of candidates in strictly higher tiers.
    pub rank: usize,
}

/// Candidates sorted by descending score with ties grouped into tiers.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RankedList {
    pub entries: Vec<RankedEntry>,
    pub tiers: Vec<Tier>,
}

impl RankedList {
    /// Groups `scores` (indexed by candidate) into tiers of exactly equal score.
    pub fn from_scores(ids: &[&str], scores: &[f64]) -> Self {
        debug_assert_eq!(ids.len(), scores.len());
        let mut order: Vec<usize> = (0..scores.len()).collect();
        order.sort_by(|&a, &b| scores[b].total_cmp(&scores[a]));

        let mut tiers: Vec<Tier> = Vec::new();
        for (pos, &i) in order.iter().enumerate() {
            match tiers.last_mut() {
                Some(t) if t.score == scores[i] => t.members.push(i),
                _ => tiers.push(Tier {
                    score: scores[i],
                    members: vec![i],
                    rank: pos,
                }),
            }
        }
        let entries = order
            .iter()
            .map(|&i| RankedEntry {
                candidate_id: ids[i].to_owned(),
                index: i,
                score: scores[i],
            })
            .collect();
        Self { entries, tiers }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Competition rank of every candidate, indexed by candidate position.
    pub fn competition_ranks(&self) -> Vec<usize> {
        let mut ranks = vec![0; self.entries.len()];
        for t in &self.tiers {
            for &m in &t.members {
                ranks[m] = t.rank;
            }
        }
        ranks
    }
}

pub fn rank_question<W: TermWeights + ?Sized>(
    question: &Question,
    weights: &W,
    config: &NormalizationConfig,
) -> Result<RankedList> {
    if question.candidates.is_empty() {
        return Err(Error::EmptyCandidates(question.id.clone()));
    }
    let scores: Vec<f64> = candidate_overlaps(question, config)
        .iter()
        .map(|o| weights.score(o))
        .collect();
    let ids: Vec<&str> = question.candidates.iter().map(|c| c.id.as_str()).collect();
    Ok(RankedList::from_scores(&ids, &scores))
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Metric {
    /// 1 when the first-ranked candidate is correct.
    #[default]
    Top1,
    /// Reciprocal rank of the first correct candidate within the top five.
    Mrr5,
}

impl Metric {
    fn cutoff(self) -> usize {
        match self {
            Metric::Top1 => 1,
            Metric::Mrr5 => 5,
        }
    }

    /// Gain for the first correct candidate at 1-based `position`.
    fn gain(self, position: usize) -> f64 {
        if position <= self.cutoff() {
            1.0 / position as f64
        } else {
            0.0
        }
    }
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Metric::Top1 => "top1",
            Metric::Mrr5 => "mrr5",
        })
    }
}

impl FromStr for Metric {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "top1" => Ok(Metric::Top1),
            "mrr5" => Ok(Metric::Mrr5),
            _ => Err(format!("unknown metric `{s}` (expected top1 or mrr5)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TieAwareScore {
    pub expected: f64,
    pub maximum: f64,
    pub minimum: f64,
    pub metric: Metric,
}

impl TieAwareScore {
    pub fn zero(metric: Metric) -> Self {
        Self {
            expected: 0.0,
            maximum: 0.0,
            minimum: 0.0,
            metric,
        }
    }
}

/// Exact tie-aware score of a ranked list given per-candidate correctness.
///
/// Only the first tier holding a correct candidate matters. With `p`
/// candidates ranked above it, `n` members and `c` correct among them, the
/// first correct member lands at tier position `j` with probability
/// `c/(n-j+1) * prod_{i<j} (n-i+1-c)/(n-i+1)`.
pub fn tie_aware_score(ranked: &RankedList, correct: &[bool], metric: Metric) -> TieAwareScore {
    let Some(tier) = ranked
        .tiers
        .iter()
        .find(|t| t.members.iter().any(|&m| correct[m]))
    else {
        return TieAwareScore::zero(metric);
    };
    let n = tier.members.len();
    let c = tier.members.iter().filter(|&&m| correct[m]).count();
    let p = tier.rank;

    let mut expected = 0.0;
    let mut none_yet = 1.0;
    for j in 1..=(n - c + 1) {
        let position = p + j;
        if position > metric.cutoff() {
            break;
        }
        let remaining = (n - j + 1) as f64;
        expected += none_yet * (c as f64 / remaining) * metric.gain(position);
        none_yet *= (remaining - c as f64) / remaining;
    }

    TieAwareScore {
        expected,
        maximum: metric.gain(p + 1),
        minimum: metric.gain(p + n - c + 1),
        metric,
    }
}

pub fn question_score<W: TermWeights + ?Sized>(
    question: &Question,
    correct: &[bool],
    weights: &W,
    config: &NormalizationConfig,
    metric: Metric,
) -> Result<TieAwareScore> {
    if correct.len() != question.candidates.len() {
        return Err(Error::LabelMismatch {
            expected: question.candidates.len(),
            got: correct.len(),
        });
    }
    let ranked = rank_question(question, weights, config)?;
    Ok(tie_aware_score(&ranked, correct, metric))
}

/// One per-question row of a scoring run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QuestionScoreRow {
    pub question_id: String,
    pub score: TieAwareScore,
    pub candidates: usize,
    pub correct: usize,
    pub top_tier_size: usize,
    /// Number of question content words; reported, never used to normalize.
    pub question_length: usize,
    pub source: LabelSource,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CorpusScore {
    pub rows: Vec<QuestionScoreRow>,
    pub summary: TieAwareScore,
}

/// Scores every question, then averages. Questions without candidates score 0.
pub fn score_corpus<W: TermWeights + ?Sized>(
    corpus: &Corpus,
    labels: &Labels,
    weights: &W,
    config: &NormalizationConfig,
    metric: Metric,
) -> Result<CorpusScore> {
    if corpus.is_empty() {
        return Err(Error::EmptyCorpus);
    }
    labels.check(corpus)?;
    let rows = corpus
        .questions
        .par_iter()
        .zip(&labels.questions)
        .map(|(q, l)| -> Result<QuestionScoreRow> {
            let (score, top_tier_size) = if q.candidates.is_empty() {
                (TieAwareScore::zero(metric), 0)
            } else {
                let ranked = rank_question(q, weights, config)?;
                if l.correct.len() != q.candidates.len() {
                    return Err(Error::LabelMismatch {
                        expected: q.candidates.len(),
                        got: l.correct.len(),
                    });
                }
                (
                    tie_aware_score(&ranked, &l.correct, metric),
                    ranked.tiers[0].members.len(),
                )
            };
            Ok(QuestionScoreRow {
                question_id: q.id.clone(),
                score,
                candidates: q.candidates.len(),
                correct: l.correct_count(),
                top_tier_size,
                question_length: content_words(&q.text, config).len(),
                source: l.source,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let n = rows.len() as f64;
    let mut summary = TieAwareScore::zero(metric);
    for r in &rows {
        summary.expected += r.score.expected;
        summary.maximum += r.score.maximum;
        summary.minimum += r.score.minimum;
    }
    summary.expected /= n;
    summary.maximum /= n;
    summary.minimum /= n;
    Ok(CorpusScore { rows, summary })
}

pub fn corpus_score<W: TermWeights + ?Sized>(
    corpus: &Corpus,
    labels: &Labels,
    weights: &W,
    config: &NormalizationConfig,
    metric: Metric,
) -> Result<TieAwareScore> {
    score_corpus(corpus, labels, weights, config, metric).map(|s| s.summary)
}
