//! Overlap sets, maximal overlap sets (MaxOsets), and the bounds they place
//! on any term-weighting scheme with strictly positive weights.
//!
//! Candidates whose overlap with the question is exactly the same word set
//! always receive the same score, whatever the weights. A candidate whose
//! overlap is a proper subset of another's always scores strictly lower. So
//! the top-ranked candidate of every positive weighting lies in a MaxOset:
//! an overlap set whose words are not a proper subset of any other's.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use rayon::prelude::*;
use serde::Serialize;

use crate::corpus::{Corpus, Question};
use crate::error::{Error, Result};
use crate::judging::Labels;
use crate::scoring::candidate_overlaps;
use crate::text::{NormalizationConfig, TokenSet};

/// Candidates sharing one exact overlap word set.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OverlapSet {
    pub words: TokenSet,
    /// Candidate ids in input order.
    pub members: Vec<String>,
}

impl OverlapSet {
    pub fn correct_fraction(&self, correct: &BTreeSet<String>) -> f64 {
        let hits = self.members.iter().filter(|m| correct.contains(*m)).count();
        hits as f64 / self.members.len() as f64
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MaxOsetAnalysis {
    pub question_id: String,
    /// Every distinct nonempty overlap set, ordered by first member.
    pub all_sets: Vec<OverlapSet>,
    /// Subset of `all_sets` that are maximal; empty until [`maxosets`] runs.
    pub maximal_sets: Vec<OverlapSet>,
    /// Candidates sharing no content word with the question.
    pub zero_overlap: Vec<String>,
    pub correct_ids: BTreeSet<String>,
}

impl MaxOsetAnalysis {
    fn empty(question_id: &str) -> Self {
        Self {
            question_id: question_id.to_owned(),
            all_sets: Vec::new(),
            maximal_sets: Vec::new(),
            zero_overlap: Vec::new(),
            correct_ids: BTreeSet::new(),
        }
    }

    /// Records which candidates are correct. `correct` is aligned with the
    /// question's candidates.
    pub fn with_correct(mut self, question: &Question, correct: &[bool]) -> Result<Self> {
        if correct.len() != question.candidates.len() {
            return Err(Error::LabelMismatch {
                expected: question.candidates.len(),
                got: correct.len(),
            });
        }
        self.correct_ids = question
            .candidates
            .iter()
            .zip(correct)
            .filter(|(_, &ok)| ok)
            .map(|(c, _)| c.id.clone())
            .collect();
        Ok(self)
    }

    fn set_of(&self, candidate_id: &str) -> Option<&OverlapSet> {
        self.all_sets
            .iter()
            .find(|s| s.members.iter().any(|m| m == candidate_id))
    }

    /// Some MaxOset holds a correct candidate.
    pub fn max_predicate(&self) -> bool {
        self.maximal_sets
            .iter()
            .any(|o| o.members.iter().any(|s| self.correct_ids.contains(s)))
    }

    /// There is at least one MaxOset and every member of every MaxOset is correct.
    pub fn min_predicate(&self) -> bool {
        !self.maximal_sets.is_empty()
            && self
                .maximal_sets
                .iter()
                .all(|o| o.members.iter().all(|s| self.correct_ids.contains(s)))
    }

    /// Best fraction of correct members over the MaxOsets; 0 without MaxOsets.
    pub fn expected_max(&self) -> f64 {
        self.maximal_sets
            .iter()
            .map(|o| o.correct_fraction(&self.correct_ids))
            .fold(0.0, f64::max)
    }

    /// Best and worst dense rank the candidate can reach under positive
    /// weights that separate distinct overlap sets.
    pub fn rank_bounds(&self, candidate_id: &str) -> Result<RankBounds> {
        let Some(own) = self.set_of(candidate_id) else {
            let err = if self.zero_overlap.iter().any(|z| z == candidate_id) {
                Error::ZeroOverlap {
                    question: self.question_id.clone(),
                    candidate: candidate_id.to_owned(),
                }
            } else {
                Error::UnknownCandidate {
                    question: self.question_id.clone(),
                    candidate: candidate_id.to_owned(),
                }
            };
            return Err(err);
        };
        let w = &own.words;
        let supersets = self
            .all_sets
            .iter()
            .filter(|v| w.is_strict_subset(&v.words))
            .count();
        let can_outrank = self
            .all_sets
            .iter()
            .filter(|v| v.words != *w && !v.words.is_strict_subset(w))
            .count();
        Ok(RankBounds {
            best: 1 + supersets,
            worst: 1 + can_outrank,
        })
    }
}

/// Groups candidates by exact overlap word set.
pub fn overlap_sets(question: &Question, config: &NormalizationConfig) -> Result<MaxOsetAnalysis> {
    if question.candidates.is_empty() {
        return Err(Error::EmptyCandidates(question.id.clone()));
    }
    let overlaps = candidate_overlaps(question, config);
    let mut analysis = MaxOsetAnalysis::empty(&question.id);
    let mut index: HashMap<&TokenSet, usize> = HashMap::new();
    for (c, words) in question.candidates.iter().zip(&overlaps) {
        if words.is_empty() {
            analysis.zero_overlap.push(c.id.clone());
            continue;
        }
        match index.get(words) {
            Some(&i) => analysis.all_sets[i].members.push(c.id.clone()),
            None => {
                index.insert(words, analysis.all_sets.len());
                analysis.all_sets.push(OverlapSet {
                    words: words.clone(),
                    members: vec![c.id.clone()],
                });
            }
        }
    }
    Ok(analysis)
}

/// Fills `maximal_sets`: the sets whose words are not a proper subset of any
/// other set's words.
pub fn maxosets(mut analysis: MaxOsetAnalysis) -> MaxOsetAnalysis {
    analysis.maximal_sets = analysis
        .all_sets
        .iter()
        .filter(|o| {
            !analysis
                .all_sets
                .iter()
                .any(|v| o.words.is_strict_subset(&v.words))
        })
        .cloned()
        .collect();
    analysis
}

/// Overlap sets, MaxOsets and correctness for one question. A question with
/// no candidates yields an empty analysis.
pub fn analyze_question(
    question: &Question,
    correct: &[bool],
    config: &NormalizationConfig,
) -> Result<MaxOsetAnalysis> {
    let analysis = if question.candidates.is_empty() {
        MaxOsetAnalysis::empty(&question.id)
    } else {
        maxosets(overlap_sets(question, config)?)
    };
    analysis.with_correct(question, correct)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct RankBounds {
    pub best: usize,
    pub worst: usize,
}

pub fn rank_bounds(
    question: &Question,
    candidate_id: &str,
    config: &NormalizationConfig,
) -> Result<RankBounds> {
    overlap_sets(question, config)?.rank_bounds(candidate_id)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundStats {
    pub max: f64,
    pub min: f64,
    pub expected_max: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Category {
    /// Every member of every MaxOset is correct.
    ImpossibleToGetItWrong,
    /// Every MaxOset holds a correct member.
    AlwaysAChance,
    /// Some MaxOset holds a correct member.
    MayBeAChance,
    /// No MaxOset holds a correct member.
    WrongAnswersAlwaysHigher,
    /// Every correct candidate has zero overlap (or there are none).
    NoCorrectWithOverlap,
    NoCorrectAnswers,
}

impl Category {
    pub const ALL: [Category; 6] = [
        Category::ImpossibleToGetItWrong,
        Category::AlwaysAChance,
        Category::MayBeAChance,
        Category::WrongAnswersAlwaysHigher,
        Category::NoCorrectWithOverlap,
        Category::NoCorrectAnswers,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Category::ImpossibleToGetItWrong => "impossible_to_get_it_wrong",
            Category::AlwaysAChance => "always_a_chance",
            Category::MayBeAChance => "may_be_a_chance",
            Category::WrongAnswersAlwaysHigher => "wrong_answers_always_higher",
            Category::NoCorrectWithOverlap => "no_correct_with_overlap",
            Category::NoCorrectAnswers => "no_correct_answers",
        }
    }

    pub fn description(self) -> &'static str {
        match self {
            Category::ImpossibleToGetItWrong => "Impossible to get it wrong",
            Category::AlwaysAChance => "There is always a chance to get it right",
            Category::MayBeAChance => "There may be a chance to get it right",
            Category::WrongAnswersAlwaysHigher => {
                "The wrong answers will always be weighted too highly"
            }
            Category::NoCorrectWithOverlap => {
                "There are no correct answers with any overlap with Q"
            }
            Category::NoCorrectAnswers => "There are no correct answers",
        }
    }
}

impl fmt::Display for Category {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Evaluates every class predicate. The universal MaxOset classes
/// ("impossible", "always") require at least one MaxOset so that they stay
/// inside "may be"; "wrong answers always higher" is the complement of "may be".
pub fn categorize_question(analysis: &MaxOsetAnalysis) -> Vec<Category> {
    let correct = &analysis.correct_ids;
    let has_correct = |o: &OverlapSet| o.members.iter().any(|s| correct.contains(s));
    let nonempty = !analysis.maximal_sets.is_empty();

    let mut out = Vec::new();
    if analysis.min_predicate() {
        out.push(Category::ImpossibleToGetItWrong);
    }
    if nonempty && analysis.maximal_sets.iter().all(has_correct) {
        out.push(Category::AlwaysAChance);
    }
    if analysis.max_predicate() {
        out.push(Category::MayBeAChance);
    } else {
        out.push(Category::WrongAnswersAlwaysHigher);
    }
    if correct.iter().all(|c| analysis.zero_overlap.contains(c)) {
        out.push(Category::NoCorrectWithOverlap);
    }
    if correct.is_empty() {
        out.push(Category::NoCorrectAnswers);
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CategoryCount {
    pub category: Category,
    pub description: &'static str,
    pub count: usize,
    pub percentage: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CategoryBreakdown {
    pub questions: usize,
    pub rows: Vec<CategoryCount>,
}

impl CategoryBreakdown {
    pub fn from_classes<'a>(classes: impl IntoIterator<Item = &'a [Category]>) -> Self {
        let mut counts = [0usize; 6];
        let mut questions = 0;
        for cs in classes {
            questions += 1;
            for c in cs {
                counts[Category::ALL.iter().position(|a| a == c).unwrap()] += 1;
            }
        }
        let rows = Category::ALL
            .iter()
            .zip(counts)
            .map(|(&category, count)| CategoryCount {
                category,
                description: category.description(),
                count,
                percentage: if questions == 0 {
                    0.0
                } else {
                    100.0 * count as f64 / questions as f64
                },
            })
            .collect();
        Self { questions, rows }
    }

    pub fn count(&self, category: Category) -> usize {
        self.rows
            .iter()
            .find(|r| r.category == category)
            .map_or(0, |r| r.count)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CandidateBounds {
    pub candidate_id: String,
    pub best: usize,
    pub worst: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QuestionBounds {
    pub analysis: MaxOsetAnalysis,
    pub classes: Vec<Category>,
    pub expected_max: f64,
    pub rank_bounds: Vec<CandidateBounds>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundsReport {
    pub questions: Vec<QuestionBounds>,
    pub stats: BoundStats,
    pub breakdown: CategoryBreakdown,
}

/// Full per-question MaxOset report plus corpus statistics.
pub fn analyze_corpus(
    corpus: &Corpus,
    labels: &Labels,
    config: &NormalizationConfig,
) -> Result<BoundsReport> {
    if corpus.is_empty() {
        return Err(Error::EmptyCorpus);
    }
    labels.check(corpus)?;
    let questions = corpus
        .questions
        .par_iter()
        .zip(&labels.questions)
        .map(|(q, l)| -> Result<QuestionBounds> {
            let analysis = analyze_question(q, &l.correct, config)?;
            let rank_bounds = q
                .candidates
                .iter()
                .filter_map(|c| {
                    analysis.rank_bounds(&c.id).ok().map(|b| CandidateBounds {
                        candidate_id: c.id.clone(),
                        best: b.best,
                        worst: b.worst,
                    })
                })
                .collect();
            Ok(QuestionBounds {
                classes: categorize_question(&analysis),
                expected_max: analysis.expected_max(),
                rank_bounds,
                analysis,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let n = questions.len() as f64;
    let stats = BoundStats {
        max: questions
            .iter()
            .filter(|q| q.analysis.max_predicate())
            .count() as f64
            / n,
        min: questions
            .iter()
            .filter(|q| q.analysis.min_predicate())
            .count() as f64
            / n,
        expected_max: questions.iter().map(|q| q.expected_max).sum::<f64>() / n,
    };
    let breakdown = CategoryBreakdown::from_classes(questions.iter().map(|q| q.classes.as_slice()));
    Ok(BoundsReport {
        questions,
        stats,
        breakdown,
    })
}

pub fn bound_stats(
    corpus: &Corpus,
    labels: &Labels,
    config: &NormalizationConfig,
) -> Result<BoundStats> {
    analyze_corpus(corpus, labels, config).map(|r| r.stats)
}
