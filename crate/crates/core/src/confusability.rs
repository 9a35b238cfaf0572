//! Answer confusability under oracle typing and tagging: the expected accuracy
//! of picking uniformly among the entities of the expected answer type found
//! in the answer-bearing sentences.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::corpus::{Corpus, Question};
use crate::error::{Error, Result};

/// Answer types excluded from the "without defaults" overall row.
pub const DEFAULT_TYPES: [&str; 2] = ["defaultnp", "defaultvp"];

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Aggregation {
    /// Pool the typed entities of all answer-bearing sentences, then divide.
    #[default]
    Pooled,
    /// Average the per-sentence ratio over answer-bearing sentences.
    PerSentence,
}

pub fn question_confusability(question: &Question, aggregation: Aggregation) -> Result<f64> {
    let Some(answer_type) = question.answer_type.as_deref() else {
        return Err(Error::UntypedQuestion(question.id.clone()));
    };
    // (answers, total) per answer-bearing sentence.
    let bearing: Vec<(usize, usize)> = question
        .candidates
        .iter()
        .map(|c| {
            let mut answers = 0;
            let mut total = 0;
            for e in c.entities_of_type(answer_type) {
                total += 1;
                answers += usize::from(e.is_answer);
            }
            (answers, total)
        })
        .filter(|&(answers, _)| answers > 0)
        .collect();
    if bearing.is_empty() {
        return Err(Error::NoAnswerEntity {
            question: question.id.clone(),
            answer_type: answer_type.to_owned(),
        });
    }
    Ok(match aggregation {
        Aggregation::Pooled => {
            let answers: usize = bearing.iter().map(|b| b.0).sum();
            let total: usize = bearing.iter().map(|b| b.1).sum();
            answers as f64 / total as f64
        }
        Aggregation::PerSentence => {
            bearing
                .iter()
                .map(|&(a, t)| a as f64 / t as f64)
                .sum::<f64>()
                / bearing.len() as f64
        }
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConfusabilityRow {
    pub answer_type: String,
    pub expected_score: f64,
    pub frequency: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QuestionConfusability {
    pub question_id: String,
    pub answer_type: String,
    pub score: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConfusabilityTable {
    pub aggregation: Aggregation,
    /// One row per answer type, sorted by type label.
    pub rows: Vec<ConfusabilityRow>,
    pub overall: Option<ConfusabilityRow>,
    /// `None` when every scored question has a default type.
    pub overall_without_defaults: Option<ConfusabilityRow>,
    pub questions: Vec<QuestionConfusability>,
    /// Typed questions skipped because no candidate holds an answer entity.
    pub skipped: Vec<String>,
}

fn mean_row(label: &str, scores: &[f64]) -> Option<ConfusabilityRow> {
    (!scores.is_empty()).then(|| ConfusabilityRow {
        answer_type: label.to_owned(),
        expected_score: scores.iter().sum::<f64>() / scores.len() as f64,
        frequency: scores.len(),
    })
}

/// Per-type means plus overall rows. Types are compared lowercased.
pub fn confusability_table(corpus: &Corpus, aggregation: Aggregation) -> ConfusabilityTable {
    let mut questions = Vec::new();
    let mut skipped = Vec::new();
    for q in corpus.questions.iter().filter(|q| q.answer_type.is_some()) {
        match question_confusability(q, aggregation) {
            Ok(score) => questions.push(QuestionConfusability {
                question_id: q.id.clone(),
                answer_type: q.answer_type.as_deref().unwrap().to_lowercase(),
                score,
            }),
            Err(_) => skipped.push(q.id.clone()),
        }
    }

    let mut by_type: BTreeMap<&str, Vec<f64>> = BTreeMap::new();
    for q in &questions {
        by_type.entry(&q.answer_type).or_default().push(q.score);
    }
    let rows = by_type
        .iter()
        .filter_map(|(t, scores)| mean_row(t, scores))
        .collect();

    let all: Vec<f64> = questions.iter().map(|q| q.score).collect();
    let non_default: Vec<f64> = questions
        .iter()
        .filter(|q| !DEFAULT_TYPES.contains(&q.answer_type.as_str()))
        .map(|q| q.score)
        .collect();

    ConfusabilityTable {
        aggregation,
        rows,
        overall: mean_row("overall", &all),
        overall_without_defaults: mean_row("overall_without_defaults", &non_default),
        questions,
        skipped,
    }
}
