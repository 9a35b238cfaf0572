//! Answer-opportunity statistics: how many correct candidates each question
//! has, and how that relates to the share of systems answering it correctly.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::corpus::{Corpus, SystemRun};
use crate::error::{Error, Result};
use crate::judging::Labels;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HistogramPoint {
    pub occurrences: usize,
    pub questions: usize,
    pub fraction_of_questions: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Summary {
    pub mean: f64,
    pub median: f64,
    /// Population standard deviation.
    pub standard_deviation: f64,
}

/// Histogram over questions with at least one correct candidate.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FrequencyHistogram {
    pub points: Vec<HistogramPoint>,
    /// Questions in the histogram population.
    pub population: usize,
    /// Questions with no correct candidate, kept out of the histogram.
    pub zero_occurrence: usize,
    /// `None` when the population is empty.
    pub summary: Option<Summary>,
}

fn summarize(values: &mut [usize]) -> Option<Summary> {
    if values.is_empty() {
        return None;
    }
    values.sort_unstable();
    let n = values.len();
    let mean = values.iter().sum::<usize>() as f64 / n as f64;
    let median = if n % 2 == 1 {
        values[n / 2] as f64
    } else {
        (values[n / 2 - 1] + values[n / 2]) as f64 / 2.0
    };
    let var = values
        .iter()
        .map(|&v| (v as f64 - mean).powi(2))
        .sum::<f64>()
        / n as f64;
    Some(Summary {
        mean,
        median,
        standard_deviation: var.sqrt(),
    })
}

pub fn answer_frequency_histogram(corpus: &Corpus, labels: &Labels) -> Result<FrequencyHistogram> {
    labels.check(corpus)?;
    let mut counts: Vec<usize> = Vec::new();
    let mut zero_occurrence = 0;
    for l in &labels.questions {
        match l.correct_count() {
            0 => zero_occurrence += 1,
            n => counts.push(n),
        }
    }
    let population = counts.len();
    let mut bins: BTreeMap<usize, usize> = BTreeMap::new();
    for &c in &counts {
        *bins.entry(c).or_default() += 1;
    }
    let points = bins
        .into_iter()
        .map(|(occurrences, n)| HistogramPoint {
            occurrences,
            questions: n,
            fraction_of_questions: n as f64 / population as f64,
        })
        .collect();
    Ok(FrequencyHistogram {
        points,
        population,
        zero_occurrence,
        summary: summarize(&mut counts),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QuestionCorrectness {
    pub question_id: String,
    pub occurrences: usize,
    /// Systems that judged this question.
    pub systems: usize,
    pub fraction_correct: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FrequencyGroup {
    pub occurrences: usize,
    pub mean_fraction_correct: f64,
    pub question_ids: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CorrectnessByFrequency {
    /// Scatter rows, in corpus order. Questions no system judged are omitted.
    pub questions: Vec<QuestionCorrectness>,
    /// Group means, ascending by occurrence count.
    pub groups: Vec<FrequencyGroup>,
}

pub fn correctness_by_frequency(
    corpus: &Corpus,
    labels: &Labels,
    runs: &[SystemRun],
) -> Result<CorrectnessByFrequency> {
    if runs.is_empty() {
        return Err(Error::NoRuns);
    }
    labels.check(corpus)?;
    let mut questions = Vec::new();
    for (q, l) in corpus.questions.iter().zip(&labels.questions) {
        let verdicts: Vec<bool> = runs
            .iter()
            .filter_map(|r| r.judgments.get(&q.id).copied())
            .collect();
        if verdicts.is_empty() {
            continue;
        }
        let right = verdicts.iter().filter(|&&v| v).count();
        questions.push(QuestionCorrectness {
            question_id: q.id.clone(),
            occurrences: l.correct_count(),
            systems: verdicts.len(),
            fraction_correct: right as f64 / verdicts.len() as f64,
        });
    }

    let mut grouped: BTreeMap<usize, Vec<&QuestionCorrectness>> = BTreeMap::new();
    for q in &questions {
        grouped.entry(q.occurrences).or_default().push(q);
    }
    let groups = grouped
        .into_iter()
        .map(|(occurrences, qs)| FrequencyGroup {
            occurrences,
            mean_fraction_correct: qs.iter().map(|q| q.fraction_correct).sum::<f64>()
                / qs.len() as f64,
            question_ids: qs.iter().map(|q| q.question_id.clone()).collect(),
        })
        .collect();
    Ok(CorrectnessByFrequency { questions, groups })
}
