//! Plot-ready diagnostic curves: score and rank distributions conditioned on
//! correctness, and log odds of correctness per score with a mass curve.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::corpus::Corpus;
use crate::error::Result;
use crate::judging::Labels;
use crate::scoring::{rank_question, TermWeights};
use crate::text::NormalizationConfig;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CurvePoint {
    pub x: i64,
    /// `None` where the value is undefined (e.g. log odds of an empty class).
    pub y: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CurveSeries {
    pub label: String,
    pub points: Vec<CurvePoint>,
}

impl CurveSeries {
    pub fn sum(&self) -> f64 {
        self.points.iter().filter_map(|p| p.y).sum()
    }

    pub fn y_at(&self, x: i64) -> Option<f64> {
        self.points.iter().find(|p| p.x == x).and_then(|p| p.y)
    }
}

/// Conditional distributions for the correct and incorrect classes.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CurvePair {
    pub correct: CurveSeries,
    pub incorrect: CurveSeries,
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LogOddsCurves {
    pub log_odds: CurveSeries,
    pub mass: CurveSeries,
}

/// Score bin, competition rank and correctness of one candidate.
#[derive(Debug, Clone, Copy)]
struct Observation {
    bin: i64,
    rank: i64,
    correct: bool,
}

fn observations<W: TermWeights + ?Sized>(
    corpus: &Corpus,
    labels: &Labels,
    weights: &W,
    config: &NormalizationConfig,
) -> Result<Vec<Observation>> {
    labels.check(corpus)?;
    let per_question = corpus
        .questions
        .par_iter()
        .zip(&labels.questions)
        .filter(|(q, _)| !q.candidates.is_empty())
        .map(|(q, l)| -> Result<Vec<Observation>> {
            let ranked = rank_question(q, weights, config)?;
            let ranks = ranked.competition_ranks();
            let mut scores = vec![0.0; q.candidates.len()];
            for e in &ranked.entries {
                scores[e.index] = e.score;
            }
            Ok((0..q.candidates.len())
                .map(|i| Observation {
                    bin: scores[i].round() as i64,
                    rank: ranks[i] as i64,
                    correct: l.correct[i],
                })
                .collect())
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(per_question.into_iter().flatten().collect())
}

/// Counts `(correct, incorrect)` per x.
fn tally(obs: &[Observation], x: impl Fn(&Observation) -> i64) -> BTreeMap<i64, (usize, usize)> {
    let mut bins: BTreeMap<i64, (usize, usize)> = BTreeMap::new();
    for o in obs {
        let e = bins.entry(x(o)).or_default();
        if o.correct {
            e.0 += 1;
        } else {
            e.1 += 1;
        }
    }
    bins
}

fn conditional(bins: &BTreeMap<i64, (usize, usize)>, what: &str) -> CurvePair {
    let total_c: usize = bins.values().map(|v| v.0).sum();
    let total_i: usize = bins.values().map(|v| v.1).sum();
    let series = |label: &str, total: usize, pick: fn(&(usize, usize)) -> usize| CurveSeries {
        label: label.to_owned(),
        points: if total == 0 {
            Vec::new()
        } else {
            bins.iter()
                .filter(|(_, v)| pick(v) > 0)
                .map(|(&x, v)| CurvePoint {
                    x,
                    y: Some(pick(v) as f64 / total as f64),
                })
                .collect()
        },
    };
    let mut warnings = Vec::new();
    if total_c == 0 {
        warnings.push(format!(
            "no correct candidates; Pr({what}|correct) is empty"
        ));
    }
    if total_i == 0 {
        warnings.push(format!(
            "no incorrect candidates; Pr({what}|incorrect) is empty"
        ));
    }
    CurvePair {
        correct: series("correct", total_c, |v| v.0),
        incorrect: series("incorrect", total_i, |v| v.1),
        warnings,
    }
}

/// `Pr(score = x | class)`. Weighted scores are rounded to the nearest integer bin.
pub fn score_distribution_curves<W: TermWeights + ?Sized>(
    corpus: &Corpus,
    labels: &Labels,
    weights: &W,
    config: &NormalizationConfig,
) -> Result<CurvePair> {
    let obs = observations(corpus, labels, weights, config)?;
    Ok(conditional(&tally(&obs, |o| o.bin), "overlap"))
}

/// `Pr(rank = x | class)` with competition ranking: the top tier is rank 0
/// and a tier preceded by `k` candidates has rank `k`.
pub fn rank_curves<W: TermWeights + ?Sized>(
    corpus: &Corpus,
    labels: &Labels,
    weights: &W,
    config: &NormalizationConfig,
) -> Result<CurvePair> {
    let obs = observations(corpus, labels, weights, config)?;
    Ok(conditional(&tally(&obs, |o| o.rank), "rank"))
}

/// Per score bin: `ln(c_x / i_x)` and the mass `c_x + i_x`. Bins where either
/// count is zero are undefined unless `smoothing` adds `eps` to both counts.
pub fn log_odds_curve<W: TermWeights + ?Sized>(
    corpus: &Corpus,
    labels: &Labels,
    weights: &W,
    config: &NormalizationConfig,
    smoothing: Option<f64>,
) -> Result<LogOddsCurves> {
    let obs = observations(corpus, labels, weights, config)?;
    Ok(log_odds_from_counts(&tally(&obs, |o| o.bin), smoothing))
}

fn log_odds_from_counts(
    bins: &BTreeMap<i64, (usize, usize)>,
    smoothing: Option<f64>,
) -> LogOddsCurves {
    let eps = smoothing.unwrap_or(0.0);
    let log_odds = bins
        .iter()
        .map(|(&x, &(c, i))| {
            let (c, i) = (c as f64 + eps, i as f64 + eps);
            CurvePoint {
                x,
                y: (c > 0.0 && i > 0.0).then(|| (c / i).ln()),
            }
        })
        .collect();
    let mass = bins
        .iter()
        .map(|(&x, &(c, i))| CurvePoint {
            x,
            y: Some((c + i) as f64),
        })
        .collect();
    LogOddsCurves {
        log_odds: CurveSeries {
            label: "log_odds".into(),
            points: log_odds,
        },
        mass: CurveSeries {
            label: "mass".into(),
            points: mass,
        },
    }
}
