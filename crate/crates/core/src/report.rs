//! Output files for every analysis: fixed-column CSV with a leading `#`
//! config line, and JSON with sorted keys. Everything here is a pure function
//! of the loaded inputs and the resolved [`RunConfig`], so repeated runs are
//! byte-identical.

use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::{json, Value};

use crate::confusability::{confusability_table, Aggregation, ConfusabilityTable};
use crate::corpus::{load_corpus, load_system_runs, validate, Corpus, SystemRun};
use crate::curves::{log_odds_curve, rank_curves, score_distribution_curves, CurveSeries};
use crate::error::{Error, Result};
use crate::frequency::{answer_frequency_histogram, correctness_by_frequency};
use crate::judging::{agreement_rate, judge_corpus, LabelPolicy, LabelSource, Labels};
use crate::maxoset::analyze_corpus;
use crate::scoring::{score_corpus, Metric, Scorer, ScorerKind};
use crate::text::{default_stopwords, load_stopwords, NormalizationConfig};

/// Fully resolved settings of one run, echoed into every output file.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub command: String,
    pub corpus: PathBuf,
    pub runs: Option<PathBuf>,
    pub scorer: ScorerKind,
    pub metric: Metric,
    /// Stemming for overlap scoring and overlap sets.
    pub stem: bool,
    /// Stemming for automatic judging.
    pub judge_stem: bool,
    /// `None` means the shipped default list.
    pub stopwords: Option<PathBuf>,
    pub stopwords_sha256: String,
    pub labels: &'static str,
    pub aggregation: Aggregation,
    pub smoothing: Option<f64>,
    pub version: &'static str,
}

impl RunConfig {
    fn header(&self) -> String {
        let onoff = |b: bool| if b { "on" } else { "off" };
        format!(
            "# qa-diag {} command={} corpus={} scorer={} metric={} stem={} judge_stem={} stopwords={} stopwords_sha256={} labels={} smoothing={}\n",
            self.version,
            self.command,
            self.corpus.display(),
            self.scorer,
            self.metric,
            onoff(self.stem),
            onoff(self.judge_stem),
            self.stopwords
                .as_ref()
                .map_or_else(|| "default".to_owned(), |p| p.display().to_string()),
            self.stopwords_sha256,
            self.labels,
            self.smoothing.map_or_else(|| "off".to_owned(), |e| e.to_string()),
        )
    }
}

pub fn policy_name(policy: LabelPolicy) -> &'static str {
    match policy {
        LabelPolicy::PreferGold => "prefer-gold",
        LabelPolicy::GoldOnly => "gold",
        LabelPolicy::AutoOnly => "auto",
    }
}

/// One named output file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Output {
    pub name: String,
    pub contents: String,
}

/// Settings from which a [`Session`] is loaded.
#[derive(Debug, Clone)]
pub struct SessionOptions {
    pub command: String,
    pub corpus: PathBuf,
    pub runs: Option<PathBuf>,
    pub scorer: ScorerKind,
    pub metric: Metric,
    pub stem: bool,
    pub judge_stem: bool,
    pub stopwords: Option<PathBuf>,
    pub policy: LabelPolicy,
    pub aggregation: Aggregation,
    pub smoothing: Option<f64>,
}

impl SessionOptions {
    pub fn new(command: &str, corpus: impl Into<PathBuf>) -> Self {
        Self {
            command: command.to_owned(),
            corpus: corpus.into(),
            runs: None,
            scorer: ScorerKind::Overlap,
            metric: Metric::Top1,
            stem: false,
            judge_stem: true,
            stopwords: None,
            policy: LabelPolicy::PreferGold,
            aggregation: Aggregation::Pooled,
            smoothing: None,
        }
    }
}

/// Loaded inputs plus everything derived once per run.
pub struct Session {
    pub config: RunConfig,
    pub corpus: Corpus,
    pub runs: Option<Vec<SystemRun>>,
    pub overlap: NormalizationConfig,
    pub judging: NormalizationConfig,
    pub scorer: Scorer,
    pub labels: Labels,
    policy: LabelPolicy,
}

impl Session {
    pub fn load(opts: SessionOptions) -> Result<Self> {
        let stopwords = match &opts.stopwords {
            Some(p) => load_stopwords(p)?,
            None => default_stopwords(),
        };
        let overlap = NormalizationConfig::overlap()
            .with_stopwords(stopwords.clone())
            .with_stem(opts.stem);
        let judging = NormalizationConfig::judging()
            .with_stopwords(stopwords)
            .with_stem(opts.judge_stem);
        let corpus = load_corpus(&opts.corpus)?;
        let runs = opts
            .runs
            .as_ref()
            .map(|p| load_system_runs(p, &corpus))
            .transpose()?;
        let scorer = match opts.scorer {
            ScorerKind::Overlap => Scorer::Overlap,
            ScorerKind::Idf => Scorer::idf(&corpus, &overlap)?,
        };
        let labels = Labels::resolve(&corpus, &judging, opts.policy)?;
        let config = RunConfig {
            command: opts.command,
            corpus: opts.corpus,
            runs: opts.runs,
            scorer: opts.scorer,
            metric: opts.metric,
            stem: opts.stem,
            judge_stem: opts.judge_stem,
            stopwords: opts.stopwords,
            stopwords_sha256: overlap.stopword_checksum(),
            labels: policy_name(opts.policy),
            aggregation: opts.aggregation,
            smoothing: opts.smoothing,
            version: env!("CARGO_PKG_VERSION"),
        };
        Ok(Self {
            config,
            corpus,
            runs,
            overlap,
            judging,
            scorer,
            labels,
            policy: opts.policy,
        })
    }

    fn csv(&self, name: &str, columns: &[&str], rows: Vec<Vec<String>>) -> Output {
        let mut buf = self.config.header().into_bytes();
        {
            let mut w = csv::WriterBuilder::new()
                .terminator(csv::Terminator::Any(b'\n'))
                .from_writer(&mut buf);
            w.write_record(columns).expect("in-memory CSV write");
            for r in rows {
                w.write_record(&r).expect("in-memory CSV write");
            }
            w.flush().expect("in-memory CSV flush");
        }
        Output {
            name: name.to_owned(),
            contents: String::from_utf8(buf).expect("CSV of UTF-8 fields is UTF-8"),
        }
    }

    fn json(&self, name: &str, body: Value) -> Output {
        let mut doc = body;
        doc["config"] = serde_json::to_value(&self.config).expect("config serializes");
        let mut contents = serde_json::to_string_pretty(&doc).expect("report serializes");
        contents.push('\n');
        Output {
            name: name.to_owned(),
            contents,
        }
    }

    /// `judge.csv`: one row per candidate.
    pub fn judge(&self) -> Result<Vec<Output>> {
        let auto = judge_corpus(&self.corpus, &self.judging);
        let mut rows = Vec::new();
        for ((q, j), l) in self
            .corpus
            .questions
            .iter()
            .zip(&auto.questions)
            .zip(&self.labels.questions)
        {
            for ((c, (_, label)), &correct) in q.candidates.iter().zip(&j.labels).zip(&l.correct) {
                let source = match (self.policy, c.gold_correct) {
                    (LabelPolicy::AutoOnly, _) | (_, None) => LabelSource::Auto,
                    (_, Some(_)) => LabelSource::Gold,
                };
                rows.push(vec![
                    q.id.clone(),
                    c.id.clone(),
                    correct.to_string(),
                    label.matched_fraction.to_string(),
                    source.to_string(),
                ]);
            }
        }
        Ok(vec![self.csv(
            "judge.csv",
            &[
                "question_id",
                "candidate_id",
                "correct",
                "matched_fraction",
                "source",
            ],
            rows,
        )])
    }

    /// `score.csv`: per-question tie-aware scores and a final corpus row.
    pub fn score(&self) -> Result<Vec<Output>> {
        let s = score_corpus(
            &self.corpus,
            &self.labels,
            &self.scorer,
            &self.overlap,
            self.config.metric,
        )?;
        let mut rows: Vec<Vec<String>> = s
            .rows
            .iter()
            .map(|r| {
                vec![
                    r.question_id.clone(),
                    r.score.expected.to_string(),
                    r.score.maximum.to_string(),
                    r.score.minimum.to_string(),
                    r.candidates.to_string(),
                    r.correct.to_string(),
                    r.top_tier_size.to_string(),
                    r.question_length.to_string(),
                    r.source.to_string(),
                ]
            })
            .collect();
        rows.push(vec![
            "ALL".into(),
            s.summary.expected.to_string(),
            s.summary.maximum.to_string(),
            s.summary.minimum.to_string(),
            s.rows
                .iter()
                .map(|r| r.candidates)
                .sum::<usize>()
                .to_string(),
            s.rows.iter().map(|r| r.correct).sum::<usize>().to_string(),
            String::new(),
            String::new(),
            String::new(),
        ]);
        Ok(vec![self.csv(
            "score.csv",
            &[
                "question_id",
                "expected",
                "maximum",
                "minimum",
                "candidates",
                "correct",
                "top_tier_size",
                "question_length",
                "source",
            ],
            rows,
        )])
    }

    fn curve_file(&self, name: &str, series: &[&CurveSeries]) -> Output {
        let rows = series
            .iter()
            .flat_map(|s| {
                s.points.iter().map(move |p| {
                    vec![
                        s.label.clone(),
                        p.x.to_string(),
                        p.y.map_or_else(String::new, |y| y.to_string()),
                        p.y.is_some().to_string(),
                    ]
                })
            })
            .collect();
        self.csv(name, &["series", "x", "y", "defined"], rows)
    }

    /// `curves_score.csv`, `curves_rank.csv`, `curves_log_odds.csv`.
    pub fn curves(&self) -> Result<Vec<Output>> {
        let scores =
            score_distribution_curves(&self.corpus, &self.labels, &self.scorer, &self.overlap)?;
        let ranks = rank_curves(&self.corpus, &self.labels, &self.scorer, &self.overlap)?;
        let odds = log_odds_curve(
            &self.corpus,
            &self.labels,
            &self.scorer,
            &self.overlap,
            self.config.smoothing,
        )?;
        Ok(vec![
            self.curve_file("curves_score.csv", &[&scores.correct, &scores.incorrect]),
            self.curve_file("curves_rank.csv", &[&ranks.correct, &ranks.incorrect]),
            self.curve_file("curves_log_odds.csv", &[&odds.log_odds, &odds.mass]),
        ])
    }

    /// `bounds.json` plus summary and per-category CSVs.
    pub fn bounds(&self) -> Result<Vec<Output>> {
        let report = analyze_corpus(&self.corpus, &self.labels, &self.overlap)?;
        let summary = self.csv(
            "bounds_summary.csv",
            &["questions", "expected_max", "max", "min"],
            vec![vec![
                report.questions.len().to_string(),
                report.stats.expected_max.to_string(),
                report.stats.max.to_string(),
                report.stats.min.to_string(),
            ]],
        );
        let categories = self.csv(
            "bounds_categories.csv",
            &["category", "description", "count", "percentage"],
            report
                .breakdown
                .rows
                .iter()
                .map(|r| {
                    vec![
                        r.category.name().to_owned(),
                        r.description.to_owned(),
                        r.count.to_string(),
                        r.percentage.to_string(),
                    ]
                })
                .collect(),
        );
        let body = json!({
            "questions": report.questions,
            "summary": { "stats": report.stats, "breakdown": report.breakdown },
        });
        Ok(vec![self.json("bounds.json", body), summary, categories])
    }

    fn confusability_table(&self) -> ConfusabilityTable {
        confusability_table(&self.corpus, self.config.aggregation)
    }

    /// `confusability.csv`: per-type rows then the two overall rows.
    pub fn confusability(&self) -> Result<Vec<Output>> {
        let t = self.confusability_table();
        let mut rows: Vec<Vec<String>> = t
            .rows
            .iter()
            .map(|r| {
                vec![
                    r.answer_type.clone(),
                    r.expected_score.to_string(),
                    r.frequency.to_string(),
                ]
            })
            .collect();
        for (label, row) in [
            ("overall", &t.overall),
            ("overall_without_defaults", &t.overall_without_defaults),
        ] {
            rows.push(match row {
                Some(r) => vec![
                    label.into(),
                    r.expected_score.to_string(),
                    r.frequency.to_string(),
                ],
                None => vec![label.into(), String::new(), "0".into()],
            });
        }
        Ok(vec![self.csv(
            "confusability.csv",
            &["answer_type", "expected_score", "frequency"],
            rows,
        )])
    }

    /// `frequency_histogram.csv`, and with system runs `frequency_scatter.csv`
    /// and `frequency_groups.csv`.
    pub fn frequency(&self) -> Result<Vec<Output>> {
        let h = answer_frequency_histogram(&self.corpus, &self.labels)?;
        let mut rows: Vec<Vec<String>> = h
            .points
            .iter()
            .map(|p| {
                vec![
                    p.occurrences.to_string(),
                    p.questions.to_string(),
                    p.fraction_of_questions.to_string(),
                ]
            })
            .collect();
        // Zero-occurrence questions are listed but excluded from the fractions.
        rows.push(vec![
            "0".into(),
            h.zero_occurrence.to_string(),
            String::new(),
        ]);
        let mut out = vec![self.csv(
            "frequency_histogram.csv",
            &["occurrences", "questions", "fraction_of_questions"],
            rows,
        )];
        if let Some(runs) = &self.runs {
            let c = correctness_by_frequency(&self.corpus, &self.labels, runs)?;
            out.push(
                self.csv(
                    "frequency_scatter.csv",
                    &["question_id", "occurrences", "systems", "fraction_correct"],
                    c.questions
                        .iter()
                        .map(|q| {
                            vec![
                                q.question_id.clone(),
                                q.occurrences.to_string(),
                                q.systems.to_string(),
                                q.fraction_correct.to_string(),
                            ]
                        })
                        .collect(),
                ),
            );
            out.push(
                self.csv(
                    "frequency_groups.csv",
                    &[
                        "occurrences",
                        "mean_fraction_correct",
                        "questions",
                        "question_ids",
                    ],
                    c.groups
                        .iter()
                        .map(|g| {
                            vec![
                                g.occurrences.to_string(),
                                g.mean_fraction_correct.to_string(),
                                g.question_ids.len().to_string(),
                                g.question_ids.join(";"),
                            ]
                        })
                        .collect(),
                ),
            );
        }
        Ok(out)
    }

    /// Every applicable analysis plus `summary.json`.
    pub fn report(&self) -> Result<Vec<Output>> {
        let mut out = Vec::new();
        out.extend(self.judge()?);
        out.extend(self.score()?);
        out.extend(self.curves()?);
        out.extend(self.bounds()?);

        let typed = self
            .corpus
            .questions
            .iter()
            .any(|q| q.answer_type.is_some());
        let confusability = typed.then(|| self.confusability_table());
        if typed {
            out.extend(self.confusability()?);
        }
        out.extend(self.frequency()?);

        let score = score_corpus(
            &self.corpus,
            &self.labels,
            &self.scorer,
            &self.overlap,
            self.config.metric,
        )?;
        let bounds = analyze_corpus(&self.corpus, &self.labels, &self.overlap)?;
        let histogram = answer_frequency_histogram(&self.corpus, &self.labels)?;
        let auto = judge_corpus(&self.corpus, &self.judging);
        let agreement = agreement_rate(&auto, &self.corpus).ok();
        let sources: Vec<Value> = self
            .labels
            .questions
            .iter()
            .map(|l| json!({ "question_id": l.question_id, "source": l.source }))
            .collect();
        let groups = match &self.runs {
            Some(runs) => Some(correctness_by_frequency(&self.corpus, &self.labels, runs)?.groups),
            None => None,
        };

        let mut files: Vec<String> = out.iter().map(|o| o.name.clone()).collect();
        files.push("summary.json".into());
        let body = json!({
            "questions": self.corpus.len(),
            "candidates": self.corpus.candidate_count(),
            "warnings": validate(&self.corpus).iter().map(ToString::to_string).collect::<Vec<_>>(),
            "label_sources": sources,
            "agreement_rate": agreement,
            "score": score.summary,
            "bounds": { "stats": bounds.stats, "breakdown": bounds.breakdown },
            "confusability": confusability.map(|t| json!({
                "rows": t.rows,
                "overall": t.overall,
                "overall_without_defaults": t.overall_without_defaults,
                "skipped": t.skipped,
            })),
            "frequency": {
                "population": histogram.population,
                "zero_occurrence": histogram.zero_occurrence,
                "summary": histogram.summary,
                "groups": groups,
            },
            "files": files,
        });
        out.push(self.json("summary.json", body));
        Ok(out)
    }

    /// Dispatches on the command name.
    pub fn run(&self) -> Result<Vec<Output>> {
        match self.config.command.as_str() {
            "judge" => self.judge(),
            "score" => self.score(),
            "curves" => self.curves(),
            "bounds" => self.bounds(),
            "confusability" => self.confusability(),
            "frequency" => self.frequency(),
            _ => self.report(),
        }
    }
}

/// Writes each output under `dir`, creating it if needed.
pub fn write_outputs(dir: &Path, outputs: &[Output]) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    for o in outputs {
        let path = dir.join(&o.name);
        std::fs::write(&path, &o.contents).map_err(|e| Error::io(&path, e))?;
    }
    Ok(())
}
