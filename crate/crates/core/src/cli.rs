//! Command-line front end: `qa-diag <command> --corpus PATH [options]`.
//!
//! Exit status is 0 on success, 1 on usage errors and 2 on data errors.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::confusability::Aggregation;
use crate::judging::LabelPolicy;
use crate::report::{write_outputs, Session, SessionOptions};
use crate::scoring::{Metric, ScorerKind};
use crate::text::STOPWORDS_ENV;

#[derive(Debug, Parser)]
#[command(
    name = "qa-diag",
    version,
    about = "Diagnostics for QA term-overlap ranking and answer typing"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Label every candidate against the answer keys.
    Judge(Common),
    /// Tie-aware expected/maximum/minimum scores per question and overall.
    Score(Common),
    /// Score, rank and log-odds curves as plot-ready CSV.
    Curves(Common),
    /// Overlap sets, MaxOsets, weighting bounds and question classes.
    Bounds(Common),
    /// Answer-type confusability per type.
    Confusability(Common),
    /// Answer-occurrence histogram and system correctness by occurrence.
    Frequency(Common),
    /// Run every applicable analysis and write a summary.
    Report(Common),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum OnOff {
    On,
    Off,
}

impl From<OnOff> for bool {
    fn from(v: OnOff) -> bool {
        matches!(v, OnOff::On)
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ScorerArg {
    Overlap,
    Idf,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum MetricArg {
    Top1,
    Mrr5,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum LabelsArg {
    PreferGold,
    Gold,
    Auto,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum AggregationArg {
    Pooled,
    PerSentence,
}

#[derive(Debug, Args)]
struct Common {
    /// Corpus JSON Lines file.
    #[arg(long)]
    corpus: PathBuf,
    /// System-run JSON Lines file.
    #[arg(long)]
    runs: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "overlap")]
    scorer: ScorerArg,
    #[arg(long, value_enum, default_value = "top1")]
    metric: MetricArg,
    /// Stemming for overlap scoring and overlap sets.
    #[arg(long, value_enum, default_value = "off")]
    stem: OnOff,
    /// Stemming for automatic judging.
    #[arg(long, value_enum, default_value = "on")]
    judge_stem: OnOff,
    /// Stopword file; falls back to $QA_DIAG_STOPWORDS, then the shipped list.
    #[arg(long)]
    stopwords: Option<PathBuf>,
    /// Which correctness labels to use.
    #[arg(long, value_enum, default_value = "prefer-gold")]
    labels: LabelsArg,
    /// How answer-bearing sentences combine for confusability.
    #[arg(long, value_enum, default_value = "pooled")]
    aggregation: AggregationArg,
    /// Add EPS to both counts of every log-odds bin.
    #[arg(long, value_name = "EPS")]
    smooth: Option<f64>,
    /// Output directory; without it files go to stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads for per-question analyses (0 = all cores).
    #[arg(long, default_value_t = 0)]
    threads: usize,
}

impl Common {
    fn options(&self, command: &str) -> SessionOptions {
        let stopwords = self.stopwords.clone().or_else(|| {
            std::env::var_os(STOPWORDS_ENV)
                .filter(|v| !v.is_empty())
                .map(PathBuf::from)
        });
        SessionOptions {
            command: command.to_owned(),
            corpus: self.corpus.clone(),
            runs: self.runs.clone(),
            scorer: match self.scorer {
                ScorerArg::Overlap => ScorerKind::Overlap,
                ScorerArg::Idf => ScorerKind::Idf,
            },
            metric: match self.metric {
                MetricArg::Top1 => Metric::Top1,
                MetricArg::Mrr5 => Metric::Mrr5,
            },
            stem: self.stem.into(),
            judge_stem: self.judge_stem.into(),
            stopwords,
            policy: match self.labels {
                LabelsArg::PreferGold => LabelPolicy::PreferGold,
                LabelsArg::Gold => LabelPolicy::GoldOnly,
                LabelsArg::Auto => LabelPolicy::AutoOnly,
            },
            aggregation: match self.aggregation {
                AggregationArg::Pooled => Aggregation::Pooled,
                AggregationArg::PerSentence => Aggregation::PerSentence,
            },
            smoothing: self.smooth,
        }
    }
}

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_DATA: i32 = 2;

/// Parses `argv` (program name first), runs the command and returns the exit status.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let (name, common) = match &cli.command {
        Command::Judge(c) => ("judge", c),
        Command::Score(c) => ("score", c),
        Command::Curves(c) => ("curves", c),
        Command::Bounds(c) => ("bounds", c),
        Command::Confusability(c) => ("confusability", c),
        Command::Frequency(c) => ("frequency", c),
        Command::Report(c) => ("report", c),
    };
    if let Some(eps) = common.smooth {
        if !(eps > 0.0 && eps.is_finite()) {
            eprintln!("error: --smooth must be a positive number, got {eps}");
            return EXIT_USAGE;
        }
    }

    let pool = match rayon::ThreadPoolBuilder::new()
        .num_threads(common.threads)
        .build()
    {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_USAGE;
        }
    };
    let result = pool.install(|| -> crate::Result<()> {
        let session = Session::load(common.options(name))?;
        let outputs = session.run()?;
        match &common.out {
            Some(dir) => write_outputs(dir, &outputs),
            None => {
                let mut stdout = std::io::stdout().lock();
                for o in &outputs {
                    stdout
                        .write_all(o.contents.as_bytes())
                        .map_err(|e| crate::Error::io("<stdout>", e))?;
                }
                Ok(())
            }
        }
    });
    match result {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_DATA
        }
    }
}
