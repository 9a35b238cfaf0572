//! Score and rank distributions by correctness, and per-score log odds.
//!
//! ```bash
//! cargo run -p qa-diag --example diagnostic_curves
//! ```

use std::path::PathBuf;

use qa_diag::corpus::load_corpus;
use qa_diag::curves::{log_odds_curve, rank_curves, score_distribution_curves, CurveSeries};
use qa_diag::judging::{LabelPolicy, Labels};
use qa_diag::scoring::Unweighted;
use qa_diag::text::NormalizationConfig;

fn show(s: &CurveSeries) {
    let pts: Vec<String> = s
        .points
        .iter()
        .map(|p| match p.y {
            Some(y) => format!("{}:{y:.3}", p.x),
            None => format!("{}:-", p.x),
        })
        .collect();
    println!("  {:<10} {}", s.label, pts.join("  "));
}

fn main() -> anyhow::Result<()> {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data/belanger.jsonl");
    let corpus = load_corpus(&path)?;
    let cfg = NormalizationConfig::overlap();
    let labels = Labels::resolve(
        &corpus,
        &NormalizationConfig::judging(),
        LabelPolicy::PreferGold,
    )?;

    let score = score_distribution_curves(&corpus, &labels, &Unweighted, &cfg)?;
    println!("Pr(overlap | class)");
    show(&score.correct);
    show(&score.incorrect);

    let rank = rank_curves(&corpus, &labels, &Unweighted, &cfg)?;
    println!("Pr(rank | class)");
    show(&rank.correct);
    show(&rank.incorrect);

    for smoothing in [None, Some(0.5)] {
        let lo = log_odds_curve(&corpus, &labels, &Unweighted, &cfg, smoothing)?;
        println!("log odds, smoothing {smoothing:?}");
        show(&lo.log_odds);
        show(&lo.mass);
    }
    Ok(())
}
