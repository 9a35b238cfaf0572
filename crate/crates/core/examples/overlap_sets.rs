//! Overlap sets, MaxOsets and rank bounds for the Babe Belanger question.
//!
//! ```bash
//! cargo run -p qa-diag --example overlap_sets
//! ```

use std::path::PathBuf;

use qa_diag::corpus::load_corpus;
use qa_diag::judging::{LabelPolicy, Labels};
use qa_diag::maxoset::{analyze_corpus, analyze_question};
use qa_diag::text::NormalizationConfig;

fn main() -> anyhow::Result<()> {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data/belanger.jsonl");
    let corpus = load_corpus(&path)?;
    let cfg = NormalizationConfig::overlap();
    let labels = Labels::resolve(
        &corpus,
        &NormalizationConfig::judging(),
        LabelPolicy::GoldOnly,
    )?;

    let q = &corpus.questions[0];
    println!("Q: {}", q.text);
    let analysis = analyze_question(q, &labels.question(0).correct, &cfg)?;
    for set in &analysis.all_sets {
        let maximal = analysis.maximal_sets.contains(set);
        println!(
            "  {} -> {:?}{}",
            set.words,
            set.members,
            if maximal { "  (maximal)" } else { "" }
        );
    }

    println!("rank bounds under any positive weighting:");
    for c in &q.candidates {
        let b = analysis.rank_bounds(&c.id)?;
        println!("  {}: best {} worst {}", c.id, b.best, b.worst);
    }

    let report = analyze_corpus(&corpus, &labels, &cfg)?;
    println!(
        "max {:.2}  min {:.2}  expected max {:.2}",
        report.stats.max, report.stats.min, report.stats.expected_max
    );
    for row in report.breakdown.rows.iter().filter(|r| r.count > 0) {
        println!("  {}: {}", row.description, row.count);
    }
    Ok(())
}
