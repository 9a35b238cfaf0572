//! Answer-opportunity histogram and system accuracy grouped by it.
//!
//! ```bash
//! cargo run -p qa-diag --example answer_frequency
//! ```

use std::path::PathBuf;

use qa_diag::corpus::{load_corpus, load_system_runs};
use qa_diag::frequency::{answer_frequency_histogram, correctness_by_frequency};
use qa_diag::judging::{LabelPolicy, Labels};
use qa_diag::text::NormalizationConfig;

fn main() -> anyhow::Result<()> {
    let data = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data");
    let corpus = load_corpus(data.join("typed_answers.jsonl"))?;
    let runs = load_system_runs(data.join("typed_answers_runs.jsonl"), &corpus)?;
    let labels = Labels::resolve(
        &corpus,
        &NormalizationConfig::judging(),
        LabelPolicy::PreferGold,
    )?;

    let h = answer_frequency_histogram(&corpus, &labels)?;
    for p in &h.points {
        println!(
            "{} correct sentences: {} questions ({:.0}%)",
            p.occurrences,
            p.questions,
            100.0 * p.fraction_of_questions
        );
    }
    println!("{} questions without a correct sentence", h.zero_occurrence);
    if let Some(s) = h.summary {
        println!(
            "mean {:.2} median {:.1} sd {:.2}",
            s.mean, s.median, s.standard_deviation
        );
    }

    let by = correctness_by_frequency(&corpus, &labels, &runs)?;
    for q in &by.questions {
        println!(
            "{}: {} occurrences, {:.2} of {} systems correct",
            q.question_id, q.occurrences, q.fraction_correct, q.systems
        );
    }
    for g in &by.groups {
        println!(
            "group {}: mean {:.3}",
            g.occurrences, g.mean_fraction_correct
        );
    }
    Ok(())
}
