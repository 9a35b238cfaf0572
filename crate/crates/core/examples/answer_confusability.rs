//! Expected accuracy of guessing among entities of the answer type.
//!
//! ```bash
//! cargo run -p qa-diag --example answer_confusability
//! ```

use std::path::PathBuf;

use qa_diag::confusability::{confusability_table, question_confusability, Aggregation};
use qa_diag::corpus::load_corpus;

fn main() -> anyhow::Result<()> {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data/typed_answers.jsonl");
    let corpus = load_corpus(&path)?;

    for q in &corpus.questions {
        let score = question_confusability(q, Aggregation::Pooled)?;
        println!(
            "{} [{}]: {score}",
            q.text,
            q.answer_type.as_deref().unwrap_or("-")
        );
        for c in &q.candidates {
            let typed: Vec<&str> = c
                .entities_of_type(q.answer_type.as_deref().unwrap_or_default())
                .map(|e| e.text.as_str())
                .collect();
            println!("  {}: {:?}", c.id, typed);
        }
    }

    let table = confusability_table(&corpus, Aggregation::Pooled);
    for row in table.rows.iter().chain(&table.overall) {
        println!(
            "{:<10} {:.3} ({} questions)",
            row.answer_type, row.expected_score, row.frequency
        );
    }
    Ok(())
}
