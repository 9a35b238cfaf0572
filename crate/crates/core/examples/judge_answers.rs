//! Automatic correctness judging against answer keys.
//!
//! ```bash
//! cargo run -p qa-diag --example judge_answers
//! ```

use qa_diag::corpus::{Candidate, Corpus, Question};
use qa_diag::judging::{agreement_rate, judge_corpus};
use qa_diag::text::NormalizationConfig;

fn candidate(id: &str, sentence: &str, gold: bool) -> Candidate {
    Candidate {
        id: id.into(),
        doc_id: "d1".into(),
        sentence: sentence.into(),
        gold_correct: Some(gold),
        entities: vec![],
    }
}

fn main() -> anyhow::Result<()> {
    let corpus = Corpus::new(vec![Question {
        id: "everest".into(),
        text: "Who first climbed Mount Everest?".into(),
        // Either key may match; half of a key's content words is enough.
        answer_keys: vec!["Edmund Hillary and Tenzing Norgay".into(), "Hillary".into()],
        answer_type: Some("person".into()),
        candidates: vec![
            candidate("c1", "Tenzing Norgay reached the summit in 1953.", true),
            candidate("c2", "Hillary was a beekeeper before climbing.", true),
            candidate("c3", "Everest is the highest mountain on Earth.", false),
        ],
    }])?;

    let judgments = judge_corpus(&corpus, &NormalizationConfig::judging());
    for (id, label) in &judgments.questions[0].labels {
        println!(
            "{id}: correct={} key={:?} fraction={:.2}",
            label.correct, label.matched_key_index, label.matched_fraction
        );
    }
    println!(
        "agreement with gold: {:.2}",
        agreement_rate(&judgments, &corpus)?
    );
    Ok(())
}
