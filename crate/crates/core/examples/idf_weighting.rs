//! IDF and custom term weights versus plain overlap counts.
//!
//! ```bash
//! cargo run -p qa-diag --example idf_weighting
//! ```

use std::collections::HashMap;
use std::path::PathBuf;

use qa_diag::corpus::load_corpus;
use qa_diag::scoring::{
    candidate_overlaps, rank_question, IdfTable, TermWeights, Unweighted, WeightTable,
};
use qa_diag::text::NormalizationConfig;

fn main() -> anyhow::Result<()> {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data/belanger.jsonl");
    let corpus = load_corpus(&path)?;
    let cfg = NormalizationConfig::overlap();
    let q = &corpus.questions[0];

    let idf = IdfTable::from_corpus(&corpus, &cfg)?;
    println!("{} sentences", idf.sentences());
    for w in ["babe", "basketball", "play"] {
        println!(
            "  {w}: df {} weight {:.3}",
            idf.document_frequency(w),
            idf.weight(w)
        );
    }

    // Names count triple; everything else counts once.
    let names = WeightTable::new(
        HashMap::from([("babe".to_owned(), 3.0), ("belanger".to_owned(), 3.0)]),
        1.0,
    )?;

    let overlaps = candidate_overlaps(q, &cfg);
    let weightings: [(&str, &dyn TermWeights); 3] = [
        ("overlap", &Unweighted),
        ("idf", &idf),
        ("names x3", &names),
    ];
    for (label, w) in weightings {
        let ranked = rank_question(q, w, &cfg)?;
        println!("{label}:");
        for e in &ranked.entries {
            println!("  {} {:.3} {}", e.candidate_id, e.score, overlaps[e.index]);
        }
    }
    Ok(())
}
