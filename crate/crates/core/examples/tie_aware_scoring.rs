//! Expected, best and worst top-1 and MRR@5 scores when candidates tie.
//!
//! ```bash
//! cargo run -p qa-diag --example tie_aware_scoring
//! ```

use qa_diag::scoring::{tie_aware_score, Metric, RankedList};

fn main() {
    // Six candidates: one on top, four tied (two correct), one at the bottom.
    let ids = ["a", "b", "c", "d", "e", "f"];
    let scores = [4.0, 2.0, 2.0, 2.0, 2.0, 1.0];
    let correct = [false, true, false, true, false, true];

    let ranked = RankedList::from_scores(&ids, &scores);
    for t in &ranked.tiers {
        let members: Vec<&str> = t.members.iter().map(|&m| ids[m]).collect();
        println!("score {} rank {} {:?}", t.score, t.rank, members);
    }
    for metric in [Metric::Top1, Metric::Mrr5] {
        let s = tie_aware_score(&ranked, &correct, metric);
        println!(
            "{metric}: expected {:.4} max {:.4} min {:.4}",
            s.expected, s.maximum, s.minimum
        );
    }
}
