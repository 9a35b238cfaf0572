//! Every analysis in one session, written to a directory.
//!
//! ```bash
//! cargo run -p qa-diag --example full_report -- /tmp/qa-report
//! ```

use std::path::PathBuf;

use qa_diag::report::{write_outputs, Session, SessionOptions};
use qa_diag::scoring::{Metric, ScorerKind};

fn main() -> anyhow::Result<()> {
    let data = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data");
    let out = std::env::args().nth(1).map_or_else(
        || std::env::temp_dir().join("qa-diag-report"),
        PathBuf::from,
    );

    let mut opts = SessionOptions::new("report", data.join("typed_answers.jsonl"));
    opts.runs = Some(data.join("typed_answers_runs.jsonl"));
    opts.scorer = ScorerKind::Idf;
    opts.metric = Metric::Mrr5;
    let session = Session::load(opts)?;
    let outputs = session.run()?;
    write_outputs(&out, &outputs)?;

    println!("wrote {} files to {}", outputs.len(), out.display());
    for o in &outputs {
        println!("  {} ({} bytes)", o.name, o.contents.len());
    }
    Ok(())
}
