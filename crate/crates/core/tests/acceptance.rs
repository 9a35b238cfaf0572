//! Acceptance checks. Each check prints one PASS/FAIL line; the process exits
//! nonzero if any fails.

mod common;

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::panic::{self, AssertUnwindSafe};
use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use anyhow::{bail, ensure, Context, Result};
use itertools::Itertools;
use qa_diag::confusability::{question_confusability, Aggregation};
use qa_diag::corpus::{load_corpus, Candidate, Corpus, Entity, Question};
use qa_diag::curves::{log_odds_curve, rank_curves, score_distribution_curves};
use qa_diag::judging::{judge_candidate, LabelPolicy, Labels};
use qa_diag::maxoset::{
    analyze_question, bound_stats, categorize_question, maxosets, overlap_sets, Category,
};
use qa_diag::report::{Session, SessionOptions};
use qa_diag::scoring::{
    question_score, rank_question, IdfTable, Metric, TermWeights, Unweighted, WeightTable,
};
use qa_diag::text::NormalizationConfig;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::{data_path, random_corpus, random_fixture, Fixture, VOCAB};

const EXACT_TOL: f64 = 1e-12;
const SUM_TOL: f64 = 1e-9;
const RUNTIME_LIMIT: Duration = Duration::from_secs(1);

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn belanger_maxosets_and_bounds() -> Result<()> {
    let start = Instant::now();
    let corpus = load_corpus(data_path("belanger.jsonl"))?;
    let cfg = NormalizationConfig::overlap();
    let q = &corpus.questions[0];

    let analysis = maxosets(overlap_sets(q, &cfg)?);
    let mut got: Vec<Vec<&str>> = analysis
        .maximal_sets
        .iter()
        .map(|s| s.members.iter().map(String::as_str).collect())
        .collect();
    got.sort();
    ensure!(
        got == vec![vec!["S2", "S4"], vec!["S3"]],
        "maxosets {got:?}"
    );

    let labels = Labels::resolve(
        &corpus,
        &NormalizationConfig::judging(),
        LabelPolicy::GoldOnly,
    )?;
    let stats = bound_stats(&corpus, &labels, &cfg)?;
    ensure!(
        stats.max == 1.0 && stats.min == 0.0 && stats.expected_max == 0.5,
        "bound stats {stats:?}"
    );
    let b = analysis.rank_bounds("S2")?;
    ensure!((b.best, b.worst) == (1, 3), "rank_bounds(S2) = {b:?}");
    let elapsed = start.elapsed();
    ensure!(elapsed < RUNTIME_LIMIT, "took {elapsed:?}");
    Ok(())
}

fn typed_confusability() -> Result<()> {
    let start = Instant::now();
    let corpus = load_corpus(data_path("typed_answers.jsonl"))?;
    let score = |id: &str| -> Result<f64> {
        let q = corpus
            .questions
            .iter()
            .find(|q| q.id == id)
            .context("missing question")?;
        Ok(question_confusability(q, Aggregation::Pooled)?)
    };
    let (temporal, city) = (score("nostradamus-born")?, score("mgh-city")?);
    ensure!(temporal == 0.5, "temporal {temporal}");
    ensure!(city == 0.2, "city {city}");
    let elapsed = start.elapsed();
    ensure!(elapsed < RUNTIME_LIMIT, "took {elapsed:?}");
    Ok(())
}

fn keyed(key: &str, sentence: &str) -> (Question, Candidate) {
    let c = Candidate {
        id: "s".into(),
        doc_id: "d".into(),
        sentence: sentence.into(),
        gold_correct: None,
        entities: vec![],
    };
    let q = Question {
        id: "q".into(),
        text: "question".into(),
        answer_keys: vec![key.into()],
        answer_type: None,
        candidates: vec![c.clone()],
    };
    (q, c)
}

fn judging_boundary_and_monotonicity() -> Result<()> {
    let cfg = NormalizationConfig::judging();
    let judge = |key: &str, sentence: &str| {
        let (q, c) = keyed(key, sentence);
        judge_candidate(&c, &q, &cfg)
    };
    ensure!(
        judge("alpha bravo charlie delta", "delta and alpha").correct,
        "2 of 4 should be correct"
    );
    ensure!(
        !judge("alpha bravo charlie", "only charlie here").correct,
        "1 of 3 should be incorrect"
    );

    let mut r = rng(3);
    let pool = &VOCAB[..];
    for trial in 0..1000 {
        let key: Vec<&str> = (0..r.random_range(1..=5))
            .map(|_| pool[r.random_range(0..pool.len())])
            .collect();
        let sentence: Vec<&str> = (0..r.random_range(0..6))
            .map(|_| pool[r.random_range(0..pool.len())])
            .collect();
        let extra: Vec<&str> = (0..r.random_range(1..4))
            .map(|_| pool[r.random_range(0..pool.len())])
            .collect();
        let base = judge(&key.join(" "), &sentence.join(" "));
        let extended = judge(
            &key.join(" "),
            &format!("{} {}", sentence.join(" "), extra.join(" ")),
        );

        let k: BTreeSet<&str> = key.iter().copied().collect();
        let s: BTreeSet<&str> = sentence.iter().copied().collect();
        let m = k.intersection(&s).count();
        ensure!(
            base.correct == (2 * m >= k.len()),
            "trial {trial}: threshold mismatch"
        );
        ensure!(
            !base.correct || extended.correct,
            "trial {trial}: extension lost correctness"
        );
        ensure!(
            extended.matched_fraction >= base.matched_fraction,
            "trial {trial}: fraction dropped"
        );
    }
    Ok(())
}

/// Scores from the generator's overlap sets: the overlap size.
fn oracle_tiers(f: &Fixture) -> Vec<Vec<usize>> {
    let mut by_score: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (i, o) in f.overlaps.iter().enumerate() {
        by_score.entry(o.len()).or_default().push(i);
    }
    by_score.into_values().rev().collect()
}

/// Average over every ordering that permutes candidates within tiers.
fn exhaustive_average(tiers: &[Vec<usize>], correct: &[bool], cutoff: usize) -> f64 {
    let mut total = 0.0;
    let mut count = 0usize;
    for orders in tiers
        .iter()
        .map(|t| t.iter().copied().permutations(t.len()).collect::<Vec<_>>())
        .multi_cartesian_product()
    {
        let ordering: Vec<usize> = orders.concat();
        if let Some(pos) = ordering.iter().position(|&i| correct[i]) {
            if pos < cutoff {
                total += 1.0 / (pos + 1) as f64;
            }
        }
        count += 1;
    }
    total / count as f64
}

fn tie_expectation_oracle() -> Result<()> {
    let cfg = NormalizationConfig::overlap();
    let mut r = rng(4);
    let mut mrr_checked = 0;
    for i in 0..500 {
        let f = random_fixture(&mut r, &format!("q{i}"), 7);
        let tiers = oracle_tiers(&f);
        let top1 = question_score(&f.question, &f.correct, &Unweighted, &cfg, Metric::Top1)?;
        let want = exhaustive_average(&tiers, &f.correct, 1);
        ensure!(
            (top1.expected - want).abs() <= EXACT_TOL,
            "q{i}: top1 {} vs {want}",
            top1.expected
        );
        if tiers.iter().all(|t| t.len() <= 5) {
            let mrr = question_score(&f.question, &f.correct, &Unweighted, &cfg, Metric::Mrr5)?;
            let want = exhaustive_average(&tiers, &f.correct, 5);
            ensure!(
                (mrr.expected - want).abs() <= EXACT_TOL,
                "q{i}: mrr5 {} vs {want}",
                mrr.expected
            );
            mrr_checked += 1;
        }
    }
    ensure!(
        mrr_checked >= 250,
        "only {mrr_checked} questions had small tiers"
    );
    Ok(())
}

fn random_weights(r: &mut ChaCha8Rng) -> Result<WeightTable> {
    // Log-uniform over four orders of magnitude.
    let map: HashMap<String, f64> = VOCAB
        .iter()
        .map(|w| (w.to_string(), 10f64.powf(r.random_range(-2.0..2.0))))
        .collect();
    Ok(WeightTable::new(map, 1.0)?)
}

fn positive_weight_oracle() -> Result<()> {
    let cfg = NormalizationConfig::overlap();
    let mut r = rng(5);
    let mut tables = 0;
    for fi in 0..200 {
        let f = random_fixture(&mut r, &format!("q{fi}"), 7);
        let analysis = analyze_question(&f.question, &f.correct, &cfg)?;
        let in_maxoset: BTreeSet<&str> = analysis
            .maximal_sets
            .iter()
            .flat_map(|s| s.members.iter().map(String::as_str))
            .collect();
        for _ in 0..10 {
            tables += 1;
            let w = random_weights(&mut r)?;
            let ranked = rank_question(&f.question, &w, &cfg)?;
            let mut scores = vec![0.0; f.correct.len()];
            for e in &ranked.entries {
                scores[e.index] = e.score;
            }
            // (a) subset dominance
            for (i, j) in (0..scores.len()).tuple_combinations() {
                for (a, b) in [(i, j), (j, i)] {
                    if f.overlaps[a].is_subset(&f.overlaps[b]) && f.overlaps[a] != f.overlaps[b] {
                        ensure!(
                            scores[a] < scores[b],
                            "q{fi}: subset scored {} >= {}",
                            scores[a],
                            scores[b]
                        );
                    }
                }
            }
            let top = &ranked.tiers[0];
            let picks: Vec<usize> = if top.score > 0.0 {
                top.members.clone()
            } else {
                vec![]
            };
            // (b) top scorer lies in a maximal set
            for &p in &picks {
                let id = f.question.candidates[p].id.as_str();
                ensure!(
                    in_maxoset.contains(id),
                    "q{fi}: top pick {id} not in a maxoset"
                );
            }
            // (c) dense ranks within bounds
            let distinct: Vec<f64> = scores
                .iter()
                .copied()
                .sorted_by(|a, b| b.total_cmp(a))
                .dedup()
                .collect();
            for (i, c) in f.question.candidates.iter().enumerate() {
                if f.overlaps[i].is_empty() {
                    continue;
                }
                let dense = 1 + distinct.iter().filter(|&&s| s > scores[i]).count();
                let b = analysis.rank_bounds(&c.id)?;
                ensure!(
                    b.best <= dense && dense <= b.worst,
                    "q{fi}: {} rank {dense} outside {b:?}",
                    c.id
                );
            }
            // (d) predicates versus the top pick
            if analysis.min_predicate() {
                ensure!(
                    !picks.is_empty() && picks.iter().all(|&p| f.correct[p]),
                    "q{fi}: min holds, pick wrong"
                );
            }
            if !analysis.max_predicate() {
                ensure!(
                    picks.iter().all(|&p| !f.correct[p]),
                    "q{fi}: max fails, pick correct"
                );
            }
        }
    }
    ensure!(tables >= 1000);
    Ok(())
}

fn curve_integrity() -> Result<()> {
    let cfg = NormalizationConfig::overlap();
    let mut r = rng(6);
    let mut symmetric_bins = 0;
    for _ in 0..200 {
        let (corpus, labels, fixtures) = random_corpus(&mut r, 5, 7);
        let candidates = corpus.candidate_count() as f64;
        let idf = IdfTable::from_corpus(&corpus, &cfg)?;
        let weightings: [&dyn TermWeights; 2] = [&Unweighted, &idf];
        for w in weightings {
            for pair in [
                score_distribution_curves(&corpus, &labels, w, &cfg)?,
                rank_curves(&corpus, &labels, w, &cfg)?,
            ] {
                for s in [&pair.correct, &pair.incorrect] {
                    ensure!(
                        s.points.is_empty() || (s.sum() - 1.0).abs() <= SUM_TOL,
                        "{} sums to {}",
                        s.label,
                        s.sum()
                    );
                }
            }
            let lo = log_odds_curve(&corpus, &labels, w, &cfg, None)?;
            ensure!(
                lo.mass.sum() == candidates,
                "mass {} vs {candidates}",
                lo.mass.sum()
            );
        }

        // Symmetric bins from the generator's own counts.
        let mut counts: BTreeMap<i64, (usize, usize)> = BTreeMap::new();
        for f in &fixtures {
            for (o, &ok) in f.overlaps.iter().zip(&f.correct) {
                let e = counts.entry(o.len() as i64).or_default();
                if ok {
                    e.0 += 1
                } else {
                    e.1 += 1
                }
            }
        }
        let lo = log_odds_curve(&corpus, &labels, &Unweighted, &cfg, None)?;
        for (x, (c, i)) in counts {
            if c == i {
                symmetric_bins += 1;
                ensure!(
                    lo.log_odds.y_at(x) == Some(0.0),
                    "bin {x} with {c}/{i} gives {:?}",
                    lo.log_odds.y_at(x)
                );
            }
        }
    }
    ensure!(symmetric_bins > 0, "no symmetric bin exercised");

    for i in 0..1000 {
        let f = random_fixture(&mut r, &format!("q{i}"), 7);
        let analysis = analyze_question(&f.question, &f.correct, &cfg)?;
        let classes: BTreeSet<Category> = categorize_question(&analysis).into_iter().collect();
        let has = |c| classes.contains(&c);
        use Category::*;
        ensure!(
            !has(ImpossibleToGetItWrong) || has(AlwaysAChance),
            "q{i}: impossible without always"
        );
        ensure!(
            !has(AlwaysAChance) || has(MayBeAChance),
            "q{i}: always without may"
        );
        ensure!(
            has(WrongAnswersAlwaysHigher) != has(MayBeAChance),
            "q{i}: wrong is not the complement of may"
        );
        ensure!(
            !has(NoCorrectAnswers) || has(NoCorrectWithOverlap),
            "q{i}: no-correct outside no-overlap"
        );
        ensure!(
            !has(NoCorrectWithOverlap) || has(WrongAnswersAlwaysHigher),
            "q{i}: no-overlap outside wrong"
        );
    }
    Ok(())
}

/// Random questions plus typed ones with entities, so every analysis has data.
fn determinism_inputs(dir: &Path) -> Result<()> {
    let mut r = rng(7);
    let (corpus, _, _) = random_corpus(&mut r, 300, 7);
    let types = ["city", "temporal", "person", "defaultnp"];
    let mut questions = corpus.questions;
    for q in questions.iter_mut() {
        if r.random_bool(0.5) {
            let t = types[r.random_range(0..types.len())];
            q.answer_type = Some(t.into());
            for c in q.candidates.iter_mut() {
                c.entities = (0..r.random_range(0..4))
                    .map(|k| Entity {
                        entity_type: types[r.random_range(0..types.len())].into(),
                        text: format!("e{k}"),
                        is_answer: r.random_bool(0.3),
                    })
                    .collect();
            }
        }
    }
    let corpus = Corpus::new(questions)?;
    std::fs::write(dir.join("corpus.jsonl"), corpus.to_jsonl())?;
    let mut runs = String::new();
    for s in 0..6 {
        for q in &corpus.questions {
            if r.random_bool(0.9) {
                runs += &format!(
                    "{{\"system_id\":\"sys{s}\",\"question_id\":\"{}\",\"correct\":{}}}\n",
                    q.id,
                    r.random_bool(0.4)
                );
            }
        }
    }
    std::fs::write(dir.join("runs.jsonl"), runs)?;
    Ok(())
}

fn report_in_pool(dir: &Path, threads: usize) -> Result<Vec<(String, String)>> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()?;
    pool.install(|| {
        let mut opts = SessionOptions::new("report", dir.join("corpus.jsonl"));
        opts.runs = Some(dir.join("runs.jsonl"));
        let outputs = Session::load(opts)?.run()?;
        Ok(outputs.into_iter().map(|o| (o.name, o.contents)).collect())
    })
}

fn read_dir_sorted(dir: &Path) -> Result<Vec<(String, Vec<u8>)>> {
    let mut files = Vec::new();
    for e in std::fs::read_dir(dir)? {
        let e = e?;
        files.push((
            e.file_name().to_string_lossy().into_owned(),
            std::fs::read(e.path())?,
        ));
    }
    files.sort();
    Ok(files)
}

fn determinism() -> Result<()> {
    let tmp = tempfile::tempdir()?;
    let dir = tmp.path();
    determinism_inputs(dir)?;

    let many = std::thread::available_parallelism()
        .map_or(8, |n| n.get())
        .max(8)
        * 4;
    let first = report_in_pool(dir, 1)?;
    ensure!(first.len() >= 10, "only {} outputs", first.len());
    for threads in [1, many, many] {
        ensure!(
            report_in_pool(dir, threads)? == first,
            "library output differs at {threads} threads"
        );
    }

    let mut written = Vec::new();
    for (i, threads) in [1, many, many].into_iter().enumerate() {
        let out = dir.join(format!("out{i}"));
        let status = Command::new(env!("CARGO_BIN_EXE_qa-diag"))
            .args(["report", "--corpus"])
            .arg(dir.join("corpus.jsonl"))
            .arg("--runs")
            .arg(dir.join("runs.jsonl"))
            .arg("--out")
            .arg(&out)
            .args(["--threads", &threads.to_string()])
            .status()?;
        if !status.success() {
            bail!("qa-diag report exited with {status}");
        }
        written.push(read_dir_sorted(&out)?);
    }
    ensure!(
        written.iter().all_equal(),
        "CLI outputs differ between runs"
    );
    let names: Vec<&str> = written[0].iter().map(|f| f.0.as_str()).collect();
    let lib_names: Vec<&str> = first.iter().map(|f| f.0.as_str()).sorted().collect();
    ensure!(
        names == lib_names,
        "file sets differ: {names:?} vs {lib_names:?}"
    );
    Ok(())
}

type Check = fn() -> Result<()>;

fn main() {
    let checks: [(&str, Check); 7] = [
        (
            "overlap-set fixture: maxosets, bound stats, rank bounds",
            belanger_maxosets_and_bounds,
        ),
        (
            "confusability fixture: temporal 0.5, city 0.2",
            typed_confusability,
        ),
        (
            "judging threshold boundary and monotonicity (1000 fixtures)",
            judging_boundary_and_monotonicity,
        ),
        (
            "tie expectation vs exhaustive permutations (500 questions)",
            tie_expectation_oracle,
        ),
        (
            "positive-weight sampling oracle (2000 weight tables)",
            positive_weight_oracle,
        ),
        ("curve integrity and category containments", curve_integrity),
        (
            "report determinism across runs and thread counts",
            determinism,
        ),
    ];
    panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (name, check) in checks {
        let outcome = panic::catch_unwind(AssertUnwindSafe(check))
            .unwrap_or_else(|_| Err(anyhow::anyhow!("panicked")));
        match outcome {
            Ok(()) => println!("PASS  {name}"),
            Err(e) => {
                failed += 1;
                println!("FAIL  {name}: {e:#}");
            }
        }
    }
    println!(
        "{} of {} acceptance checks passed",
        checks.len() - failed,
        checks.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
