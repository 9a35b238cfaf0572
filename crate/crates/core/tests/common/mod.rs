#![allow(dead_code)]

use std::collections::BTreeSet;
use std::path::PathBuf;

use qa_diag::corpus::{Candidate, Corpus, Question};
use qa_diag::judging::Labels;
use rand::seq::IndexedRandom;
use rand::Rng;

/// Content words for generated fixtures; none is a stopword or changes case.
pub const VOCAB: [&str; 8] = [
    "alpha", "bravo", "charlie", "delta", "echo", "foxtrot", "golf", "hotel",
];
/// Words never used in question text.
pub const NOISE: [&str; 4] = ["zulu", "yankee", "xray", "whiskey"];
/// Stopwords sprinkled into sentences.
pub const FILLER: [&str; 4] = ["the", "of", "was", "which"];

pub fn data_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("data")
        .join(name)
}

/// A generated question together with the ground truth the generator used.
#[derive(Debug, Clone)]
pub struct Fixture {
    pub question: Question,
    pub question_words: BTreeSet<&'static str>,
    /// Overlap of each candidate with the question, from the generator.
    pub overlaps: Vec<BTreeSet<&'static str>>,
    pub correct: Vec<bool>,
}

impl Fixture {
    pub fn corpus(&self) -> Corpus {
        Corpus::new(vec![self.question.clone()]).unwrap()
    }

    pub fn labels(&self) -> Labels {
        Labels::from_flags(&self.corpus(), vec![self.correct.clone()]).unwrap()
    }
}

fn subset<R: Rng>(rng: &mut R, pool: &[&'static str], p: f64) -> BTreeSet<&'static str> {
    pool.iter()
        .copied()
        .filter(|_| rng.random_bool(p))
        .collect()
}

/// A question with `1..=max_candidates` candidates drawn over a small
/// vocabulary so that ties and subset relations are common.
pub fn random_fixture<R: Rng>(rng: &mut R, id: &str, max_candidates: usize) -> Fixture {
    let vocab_len = rng.random_range(3..=VOCAB.len());
    let vocab = &VOCAB[..vocab_len];
    let mut question_words = subset(rng, vocab, 0.7);
    if question_words.is_empty() {
        question_words.insert(vocab[0]);
    }
    let q_list: Vec<&'static str> = question_words.iter().copied().collect();

    let n = rng.random_range(1..=max_candidates);
    let mut candidates = Vec::with_capacity(n);
    let mut overlaps = Vec::with_capacity(n);
    let mut correct = Vec::with_capacity(n);
    for i in 0..n {
        let overlap = subset(rng, &q_list, 0.45);
        let mut words: Vec<&str> = overlap.iter().copied().collect();
        words.extend(subset(rng, &NOISE, 0.3));
        words.extend(subset(rng, &FILLER, 0.3));
        // Vocabulary words outside the question do not change the overlap.
        words.extend(
            vocab
                .iter()
                .copied()
                .filter(|w| !question_words.contains(w) && rng.random_bool(0.3)),
        );
        for _ in 0..rng.random_range(0..3) {
            words.push(*words.choose(rng).unwrap_or(&"zulu"));
        }
        shuffle(rng, &mut words);
        let is_correct = rng.random_bool(0.35);
        candidates.push(Candidate {
            id: format!("s{i}"),
            doc_id: "doc".into(),
            sentence: capitalize_first(&words.join(" ")) + ".",
            gold_correct: Some(is_correct),
            entities: vec![],
        });
        overlaps.push(overlap);
        correct.push(is_correct);
    }
    let mut q_text: Vec<&str> = q_list.clone();
    q_text.push("which");
    q_text.push("was");
    shuffle(rng, &mut q_text);
    Fixture {
        question: Question {
            id: id.into(),
            text: capitalize_first(&q_text.join(" ")) + "?",
            answer_keys: vec!["unused".into()],
            answer_type: None,
            candidates,
        },
        question_words,
        overlaps,
        correct,
    }
}

fn shuffle<R: Rng, T>(rng: &mut R, v: &mut [T]) {
    for i in (1..v.len()).rev() {
        let j = rng.random_range(0..=i);
        v.swap(i, j);
    }
}

fn capitalize_first(s: &str) -> String {
    let mut c = s.chars();
    match c.next() {
        Some(f) => f.to_uppercase().chain(c).collect(),
        None => String::new(),
    }
}

/// Several random questions in one corpus.
pub fn random_corpus<R: Rng>(
    rng: &mut R,
    questions: usize,
    max_candidates: usize,
) -> (Corpus, Labels, Vec<Fixture>) {
    let fixtures: Vec<Fixture> = (0..questions)
        .map(|i| random_fixture(rng, &format!("q{i}"), max_candidates))
        .collect();
    let corpus = Corpus::new(fixtures.iter().map(|f| f.question.clone()).collect()).unwrap();
    let labels = Labels::from_flags(
        &corpus,
        fixtures.iter().map(|f| f.correct.clone()).collect(),
    )
    .unwrap();
    (corpus, labels, fixtures)
}
