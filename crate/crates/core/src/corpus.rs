//! Questions, candidates, entity annotations and system runs, plus their
//! JSON Lines loaders.

use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Entity {
    #[serde(rename = "type")]
    pub entity_type: String,
    pub text: String,
    pub is_answer: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Candidate {
    pub id: String,
    pub doc_id: String,
    pub sentence: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gold_correct: Option<bool>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub entities: Vec<Entity>,
}

impl Candidate {
    /// Entities whose type matches `answer_type` (ASCII case-insensitive).
    pub fn entities_of_type<'a>(
        &'a self,
        answer_type: &'a str,
    ) -> impl Iterator<Item = &'a Entity> {
        self.entities
            .iter()
            .filter(move |e| e.entity_type.eq_ignore_ascii_case(answer_type))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Question {
    pub id: String,
    pub text: String,
    pub answer_keys: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub answer_type: Option<String>,
    #[serde(default)]
    pub candidates: Vec<Candidate>,
}

impl Question {
    pub fn candidate(&self, id: &str) -> Option<&Candidate> {
        self.candidates.iter().find(|c| c.id == id)
    }

    pub fn candidate_index(&self, id: &str) -> Option<usize> {
        self.candidates.iter().position(|c| c.id == id)
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Corpus {
    pub questions: Vec<Question>,
}

impl Corpus {
    /// Builds a corpus, checking id uniqueness and nonempty answer keys.
    pub fn new(questions: Vec<Question>) -> Result<Self> {
        let mut seen = HashSet::new();
        for q in &questions {
            check_question(q)?;
            if !seen.insert(q.id.as_str()) {
                return Err(Error::DuplicateQuestion(q.id.clone()));
            }
        }
        Ok(Self { questions })
    }

    pub fn question(&self, id: &str) -> Option<&Question> {
        self.questions.iter().find(|q| q.id == id)
    }

    pub fn len(&self) -> usize {
        self.questions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.questions.is_empty()
    }

    pub fn candidate_count(&self) -> usize {
        self.questions.iter().map(|q| q.candidates.len()).sum()
    }

    /// Parses corpus JSON Lines. `path` is used only in error messages.
    pub fn from_jsonl(text: &str, path: &Path) -> Result<Self> {
        let mut questions = Vec::new();
        let mut seen = HashSet::new();
        for (i, line) in text.lines().enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let q: Question = serde_json::from_str(line).map_err(|e| Error::Parse {
                path: path.to_owned(),
                line: i + 1,
                message: e.to_string(),
            })?;
            check_question(&q)?;
            if !seen.insert(q.id.clone()) {
                return Err(Error::DuplicateQuestion(q.id));
            }
            questions.push(q);
        }
        if questions.is_empty() {
            return Err(Error::NoQuestions {
                path: path.to_owned(),
            });
        }
        Ok(Self { questions })
    }

    pub fn write_jsonl<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        for q in &self.questions {
            serde_json::to_writer(&mut out, q)?;
            out.write_all(b"\n")?;
        }
        Ok(())
    }

    pub fn to_jsonl(&self) -> String {
        let mut buf = Vec::new();
        self.write_jsonl(&mut buf)
            .expect("writing to a Vec cannot fail");
        String::from_utf8(buf).expect("serde_json emits UTF-8")
    }
}

fn check_question(q: &Question) -> Result<()> {
    if q.answer_keys.is_empty() {
        return Err(Error::EmptyAnswerKeys(q.id.clone()));
    }
    let mut ids = HashSet::new();
    for c in &q.candidates {
        if !ids.insert(c.id.as_str()) {
            return Err(Error::DuplicateCandidate {
                question: q.id.clone(),
                candidate: c.id.clone(),
            });
        }
    }
    Ok(())
}

pub fn load_corpus(path: impl AsRef<Path>) -> Result<Corpus> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    Corpus::from_jsonl(&text, path)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Warning {
    NoCandidates {
        question: String,
    },
    NoCorrectCandidate {
        question: String,
    },
    EntitiesWithoutAnswerType {
        question: String,
    },
    AnswerTypeWithoutEntities {
        question: String,
        answer_type: String,
    },
}

impl fmt::Display for Warning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Warning::NoCandidates { question } => {
                write!(f, "question `{question}` has no candidates")
            }
            Warning::NoCorrectCandidate { question } => {
                write!(f, "question `{question}` has no candidate labeled correct")
            }
            Warning::EntitiesWithoutAnswerType { question } => {
                write!(
                    f,
                    "question `{question}` has entity annotations but no answer_type"
                )
            }
            Warning::AnswerTypeWithoutEntities {
                question,
                answer_type,
            } => write!(
                f,
                "question `{question}` has answer_type `{answer_type}` but no entity annotations"
            ),
        }
    }
}

/// Lists annotation gaps. A question with no gold labels at all is not
/// flagged for lacking a correct candidate, since its labels come from the
/// automatic judge.
pub fn validate(corpus: &Corpus) -> Vec<Warning> {
    let mut warnings = Vec::new();
    for q in &corpus.questions {
        if q.candidates.is_empty() {
            warnings.push(Warning::NoCandidates {
                question: q.id.clone(),
            });
        }
        let any_gold = q.candidates.iter().any(|c| c.gold_correct.is_some());
        if any_gold && !q.candidates.iter().any(|c| c.gold_correct == Some(true)) {
            warnings.push(Warning::NoCorrectCandidate {
                question: q.id.clone(),
            });
        }
        let has_entities = q.candidates.iter().any(|c| !c.entities.is_empty());
        match (&q.answer_type, has_entities) {
            (None, true) => warnings.push(Warning::EntitiesWithoutAnswerType {
                question: q.id.clone(),
            }),
            (Some(t), false) => warnings.push(Warning::AnswerTypeWithoutEntities {
                question: q.id.clone(),
                answer_type: t.clone(),
            }),
            _ => {}
        }
    }
    warnings
}

/// One system's per-question correctness judgments.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SystemRun {
    pub system_id: String,
    pub judgments: BTreeMap<String, bool>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RunLine {
    system_id: String,
    question_id: String,
    correct: bool,
}

/// Parses system-run JSON Lines, one SystemRun per system in order of first
/// appearance.
pub fn parse_system_runs(text: &str, path: &Path, corpus: &Corpus) -> Result<Vec<SystemRun>> {
    let known: HashSet<&str> = corpus.questions.iter().map(|q| q.id.as_str()).collect();
    let mut runs: Vec<SystemRun> = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let r: RunLine = serde_json::from_str(line).map_err(|e| Error::Parse {
            path: path.to_owned(),
            line: i + 1,
            message: e.to_string(),
        })?;
        if !known.contains(r.question_id.as_str()) {
            return Err(Error::UnknownQuestion {
                path: path.to_owned(),
                line: i + 1,
                question: r.question_id,
            });
        }
        let run = match runs.iter().position(|s| s.system_id == r.system_id) {
            Some(idx) => &mut runs[idx],
            None => {
                runs.push(SystemRun {
                    system_id: r.system_id.clone(),
                    judgments: BTreeMap::new(),
                });
                runs.last_mut().unwrap()
            }
        };
        if run
            .judgments
            .insert(r.question_id.clone(), r.correct)
            .is_some()
        {
            return Err(Error::DuplicateJudgment {
                path: path.to_owned(),
                line: i + 1,
                system: r.system_id,
                question: r.question_id,
            });
        }
    }
    Ok(runs)
}

pub fn load_system_runs(path: impl AsRef<Path>, corpus: &Corpus) -> Result<Vec<SystemRun>> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_system_runs(&text, path, corpus)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p() -> &'static Path {
        Path::new("test.jsonl")
    }

    const TWO: &str = r#"{"id":"q1","text":"Who?","answer_keys":["a"],"candidates":[{"id":"s1","doc_id":"d","sentence":"a b","gold_correct":true}]}
{"id":"q2","text":"When?","answer_keys":["b"],"candidates":[]}
"#;

    #[test]
    fn parses_and_preserves_order() {
        let c = Corpus::from_jsonl(TWO, p()).unwrap();
        assert_eq!(c.len(), 2);
        assert_eq!(c.questions[0].id, "q1");
        assert_eq!(c.questions[0].candidates[0].gold_correct, Some(true));
        assert_eq!(c.candidate_count(), 1);
    }

    #[test]
    fn empty_file_is_an_error() {
        let err = Corpus::from_jsonl("", p()).unwrap_err();
        assert!(err.to_string().contains("no questions"), "{err}");
        assert!(matches!(
            Corpus::from_jsonl("\n\n", p()),
            Err(Error::NoQuestions { .. })
        ));
    }

    #[test]
    fn duplicate_question_id() {
        let line = TWO.lines().next().unwrap();
        let text = format!("{line}\n{line}\n");
        match Corpus::from_jsonl(&text, p()) {
            Err(Error::DuplicateQuestion(id)) => assert_eq!(id, "q1"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn parse_error_carries_line_number() {
        let text = format!("{}not json\n", TWO);
        match Corpus::from_jsonl(&text, p()) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn empty_answer_keys_rejected() {
        let text = r#"{"id":"q","text":"t","answer_keys":[],"candidates":[]}"#;
        assert!(matches!(
            Corpus::from_jsonl(text, p()),
            Err(Error::EmptyAnswerKeys(_))
        ));
    }

    #[test]
    fn unknown_field_rejected() {
        let text = r#"{"id":"q","text":"t","answer_keys":["x"],"candidates":[],"extra":1}"#;
        assert!(matches!(
            Corpus::from_jsonl(text, p()),
            Err(Error::Parse { line: 1, .. })
        ));
    }

    #[test]
    fn duplicate_candidate_rejected() {
        let text = r#"{"id":"q","text":"t","answer_keys":["x"],"candidates":[{"id":"a","doc_id":"d","sentence":""},{"id":"a","doc_id":"d","sentence":""}]}"#;
        assert!(matches!(
            Corpus::from_jsonl(text, p()),
            Err(Error::DuplicateCandidate { .. })
        ));
    }

    #[test]
    fn validate_flags_gaps() {
        let c = Corpus::from_jsonl(TWO, p()).unwrap();
        assert_eq!(
            validate(&c),
            vec![Warning::NoCandidates {
                question: "q2".into()
            }]
        );

        let typed = r#"{"id":"q","text":"t","answer_keys":["x"],"answer_type":"temporal","candidates":[{"id":"a","doc_id":"d","sentence":"x","gold_correct":true}]}"#;
        let c = Corpus::from_jsonl(typed, p()).unwrap();
        let w = validate(&c);
        assert_eq!(w.len(), 1);
        assert!(matches!(w[0], Warning::AnswerTypeWithoutEntities { .. }));

        let untyped = r#"{"id":"q","text":"t","answer_keys":["x"],"candidates":[{"id":"a","doc_id":"d","sentence":"x","gold_correct":false,"entities":[{"type":"city","text":"Boston","is_answer":false}]}]}"#;
        let c = Corpus::from_jsonl(untyped, p()).unwrap();
        let w = validate(&c);
        assert!(w.contains(&Warning::NoCorrectCandidate {
            question: "q".into()
        }));
        assert!(w.contains(&Warning::EntitiesWithoutAnswerType {
            question: "q".into()
        }));
    }

    #[test]
    fn system_runs() {
        let c = Corpus::from_jsonl(TWO, p()).unwrap();
        let text = r#"{"system_id":"A","question_id":"q1","correct":true}
{"system_id":"B","question_id":"q1","correct":false}
{"system_id":"A","question_id":"q2","correct":false}
{"system_id":"B","question_id":"q2","correct":true}
"#;
        let runs = parse_system_runs(text, p(), &c).unwrap();
        assert_eq!(runs.len(), 2);
        assert_eq!(runs[0].system_id, "A");
        assert!(runs.iter().all(|r| r.judgments.len() == 2));
        assert!(parse_system_runs("", p(), &c).unwrap().is_empty());

        let bad = r#"{"system_id":"A","question_id":"nope","correct":true}"#;
        assert!(matches!(
            parse_system_runs(bad, p(), &c),
            Err(Error::UnknownQuestion { line: 1, .. })
        ));
        let dup = r#"{"system_id":"A","question_id":"q1","correct":true}
{"system_id":"A","question_id":"q1","correct":false}"#;
        assert!(matches!(
            parse_system_runs(dup, p(), &c),
            Err(Error::DuplicateJudgment { line: 2, .. })
        ));
    }

    fn arb_entity() -> impl Strategy<Value = Entity> {
        ("[a-z]{1,6}", "[A-Za-z ]{1,10}", any::<bool>()).prop_map(|(t, x, a)| Entity {
            entity_type: t,
            text: x,
            is_answer: a,
        })
    }

    fn arb_question(idx: usize) -> impl Strategy<Value = Question> {
        (
            "\\PC{0,30}",
            prop::collection::vec("\\PC{1,20}", 1..3),
            prop::option::of("[a-z]{1,8}"),
            prop::collection::vec(
                (
                    "\\PC{0,40}",
                    prop::option::of(any::<bool>()),
                    prop::collection::vec(arb_entity(), 0..3),
                ),
                0..4,
            ),
        )
            .prop_map(move |(text, keys, at, cands)| Question {
                id: format!("q{idx}"),
                text,
                answer_keys: keys,
                answer_type: at,
                candidates: cands
                    .into_iter()
                    .enumerate()
                    .map(|(i, (s, g, e))| Candidate {
                        id: format!("s{i}"),
                        doc_id: "d".into(),
                        sentence: s,
                        gold_correct: g,
                        entities: e,
                    })
                    .collect(),
            })
    }

    proptest! {
        #[test]
        fn jsonl_round_trip(qs in (1usize..4).prop_flat_map(|n| (0..n).map(arb_question).collect::<Vec<_>>())) {
            let corpus = Corpus::new(qs).unwrap();
            let reloaded = Corpus::from_jsonl(&corpus.to_jsonl(), p()).unwrap();
            prop_assert_eq!(&reloaded, &corpus);
            prop_assert_eq!(validate(&reloaded), validate(&corpus));
        }
    }
}
