use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}:{line}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error("{path}: no questions")]
    NoQuestions { path: PathBuf },

    #[error("duplicate question id `{0}`")]
    DuplicateQuestion(String),

    #[error("question `{question}`: duplicate candidate id `{candidate}`")]
    DuplicateCandidate { question: String, candidate: String },

    #[error("question `{0}`: answer_keys is empty")]
    EmptyAnswerKeys(String),

    #[error("{path}:{line}: unknown question id `{question}`")]
    UnknownQuestion {
        path: PathBuf,
        line: usize,
        question: String,
    },

    #[error("{path}:{line}: system `{system}` judged question `{question}` twice")]
    DuplicateJudgment {
        path: PathBuf,
        line: usize,
        system: String,
        question: String,
    },

    #[error("question `{0}` has no candidates")]
    EmptyCandidates(String),

    #[error("corpus is empty")]
    EmptyCorpus,

    #[error("question `{question}`, candidate `{candidate}`: no correctness label")]
    MissingLabel { question: String, candidate: String },

    #[error("no candidate carries a gold label")]
    NoGoldLabels,

    #[error("question `{question}`: unknown candidate `{candidate}`")]
    UnknownCandidate { question: String, candidate: String },

    #[error(
        "question `{question}`, candidate `{candidate}`: empty overlap, rank bounds undefined"
    )]
    ZeroOverlap { question: String, candidate: String },

    #[error("question `{0}` has no answer_type")]
    UntypedQuestion(String),

    #[error("question `{question}`: no candidate holds an answer entity of type `{answer_type}`")]
    NoAnswerEntity {
        question: String,
        answer_type: String,
    },

    #[error("no system runs supplied")]
    NoRuns,

    #[error("term weight for `{word}` must be strictly positive, got {weight}")]
    NonPositiveWeight { word: String, weight: f64 },

    #[error("labels cover {got} questions, corpus has {expected}")]
    LabelMismatch { expected: usize, got: usize },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
