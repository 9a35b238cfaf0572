//! Tokenization and content-word normalization.
//!
//! Every analysis in the crate reduces text to a [`TokenSet`] through the same
//! pipeline: lowercase, split on runs of non-alphanumeric characters, drop
//! stopwords, optionally stem, deduplicate. The pipeline is a pure function of
//! the input text and a [`NormalizationConfig`].

use std::collections::BTreeSet;
use std::fmt;
use std::path::Path;

use rust_stemmers::{Algorithm, Stemmer};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

const DEFAULT_STOPWORDS: &str = include_str!("../data/stopwords.txt");

/// Environment variable consulted for a stopword file when none is given explicitly.
pub const STOPWORDS_ENV: &str = "QA_DIAG_STOPWORDS";

/// Parses a stopword list: one word per line, `#` starts a comment.
pub fn parse_stopwords(text: &str) -> BTreeSet<String> {
    text.lines()
        .map(|line| match line.find('#') {
            Some(i) => &line[..i],
            None => line,
        })
        .map(str::trim)
        .filter(|w| !w.is_empty())
        .map(str::to_owned)
        .collect()
}

pub fn load_stopwords(path: impl AsRef<Path>) -> Result<BTreeSet<String>> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    Ok(parse_stopwords(&text))
}

/// The shipped default stopword list.
pub fn default_stopwords() -> BTreeSet<String> {
    parse_stopwords(DEFAULT_STOPWORDS)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NormalizationConfig {
    lowercase: bool,
    stopwords: BTreeSet<String>,
    stem: bool,
}

impl NormalizationConfig {
    /// Builds a config. With `lowercase` on, stopwords are lowercased so the
    /// list is closed under the same folding applied to the text.
    pub fn new(lowercase: bool, stopwords: BTreeSet<String>, stem: bool) -> Self {
        let stopwords = if lowercase {
            stopwords.into_iter().map(|w| w.to_lowercase()).collect()
        } else {
            stopwords
        };
        Self {
            lowercase,
            stopwords,
            stem,
        }
    }

    /// Defaults for overlap scoring and overlap sets: lowercase, default
    /// stopwords, no stemming ("played" and "play" stay distinct).
    pub fn overlap() -> Self {
        Self::new(true, default_stopwords(), false)
    }

    /// Defaults for automatic judging: lowercase, default stopwords, stemming on.
    pub fn judging() -> Self {
        Self::new(true, default_stopwords(), true)
    }

    pub fn with_stem(self, stem: bool) -> Self {
        Self { stem, ..self }
    }

    pub fn with_stopwords(self, stopwords: BTreeSet<String>) -> Self {
        Self::new(self.lowercase, stopwords, self.stem)
    }

    pub fn lowercase(&self) -> bool {
        self.lowercase
    }

    pub fn stem(&self) -> bool {
        self.stem
    }

    pub fn stopwords(&self) -> &BTreeSet<String> {
        &self.stopwords
    }

    pub fn is_stopword(&self, word: &str) -> bool {
        self.stopwords.contains(word)
    }

    /// Hex SHA-256 of the sorted stopword list, one word per line.
    pub fn stopword_checksum(&self) -> String {
        let mut hasher = Sha256::new();
        for w in &self.stopwords {
            hasher.update(w.as_bytes());
            hasher.update(b"\n");
        }
        hasher
            .finalize()
            .iter()
            .map(|b| format!("{b:02x}"))
            .collect()
    }
}

impl Default for NormalizationConfig {
    fn default() -> Self {
        Self::overlap()
    }
}

/// A set of normalized words. Overlap between a question and a sentence is
/// the intersection of their token sets.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct TokenSet(BTreeSet<String>);

impl TokenSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, word: &str) -> bool {
        self.0.contains(word)
    }

    pub fn iter(&self) -> impl Iterator<Item = &str> {
        self.0.iter().map(String::as_str)
    }

    pub fn intersection(&self, other: &TokenSet) -> TokenSet {
        TokenSet(self.0.intersection(&other.0).cloned().collect())
    }

    pub fn intersection_len(&self, other: &TokenSet) -> usize {
        self.0.intersection(&other.0).count()
    }

    pub fn is_subset(&self, other: &TokenSet) -> bool {
        self.0.is_subset(&other.0)
    }

    pub fn is_strict_subset(&self, other: &TokenSet) -> bool {
        self.0.len() < other.0.len() && self.0.is_subset(&other.0)
    }

    pub fn as_set(&self) -> &BTreeSet<String> {
        &self.0
    }
}

impl<S: Into<String>> FromIterator<S> for TokenSet {
    fn from_iter<I: IntoIterator<Item = S>>(iter: I) -> Self {
        TokenSet(iter.into_iter().map(Into::into).collect())
    }
}

impl fmt::Display for TokenSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, w) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            f.write_str(w)?;
        }
        f.write_str("}")
    }
}

/// Splits `text` on maximal runs of non-alphanumeric characters, lowercasing
/// first when configured. Order and duplicates are preserved.
pub fn tokenize(text: &str, config: &NormalizationConfig) -> Vec<String> {
    let folded;
    let text = if config.lowercase {
        folded = text.to_lowercase();
        folded.as_str()
    } else {
        text
    };
    text.split(|c: char| !c.is_alphanumeric())
        .filter(|t| !t.is_empty())
        .map(str::to_owned)
        .collect()
}

/// Stems a single word with the Snowball English (Porter2) algorithm. Words
/// containing anything other than ASCII letters are returned unchanged, so
/// numbers like "1503" survive intact.
pub fn stem_word(word: &str) -> String {
    if word.bytes().all(|b| b.is_ascii_lowercase()) {
        Stemmer::create(Algorithm::English).stem(word).into_owned()
    } else {
        word.to_owned()
    }
}

/// Tokenizes, drops stopwords, optionally stems, and deduplicates.
pub fn content_words(text: &str, config: &NormalizationConfig) -> TokenSet {
    tokenize(text, config)
        .into_iter()
        .filter(|t| !config.is_stopword(t))
        .map(|t| if config.stem { stem_word(&t) } else { t })
        .collect()
}
