//! Text to unique content words: tokenize, lowercase, strip punctuation,
//! drop stopwords and repeats, and count everything that was removed.

use std::collections::{BTreeSet, HashSet};
use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::orthography;

/// Marks stripped from tokens. The apostrophe is only punctuation at a
/// token edge; inside a word it is a letter.
pub const PUNCTUATION: &[char] = &[
    '.', ',', ';', ':', '!', '?', '"', '\'', '(', ')', '[', ']', '{', '}', '-', '—', '…', '«', '»',
];

/// Stopword list shipped with the crate.
pub const DEFAULT_STOPWORDS: &str = include_str!("../data/stopwords.txt");

pub fn is_punctuation(c: char) -> bool {
    PUNCTUATION.contains(&c)
}

#[derive(Debug, Error)]
pub enum StopwordError {
    #[error("stopword file not found: {}", .0.display())]
    NotFound(PathBuf),

    #[error("cannot read {}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },

    #[error("invalid stopword {word:?} at line {line}")]
    InvalidWord { line: usize, word: String },
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct StopwordList {
    words: BTreeSet<String>,
}

impl StopwordList {
    pub fn empty() -> Self {
        Self::default()
    }

    /// The bundled list.
    pub fn bundled() -> Self {
        Self::parse(DEFAULT_STOPWORDS).expect("bundled stopword list is valid")
    }

    /// One word per line; `#` starts a comment, blank lines are skipped.
    pub fn parse(text: &str) -> Result<Self, StopwordError> {
        let mut words = BTreeSet::new();
        for (idx, raw) in text.lines().enumerate() {
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let word = content.to_lowercase();
            if !orthography::is_word(&word) {
                return Err(StopwordError::InvalidWord {
                    line: idx + 1,
                    word: content.to_string(),
                });
            }
            words.insert(word);
        }
        Ok(StopwordList { words })
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, StopwordError> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|source| match source.kind() {
            io::ErrorKind::NotFound => StopwordError::NotFound(path.to_path_buf()),
            _ => StopwordError::Io {
                path: path.to_path_buf(),
                source,
            },
        })?;
        Self::parse(&text)
    }

    pub fn contains(&self, word: &str) -> bool {
        self.words.contains(word)
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &str> {
        self.words.iter().map(String::as_str)
    }
}

impl<S: AsRef<str>> FromIterator<S> for StopwordList {
    fn from_iter<I: IntoIterator<Item = S>>(iter: I) -> Self {
        StopwordList {
            words: iter
                .into_iter()
                .map(|w| w.as_ref().to_lowercase())
                .collect(),
        }
    }
}

/// What survives preprocessing, plus tallies of what did not.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProcessedDocument {
    /// Tokens in the input, detached punctuation runs included.
    pub original_word_count: usize,
    /// Stopword occurrences, repeats included.
    pub stopword_count: usize,
    /// Individual punctuation marks removed.
    pub special_char_count: usize,
    /// Tokens made only of punctuation.
    pub punctuation_only_count: usize,
    /// Content-word repetitions dropped.
    pub duplicate_count: usize,
    /// Unique content words in first-occurrence order.
    pub content_tokens: Vec<String>,
}

/// Splits on whitespace, then detaches leading and trailing punctuation
/// runs as tokens of their own, so `shaqo.` yields `shaqo` and `.`.
/// Punctuation inside a word stays attached.
pub fn tokenize(text: &str) -> Vec<&str> {
    let mut tokens = Vec::new();
    for chunk in text.split_whitespace() {
        let Some(start) = chunk.find(|c| !is_punctuation(c)) else {
            tokens.push(chunk);
            continue;
        };
        let end = chunk
            .rfind(|c| !is_punctuation(c))
            .map(|i| i + chunk[i..].chars().next().map_or(0, char::len_utf8))
            .unwrap_or(chunk.len());
        tokens.extend(
            [&chunk[..start], &chunk[start..end], &chunk[end..]]
                .into_iter()
                .filter(|t| !t.is_empty()),
        );
    }
    tokens
}

/// Lowercases `token` and removes its punctuation marks, returning the
/// remaining word (if any) and how many marks were removed.
///
/// Apostrophes between two non-punctuation characters are kept; every other
/// mark is removed wherever it sits in the token.
pub fn normalize_token(token: &str) -> (Option<String>, usize) {
    let chars: Vec<char> = token.to_lowercase().chars().collect();
    let mut word = String::with_capacity(chars.len());
    let mut stripped = 0;
    for (i, &c) in chars.iter().enumerate() {
        if !is_punctuation(c) {
            word.push(c);
            continue;
        }
        if c == '\'' && is_internal(&chars, i) {
            word.push(c);
        } else {
            stripped += 1;
        }
    }
    ((!word.is_empty()).then_some(word), stripped)
}

/// An apostrophe is word-internal when a non-punctuation character occurs on
/// both sides of it, looking past neighbouring apostrophes.
fn is_internal(chars: &[char], i: usize) -> bool {
    let left = chars[..i].iter().rev().find(|&&c| c != '\'');
    let right = chars[i + 1..].iter().find(|&&c| c != '\'');
    matches!((left, right), (Some(&l), Some(&r)) if !is_punctuation(l) && !is_punctuation(r))
}

pub fn preprocess(text: &str, stopwords: &StopwordList) -> ProcessedDocument {
    let mut doc = ProcessedDocument::default();
    let mut seen = HashSet::new();
    for token in tokenize(text) {
        doc.original_word_count += 1;
        let (word, stripped) = normalize_token(token);
        doc.special_char_count += stripped;
        let Some(word) = word else {
            doc.punctuation_only_count += 1;
            continue;
        };
        if stopwords.contains(&word) {
            doc.stopword_count += 1;
        } else if seen.contains(&word) {
            doc.duplicate_count += 1;
        } else {
            seen.insert(word.clone());
            doc.content_tokens.push(word);
        }
    }
    doc
}
