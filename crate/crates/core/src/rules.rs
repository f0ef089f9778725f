//! Prefix rules for words missing from the lexicon.
//!
//! A rule names a literal stem, a set of literal continuations and the root
//! to return. It matches a word that is the stem, then one of the
//! continuations, then any (possibly empty) run of word letters; the regular
//! expression analogue of `jil / c|ic|eec / jilci` is `^jil(c|ic|eec)[a-z']*$`.
//!
//! Rule files hold one rule per line as three tab-separated columns:
//!
//! ```text
//! # stem<TAB>continuations<TAB>root
//! jil<TAB>c|ic|eec<TAB>jilci
//! ```

use std::collections::HashSet;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use serde::Serialize;
use thiserror::Error;

use crate::orthography;

#[derive(Debug, Error)]
pub enum RuleError {
    #[error("rule file not found: {}", .0.display())]
    NotFound(PathBuf),

    #[error("cannot read {}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },

    #[error("malformed rule at line {line}: {reason}")]
    Malformed { line: usize, reason: String },

    #[error("rule at line {line} duplicates the rule at line {first}")]
    Duplicate { line: usize, first: usize },
}

/// Stable rule identifier: the 1-based line the rule was read from.
#[derive(
    Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, serde::Deserialize,
)]
#[serde(transparent)]
pub struct RuleId(pub usize);

impl std::fmt::Display for RuleId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rule {
    pub id: RuleId,
    pub stem: String,
    pub continuations: Vec<String>,
    pub root: String,
}

impl Rule {
    /// Checks the rule invariants: lowercase word-letter stem, root and
    /// continuations, at least one continuation, no repeats.
    pub fn new(
        id: RuleId,
        stem: impl Into<String>,
        continuations: Vec<String>,
        root: impl Into<String>,
    ) -> Result<Self, String> {
        let stem = stem.into();
        let root = root.into();
        if !is_letters(&stem) {
            return Err(format!("stem {stem:?} is not a lowercase letter sequence"));
        }
        if !is_letters(&root) {
            return Err(format!("root {root:?} is not a lowercase letter sequence"));
        }
        if continuations.is_empty() {
            return Err("no continuations".to_string());
        }
        let mut seen = HashSet::new();
        for c in &continuations {
            if !is_letters(c) {
                return Err(format!(
                    "continuation {c:?} is not a lowercase letter sequence"
                ));
            }
            if !seen.insert(c.as_str()) {
                return Err(format!("continuation {c:?} is repeated"));
            }
        }
        Ok(Rule {
            id,
            stem,
            continuations,
            root,
        })
    }

    pub fn matches(&self, word: &str) -> bool {
        let Some(rest) = word.strip_prefix(self.stem.as_str()) else {
            return false;
        };
        self.continuations.iter().any(|c| {
            rest.strip_prefix(c.as_str())
                .is_some_and(|tail| tail.chars().all(orthography::is_word_char))
        })
    }

    fn same_definition(&self, other: &Rule) -> bool {
        let mut a: Vec<_> = self.continuations.iter().collect();
        let mut b: Vec<_> = other.continuations.iter().collect();
        a.sort();
        b.sort();
        self.stem == other.stem && self.root == other.root && a == b
    }
}

fn is_letters(s: &str) -> bool {
    !s.is_empty() && s.chars().all(orthography::is_word_char)
}

/// Rules in application order: longest stem first, file order among equal
/// stem lengths.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RuleSet {
    rules: Vec<Rule>,
}

impl RuleSet {
    pub fn empty() -> Self {
        Self::default()
    }

    /// Orders `rules` canonically. Fails if two rules share an id or repeat
    /// the same definition.
    pub fn new(mut rules: Vec<Rule>) -> Result<Self, RuleError> {
        let mut ids = HashSet::new();
        for (i, rule) in rules.iter().enumerate() {
            if !ids.insert(rule.id) {
                return Err(RuleError::Malformed {
                    line: rule.id.0,
                    reason: format!("rule id {} is used twice", rule.id),
                });
            }
            if let Some(first) = rules[..i].iter().find(|r| r.same_definition(rule)) {
                return Err(RuleError::Duplicate {
                    line: rule.id.0,
                    first: first.id.0,
                });
            }
        }
        // stable sort keeps source order within a stem length
        rules.sort_by_key(|r| std::cmp::Reverse(r.stem.chars().count()));
        Ok(RuleSet { rules })
    }

    pub fn parse(text: &str) -> Result<Self, RuleError> {
        let mut rules = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let trimmed = raw.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let columns: Vec<&str> = trimmed.split('\t').map(str::trim).collect();
            if columns.len() != 3 {
                return Err(RuleError::Malformed {
                    line,
                    reason: format!(
                        "expected 3 tab-separated columns (stem, continuations, root), found {}",
                        columns.len()
                    ),
                });
            }
            let continuations = columns[1]
                .split('|')
                .map(|c| c.trim().to_lowercase())
                .collect();
            let rule = Rule::new(
                RuleId(line),
                columns[0].to_lowercase(),
                continuations,
                columns[2].to_lowercase(),
            )
            .map_err(|reason| RuleError::Malformed { line, reason })?;
            rules.push(rule);
        }
        Self::new(rules)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, RuleError> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|source| match source.kind() {
            io::ErrorKind::NotFound => RuleError::NotFound(path.to_path_buf()),
            _ => RuleError::Io {
                path: path.to_path_buf(),
                source,
            },
        })?;
        Self::parse(&text)
    }

    /// The first rule in application order that matches `word`.
    pub fn apply(&self, word: &str) -> Option<&Rule> {
        self.rules.iter().find(|r| r.matches(word))
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    pub fn len(&self) -> usize {
        self.rules.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rules.is_empty()
    }
}
