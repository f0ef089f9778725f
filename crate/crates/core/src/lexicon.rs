//! The root → derivatives lookup store used by the first resolution stage.
//!
//! A lexicon file is a single JSON object whose keys are roots and whose
//! values list the surface forms that reduce to that root:
//!
//! ```json
//! {"bariis": ["bariis", "bariiska"], "cab": ["cab", "caba", "cabay"]}
//! ```
//!
//! Keys and forms are lowercased on load. Entries are kept sorted by root so
//! iteration, lookup tie-breaking and saved output are all deterministic.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use serde::de::{Deserialize, Deserializer, MapAccess, Visitor};
use serde::Serialize;
use thiserror::Error;

use crate::orthography;

#[derive(Debug, Error)]
pub enum LexiconError {
    #[error("lexicon file not found: {}", .0.display())]
    NotFound(PathBuf),

    #[error("cannot access {}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },

    #[error("malformed lexicon at line {line}, column {column}: {message}")]
    Malformed {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("lexicon contains no entries")]
    Empty,

    #[error("lexicon has {} violation(s) that prevent saving; first: {}", .0.len(), .0[0])]
    Invalid(Vec<Violation>),
}

/// The category of a [`Violation`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ViolationKind {
    RootNotInOwnList,
    DuplicateSurfaceForm,
    EmptyDerivativeList,
    NonAlphabeticToken,
}

/// A well-formedness problem found by [`Lexicon::validate`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    RootNotInOwnList {
        root: String,
    },
    /// `form` is listed under every root in `roots` (sorted, at least two).
    DuplicateSurfaceForm {
        form: String,
        roots: Vec<String>,
    },
    EmptyDerivativeList {
        root: String,
    },
    /// `token` (the root itself or one of its forms) is not a word over the
    /// Somali letter inventory.
    NonAlphabeticToken {
        root: String,
        token: String,
    },
}

impl Violation {
    pub fn kind(&self) -> ViolationKind {
        match self {
            Violation::RootNotInOwnList { .. } => ViolationKind::RootNotInOwnList,
            Violation::DuplicateSurfaceForm { .. } => ViolationKind::DuplicateSurfaceForm,
            Violation::EmptyDerivativeList { .. } => ViolationKind::EmptyDerivativeList,
            Violation::NonAlphabeticToken { .. } => ViolationKind::NonAlphabeticToken,
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::RootNotInOwnList { root } => {
                write!(f, "root-not-in-own-list: {root:?}")
            }
            Violation::DuplicateSurfaceForm { form, roots } => {
                write!(
                    f,
                    "duplicate-surface-form: {form:?} under roots {}",
                    roots.join(", ")
                )
            }
            Violation::EmptyDerivativeList { root } => {
                write!(f, "empty-derivative-list: {root:?}")
            }
            Violation::NonAlphabeticToken { root, token } => {
                write!(f, "non-alphabetic-token: {token:?} in entry {root:?}")
            }
        }
    }
}

/// Entry counts using the convention that each root's own listing is
/// counted on the roots side.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct LexiconStats {
    pub root_count: usize,
    pub derivative_count: usize,
    pub total_tokens: usize,
}

#[derive(Debug, Clone)]
pub struct Lexicon {
    entries: BTreeMap<String, Vec<String>>,
    /// surface form -> lexicographically smallest root listing it
    index: HashMap<String, String>,
    source_path: Option<PathBuf>,
}

impl PartialEq for Lexicon {
    fn eq(&self, other: &Self) -> bool {
        self.entries == other.entries
    }
}

impl Eq for Lexicon {}

impl Lexicon {
    /// Builds a lexicon from `(root, forms)` pairs, lowercasing everything.
    ///
    /// Roots that collide after lowercasing have their form lists
    /// concatenated in input order. Duplicate forms within one entry are
    /// kept as given.
    pub fn from_entries<I, K, V, S>(entries: I) -> Self
    where
        I: IntoIterator<Item = (K, V)>,
        K: AsRef<str>,
        V: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let mut map: BTreeMap<String, Vec<String>> = BTreeMap::new();
        for (root, forms) in entries {
            map.entry(root.as_ref().to_lowercase())
                .or_default()
                .extend(forms.into_iter().map(|s| s.as_ref().to_lowercase()));
        }
        Self::from_map(map, None)
    }

    fn from_map(entries: BTreeMap<String, Vec<String>>, source_path: Option<PathBuf>) -> Self {
        let mut index = HashMap::new();
        for (root, forms) in &entries {
            for form in forms {
                // BTreeMap iterates in key order, so the first root wins ties.
                index.entry(form.clone()).or_insert_with(|| root.clone());
            }
        }
        Lexicon {
            entries,
            index,
            source_path,
        }
    }

    /// Parses the JSON lexicon format. Fails on syntax errors and on an
    /// object with no entries.
    pub fn from_json_str(text: &str) -> Result<Self, LexiconError> {
        let raw: RawEntries = serde_json::from_str(text).map_err(|e| LexiconError::Malformed {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })?;
        if raw.0.is_empty() {
            return Err(LexiconError::Empty);
        }
        Ok(Self::from_entries(raw.0))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, LexiconError> {
        let path = path.as_ref();
        let bytes = fs::read(path).map_err(|source| match source.kind() {
            io::ErrorKind::NotFound => LexiconError::NotFound(path.to_path_buf()),
            _ => LexiconError::Io {
                path: path.to_path_buf(),
                source,
            },
        })?;
        let text = String::from_utf8(bytes).map_err(|e| {
            let (line, column) = line_column(e.as_bytes(), e.utf8_error().valid_up_to());
            LexiconError::Malformed {
                line,
                column,
                message: "invalid UTF-8".to_string(),
            }
        })?;
        let mut lexicon = Self::from_json_str(&text)?;
        lexicon.source_path = Some(path.to_path_buf());
        Ok(lexicon)
    }

    /// Canonical serialization: keys sorted, forms de-duplicated keeping
    /// first occurrence, one entry per line.
    pub fn to_json_string(&self) -> String {
        let mut out = String::from("{");
        for (i, (root, forms)) in self.entries.iter().enumerate() {
            out.push_str(if i == 0 { "\n  " } else { ",\n  " });
            out.push_str(&json_string(root));
            out.push_str(": [");
            for (j, form) in dedup(forms).into_iter().enumerate() {
                if j > 0 {
                    out.push_str(", ");
                }
                out.push_str(&json_string(form));
            }
            out.push(']');
        }
        out.push_str("\n}\n");
        out
    }

    /// Writes the canonical file. Refuses lexicons with empty entries or
    /// tokens outside the letter inventory, since those would not load back
    /// to the same value.
    pub fn save(&self, path: impl AsRef<Path>) -> Result<(), LexiconError> {
        let blocking: Vec<Violation> = self
            .validate()
            .into_iter()
            .filter(|v| {
                matches!(
                    v.kind(),
                    ViolationKind::EmptyDerivativeList | ViolationKind::NonAlphabeticToken
                )
            })
            .collect();
        if !blocking.is_empty() {
            return Err(LexiconError::Invalid(blocking));
        }
        let path = path.as_ref();
        fs::write(path, self.to_json_string()).map_err(|source| LexiconError::Io {
            path: path.to_path_buf(),
            source,
        })
    }

    /// Returns every invariant violation; an empty list means the lexicon is
    /// well formed. Repeated forms inside one entry are tolerated.
    pub fn validate(&self) -> Vec<Violation> {
        let mut violations = Vec::new();
        let mut owners: BTreeMap<&str, BTreeSet<&str>> = BTreeMap::new();

        for (root, forms) in &self.entries {
            if !orthography::is_word(root) {
                violations.push(Violation::NonAlphabeticToken {
                    root: root.clone(),
                    token: root.clone(),
                });
            }
            if forms.is_empty() {
                violations.push(Violation::EmptyDerivativeList { root: root.clone() });
                continue;
            }
            if !forms.contains(root) {
                violations.push(Violation::RootNotInOwnList { root: root.clone() });
            }
            for form in dedup(forms) {
                if form != root && !orthography::is_word(form) {
                    violations.push(Violation::NonAlphabeticToken {
                        root: root.clone(),
                        token: form.clone(),
                    });
                }
                owners.entry(form).or_default().insert(root);
            }
        }

        for (form, roots) in owners {
            if roots.len() > 1 {
                violations.push(Violation::DuplicateSurfaceForm {
                    form: form.to_string(),
                    roots: roots.into_iter().map(str::to_string).collect(),
                });
            }
        }
        violations
    }

    /// The root whose list contains `word`. When several roots list it the
    /// lexicographically smallest one is returned.
    pub fn lookup(&self, word: &str) -> Option<&str> {
        self.index.get(word).map(String::as_str)
    }

    pub fn stats(&self) -> LexiconStats {
        let root_count = self.entries.len();
        let derivative_count = self
            .entries
            .iter()
            .map(|(root, forms)| forms.len() - usize::from(forms.contains(root)))
            .sum();
        LexiconStats {
            root_count,
            derivative_count,
            total_tokens: root_count + derivative_count,
        }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, root: &str) -> Option<&[String]> {
        self.entries.get(root).map(Vec::as_slice)
    }

    /// Entries in root order.
    pub fn iter(&self) -> impl Iterator<Item = (&str, &[String])> {
        self.entries
            .iter()
            .map(|(root, forms)| (root.as_str(), forms.as_slice()))
    }

    /// Every listed `(root, form)` pair, in root order then list order.
    pub fn pairs(&self) -> impl Iterator<Item = (&str, &str)> {
        self.iter()
            .flat_map(|(root, forms)| forms.iter().map(move |f| (root, f.as_str())))
    }

    pub fn source_path(&self) -> Option<&Path> {
        self.source_path.as_deref()
    }

    /// A new lexicon holding the entries of both; forms of shared roots are
    /// appended.
    pub fn merged(&self, other: &Lexicon) -> Lexicon {
        let mut entries = self.entries.clone();
        for (root, forms) in &other.entries {
            entries
                .entry(root.clone())
                .or_default()
                .extend(forms.iter().cloned());
        }
        Self::from_map(entries, None)
    }
}

fn dedup(forms: &[String]) -> Vec<&String> {
    let mut seen = BTreeSet::new();
    forms.iter().filter(|f| seen.insert(f.as_str())).collect()
}

fn json_string(s: &str) -> String {
    serde_json::to_string(s).expect("string serialization is infallible")
}

fn line_column(bytes: &[u8], offset: usize) -> (usize, usize) {
    let before = &bytes[..offset];
    let line = before.iter().filter(|&&b| b == b'\n').count() + 1;
    let column = offset
        - before
            .iter()
            .rposition(|&b| b == b'\n')
            .map_or(0, |p| p + 1)
        + 1;
    (line, column)
}

/// Top-level object read as an ordered list so repeated keys are merged
/// rather than silently overwritten.
struct RawEntries(Vec<(String, Vec<String>)>);

impl<'de> Deserialize<'de> for RawEntries {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        struct EntriesVisitor;

        impl<'de> Visitor<'de> for EntriesVisitor {
            type Value = RawEntries;

            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("an object mapping root words to arrays of word forms")
            }

            fn visit_map<A: MapAccess<'de>>(self, mut map: A) -> Result<RawEntries, A::Error> {
                let mut entries = Vec::new();
                while let Some(entry) = map.next_entry::<String, Vec<String>>()? {
                    entries.push(entry);
                }
                Ok(RawEntries(entries))
            }
        }

        deserializer.deserialize_map(EntriesVisitor)
    }
}
