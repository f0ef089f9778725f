//! Two-stage root resolution: lexicon lookup, then prefix rules, otherwise
//! the word is left unresolved.

use serde::{Deserialize, Serialize};

use crate::lexicon::Lexicon;
use crate::preprocess::{preprocess, ProcessedDocument, StopwordList};
use crate::rules::{RuleId, RuleSet};

/// How a single word was (or was not) reduced to a root.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "stage", rename_all = "snake_case")]
pub enum Resolution {
    Lexicon { root: String },
    Rule { root: String, rule_id: RuleId },
    Unresolved,
}

impl Resolution {
    pub fn root(&self) -> Option<&str> {
        match self {
            Resolution::Lexicon { root } | Resolution::Rule { root, .. } => Some(root),
            Resolution::Unresolved => None,
        }
    }

    pub fn is_resolved(&self) -> bool {
        !matches!(self, Resolution::Unresolved)
    }

    pub fn stage(&self) -> &'static str {
        match self {
            Resolution::Lexicon { .. } => "lexicon",
            Resolution::Rule { .. } => "rule",
            Resolution::Unresolved => "unresolved",
        }
    }
}

/// Per-document summary: preprocessing tallies plus resolution counts.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct DocumentStats {
    pub original_word_count: usize,
    pub stopword_count: usize,
    pub special_char_count: usize,
    pub duplicate_count: usize,
    pub unresolved_count: usize,
    pub resolved_count: usize,
    /// Resolved share of the content words, in percent. `None` when the
    /// document has no content words.
    pub percent_found: Option<f64>,
    /// Resolved words over the raw token count, in percent. `None` for an
    /// empty document.
    pub percent_of_raw: Option<f64>,
    pub from_lexicon_count: usize,
    pub from_rules_count: usize,
}

impl DocumentStats {
    pub fn from_resolutions<'a>(
        doc: &ProcessedDocument,
        resolutions: impl IntoIterator<Item = &'a Resolution>,
    ) -> Self {
        let mut stats = DocumentStats {
            original_word_count: doc.original_word_count,
            stopword_count: doc.stopword_count,
            special_char_count: doc.special_char_count,
            duplicate_count: doc.duplicate_count,
            ..Default::default()
        };
        for r in resolutions {
            match r {
                Resolution::Lexicon { .. } => stats.from_lexicon_count += 1,
                Resolution::Rule { .. } => stats.from_rules_count += 1,
                Resolution::Unresolved => stats.unresolved_count += 1,
            }
        }
        stats.resolved_count = stats.from_lexicon_count + stats.from_rules_count;
        stats.percent_found = percentage(stats.resolved_count, stats.content_word_count());
        stats.percent_of_raw = percentage(stats.resolved_count, stats.original_word_count);
        stats
    }

    pub fn content_word_count(&self) -> usize {
        self.resolved_count + self.unresolved_count
    }
}

fn percentage(part: usize, whole: usize) -> Option<f64> {
    (whole > 0).then(|| 100.0 * part as f64 / whole as f64)
}

/// Content words paired with their resolutions, in first-occurrence order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LemmatizedDocument {
    pub pairs: Vec<(String, Resolution)>,
    pub stats: DocumentStats,
}

pub fn lemmatize_word(lexicon: &Lexicon, rules: &RuleSet, word: &str) -> Resolution {
    if let Some(root) = lexicon.lookup(word) {
        return Resolution::Lexicon {
            root: root.to_string(),
        };
    }
    match rules.apply(word) {
        Some(rule) => Resolution::Rule {
            root: rule.root.clone(),
            rule_id: rule.id,
        },
        None => Resolution::Unresolved,
    }
}

pub fn lemmatize_document(
    lexicon: &Lexicon,
    rules: &RuleSet,
    stopwords: &StopwordList,
    text: &str,
) -> LemmatizedDocument {
    let doc = preprocess(text, stopwords);
    let pairs: Vec<(String, Resolution)> = doc
        .content_tokens
        .iter()
        .map(|w| (w.clone(), lemmatize_word(lexicon, rules, w)))
        .collect();
    let stats = DocumentStats::from_resolutions(&doc, pairs.iter().map(|(_, r)| r));
    LemmatizedDocument { pairs, stats }
}

/// The lexicon, rules and stopwords bundled together.
#[derive(Debug, Clone)]
pub struct Lemmatizer {
    pub lexicon: Lexicon,
    pub rules: RuleSet,
    pub stopwords: StopwordList,
}

impl Lemmatizer {
    pub fn new(lexicon: Lexicon, rules: RuleSet, stopwords: StopwordList) -> Self {
        Lemmatizer {
            lexicon,
            rules,
            stopwords,
        }
    }

    pub fn word(&self, word: &str) -> Resolution {
        lemmatize_word(&self.lexicon, &self.rules, word)
    }

    pub fn document(&self, text: &str) -> LemmatizedDocument {
        lemmatize_document(&self.lexicon, &self.rules, &self.stopwords, text)
    }
}
