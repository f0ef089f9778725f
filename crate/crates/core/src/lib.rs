//! Lexicon and rule-based lemmatization for Somali text.
//!
//! Words are reduced to their roots in two stages: an exact lookup in a
//! root → derivatives lexicon, then a fallback over anchored prefix rules.
//! Words neither stage can handle are reported as unresolved. The
//! [`evaluator`] module runs the pipeline over a labelled corpus and
//! reports the share of content words resolved per document category.
//!
//! ```
//! use somali_lemma::{Lexicon, Lemmatizer, Resolution, RuleSet, StopwordList};
//!
//! let lexicon = Lexicon::from_json_str(r#"{"cab": ["cab", "cabay", "cabeen"]}"#).unwrap();
//! let rules = RuleSet::parse("jil\tc|ic|eec\tjilci\n").unwrap();
//! let lemmatizer = Lemmatizer::new(lexicon, rules, StopwordList::bundled());
//!
//! assert_eq!(lemmatizer.word("cabay").root(), Some("cab"));
//! assert!(matches!(lemmatizer.word("jilcisay"), Resolution::Rule { .. }));
//! assert_eq!(lemmatizer.word("qqq"), Resolution::Unresolved);
//! ```

pub mod cli;
pub mod evaluator;
pub mod lemmatizer;
pub mod lexicon;
pub mod orthography;
pub mod preprocess;
pub mod rules;

pub use evaluator::{
    accuracy, evaluate_corpus, load_corpus, parse_report, render_report, Category, CategoryRow,
    CorpusDocument, CorpusError, CorpusReport, EvalOptions, ReportFormat, Weighting,
};
pub use lemmatizer::{
    lemmatize_document, lemmatize_word, DocumentStats, LemmatizedDocument, Lemmatizer, Resolution,
};
pub use lexicon::{Lexicon, LexiconError, LexiconStats, Violation, ViolationKind};
pub use preprocess::{normalize_token, preprocess, tokenize, ProcessedDocument, StopwordList};
pub use rules::{Rule, RuleError, RuleId, RuleSet};
