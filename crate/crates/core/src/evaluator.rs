//! Corpus evaluation: lemmatize every document of a labelled corpus and
//! summarise resolution accuracy per document category.
//!
//! The corpus manifest is a CSV file with header `id,category,path`; `path`
//! is resolved relative to the manifest's directory. Categories are
//! `news_extract`, `news_full`, `social_media`, `text_message`, or any label
//! written as `other:<label>`.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::lemmatizer::{DocumentStats, Lemmatizer, Resolution};

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("manifest not found: {}", .0.display())]
    ManifestNotFound(PathBuf),

    #[error("cannot read manifest {}: {source}", path.display())]
    Manifest {
        path: PathBuf,
        #[source]
        source: csv::Error,
    },

    #[error("manifest header must be `id,category,path`, found `{0}`")]
    BadHeader(String),

    #[error("document {id:?}: file not found: {}", path.display())]
    MissingFile { id: String, path: PathBuf },

    #[error("document {id:?}: cannot read {}: {source}", path.display())]
    Io {
        id: String,
        path: PathBuf,
        #[source]
        source: io::Error,
    },

    #[error("duplicate document id {id:?} at manifest line {line}")]
    DuplicateId { id: String, line: u64 },

    #[error("unknown category {label:?} at manifest line {line}")]
    UnknownCategory { label: String, line: u64 },

    #[error("document {0:?} is empty")]
    EmptyDocument(String),

    #[error("corpus contains no documents")]
    EmptyCorpus,
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("accuracy is undefined for a document without content words")]
pub struct UndefinedAccuracy;

/// Percentage of content words that were resolved.
pub fn accuracy(stats: &DocumentStats) -> Result<f64, UndefinedAccuracy> {
    let total = stats.resolved_count + stats.unresolved_count;
    if total == 0 {
        return Err(UndefinedAccuracy);
    }
    Ok(100.0 * stats.resolved_count as f64 / total as f64)
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Category {
    NewsExtract,
    NewsFull,
    SocialMedia,
    TextMessage,
    Other(String),
}

impl Category {
    /// The manifest label.
    pub fn label(&self) -> String {
        match self {
            Category::NewsExtract => "news_extract".into(),
            Category::NewsFull => "news_full".into(),
            Category::SocialMedia => "social_media".into(),
            Category::TextMessage => "text_message".into(),
            Category::Other(l) => format!("other:{l}"),
        }
    }

    /// Name used in the rendered table.
    pub fn display_name(&self) -> &str {
        match self {
            Category::NewsExtract => "News (extract)",
            Category::NewsFull => "News (full)",
            Category::SocialMedia => "Social media",
            Category::TextMessage => "Text messages",
            Category::Other(l) => l,
        }
    }
}

impl fmt::Display for Category {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("unknown category {0:?}")]
pub struct UnknownCategory(pub String);

impl FromStr for Category {
    type Err = UnknownCategory;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "news_extract" => Ok(Category::NewsExtract),
            "news_full" => Ok(Category::NewsFull),
            "social_media" => Ok(Category::SocialMedia),
            "text_message" => Ok(Category::TextMessage),
            _ => match s.strip_prefix("other:") {
                Some(label) if !label.is_empty() => Ok(Category::Other(label.to_string())),
                _ => Err(UnknownCategory(s.to_string())),
            },
        }
    }
}

impl Serialize for Category {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.label())
    }
}

impl<'de> Deserialize<'de> for Category {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorpusDocument {
    pub id: String,
    pub category: Category,
    pub text: String,
}

#[derive(Debug, Deserialize)]
struct ManifestRecord {
    id: String,
    category: String,
    path: PathBuf,
}

pub fn load_corpus(manifest: impl AsRef<Path>) -> Result<Vec<CorpusDocument>, CorpusError> {
    let manifest = manifest.as_ref();
    let file = fs::File::open(manifest).map_err(|source| match source.kind() {
        io::ErrorKind::NotFound => CorpusError::ManifestNotFound(manifest.to_path_buf()),
        _ => CorpusError::Manifest {
            path: manifest.to_path_buf(),
            source: source.into(),
        },
    })?;
    let base = manifest.parent().unwrap_or(Path::new("."));
    read_corpus(file, base, manifest)
}

/// Reads a manifest from `reader`, resolving document paths against `base`.
/// `name` is only used in error messages.
pub fn read_corpus(
    reader: impl io::Read,
    base: &Path,
    name: &Path,
) -> Result<Vec<CorpusDocument>, CorpusError> {
    let csv_err = |source| CorpusError::Manifest {
        path: name.to_path_buf(),
        source,
    };
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(reader);
    let header: Vec<String> = reader
        .headers()
        .map_err(csv_err)?
        .iter()
        .map(String::from)
        .collect();
    if header != ["id", "category", "path"] {
        return Err(CorpusError::BadHeader(header.join(",")));
    }

    let mut seen = HashSet::new();
    let mut docs = Vec::new();
    for result in reader.records() {
        let raw = result.map_err(csv_err)?;
        let line = raw.position().map_or(0, |p| p.line());
        let record: ManifestRecord = raw.deserialize(None).map_err(csv_err)?;
        let category = record
            .category
            .parse()
            .map_err(|UnknownCategory(label)| CorpusError::UnknownCategory { label, line })?;
        if !seen.insert(record.id.clone()) {
            return Err(CorpusError::DuplicateId {
                id: record.id,
                line,
            });
        }
        let path = base.join(&record.path);
        let text = fs::read_to_string(&path).map_err(|source| match source.kind() {
            io::ErrorKind::NotFound => CorpusError::MissingFile {
                id: record.id.clone(),
                path: path.clone(),
            },
            _ => CorpusError::Io {
                id: record.id.clone(),
                path: path.clone(),
                source,
            },
        })?;
        if text.trim().is_empty() {
            return Err(CorpusError::EmptyDocument(record.id));
        }
        docs.push(CorpusDocument {
            id: record.id,
            category,
            text,
        });
    }
    Ok(docs)
}

/// How per-document accuracies are combined into a category average.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Weighting {
    /// Unweighted mean of document accuracies.
    #[default]
    Document,
    /// Resolved content words over all content words in the category.
    Token,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct EvalOptions {
    pub parallel: bool,
    pub weighting: Weighting,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CategoryRow {
    pub category: Category,
    pub doc_count: usize,
    /// Mean original word count over all documents in the category.
    pub avg_doc_len: f64,
    /// `None` when no document in the category has a defined accuracy.
    pub avg_accuracy: Option<f64>,
    /// Documents without content words; excluded from `avg_accuracy`.
    pub undefined_count: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DocumentResult {
    pub id: String,
    pub category: Category,
    pub stats: DocumentStats,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WordCount {
    pub word: String,
    /// Number of documents in which the word was left unresolved.
    pub count: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorpusReport {
    pub weighting: Weighting,
    pub rows: Vec<CategoryRow>,
    /// In corpus order.
    pub per_document: Vec<DocumentResult>,
    /// Ids of documents whose accuracy is undefined.
    pub undefined_accuracy: Vec<String>,
    /// Category label -> unresolved words, most frequent first.
    pub unresolved_words: BTreeMap<String, Vec<WordCount>>,
}

pub fn evaluate_corpus(
    lemmatizer: &Lemmatizer,
    docs: &[CorpusDocument],
    options: EvalOptions,
) -> Result<CorpusReport, CorpusError> {
    if docs.is_empty() {
        return Err(CorpusError::EmptyCorpus);
    }
    let run = |doc: &CorpusDocument| {
        let out = lemmatizer.document(&doc.text);
        let unresolved: Vec<String> = out
            .pairs
            .into_iter()
            .filter(|(_, r)| *r == Resolution::Unresolved)
            .map(|(w, _)| w)
            .collect();
        (out.stats, unresolved)
    };
    // indexed collect keeps corpus order either way
    let results: Vec<(DocumentStats, Vec<String>)> = if options.parallel {
        docs.par_iter().map(run).collect()
    } else {
        docs.iter().map(run).collect()
    };
    Ok(assemble(docs, results, options.weighting))
}

fn assemble(
    docs: &[CorpusDocument],
    results: Vec<(DocumentStats, Vec<String>)>,
    weighting: Weighting,
) -> CorpusReport {
    let mut by_category: BTreeMap<&Category, Vec<&DocumentStats>> = BTreeMap::new();
    let mut unresolved: BTreeMap<&Category, HashMap<&str, usize>> = BTreeMap::new();
    for (doc, (stats, words)) in docs.iter().zip(&results) {
        by_category.entry(&doc.category).or_default().push(stats);
        let counts = unresolved.entry(&doc.category).or_default();
        for w in words {
            *counts.entry(w).or_default() += 1;
        }
    }

    let rows = by_category
        .into_iter()
        .map(|(category, stats)| category_row(category, &stats, weighting))
        .collect();

    let unresolved_words = unresolved
        .into_iter()
        .map(|(category, counts)| {
            let mut list: Vec<WordCount> = counts
                .into_iter()
                .map(|(word, count)| WordCount {
                    word: word.to_string(),
                    count,
                })
                .collect();
            list.sort_by(|a, b| b.count.cmp(&a.count).then_with(|| a.word.cmp(&b.word)));
            (category.label(), list)
        })
        .collect();

    let per_document: Vec<DocumentResult> = docs
        .iter()
        .zip(results)
        .map(|(doc, (stats, _))| DocumentResult {
            id: doc.id.clone(),
            category: doc.category.clone(),
            stats,
        })
        .collect();
    let undefined_accuracy = per_document
        .iter()
        .filter(|d| accuracy(&d.stats).is_err())
        .map(|d| d.id.clone())
        .collect();

    CorpusReport {
        weighting,
        rows,
        per_document,
        undefined_accuracy,
        unresolved_words,
    }
}

fn category_row(
    category: &Category,
    stats: &[&DocumentStats],
    weighting: Weighting,
) -> CategoryRow {
    let doc_count = stats.len();
    let avg_doc_len = stats
        .iter()
        .map(|s| s.original_word_count as f64)
        .sum::<f64>()
        / doc_count as f64;
    let defined: Vec<&DocumentStats> = stats
        .iter()
        .copied()
        .filter(|s| s.content_word_count() > 0)
        .collect();
    let avg_accuracy = if defined.is_empty() {
        None
    } else {
        Some(match weighting {
            Weighting::Document => {
                defined
                    .iter()
                    .map(|s| accuracy(s).expect("filtered to defined documents"))
                    .sum::<f64>()
                    / defined.len() as f64
            }
            Weighting::Token => {
                let resolved: usize = defined.iter().map(|s| s.resolved_count).sum();
                let total: usize = defined.iter().map(|s| s.content_word_count()).sum();
                100.0 * resolved as f64 / total as f64
            }
        })
    };
    CategoryRow {
        category: category.clone(),
        doc_count,
        avg_doc_len,
        avg_accuracy,
        undefined_count: doc_count - defined.len(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    /// Category table.
    Table,
    /// Full report as JSON.
    Json,
    /// One line per document.
    Tsv,
}

pub fn render_report(report: &CorpusReport, format: ReportFormat) -> String {
    match format {
        ReportFormat::Table => render_table(report),
        ReportFormat::Json => {
            let mut s = serde_json::to_string_pretty(report).expect("report serializes");
            s.push('\n');
            s
        }
        ReportFormat::Tsv => render_tsv(report),
    }
}

pub fn parse_report(json: &str) -> Result<CorpusReport, serde_json::Error> {
    serde_json::from_str(json)
}

fn render_table(report: &CorpusReport) -> String {
    let mut out = format!(
        "{:<18} {:>7} {:>12} {:>10}\n{}\n",
        "Type",
        "# Docs",
        "Avg Doc Len",
        "Avg Acc.",
        "-".repeat(50)
    );
    for row in &report.rows {
        let acc = match row.avg_accuracy {
            Some(a) => format!("{a:.2}%"),
            None => "n/a".to_string(),
        };
        out.push_str(&format!(
            "{:<18} {:>7} {:>12.2} {:>10}\n",
            row.category.display_name(),
            row.doc_count,
            row.avg_doc_len,
            acc
        ));
    }
    out
}

fn render_tsv(report: &CorpusReport) -> String {
    let mut out = String::from(
        "id\tcategory\toriginal_words\tstopwords\tspecial_chars\tduplicates\tunresolved\tresolved\tfrom_lexicon\tfrom_rules\tpercent_found\n",
    );
    for d in &report.per_document {
        let s = &d.stats;
        let pct = s
            .percent_found
            .map_or("undefined".to_string(), |p| format!("{p:.2}"));
        out.push_str(&format!(
            "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\n",
            d.id,
            d.category,
            s.original_word_count,
            s.stopword_count,
            s.special_char_count,
            s.duplicate_count,
            s.unresolved_count,
            s.resolved_count,
            s.from_lexicon_count,
            s.from_rules_count,
            pct
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lexicon::Lexicon;
    use crate::preprocess::StopwordList;
    use crate::rules::RuleSet;

    fn lemmatizer() -> Lemmatizer {
        let lex = Lexicon::from_json_str(
            r#"{"cab": ["cab", "cabay", "cabeen"], "cun": ["cun", "cunay"]}"#,
        )
        .unwrap();
        Lemmatizer::new(lex, RuleSet::empty(), StopwordList::empty())
    }

    fn doc(id: &str, category: Category, text: &str) -> CorpusDocument {
        CorpusDocument {
            id: id.into(),
            category,
            text: text.into(),
        }
    }

    fn stats(resolved: usize, unresolved: usize) -> DocumentStats {
        DocumentStats {
            resolved_count: resolved,
            unresolved_count: unresolved,
            ..Default::default()
        }
    }

    #[test]
    fn accuracy_values() {
        assert_eq!(accuracy(&stats(4, 0)), Ok(100.0));
        assert_eq!(accuracy(&stats(0, 5)), Ok(0.0));
        assert_eq!(accuracy(&stats(3, 1)), Ok(75.0));
        assert_eq!(accuracy(&stats(0, 0)), Err(UndefinedAccuracy));
    }

    #[test]
    fn category_labels() {
        for c in [
            Category::NewsExtract,
            Category::NewsFull,
            Category::SocialMedia,
            Category::TextMessage,
            Category::Other("forum".into()),
        ] {
            assert_eq!(c.label().parse::<Category>(), Ok(c));
        }
        assert!("blog".parse::<Category>().is_err());
        assert!("other:".parse::<Category>().is_err());
    }

    fn two_doc_report() -> CorpusReport {
        // 100% over 8 words and 50% over 4 words
        let docs = [
            doc(
                "a",
                Category::SocialMedia,
                "cab cabay cabeen cun cunay cab cab cab",
            ),
            doc("b", Category::SocialMedia, "cab xx cab cab"),
        ];
        evaluate_corpus(&lemmatizer(), &docs, EvalOptions::default()).unwrap()
    }

    #[test]
    fn two_document_average() {
        let report = two_doc_report();
        assert_eq!(report.rows.len(), 1);
        let row = &report.rows[0];
        assert_eq!(row.doc_count, 2);
        assert_eq!(row.avg_doc_len, 6.0);
        assert_eq!(row.avg_accuracy, Some(75.0));
        assert!(render_report(&report, ReportFormat::Table).contains("75.00"));
    }

    #[test]
    fn token_weighting() {
        let docs = [
            doc("a", Category::NewsFull, "cab cabay cun"),
            doc("b", Category::NewsFull, "xx"),
        ];
        let opts = EvalOptions {
            weighting: Weighting::Token,
            ..Default::default()
        };
        let report = evaluate_corpus(&lemmatizer(), &docs, opts).unwrap();
        assert_eq!(report.rows[0].avg_accuracy, Some(75.0));
    }

    #[test]
    fn undefined_documents_excluded_from_accuracy() {
        let lem = Lemmatizer::new(
            lemmatizer().lexicon,
            RuleSet::empty(),
            ["iyo"].into_iter().collect(),
        );
        let docs = [
            doc("a", Category::TextMessage, "cab xx"),
            doc("b", Category::TextMessage, "iyo iyo , ."),
        ];
        let report = evaluate_corpus(&lem, &docs, EvalOptions::default()).unwrap();
        let row = &report.rows[0];
        assert_eq!(row.doc_count, 2);
        assert_eq!(row.avg_doc_len, 3.0);
        assert_eq!(row.avg_accuracy, Some(50.0));
        assert_eq!(row.undefined_count, 1);
        assert_eq!(report.undefined_accuracy, ["b"]);
    }

    #[test]
    fn rows_in_category_order_and_unresolved_sorted() {
        let docs = [
            doc("1", Category::Other("forum".into()), "zz"),
            doc("2", Category::TextMessage, "yy zz"),
            doc("3", Category::NewsExtract, "cab"),
            doc("4", Category::TextMessage, "zz aa"),
        ];
        let report = evaluate_corpus(&lemmatizer(), &docs, EvalOptions::default()).unwrap();
        let cats: Vec<_> = report.rows.iter().map(|r| r.category.label()).collect();
        assert_eq!(cats, ["news_extract", "text_message", "other:forum"]);
        let words: Vec<_> = report.unresolved_words["text_message"]
            .iter()
            .map(|w| (w.word.as_str(), w.count))
            .collect();
        assert_eq!(words, [("zz", 2), ("aa", 1), ("yy", 1)]);
        assert!(report.unresolved_words["news_extract"].is_empty());
        let ids: Vec<_> = report.per_document.iter().map(|d| d.id.as_str()).collect();
        assert_eq!(ids, ["1", "2", "3", "4"]);
    }

    #[test]
    fn empty_corpus_rejected() {
        assert!(matches!(
            evaluate_corpus(&lemmatizer(), &[], EvalOptions::default()),
            Err(CorpusError::EmptyCorpus)
        ));
    }

    #[test]
    fn empty_table_has_header_only() {
        let report = CorpusReport {
            weighting: Weighting::Document,
            rows: vec![],
            per_document: vec![],
            undefined_accuracy: vec![],
            unresolved_words: BTreeMap::new(),
        };
        let table = render_report(&report, ReportFormat::Table);
        assert_eq!(table.lines().count(), 2);
        assert!(table.starts_with("Type"));
    }

    #[test]
    fn json_round_trip() {
        let report = two_doc_report();
        let json = render_report(&report, ReportFormat::Json);
        assert_eq!(parse_report(&json).unwrap(), report);
    }

    #[test]
    fn tsv_has_one_line_per_document() {
        let tsv = render_report(&two_doc_report(), ReportFormat::Tsv);
        assert_eq!(tsv.lines().count(), 3);
        assert!(tsv.lines().nth(2).unwrap().ends_with("\t50.00"));
    }

    fn write_corpus(dir: &Path, manifest: &str, files: &[(&str, &str)]) -> PathBuf {
        for (name, text) in files {
            fs::write(dir.join(name), text).unwrap();
        }
        let path = dir.join("manifest.csv");
        fs::write(&path, manifest).unwrap();
        path
    }

    #[test]
    fn load_two_documents() {
        let dir = tempfile::tempdir().unwrap();
        let m = write_corpus(
            dir.path(),
            "id,category,path\ns1,social_media,a.txt\ns2,social_media,b.txt\n",
            &[("a.txt", "cab"), ("b.txt", "cun")],
        );
        let docs = load_corpus(&m).unwrap();
        assert_eq!(docs.len(), 2);
        assert!(docs.iter().all(|d| d.category == Category::SocialMedia));
        assert_eq!(docs[1].text, "cun");
    }

    #[test]
    fn load_missing_document_file() {
        let dir = tempfile::tempdir().unwrap();
        let m = write_corpus(
            dir.path(),
            "id,category,path\ns1,social_media,gone.txt\n",
            &[],
        );
        match load_corpus(&m).unwrap_err() {
            CorpusError::MissingFile { id, path } => {
                assert_eq!(id, "s1");
                assert!(path.ends_with("gone.txt"));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn load_duplicate_id() {
        let dir = tempfile::tempdir().unwrap();
        let m = write_corpus(
            dir.path(),
            "id,category,path\ns1,social_media,a.txt\ns1,news_full,a.txt\n",
            &[("a.txt", "cab")],
        );
        assert!(matches!(
            load_corpus(&m),
            Err(CorpusError::DuplicateId { line: 3, .. })
        ));
    }

    #[test]
    fn load_unknown_category() {
        let dir = tempfile::tempdir().unwrap();
        let m = write_corpus(
            dir.path(),
            "id,category,path\ns1,blog,a.txt\ns2,other:blog,a.txt\n",
            &[("a.txt", "cab")],
        );
        assert!(matches!(
            load_corpus(&m),
            Err(CorpusError::UnknownCategory { ref label, line: 2 }) if label == "blog"
        ));
    }

    #[test]
    fn load_other_category_and_bad_header() {
        let dir = tempfile::tempdir().unwrap();
        let m = write_corpus(
            dir.path(),
            "id,category,path\ns2,other:blog,a.txt\n",
            &[("a.txt", "cab")],
        );
        assert_eq!(
            load_corpus(&m).unwrap()[0].category,
            Category::Other("blog".into())
        );

        let m = write_corpus(dir.path(), "name,category,path\n", &[]);
        assert!(matches!(load_corpus(&m), Err(CorpusError::BadHeader(_))));
    }

    #[test]
    fn load_missing_manifest_and_empty_document() {
        assert!(matches!(
            load_corpus("/nonexistent/manifest.csv"),
            Err(CorpusError::ManifestNotFound(_))
        ));
        let dir = tempfile::tempdir().unwrap();
        let m = write_corpus(
            dir.path(),
            "id,category,path\ne,news_full,e.txt\n",
            &[("e.txt", "  \n")],
        );
        assert!(matches!(
            load_corpus(&m),
            Err(CorpusError::EmptyDocument(_))
        ));
    }
}
