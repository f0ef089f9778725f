//! The `somali-lemma` command line.
//!
//! Exit status: 0 on success, 1 for a negative domain result (an unresolved
//! word, lexicon violations), 2 for usage and I/O errors.

use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use thiserror::Error;

use crate::evaluator::{
    evaluate_corpus, load_corpus, read_corpus, render_report, CorpusError, EvalOptions,
    ReportFormat, Weighting,
};
use crate::lemmatizer::{DocumentStats, LemmatizedDocument, Lemmatizer, Resolution};
use crate::lexicon::{Lexicon, LexiconError};
use crate::preprocess::{normalize_token, StopwordError, StopwordList};
use crate::rules::{RuleError, RuleSet};

/// Environment variable naming the directory with the default data files.
pub const DATA_DIR_ENV: &str = "SOMALI_LEMMA_DATA";

pub const EXIT_OK: i32 = 0;
pub const EXIT_NEGATIVE: i32 = 1;
pub const EXIT_ERROR: i32 = 2;

/// Directory holding `lexicon.json` and `stopwords.txt` when no explicit
/// paths are given.
pub fn default_data_dir() -> PathBuf {
    match std::env::var_os(DATA_DIR_ENV) {
        Some(dir) => PathBuf::from(dir),
        None => PathBuf::from(concat!(env!("CARGO_MANIFEST_DIR"), "/data")),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Table,
    Json,
    Tsv,
}

impl From<OutputFormat> for ReportFormat {
    fn from(f: OutputFormat) -> Self {
        match f {
            OutputFormat::Table => ReportFormat::Table,
            OutputFormat::Json => ReportFormat::Json,
            OutputFormat::Tsv => ReportFormat::Tsv,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum WeightingArg {
    Document,
    Token,
}

#[derive(Debug, Parser)]
#[command(
    name = "somali-lemma",
    version,
    about = "Lexicon and rule-based Somali lemmatizer"
)]
pub struct Cli {
    /// Lexicon file (JSON); `-` reads standard input
    #[arg(long, global = true, value_name = "PATH")]
    lexicon: Option<PathBuf>,

    /// Prefix rule file (TSV); without it no rules are applied
    #[arg(long, global = true, value_name = "PATH")]
    rules: Option<PathBuf>,

    /// Stopword file, one word per line
    #[arg(long, global = true, value_name = "PATH")]
    stopwords: Option<PathBuf>,

    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Table)]
    format: OutputFormat,

    /// Where `eval` writes the full report
    #[arg(long, global = true, value_name = "PATH")]
    report: Option<PathBuf>,

    /// Suppress warnings
    #[arg(long, short, global = true)]
    quiet: bool,

    /// Show rule ids
    #[arg(long, short, global = true, action = clap::ArgAction::Count)]
    verbose: u8,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Lemmatize a single word
    Word { word: String },
    /// Lemmatize a text and print per-word roots and document statistics
    Text {
        /// Input file; standard input when absent or `-`
        input: Option<PathBuf>,
    },
    /// Evaluate a corpus manifest (`id,category,path`)
    Eval {
        manifest: PathBuf,
        /// Process documents one at a time
        #[arg(long)]
        sequential: bool,
        #[arg(long, value_enum, default_value_t = WeightingArg::Document)]
        weighting: WeightingArg,
    },
    /// Inspect the lexicon
    Lexicon {
        #[command(subcommand)]
        action: LexiconAction,
    },
}

#[derive(Debug, Subcommand)]
enum LexiconAction {
    /// Report invariant violations
    Validate,
    /// Print root, derivative and total counts
    Stats,
}

#[derive(Debug, Error)]
enum CliError {
    #[error(transparent)]
    Lexicon(#[from] LexiconError),
    #[error(transparent)]
    Rules(#[from] RuleError),
    #[error(transparent)]
    Stopwords(#[from] StopwordError),
    #[error(transparent)]
    Corpus(#[from] CorpusError),
    #[error("{context}: {source}")]
    Io {
        context: String,
        #[source]
        source: io::Error,
    },
    #[error("{0}")]
    Usage(String),
}

struct Streams<'a> {
    stdin: &'a mut dyn Read,
    stdout: &'a mut dyn Write,
    stderr: &'a mut dyn Write,
}

impl Streams<'_> {
    fn read_stdin(&mut self) -> Result<String, CliError> {
        let mut s = String::new();
        self.stdin
            .read_to_string(&mut s)
            .map_err(|source| CliError::Io {
                context: "reading standard input".into(),
                source,
            })?;
        Ok(s)
    }

    fn out(&mut self, text: &str) -> Result<(), CliError> {
        self.stdout
            .write_all(text.as_bytes())
            .map_err(|source| CliError::Io {
                context: "writing output".into(),
                source,
            })
    }
}

/// Parses `args` (including the program name) and runs the command.
/// Returns the process exit status.
pub fn run<I, T>(
    args: I,
    data_dir: &Path,
    stdin: &mut dyn Read,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_ERROR } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                stderr.write_all(text.as_bytes())
            } else {
                stdout.write_all(text.as_bytes())
            };
            return code;
        }
    };
    let mut io = Streams {
        stdin,
        stdout,
        stderr,
    };
    match execute(&cli, data_dir, &mut io) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(io.stderr, "error: {e}");
            EXIT_ERROR
        }
    }
}

fn execute(cli: &Cli, data_dir: &Path, io: &mut Streams<'_>) -> Result<i32, CliError> {
    match &cli.command {
        Command::Word { word } => cmd_word(cli, data_dir, io, word),
        Command::Text { input } => cmd_text(cli, data_dir, io, input.as_deref()),
        Command::Eval {
            manifest,
            sequential,
            weighting,
        } => {
            let options = EvalOptions {
                parallel: !sequential,
                weighting: match weighting {
                    WeightingArg::Document => Weighting::Document,
                    WeightingArg::Token => Weighting::Token,
                },
            };
            cmd_eval(cli, data_dir, io, manifest, options)
        }
        Command::Lexicon { action } => cmd_lexicon(cli, data_dir, io, action),
    }
}

fn is_stdin(path: &Path) -> bool {
    path.as_os_str() == "-"
}

fn load_lexicon(cli: &Cli, data_dir: &Path, io: &mut Streams<'_>) -> Result<Lexicon, CliError> {
    let path = cli
        .lexicon
        .clone()
        .unwrap_or_else(|| data_dir.join("lexicon.json"));
    if is_stdin(&path) {
        return Ok(Lexicon::from_json_str(&io.read_stdin()?)?);
    }
    Ok(Lexicon::load(path)?)
}

fn load_lemmatizer(
    cli: &Cli,
    data_dir: &Path,
    io: &mut Streams<'_>,
) -> Result<Lemmatizer, CliError> {
    let lexicon = load_lexicon(cli, data_dir, io)?;
    if !cli.quiet {
        let violations = lexicon.validate();
        if !violations.is_empty() {
            let _ = writeln!(
                io.stderr,
                "warning: lexicon has {} violation(s); run `lexicon validate` for details",
                violations.len()
            );
        }
    }

    let rules = match &cli.rules {
        None => RuleSet::empty(),
        Some(p) if is_stdin(p) => RuleSet::parse(&io.read_stdin()?)?,
        Some(p) => RuleSet::load(p)?,
    };

    let stopwords = match &cli.stopwords {
        Some(p) if is_stdin(p) => StopwordList::parse(&io.read_stdin()?)?,
        Some(p) => StopwordList::load(p)?,
        None => {
            let default = data_dir.join("stopwords.txt");
            if default.is_file() {
                StopwordList::load(default)?
            } else {
                StopwordList::bundled()
            }
        }
    };
    Ok(Lemmatizer::new(lexicon, rules, stopwords))
}

fn describe(resolution: &Resolution, verbose: bool) -> String {
    match resolution {
        Resolution::Lexicon { root } => format!("{root} (lexicon)"),
        Resolution::Rule { root, rule_id } if verbose => format!("{root} (rule {rule_id})"),
        Resolution::Rule { root, .. } => format!("{root} (rule)"),
        Resolution::Unresolved => "unresolved".to_string(),
    }
}

#[derive(Serialize)]
struct WordOutput<'a> {
    word: &'a str,
    resolution: &'a Resolution,
}

fn cmd_word(cli: &Cli, data_dir: &Path, io: &mut Streams<'_>, word: &str) -> Result<i32, CliError> {
    let (normalized, _) = normalize_token(word);
    let Some(word) = normalized else {
        return Err(CliError::Usage(format!("{word:?} contains no letters")));
    };
    let lemmatizer = load_lemmatizer(cli, data_dir, io)?;
    let resolution = lemmatizer.word(&word);
    let text = match cli.format {
        OutputFormat::Table => describe(&resolution, cli.verbose > 0),
        OutputFormat::Tsv => tsv_pair(&word, &resolution),
        OutputFormat::Json => to_json(&WordOutput {
            word: &word,
            resolution: &resolution,
        }),
    };
    io.out(&text)?;
    io.out("\n")?;
    Ok(if resolution.is_resolved() {
        EXIT_OK
    } else {
        EXIT_NEGATIVE
    })
}

fn cmd_text(
    cli: &Cli,
    data_dir: &Path,
    io: &mut Streams<'_>,
    input: Option<&Path>,
) -> Result<i32, CliError> {
    let lemmatizer = load_lemmatizer(cli, data_dir, io)?;
    let text = match input {
        None => io.read_stdin()?,
        Some(p) if is_stdin(p) => io.read_stdin()?,
        Some(p) => fs::read_to_string(p).map_err(|source| CliError::Io {
            context: format!("reading {}", p.display()),
            source,
        })?,
    };
    let doc = lemmatizer.document(&text);
    let rendered = match cli.format {
        OutputFormat::Table => render_text_table(&doc, cli.verbose > 0),
        OutputFormat::Tsv => render_text_tsv(&doc),
        OutputFormat::Json => to_json(&doc) + "\n",
    };
    io.out(&rendered)?;
    Ok(EXIT_OK)
}

fn cmd_eval(
    cli: &Cli,
    data_dir: &Path,
    io: &mut Streams<'_>,
    manifest: &Path,
    options: EvalOptions,
) -> Result<i32, CliError> {
    let docs = if is_stdin(manifest) {
        let text = io.read_stdin()?;
        read_corpus(text.as_bytes(), Path::new("."), Path::new("<stdin>"))?
    } else {
        load_corpus(manifest)?
    };
    let lemmatizer = load_lemmatizer(cli, data_dir, io)?;
    let report = evaluate_corpus(&lemmatizer, &docs, options)?;

    match &cli.report {
        Some(path) => {
            fs::write(path, render_report(&report, cli.format.into())).map_err(|source| {
                CliError::Io {
                    context: format!("writing {}", path.display()),
                    source,
                }
            })?;
            if !cli.quiet {
                io.out(&render_report(&report, ReportFormat::Table))?;
            }
        }
        None => io.out(&render_report(&report, cli.format.into()))?,
    }
    if !cli.quiet && !report.undefined_accuracy.is_empty() {
        let _ = writeln!(
            io.stderr,
            "note: accuracy undefined for {} document(s) without content words: {}",
            report.undefined_accuracy.len(),
            report.undefined_accuracy.join(", ")
        );
    }
    Ok(EXIT_OK)
}

fn cmd_lexicon(
    cli: &Cli,
    data_dir: &Path,
    io: &mut Streams<'_>,
    action: &LexiconAction,
) -> Result<i32, CliError> {
    let lexicon = load_lexicon(cli, data_dir, io)?;
    match action {
        LexiconAction::Validate => {
            let violations = lexicon.validate();
            let text = match cli.format {
                OutputFormat::Json => {
                    let list: Vec<_> = violations
                        .iter()
                        .map(|v| serde_json::json!({"kind": v.kind(), "message": v.to_string()}))
                        .collect();
                    to_json(&list) + "\n"
                }
                _ if violations.is_empty() => "OK\n".to_string(),
                _ => violations.iter().map(|v| format!("{v}\n")).collect(),
            };
            io.out(&text)?;
            Ok(if violations.is_empty() {
                EXIT_OK
            } else {
                EXIT_NEGATIVE
            })
        }
        LexiconAction::Stats => {
            let stats = lexicon.stats();
            let text = match cli.format {
                OutputFormat::Json => to_json(&stats) + "\n",
                OutputFormat::Tsv => format!(
                    "roots\t{}\nderivatives\t{}\ntotal\t{}\n",
                    stats.root_count, stats.derivative_count, stats.total_tokens
                ),
                OutputFormat::Table => format!(
                    "roots={}\nderivatives={}\ntotal={}\n",
                    stats.root_count, stats.derivative_count, stats.total_tokens
                ),
            };
            io.out(&text)?;
            Ok(EXIT_OK)
        }
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("output serializes")
}

fn tsv_pair(word: &str, resolution: &Resolution) -> String {
    format!(
        "{word}\t{}\t{}",
        resolution.root().unwrap_or("-"),
        resolution.stage()
    )
}

/// `100%` for whole numbers, two decimals otherwise.
pub fn format_percent(p: f64) -> String {
    if p.fract() == 0.0 {
        format!("{p:.0}%")
    } else {
        format!("{p:.2}%")
    }
}

fn stats_rows(stats: &DocumentStats) -> Vec<(&'static str, String)> {
    vec![
        (
            "Original document size in words",
            stats.original_word_count.to_string(),
        ),
        ("Stop words (non-unique)", stats.stopword_count.to_string()),
        ("Special characters", stats.special_char_count.to_string()),
        ("Unresolved words", stats.unresolved_count.to_string()),
        ("Resolved words", stats.resolved_count.to_string()),
        (
            "Percent found",
            stats
                .percent_found
                .map_or("undefined".to_string(), format_percent),
        ),
        ("Words from lexicon", stats.from_lexicon_count.to_string()),
        ("Words from rule-based", stats.from_rules_count.to_string()),
    ]
}

fn render_text_table(doc: &LemmatizedDocument, verbose: bool) -> String {
    let mut out = String::new();
    let width = doc
        .pairs
        .iter()
        .map(|(w, _)| w.chars().count())
        .max()
        .unwrap_or(0);
    for (word, resolution) in &doc.pairs {
        out.push_str(&format!(
            "{word:<width$}  {}\n",
            describe(resolution, verbose)
        ));
    }
    if !doc.pairs.is_empty() {
        out.push('\n');
    }
    for (label, value) in stats_rows(&doc.stats) {
        out.push_str(&format!("{label:<33}{value}\n"));
    }
    if doc.stats.percent_found.is_none() {
        out.push_str("note: accuracy undefined (no content words)\n");
    }
    out
}

fn render_text_tsv(doc: &LemmatizedDocument) -> String {
    let mut out = String::new();
    for (word, resolution) in &doc.pairs {
        out.push_str(&tsv_pair(word, resolution));
        out.push('\n');
    }
    let s = &doc.stats;
    let pct = s
        .percent_found
        .map_or("undefined".to_string(), |p| format!("{p:.2}"));
    for (key, value) in [
        ("original_word_count", s.original_word_count.to_string()),
        ("stopword_count", s.stopword_count.to_string()),
        ("special_char_count", s.special_char_count.to_string()),
        ("unresolved_count", s.unresolved_count.to_string()),
        ("resolved_count", s.resolved_count.to_string()),
        ("percent_found", pct),
        ("from_lexicon_count", s.from_lexicon_count.to_string()),
        ("from_rules_count", s.from_rules_count.to_string()),
    ] {
        out.push_str(&format!("# {key}\t{value}\n"));
    }
    out
}
