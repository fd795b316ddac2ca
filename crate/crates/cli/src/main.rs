//! Command-line front end: rhetorical structure extraction (`parse`),
//! abstract generation (`summarize`), corpus evaluation (`eval`) and
//! catalog validation (`catalog check`).
//!
//! Standard output carries only artifact payload; diagnostics and warnings
//! go to standard error. Exit codes: 0 ok, 2 I/O or input data, 3
//! configuration, 4 internal invariant breach.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

use rhetor::abstractor::{
    gradation_warning, propagate_penalties, reduce_document, render_penalty_tree, ReductionTarget,
};
use rhetor::catalog::{default_catalog, RelationCatalog};
use rhetor::eval::{
    evaluate, load_corpus, parse_manifest, render_records, render_table, EvalError, LengthBasis,
};
use rhetor::ingest::{split_document, split_document_lines, tag_relations, Document};
use rhetor::parser::{parse_document, DocumentParse, StructureError};

#[derive(Parser)]
#[command(
    name = "rhetor",
    version,
    about = "Rhetorical structure extraction and abstract generation"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct CommonOpts {
    /// Relation catalog config file; the embedded default is used otherwise.
    #[arg(long, value_name = "PATH")]
    catalog: Option<PathBuf>,
    /// Treat every non-blank line as one sentence.
    #[arg(long)]
    one_sentence_per_line: bool,
    /// Suppress warnings on standard error.
    #[arg(long)]
    no_warnings: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    Abstract,
    Tree,
    Penalties,
    All,
}

#[derive(Subcommand)]
enum Command {
    /// Print bracket-notation trees: one line per paragraph, then the
    /// inter-paragraph tree for multi-paragraph documents.
    Parse {
        /// Input text files (UTF-8, blank lines separate paragraphs).
        #[arg(required = true)]
        inputs: Vec<PathBuf>,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Generate an extractive abstract of the requested length.
    Summarize {
        #[arg(required = true)]
        inputs: Vec<PathBuf>,
        /// Fraction of sentences to keep, in (0, 1].
        #[arg(long, conflicts_with = "sentences")]
        ratio: Option<f64>,
        /// Absolute number of sentences to keep.
        #[arg(long)]
        sentences: Option<usize>,
        /// What to print.
        #[arg(long, value_enum, default_value_t = Mode::Abstract)]
        mode: Mode,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Evaluate key-sentence coverage over an annotated corpus manifest.
    Eval {
        manifest: PathBuf,
        /// Target length ratio for the generated abstracts.
        #[arg(long)]
        ratio: f64,
        /// Measure the length ratio in characters instead of sentences.
        #[arg(long)]
        char_ratio: bool,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Catalog utilities.
    Catalog {
        #[command(subcommand)]
        action: CatalogAction,
    },
}

#[derive(Subcommand)]
enum CatalogAction {
    /// Validate a catalog config file.
    Check { path: PathBuf },
}

enum CliError {
    Io(String),
    Config(String),
    Internal(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Io(_) => 2,
            CliError::Config(_) => 3,
            CliError::Internal(_) => 4,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Io(m) | CliError::Config(m) | CliError::Internal(m) => m,
        }
    }
}

impl From<StructureError> for CliError {
    fn from(e: StructureError) -> Self {
        CliError::Internal(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            print!("{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            eprint!("{e}");
            return ExitCode::from(3);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("rhetor: {}", e.message());
            ExitCode::from(e.code())
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Parse { inputs, common } => {
            let catalog = load_catalog(&common)?;
            for_each_input(&inputs, &common, &catalog, |_, parsed, _| {
                Ok(render_trees(parsed))
            })
        }
        Command::Summarize {
            inputs,
            ratio,
            sentences,
            mode,
            common,
        } => {
            let target = match (ratio, sentences) {
                (Some(r), None) => ReductionTarget::Ratio(r),
                (None, Some(n)) => ReductionTarget::Sentences(n),
                _ => {
                    return Err(CliError::Config(
                        "exactly one of --ratio and --sentences is required".into(),
                    ))
                }
            };
            let catalog = load_catalog(&common)?;
            for_each_input(&inputs, &common, &catalog, |doc, parsed, warnings| {
                summarize_one(doc, parsed, &catalog, target, mode, warnings)
            })
        }
        Command::Eval {
            manifest,
            ratio,
            char_ratio,
            common,
        } => cmd_eval(&manifest, ratio, char_ratio, &common),
        Command::Catalog {
            action: CatalogAction::Check { path },
        } => {
            let source = fs::read_to_string(&path)
                .map_err(|e| CliError::Io(format!("cannot read `{}`: {e}", path.display())))?;
            let catalog = RelationCatalog::load(&source)
                .map_err(|e| CliError::Config(format!("`{}`: {e}", path.display())))?;
            println!(
                "catalog ok: {} relations, {} lexicon entries, {} preference rules",
                catalog.relations().len(),
                catalog.lexicon().len(),
                catalog.preference_rules().len()
            );
            Ok(())
        }
    }
}

fn load_catalog(common: &CommonOpts) -> Result<RelationCatalog, CliError> {
    match &common.catalog {
        None => Ok(default_catalog().clone()),
        Some(path) => {
            let source = fs::read_to_string(path)
                .map_err(|e| CliError::Io(format!("cannot read `{}`: {e}", path.display())))?;
            RelationCatalog::load(&source)
                .map_err(|e| CliError::Config(format!("`{}`: {e}", path.display())))
        }
    }
}

/// Ingests and parses every input concurrently, then prints the produced
/// payloads in input order. Warnings accumulate per file and land on
/// standard error unless suppressed.
fn for_each_input(
    inputs: &[PathBuf],
    common: &CommonOpts,
    catalog: &RelationCatalog,
    render: impl Fn(&Document, &DocumentParse, &mut Vec<String>) -> Result<String, CliError> + Sync,
) -> Result<(), CliError> {
    let results: Vec<Result<(String, Vec<String>), CliError>> = inputs
        .par_iter()
        .map(|path| {
            let raw = fs::read_to_string(path)
                .map_err(|e| CliError::Io(format!("cannot read `{}`: {e}", path.display())))?;
            let split = if common.one_sentence_per_line {
                split_document_lines(&raw)
            } else {
                split_document(&raw)
            };
            let doc = split.map_err(|e| CliError::Io(format!("`{}`: {e}", path.display())))?;
            let doc = tag_relations(doc, catalog);
            let parsed = parse_document(&doc, catalog)?;
            let mut warnings = parsed.warnings.clone();
            let payload = render(&doc, &parsed, &mut warnings)?;
            Ok((payload, warnings))
        })
        .collect();

    for (path, result) in inputs.iter().zip(results) {
        let (payload, warnings) = result?;
        if !common.no_warnings {
            for w in warnings {
                eprintln!("rhetor: warning: {}: {w}", path.display());
            }
        }
        if inputs.len() > 1 {
            println!("# file: {}", path.display());
        }
        print!("{payload}");
    }
    Ok(())
}

fn render_trees(parsed: &DocumentParse) -> String {
    let mut out = String::new();
    for result in &parsed.paragraphs {
        writeln!(out, "{}", result.tree.to_bracket()).unwrap();
    }
    if parsed.paragraphs.len() > 1 {
        writeln!(out, "{}", parsed.inter.tree.to_bracket()).unwrap();
    }
    out
}

fn summarize_one(
    doc: &Document,
    parsed: &DocumentParse,
    catalog: &RelationCatalog,
    target: ReductionTarget,
    mode: Mode,
    warnings: &mut Vec<String>,
) -> Result<String, CliError> {
    let annotations = parsed
        .paragraphs
        .iter()
        .map(|r| propagate_penalties(&r.tree, catalog))
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| CliError::Internal(e.to_string()))?;
    for (i, ann) in annotations.iter().enumerate() {
        if let Some(w) = gradation_warning(ann) {
            warnings.push(format!("paragraph {}: {w}", i + 1));
        }
    }

    let selection = reduce_document(doc, parsed, catalog, target).map_err(|e| match e {
        e @ (rhetor::AbstractError::RatioOutOfRange(_)
        | rhetor::AbstractError::TargetOutOfRange { .. }) => CliError::Config(e.to_string()),
        e => CliError::Internal(e.to_string()),
    })?;

    let mut out = String::new();
    if matches!(mode, Mode::Tree | Mode::All) {
        for (result, ann) in parsed.paragraphs.iter().zip(&annotations) {
            writeln!(out, "{}", render_penalty_tree(&result.tree, ann)).unwrap();
        }
        if parsed.paragraphs.len() > 1 {
            let inter_ann = propagate_penalties(&parsed.inter.tree, catalog)
                .map_err(|e| CliError::Internal(e.to_string()))?;
            writeln!(
                out,
                "{}",
                render_penalty_tree(&parsed.inter.tree, &inter_ann)
            )
            .unwrap();
        }
        if mode == Mode::All {
            out.push('\n');
        }
    }
    if matches!(mode, Mode::Penalties | Mode::All) {
        for r in &selection.kept {
            let sentence = &doc.paragraphs[r.paragraph - 1].sentences[r.sentence - 1];
            let penalty = annotations[r.paragraph - 1].leaf(r.sentence);
            writeln!(
                out,
                "[{}:{} p={penalty}] {}",
                r.paragraph, r.sentence, sentence.text
            )
            .unwrap();
        }
        if mode == Mode::All {
            out.push('\n');
        }
    }
    if matches!(mode, Mode::Abstract | Mode::All) {
        writeln!(out, "{}", selection.rendered).unwrap();
    }
    Ok(out)
}

fn cmd_eval(
    manifest: &Path,
    ratio: f64,
    char_ratio: bool,
    common: &CommonOpts,
) -> Result<(), CliError> {
    let catalog = load_catalog(common)?;
    let text = fs::read_to_string(manifest)
        .map_err(|e| CliError::Io(format!("cannot read `{}`: {e}", manifest.display())))?;
    let base = manifest.parent().unwrap_or(Path::new("."));
    let entries = parse_manifest(&text, base).map_err(|e| CliError::Io(e.to_string()))?;
    if entries.is_empty() {
        return Err(CliError::Io(format!(
            "manifest `{}` lists no documents",
            manifest.display()
        )));
    }

    let basis = if char_ratio {
        LengthBasis::Chars
    } else {
        LengthBasis::Sentences
    };

    // evaluate document by document first so every failure is listed, not
    // just the first
    let mut failures = Vec::new();
    let mut corpus = Vec::new();
    for entry in &entries {
        match load_corpus(std::slice::from_ref(entry)) {
            Ok(mut loaded) => {
                let pair = loaded.pop().unwrap();
                match evaluate(std::slice::from_ref(&pair), &catalog, ratio, basis) {
                    Ok(_) => corpus.push(pair),
                    Err(e) => failures.push(e),
                }
            }
            Err(e) => failures.push(e),
        }
    }
    if !failures.is_empty() {
        let config_only = failures
            .iter()
            .all(|f| matches!(f, EvalError::Reduction { .. }));
        for f in &failures {
            eprintln!("rhetor: {f}");
        }
        let message = format!("{} of {} documents failed", failures.len(), entries.len());
        return Err(if config_only {
            CliError::Config(message)
        } else {
            CliError::Io(message)
        });
    }

    let report =
        evaluate(&corpus, &catalog, ratio, basis).map_err(|e| CliError::Io(e.to_string()))?;
    print!("{}", render_table(&report));
    println!();
    print!("{}", render_records(&report));
    Ok(())
}
