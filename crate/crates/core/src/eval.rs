//! Key-sentence coverage evaluation over an annotated corpus.
//!
//! A corpus manifest is line-oriented UTF-8: one document per line with
//! three whitespace-separated fields — document path (relative to the
//! manifest), comma-separated key sentence ids as `paragraph:sentence`
//! pairs, and the most important key sentence id. `#` starts a comment.
//!
//! Coverage rises with the target ratio on single-paragraph documents,
//! where abstracts nest. On multi-paragraph documents the second reduction
//! stage drops whole paragraphs, so coverage can dip locally as the ratio
//! grows.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::abstractor::{reduce_document, ReductionTarget, SentenceRef};
use crate::catalog::RelationCatalog;
use crate::ingest::{split_document, tag_relations, Document, IngestError};
use crate::parser::parse_document;

#[derive(Debug, Error)]
pub enum EvalError {
    #[error("manifest line {line}: {message}")]
    ManifestParse { line: usize, message: String },
    #[error("cannot read `{path}`: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("document `{doc_id}`: {source}")]
    Ingest { doc_id: String, source: IngestError },
    #[error("document `{doc_id}`: annotation {paragraph}:{sentence} does not exist")]
    DanglingAnnotation {
        doc_id: String,
        paragraph: usize,
        sentence: usize,
    },
    #[error("document `{doc_id}`: most important sentence is not among the key sentences")]
    MostImportantNotKey { doc_id: String },
    #[error("document `{doc_id}`: {source}")]
    Pipeline {
        doc_id: String,
        source: crate::parser::StructureError,
    },
    #[error("document `{doc_id}`: {source}")]
    Reduction {
        doc_id: String,
        source: crate::abstractor::AbstractError,
    },
}

/// Human judgement for one document: key sentences and the single most
/// important one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GoldAnnotation {
    pub doc_id: String,
    pub keys: BTreeSet<SentenceRef>,
    pub most_important: SentenceRef,
}

/// How the length ratio is measured.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LengthBasis {
    Sentences,
    Chars,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DocReport {
    pub doc_id: String,
    pub sentences: usize,
    pub kept: usize,
    pub length_ratio: f64,
    pub key_coverage: f64,
    pub mi_covered: bool,
}

/// Per-document rows plus corpus averages. Averages are macro: every
/// document weighs the same regardless of its length.
#[derive(Debug, Clone, PartialEq)]
pub struct CoverageReport {
    pub documents: Vec<DocReport>,
    pub length_ratio: f64,
    pub key_coverage: f64,
    pub mi_coverage: f64,
}

/// Runs the full pipeline on every document at the target ratio and
/// measures key-sentence coverage against the gold annotations.
pub fn evaluate(
    corpus: &[(Document, GoldAnnotation)],
    catalog: &RelationCatalog,
    ratio: f64,
    basis: LengthBasis,
) -> Result<CoverageReport, EvalError> {
    let mut documents = Vec::with_capacity(corpus.len());
    for (doc, gold) in corpus {
        for r in gold.keys.iter().chain([&gold.most_important]) {
            let exists = doc
                .paragraphs
                .get(r.paragraph - 1)
                .is_some_and(|p| r.sentence >= 1 && r.sentence <= p.sentences.len());
            if r.paragraph < 1 || !exists {
                return Err(EvalError::DanglingAnnotation {
                    doc_id: gold.doc_id.clone(),
                    paragraph: r.paragraph,
                    sentence: r.sentence,
                });
            }
        }
        if !gold.keys.contains(&gold.most_important) {
            return Err(EvalError::MostImportantNotKey {
                doc_id: gold.doc_id.clone(),
            });
        }

        let tagged = tag_relations(doc.clone(), catalog);
        let parsed = parse_document(&tagged, catalog).map_err(|source| EvalError::Pipeline {
            doc_id: gold.doc_id.clone(),
            source,
        })?;
        let selection = reduce_document(&tagged, &parsed, catalog, ReductionTarget::Ratio(ratio))
            .map_err(|source| EvalError::Reduction {
            doc_id: gold.doc_id.clone(),
            source,
        })?;

        let kept: BTreeSet<SentenceRef> = selection.kept.iter().copied().collect();
        let total = tagged.sentence_count();
        let length_ratio = match basis {
            LengthBasis::Sentences => kept.len() as f64 / total as f64,
            LengthBasis::Chars => {
                let chars = |r: &SentenceRef| {
                    tagged.paragraphs[r.paragraph - 1].sentences[r.sentence - 1]
                        .text
                        .chars()
                        .count()
                };
                let kept_chars: usize = kept.iter().map(chars).sum();
                let all_chars: usize = tagged
                    .paragraphs
                    .iter()
                    .flat_map(|p| &p.sentences)
                    .map(|s| s.text.chars().count())
                    .sum();
                kept_chars as f64 / all_chars as f64
            }
        };
        let covered = gold.keys.intersection(&kept).count();
        documents.push(DocReport {
            doc_id: gold.doc_id.clone(),
            sentences: total,
            kept: kept.len(),
            length_ratio,
            key_coverage: covered as f64 / gold.keys.len() as f64,
            mi_covered: kept.contains(&gold.most_important),
        });
    }

    let n = documents.len().max(1) as f64;
    Ok(CoverageReport {
        length_ratio: documents.iter().map(|d| d.length_ratio).sum::<f64>() / n,
        key_coverage: documents.iter().map(|d| d.key_coverage).sum::<f64>() / n,
        mi_coverage: documents.iter().filter(|d| d.mi_covered).count() as f64 / n,
        documents,
    })
}

/// One manifest line: document path and its annotations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ManifestEntry {
    pub path: PathBuf,
    pub doc_id: String,
    pub keys: Vec<SentenceRef>,
    pub most_important: SentenceRef,
}

/// Parses a corpus manifest; `base` anchors relative document paths.
pub fn parse_manifest(text: &str, base: &Path) -> Result<Vec<ManifestEntry>, EvalError> {
    let mut entries = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != 3 {
            return Err(EvalError::ManifestParse {
                line: line_no,
                message: format!(
                    "expected `path keys most-important`, got {} fields",
                    fields.len()
                ),
            });
        }
        let parse_ref = |s: &str| -> Result<SentenceRef, EvalError> {
            let (p, sent) = s.split_once(':').ok_or_else(|| EvalError::ManifestParse {
                line: line_no,
                message: format!("`{s}` is not a paragraph:sentence pair"),
            })?;
            let parse_num = |v: &str| {
                v.parse::<usize>().ok().filter(|&n| n >= 1).ok_or_else(|| {
                    EvalError::ManifestParse {
                        line: line_no,
                        message: format!("`{s}` is not a paragraph:sentence pair"),
                    }
                })
            };
            Ok(SentenceRef {
                paragraph: parse_num(p)?,
                sentence: parse_num(sent)?,
            })
        };
        let keys = fields[1]
            .split(',')
            .map(parse_ref)
            .collect::<Result<Vec<_>, _>>()?;
        let path = base.join(fields[0]);
        let doc_id = Path::new(fields[0])
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| fields[0].to_string());
        entries.push(ManifestEntry {
            path,
            doc_id,
            keys,
            most_important: parse_ref(fields[2])?,
        });
    }
    Ok(entries)
}

/// Reads every manifest document from disk and splits it.
pub fn load_corpus(
    entries: &[ManifestEntry],
) -> Result<Vec<(Document, GoldAnnotation)>, EvalError> {
    entries
        .iter()
        .map(|e| {
            let raw = fs::read_to_string(&e.path).map_err(|source| EvalError::Io {
                path: e.path.clone(),
                source,
            })?;
            let doc = split_document(&raw).map_err(|source| EvalError::Ingest {
                doc_id: e.doc_id.clone(),
                source,
            })?;
            Ok((
                doc,
                GoldAnnotation {
                    doc_id: e.doc_id.clone(),
                    keys: e.keys.iter().copied().collect(),
                    most_important: e.most_important,
                },
            ))
        })
        .collect()
}

/// Machine-readable key=value records, one line per document plus a total.
pub fn render_records(report: &CoverageReport) -> String {
    let mut out = String::new();
    for d in &report.documents {
        writeln!(
            out,
            "doc id={} sentences={} kept={} length_ratio={:.4} key_coverage={:.4} mi_coverage={}",
            d.doc_id,
            d.sentences,
            d.kept,
            d.length_ratio,
            d.key_coverage,
            u8::from(d.mi_covered)
        )
        .unwrap();
    }
    writeln!(
        out,
        "total docs={} length_ratio={:.4} key_coverage={:.4} mi_coverage={:.4}",
        report.documents.len(),
        report.length_ratio,
        report.key_coverage,
        report.mi_coverage
    )
    .unwrap();
    out
}

/// Human-readable summary table.
pub fn render_table(report: &CoverageReport) -> String {
    let mut out = String::new();
    writeln!(
        out,
        "{:<12} {:>9} {:>6} {:>12} {:>12} {:>8}",
        "document", "sentences", "kept", "length ratio", "key coverage", "mi"
    )
    .unwrap();
    for d in &report.documents {
        writeln!(
            out,
            "{:<12} {:>9} {:>6} {:>12.4} {:>12.4} {:>8}",
            d.doc_id,
            d.sentences,
            d.kept,
            d.length_ratio,
            d.key_coverage,
            if d.mi_covered { "yes" } else { "no" }
        )
        .unwrap();
    }
    writeln!(
        out,
        "{:<12} {:>9} {:>6} {:>12.4} {:>12.4} {:>8.4}",
        "average", "", "", report.length_ratio, report.key_coverage, report.mi_coverage
    )
    .unwrap();
    out
}
