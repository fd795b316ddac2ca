//! Text ingestion: paragraph/sentence splitting, relation tagging from the
//! connective lexicon, and detection of distant-sentence segmentation
//! constraints.
//!
//! Splitting is deliberately lightweight: blank lines separate paragraphs,
//! sentences end at `.`/`!`/`?` followed by whitespace (modulo an
//! abbreviation stop list), and everything downstream consumes only surface
//! connective matches, so no deeper analysis is required.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::catalog::{PatternPosition, RelationCatalog, TagId, EXTENSION_TAG};

/// Tokens ending in `.` that do not close a sentence.
const ABBREVIATIONS: &[&str] = &[
    "mr.", "mrs.", "ms.", "dr.", "prof.", "st.", "no.", "nos.", "fig.", "figs.", "eq.", "sec.",
    "cf.", "e.g.", "i.e.", "etc.", "vs.", "al.", "inc.", "ltd.", "co.", "jr.", "sr.", "p.", "pp.",
];

/// Ordinal words that open enumeration members.
const ORDINALS: &[(&str, u32)] = &[
    ("first", 1),
    ("firstly", 1),
    ("second", 2),
    ("secondly", 2),
    ("third", 3),
    ("thirdly", 3),
    ("fourth", 4),
    ("fifth", 5),
    ("sixth", 6),
    ("seventh", 7),
    ("eighth", 8),
    ("ninth", 9),
    ("tenth", 10),
];

/// Enumeration chains may be closed by these instead of an ordinal.
const CHAIN_CLOSERS: &[&str] = &["finally", "lastly"];

#[derive(Debug, Error)]
pub enum IngestError {
    #[error("input contains no text")]
    EmptyInput,
}

/// A connective match recorded on a sentence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Connective {
    /// Raw matched surface, e.g. `Thus,` or `particularly`.
    pub surface: String,
    pub position: PatternPosition,
    /// Byte offset into the sentence text where the body begins. Zero for
    /// predicate-position matches, which are not consumed.
    pub body_offset: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sentence {
    /// 1-based position within the paragraph.
    pub index: usize,
    /// Verbatim source text of the sentence.
    pub text: String,
    /// Whitespace that followed the sentence in its paragraph block.
    pub trailing: String,
    pub connective: Option<Connective>,
    /// Relation to the preceding part of the text. Defaults to `EX`; the
    /// first sentence's tag is never consumed by tree construction.
    pub tag: TagId,
}

impl Sentence {
    /// Sentence text with a consumed start connective removed.
    pub fn body(&self) -> &str {
        match &self.connective {
            Some(c) if c.position == PatternPosition::Start => &self.text[c.body_offset..],
            _ => &self.text,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Paragraph {
    /// 1-based position in the document.
    pub index: usize,
    pub sentences: Vec<Sentence>,
}

impl Paragraph {
    /// Rebuilds the paragraph block byte-for-byte from sentence texts and
    /// recorded separators.
    pub fn reconstruct(&self) -> String {
        let mut out = String::new();
        for s in &self.sentences {
            out.push_str(&s.text);
            out.push_str(&s.trailing);
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Document {
    pub paragraphs: Vec<Paragraph>,
}

impl Document {
    pub fn sentence_count(&self) -> usize {
        self.paragraphs.iter().map(|p| p.sentences.len()).sum()
    }
}

/// What a multi-sentence rhetorical pattern spans.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SegmentKind {
    Enumeration,
    Concession,
}

/// A sentence span `[start, end]` that must form a complete subtree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SegmentConstraint {
    pub start: usize,
    pub end: usize,
    pub kind: SegmentKind,
}

/// Constraints plus any warnings about dropped overlapping patterns.
#[derive(Debug, Clone, Default)]
pub struct SegmentScan {
    pub constraints: Vec<SegmentConstraint>,
    pub warnings: Vec<String>,
}

/// Splits raw text into blank-line-separated paragraphs of
/// punctuation-delimited sentences.
pub fn split_document(raw: &str) -> Result<Document, IngestError> {
    let paragraphs: Vec<Paragraph> = blocks(raw)
        .into_iter()
        .enumerate()
        .map(|(i, block)| Paragraph {
            index: i + 1,
            sentences: split_sentences(block),
        })
        .collect();
    if paragraphs.is_empty() {
        return Err(IngestError::EmptyInput);
    }
    Ok(Document { paragraphs })
}

/// One-sentence-per-line mode: every non-blank line is a sentence, blank
/// lines still separate paragraphs.
pub fn split_document_lines(raw: &str) -> Result<Document, IngestError> {
    let paragraphs: Vec<Paragraph> = blocks(raw)
        .into_iter()
        .enumerate()
        .map(|(i, block)| {
            let mut sentences = Vec::new();
            let mut rest = block;
            while !rest.is_empty() {
                let (line, tail) = match rest.split_once('\n') {
                    Some((l, t)) => (l, t),
                    None => (rest, ""),
                };
                let text = line.trim();
                if !text.is_empty() {
                    let start = line.as_ptr() as usize - block.as_ptr() as usize
                        + (line.len() - line.trim_start().len());
                    let end = start + text.len();
                    sentences.push((start, end));
                }
                rest = tail;
            }
            Paragraph {
                index: i + 1,
                sentences: materialize(block, &sentences),
            }
        })
        .collect();
    if paragraphs.is_empty() {
        return Err(IngestError::EmptyInput);
    }
    Ok(Document { paragraphs })
}

/// Maximal whitespace-trimmed runs of non-blank lines.
fn blocks(raw: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let mut block_start: Option<usize> = None;
    let mut pos = 0;
    for line in raw.split_inclusive('\n') {
        if line.trim().is_empty() {
            if let Some(start) = block_start.take() {
                out.push(raw[start..pos].trim());
            }
        } else if block_start.is_none() {
            block_start = Some(pos);
        }
        pos += line.len();
    }
    if let Some(start) = block_start {
        out.push(raw[start..pos].trim());
    }
    out.retain(|b| !b.is_empty());
    out
}

/// Splits a paragraph block on terminal punctuation followed by whitespace.
fn split_sentences(block: &str) -> Vec<Sentence> {
    let bytes = block.as_bytes();
    let mut ranges: Vec<(usize, usize)> = Vec::new();
    let mut start = 0;
    let mut i = 0;
    while i < bytes.len() {
        let b = bytes[i];
        if (b == b'.' || b == b'!' || b == b'?')
            && bytes.get(i + 1).is_some_and(|n| n.is_ascii_whitespace())
            && !(b == b'.' && is_abbreviation(block, i))
        {
            ranges.push((start, i + 1));
            let mut j = i + 1;
            while j < bytes.len() && bytes[j].is_ascii_whitespace() {
                j += 1;
            }
            start = j;
            i = j;
        } else {
            i += 1;
        }
    }
    if start < bytes.len() {
        ranges.push((start, bytes.len()));
    }
    materialize(block, &ranges)
}

fn materialize(block: &str, ranges: &[(usize, usize)]) -> Vec<Sentence> {
    ranges
        .iter()
        .enumerate()
        .map(|(i, &(s, e))| {
            let next = ranges.get(i + 1).map(|r| r.0).unwrap_or(block.len());
            Sentence {
                index: i + 1,
                text: block[s..e].to_string(),
                trailing: block[e..next].to_string(),
                connective: None,
                tag: TagId::new(EXTENSION_TAG),
            }
        })
        .collect()
}

/// True when the `.` at byte `dot` ends a stop-list abbreviation.
fn is_abbreviation(block: &str, dot: usize) -> bool {
    let before = &block[..=dot];
    let token_start = before
        .rfind(|c: char| c.is_whitespace())
        .map(|p| p + 1)
        .unwrap_or(0);
    let token = before[token_start..].trim_start_matches(|c: char| !c.is_alphanumeric());
    ABBREVIATIONS.iter().any(|a| a.eq_ignore_ascii_case(token))
}

/// A whitespace-delimited token with its byte span and a normalized form
/// (lowercased, edge punctuation stripped).
#[derive(Debug, Clone)]
struct Token {
    norm: String,
    start: usize,
    end: usize,
}

fn tokenize(text: &str) -> Vec<Token> {
    let mut out = Vec::new();
    let mut iter = text.char_indices().peekable();
    while let Some(&(start, c)) = iter.peek() {
        if c.is_whitespace() {
            iter.next();
            continue;
        }
        let mut end = start;
        while let Some(&(i, c)) = iter.peek() {
            if c.is_whitespace() {
                break;
            }
            end = i + c.len_utf8();
            iter.next();
        }
        let raw = &text[start..end];
        let norm: String = raw
            .trim_matches(|c: char| !c.is_alphanumeric())
            .to_lowercase();
        out.push(Token { norm, start, end });
    }
    out
}

fn normalize_pattern(pattern: &str) -> Vec<String> {
    pattern
        .split_whitespace()
        .map(|t| {
            t.trim_matches(|c: char| !c.is_alphanumeric())
                .to_lowercase()
        })
        .filter(|t| !t.is_empty())
        .collect()
}

fn window_matches(tokens: &[Token], at: usize, pattern: &[String]) -> bool {
    tokens.len() >= at + pattern.len()
        && pattern.iter().zip(&tokens[at..]).all(|(p, t)| *p == t.norm)
}

/// Assigns a relation tag to every sentence from the catalog lexicon;
/// sentences without a match keep `EX` and no connective. Conflicts resolve
/// longest-pattern-first, then by priority, then by catalog order.
pub fn tag_relations(mut doc: Document, catalog: &RelationCatalog) -> Document {
    let patterns: Vec<(Vec<String>, usize)> = catalog
        .lexicon()
        .iter()
        .enumerate()
        .map(|(i, e)| (normalize_pattern(&e.pattern), i))
        .collect();

    for para in &mut doc.paragraphs {
        for sentence in &mut para.sentences {
            let tokens = tokenize(&sentence.text);
            let mut best: Option<(usize, usize, usize)> = None; // (entry, tok_start, tok_len)
            let mut best_key = (0usize, i32::MIN, usize::MAX); // (chars, priority, order)
            for (norm, idx) in &patterns {
                if norm.is_empty() {
                    continue;
                }
                let entry = &catalog.lexicon()[*idx];
                let found = match entry.position {
                    PatternPosition::Start => window_matches(&tokens, 0, norm).then_some(0),
                    PatternPosition::Predicate => {
                        (0..tokens.len()).find(|&at| window_matches(&tokens, at, norm))
                    }
                };
                if let Some(at) = found {
                    let chars: usize = norm.iter().map(|t| t.len()).sum::<usize>() + norm.len() - 1;
                    let key = (chars, entry.priority, *idx);
                    let better = key.0 > best_key.0
                        || (key.0 == best_key.0
                            && (key.1 > best_key.1 || (key.1 == best_key.1 && key.2 < best_key.2)));
                    if better {
                        best_key = key;
                        best = Some((*idx, at, norm.len()));
                    }
                }
            }
            match best {
                Some((idx, at, len)) => {
                    let entry = &catalog.lexicon()[idx];
                    let (surface, body_offset) = match entry.position {
                        PatternPosition::Start => {
                            let mut end = tokens[at + len - 1].end;
                            if sentence.text[end..].starts_with(',') {
                                end += 1;
                            }
                            let body = end
                                + sentence.text[end..]
                                    .find(|c: char| !c.is_whitespace())
                                    .unwrap_or(sentence.text.len() - end);
                            (sentence.text[tokens[at].start..end].to_string(), body)
                        }
                        PatternPosition::Predicate => (
                            sentence.text[tokens[at].start..tokens[at + len - 1].end].to_string(),
                            0,
                        ),
                    };
                    sentence.tag = entry.tag.clone();
                    sentence.connective = Some(Connective {
                        surface,
                        position: entry.position,
                        body_offset,
                    });
                }
                None => {
                    sentence.tag = catalog.extension_tag();
                    sentence.connective = None;
                }
            }
        }
    }
    doc
}

/// Detects distant-sentence rhetorical patterns over a tagged sentence run:
/// enumerations (`First, ... Second, ... Third, ...`) spanning the first to
/// the last enumerator sentence, and concession pairs (a supplement-tagged
/// sentence later answered by a negative-tagged one). Partially overlapping
/// detections keep the longer span; the result is laminar.
pub fn detect_segments(
    sentences: &[Sentence],
    _catalog: &RelationCatalog,
) -> Vec<SegmentConstraint> {
    detect_segments_full(sentences, _catalog).constraints
}

/// Like [`detect_segments`] but also reports dropped-overlap warnings.
pub fn detect_segments_full(sentences: &[Sentence], _catalog: &RelationCatalog) -> SegmentScan {
    let mut found = Vec::new();
    enumeration_chains(sentences, &mut found);
    concession_pairs(sentences, &mut found);

    // Laminar enforcement: longer spans win over partially overlapping
    // shorter ones.
    found.sort_by(|a, b| {
        (b.end - b.start)
            .cmp(&(a.end - a.start))
            .then(a.start.cmp(&b.start))
    });
    let mut scan = SegmentScan::default();
    for c in found {
        let mut conflict = None;
        let mut duplicate = false;
        for kept in &scan.constraints {
            if kept.start == c.start && kept.end == c.end {
                duplicate = true;
                break;
            }
            let nested = (kept.start <= c.start && c.end <= kept.end)
                || (c.start <= kept.start && kept.end <= c.end);
            let disjoint = c.end < kept.start || kept.end < c.start;
            if !nested && !disjoint {
                conflict = Some(kept.clone());
                break;
            }
        }
        if duplicate {
            continue;
        }
        match conflict {
            None => scan.constraints.push(c),
            Some(kept) => scan.warnings.push(format!(
                "dropped {:?} constraint [{}, {}]: partially overlaps {:?} constraint [{}, {}]",
                c.kind, c.start, c.end, kept.kind, kept.start, kept.end
            )),
        }
    }
    scan.constraints
        .sort_by(|a, b| a.start.cmp(&b.start).then(b.end.cmp(&a.end)));
    scan
}

fn first_token_norm(sentence: &Sentence) -> Option<String> {
    tokenize(&sentence.text).first().map(|t| t.norm.clone())
}

struct Chain {
    start: usize,
    end: usize,
    last_rank: u32,
    members: usize,
}

fn enumeration_chains(sentences: &[Sentence], out: &mut Vec<SegmentConstraint>) {
    fn close(chain: Option<Chain>, out: &mut Vec<SegmentConstraint>) {
        if let Some(c) = chain {
            if c.members >= 2 && c.start < c.end {
                out.push(SegmentConstraint {
                    start: c.start,
                    end: c.end,
                    kind: SegmentKind::Enumeration,
                });
            }
        }
    }

    let mut chain: Option<Chain> = None;
    for sentence in sentences {
        let Some(word) = first_token_norm(sentence) else {
            continue;
        };
        let rank = ORDINALS.iter().find(|(w, _)| *w == word).map(|&(_, r)| r);
        if rank == Some(1) {
            close(chain.take(), out);
            chain = Some(Chain {
                start: sentence.index,
                end: sentence.index,
                last_rank: 1,
                members: 1,
            });
        } else if let (Some(r), Some(c)) = (rank, chain.as_mut()) {
            if r > c.last_rank {
                c.end = sentence.index;
                c.last_rank = r;
                c.members += 1;
            }
        } else if CHAIN_CLOSERS.contains(&word.as_str()) {
            if let Some(mut c) = chain.take() {
                c.end = sentence.index;
                c.members += 1;
                close(Some(c), out);
            }
        }
    }
    close(chain.take(), out);
}

fn concession_pairs(sentences: &[Sentence], out: &mut Vec<SegmentConstraint>) {
    let mut i = 0;
    while i < sentences.len() {
        if sentences[i].tag.as_str() == "SP" {
            if let Some(j) = sentences[i + 1..]
                .iter()
                .position(|s| s.tag.as_str() == "NG")
            {
                let closer = &sentences[i + 1 + j];
                out.push(SegmentConstraint {
                    start: sentences[i].index,
                    end: closer.index,
                    kind: SegmentKind::Concession,
                });
                i += 1 + j + 1;
                continue;
            }
        }
        i += 1;
    }
}
