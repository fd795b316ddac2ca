//! Abstract generation: penalty propagation over a rhetorical tree,
//! structure reduction to a target length, and text realization with
//! re-inserted connectives.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::catalog::{NucleusClass, PatternPosition, RelationCatalog, TagId};
use crate::ingest::Document;
use crate::parser::DocumentParse;
use crate::tree::RhetoricalTree;

#[derive(Debug, Error)]
pub enum AbstractError {
    #[error("target {target} out of range 1..={n}")]
    TargetOutOfRange { target: usize, n: usize },
    #[error("ratio {0} out of range (0, 1]")]
    RatioOutOfRange(f64),
    #[error("relation `{0}` has no nucleus class in the catalog")]
    UnknownTag(TagId),
}

/// Importance penalties for every node of a tree, keyed by leaf span.
/// Penalties grow from the root (0) towards less important terminals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PenaltyAnnotation {
    by_span: BTreeMap<(usize, usize), u32>,
}

impl PenaltyAnnotation {
    pub fn node(&self, span: (usize, usize)) -> Option<u32> {
        self.by_span.get(&span).copied()
    }

    pub fn leaf(&self, unit: usize) -> u32 {
        self.by_span[&(unit, unit)]
    }

    /// `(unit, penalty)` pairs for all leaves, in unit order.
    pub fn leaf_penalties(&self) -> Vec<(usize, u32)> {
        self.by_span
            .iter()
            .filter(|((s, e), _)| s == e)
            .map(|((s, _), &p)| (*s, p))
            .collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&(usize, usize), &u32)> {
        self.by_span.iter()
    }
}

/// Adds penalties from the root to the terminals: the satellite side of a
/// single-nucleus relation is incremented by one, both sides of a
/// both-nucleus relation inherit unchanged.
pub fn propagate_penalties(
    tree: &RhetoricalTree,
    catalog: &RelationCatalog,
) -> Result<PenaltyAnnotation, AbstractError> {
    fn walk(
        tree: &RhetoricalTree,
        penalty: u32,
        catalog: &RelationCatalog,
        out: &mut BTreeMap<(usize, usize), u32>,
    ) -> Result<(), AbstractError> {
        out.insert(tree.span(), penalty);
        if let RhetoricalTree::Node {
            relation,
            left,
            right,
        } = tree
        {
            let class = catalog
                .nucleus_of(relation)
                .map_err(|_| AbstractError::UnknownTag(relation.clone()))?;
            let (dl, dr) = match class {
                NucleusClass::RightNucleus => (1, 0),
                NucleusClass::LeftNucleus => (0, 1),
                NucleusClass::BothNucleus => (0, 0),
            };
            walk(left, penalty + dl, catalog, out)?;
            walk(right, penalty + dr, catalog, out)?;
        }
        Ok(())
    }

    let mut by_span = BTreeMap::new();
    walk(tree, 0, catalog, &mut by_span)?;
    Ok(PenaltyAnnotation { by_span })
}

/// Kept units after reducing one tree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Selection {
    /// Kept unit indices, ascending.
    pub kept: Vec<usize>,
    /// Maximum penalty among kept units.
    pub threshold: u32,
}

/// Cuts terminal nodes, highest penalty level first, until `target` units
/// remain. When removing a whole level would undershoot, only enough units
/// at that level are cut, taken from the end of the document backwards.
pub fn reduce(
    tree: &RhetoricalTree,
    annotation: &PenaltyAnnotation,
    target: usize,
) -> Result<Selection, AbstractError> {
    let n = tree.leaf_count();
    if target < 1 || target > n {
        return Err(AbstractError::TargetOutOfRange { target, n });
    }

    let mut kept = annotation.leaf_penalties();
    loop {
        let max = kept.iter().map(|&(_, p)| p).max().unwrap();
        let at_max = kept.iter().filter(|&&(_, p)| p == max).count();
        if at_max == kept.len() || kept.len() - at_max < target {
            break;
        }
        kept.retain(|&(_, p)| p != max);
    }
    while kept.len() > target {
        // tail tie rule: drop the latest sentence among the worst
        let max = kept.iter().map(|&(_, p)| p).max().unwrap();
        let pos = kept.iter().rposition(|&(_, p)| p == max).unwrap();
        kept.remove(pos);
    }

    let threshold = kept.iter().map(|&(_, p)| p).max().unwrap();
    Ok(Selection {
        kept: kept.into_iter().map(|(u, _)| u).collect(),
        threshold,
    })
}

/// Address of a sentence in a document: 1-based paragraph and sentence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SentenceRef {
    pub paragraph: usize,
    pub sentence: usize,
}

/// Document-level abstract: the kept sentences and the realized text.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AbstractSelection {
    /// Kept sentences in document order.
    pub kept: Vec<SentenceRef>,
    /// Inter-paragraph penalty cutoff: maximum penalty among retained
    /// paragraphs.
    pub threshold: u32,
    pub rendered: String,
}

/// Document reduction target.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ReductionTarget {
    /// Fraction of sentences to keep, in (0, 1].
    Ratio(f64),
    /// Absolute document-wide sentence budget.
    Sentences(usize),
}

/// Two-stage document reduction: each paragraph is reduced to the budget
/// first, then whole paragraphs are dropped by inter-paragraph penalties,
/// worst and latest first, until the document budget is met. At least one
/// sentence always survives.
pub fn reduce_document(
    doc: &Document,
    parsed: &DocumentParse,
    catalog: &RelationCatalog,
    target: ReductionTarget,
) -> Result<AbstractSelection, AbstractError> {
    let total: usize = doc.paragraphs.iter().map(|p| p.sentences.len()).sum();
    let budget = match target {
        ReductionTarget::Ratio(r) => {
            if !(r > 0.0 && r <= 1.0) {
                return Err(AbstractError::RatioOutOfRange(r));
            }
            (((r * total as f64).ceil()) as usize).clamp(1, total)
        }
        ReductionTarget::Sentences(n) => {
            if n < 1 || n > total {
                return Err(AbstractError::TargetOutOfRange {
                    target: n,
                    n: total,
                });
            }
            n
        }
    };

    // stage 1: intra-paragraph reduction, budget rounded up per paragraph
    let mut selections = Vec::with_capacity(doc.paragraphs.len());
    for (para, result) in doc.paragraphs.iter().zip(&parsed.paragraphs) {
        let n = para.sentences.len();
        let para_target = match target {
            ReductionTarget::Ratio(r) => (((r * n as f64).ceil()) as usize).clamp(1, n),
            ReductionTarget::Sentences(budget) => (n * budget).div_ceil(total).clamp(1, n),
        };
        let annotation = propagate_penalties(&result.tree, catalog)?;
        selections.push(reduce(&result.tree, &annotation, para_target)?);
    }

    // stage 2: inter-paragraph reduction over whole paragraphs
    let inter = propagate_penalties(&parsed.inter.tree, catalog)?;
    let mut alive: Vec<bool> = vec![true; doc.paragraphs.len()];
    let mut kept_total: usize = selections.iter().map(|s| s.kept.len()).sum();
    while kept_total > budget && alive.iter().filter(|a| **a).count() > 1 {
        let victim = (0..alive.len())
            .filter(|&i| alive[i])
            .max_by_key(|&i| (inter.leaf(i + 1), i))
            .unwrap();
        alive[victim] = false;
        kept_total -= selections[victim].kept.len();
    }

    let mut kept = Vec::with_capacity(kept_total);
    for (i, sel) in selections.iter().enumerate() {
        if alive[i] {
            for &s in &sel.kept {
                kept.push(SentenceRef {
                    paragraph: i + 1,
                    sentence: s,
                });
            }
        }
    }
    let threshold = (0..alive.len())
        .filter(|&i| alive[i])
        .map(|i| inter.leaf(i + 1))
        .max()
        .unwrap_or(0);
    let rendered = render_abstract(&kept, doc);
    Ok(AbstractSelection {
        kept,
        threshold,
        rendered,
    })
}

/// Realizes abstract text: kept sentences in document order, each preceded
/// by its consumed start connective (first letter capitalized), single
/// spaces between sentences, a blank line between paragraphs.
pub fn render_abstract(kept: &[SentenceRef], doc: &Document) -> String {
    let mut out = String::new();
    let mut last_para = 0;
    for r in kept {
        let sentence = &doc.paragraphs[r.paragraph - 1].sentences[r.sentence - 1];
        if !out.is_empty() {
            out.push_str(if r.paragraph != last_para {
                "\n\n"
            } else {
                " "
            });
        }
        match &sentence.connective {
            Some(c) if c.position == PatternPosition::Start => {
                out.push_str(&capitalize_first(&c.surface));
                if !sentence.body().is_empty() {
                    out.push(' ');
                    out.push_str(sentence.body());
                }
            }
            _ => out.push_str(&sentence.text),
        }
        last_para = r.paragraph;
    }
    out
}

/// Bracket notation decorated with per-node penalties: leaves render as
/// `i(p=N)`, internal nodes as `[left <TAG> right](p=N)`.
pub fn render_penalty_tree(tree: &RhetoricalTree, annotation: &PenaltyAnnotation) -> String {
    let p = annotation.node(tree.span()).unwrap_or(0);
    match tree {
        RhetoricalTree::Leaf(i) => format!("{i}(p={p})"),
        RhetoricalTree::Node {
            relation,
            left,
            right,
        } => format!(
            "[{} <{relation}> {}](p={p})",
            render_penalty_tree(left, annotation),
            render_penalty_tree(right, annotation)
        ),
    }
}

/// The caveat for loosely written text: when more than half of the leaves
/// share one penalty value the reduction cannot gradate between them.
/// Returns a warning for trees of at least two leaves; behavior is never
/// changed by this.
pub fn gradation_warning(annotation: &PenaltyAnnotation) -> Option<String> {
    let leaves = annotation.leaf_penalties();
    if leaves.len() < 2 {
        return None;
    }
    let mut counts: BTreeMap<u32, usize> = BTreeMap::new();
    for &(_, p) in &leaves {
        *counts.entry(p).or_insert(0) += 1;
    }
    let (&value, &count) = counts.iter().max_by_key(|(_, c)| **c).unwrap();
    (count * 2 > leaves.len()).then(|| {
        format!(
            "{count} of {} sentences share penalty {value}; penalties cannot gradate the reduction",
            leaves.len()
        )
    })
}

fn capitalize_first(s: &str) -> String {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) => c.to_uppercase().collect::<String>() + chars.as_str(),
        None => String::new(),
    }
}
