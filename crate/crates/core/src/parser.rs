//! Rhetorical structure construction: candidate enumeration, preference
//! scoring, and minimum-penalty parsing.
//!
//! The production path is a chart dynamic program over spans. Because a
//! preference rule only inspects a node's relation and one child's root
//! relation, the chart state is (span, root relation) and the optimum equals
//! the minimum over exhaustively enumerated candidates. Enumeration is kept
//! as a test oracle and for inspection of small inputs.
//!
//! Ties are broken by preferring the larger left sub-span at every node,
//! applied top-down, which yields the most left-branching minimum-penalty
//! tree and makes output deterministic.

use thiserror::Error;

use crate::catalog::{ChildPosition, PreferenceRule, RelationCatalog, TagId};
use crate::ingest::{detect_segments_full, Document, SegmentConstraint, Sentence};
use crate::tree::RhetoricalTree;

/// Upper bound for exhaustive enumeration (Catalan growth).
pub const MAX_ENUMERATION_UNITS: usize = 12;

#[derive(Debug, Error)]
pub enum StructureError {
    #[error("cannot parse an empty unit sequence")]
    EmptySequence,
    #[error("{n} units exceed the enumeration limit of {max}")]
    TooManyUnits { n: usize, max: usize },
    #[error("constraint [{start}, {end}] is invalid for {n} units")]
    InvalidConstraint { start: usize, end: usize, n: usize },
    #[error("constraints [{0}, {1}] and [{2}, {3}] partially overlap")]
    NonLaminarConstraints(usize, usize, usize, usize),
    #[error("internal invariant breach: {0}")]
    Internal(String),
}

/// Outcome of parsing one unit sequence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseResult {
    pub tree: RhetoricalTree,
    /// Sum of violated preference-rule penalties.
    pub penalty: u32,
    /// Number of constraint-respecting candidates; filled by the
    /// enumeration path only.
    pub candidates: Option<usize>,
}

/// Per-paragraph parses plus the inter-paragraph parse.
#[derive(Debug, Clone)]
pub struct DocumentParse {
    pub paragraphs: Vec<ParseResult>,
    pub inter: ParseResult,
    /// Segment-detection warnings, in document order.
    pub warnings: Vec<String>,
}

fn check_constraints(n: usize, constraints: &[SegmentConstraint]) -> Result<(), StructureError> {
    for c in constraints {
        if c.start < 1 || c.start >= c.end || c.end > n {
            return Err(StructureError::InvalidConstraint {
                start: c.start,
                end: c.end,
                n,
            });
        }
    }
    for (i, a) in constraints.iter().enumerate() {
        for b in &constraints[i + 1..] {
            let nested =
                (a.start <= b.start && b.end <= a.end) || (b.start <= a.start && a.end <= b.end);
            let disjoint = a.end < b.start || b.end < a.start;
            if !nested && !disjoint {
                return Err(StructureError::NonLaminarConstraints(
                    a.start, a.end, b.start, b.end,
                ));
            }
        }
    }
    Ok(())
}

/// Every binary tree over units `1..=n` whose node relations follow the
/// tag-of-right-span rule and which realizes each constraint as a node span.
/// `tags[u - 1]` is the tag of unit `u`; the first unit's tag is never used.
pub fn enumerate_candidates(
    tags: &[TagId],
    constraints: &[SegmentConstraint],
) -> Result<Vec<RhetoricalTree>, StructureError> {
    let n = tags.len();
    if n == 0 {
        return Err(StructureError::EmptySequence);
    }
    if n > MAX_ENUMERATION_UNITS {
        return Err(StructureError::TooManyUnits {
            n,
            max: MAX_ENUMERATION_UNITS,
        });
    }
    check_constraints(n, constraints)?;

    fn gen(i: usize, j: usize, tags: &[TagId]) -> Vec<RhetoricalTree> {
        if i == j {
            return vec![RhetoricalTree::Leaf(i)];
        }
        let mut out = Vec::new();
        for k in i..j {
            let lefts = gen(i, k, tags);
            let rights = gen(k + 1, j, tags);
            for l in &lefts {
                for r in &rights {
                    out.push(RhetoricalTree::node(tags[k].clone(), l.clone(), r.clone()));
                }
            }
        }
        out
    }

    let mut all = gen(1, n, tags);
    all.retain(|t| constraints.iter().all(|c| t.has_span(c.start, c.end)));
    Ok(all)
}

/// Sum over internal nodes of the penalties of all rules matching the node
/// relation, a child position, and that child's root relation. Leaf children
/// match no rule.
pub fn score_tree(tree: &RhetoricalTree, rules: &[PreferenceRule]) -> u32 {
    match tree {
        RhetoricalTree::Leaf(_) => 0,
        RhetoricalTree::Node {
            relation,
            left,
            right,
        } => {
            let mut total = score_tree(left, rules) + score_tree(right, rules);
            for (child, position) in [(left, ChildPosition::Left), (right, ChildPosition::Right)] {
                if let Some(child_root) = child.relation() {
                    total += rules
                        .iter()
                        .filter(|r| {
                            r.child_position == position
                                && r.parent.matches(relation)
                                && r.child_root.matches(child_root)
                        })
                        .map(|r| r.penalty)
                        .sum::<u32>();
                }
            }
            total
        }
    }
}

/// Oracle-mode parse: exhaustive enumeration plus scoring. Reports the
/// candidate count and the minimum penalty; the returned tree is an
/// arbitrary minimizer (first in generation order).
pub fn parse_by_enumeration(
    tags: &[TagId],
    constraints: &[SegmentConstraint],
    rules: &[PreferenceRule],
) -> Result<ParseResult, StructureError> {
    let candidates = enumerate_candidates(tags, constraints)?;
    let best = candidates
        .iter()
        .map(|t| (score_tree(t, rules), t))
        .min_by_key(|(p, _)| *p)
        .ok_or_else(|| StructureError::Internal("no candidate satisfies constraints".into()))?;
    Ok(ParseResult {
        tree: best.1.clone(),
        penalty: best.0,
        candidates: Some(candidates.len()),
    })
}

const INF: u32 = u32::MAX / 4;

/// Chart over spans; `m[span][tag]` is the minimum penalty of a tree over
/// the span whose root relation is `tag`.
struct Chart {
    n: usize,
    t: usize,
    distinct: Vec<TagId>,
    unit_tag: Vec<usize>, // unit u (1-based) -> distinct-tag index, at [u - 1]
    pen: [Vec<u32>; 2],   // [side][parent * t + child]
    allowed: Vec<bool>,   // [span]
    m: Vec<u32>,          // [span * t + tag]
}

impl Chart {
    fn span(&self, i: usize, j: usize) -> usize {
        (i - 1) * self.n + (j - 1)
    }

    fn build(tags: &[TagId], constraints: &[SegmentConstraint], rules: &[PreferenceRule]) -> Chart {
        let n = tags.len();
        let mut distinct: Vec<TagId> = Vec::new();
        let mut unit_tag = Vec::with_capacity(n);
        for tag in tags {
            let idx = distinct.iter().position(|t| t == tag).unwrap_or_else(|| {
                distinct.push(tag.clone());
                distinct.len() - 1
            });
            unit_tag.push(idx);
        }
        let t = distinct.len();

        let mut pen = [vec![0u32; t * t], vec![0u32; t * t]];
        for (side, position) in [(0, ChildPosition::Left), (1, ChildPosition::Right)] {
            for (p, parent) in distinct.iter().enumerate() {
                for (c, child) in distinct.iter().enumerate() {
                    pen[side][p * t + c] = rules
                        .iter()
                        .filter(|r| {
                            r.child_position == position
                                && r.parent.matches(parent)
                                && r.child_root.matches(child)
                        })
                        .map(|r| r.penalty)
                        .sum();
                }
            }
        }

        let mut allowed = vec![true; n * n];
        for i in 1..=n {
            for j in i..=n {
                let crosses = constraints.iter().any(|c| {
                    (c.start < i && i <= c.end && c.end < j)
                        || (i < c.start && c.start <= j && j < c.end)
                });
                allowed[(i - 1) * n + (j - 1)] = !crosses;
            }
        }

        let mut chart = Chart {
            n,
            t,
            distinct,
            unit_tag,
            pen,
            allowed,
            m: vec![INF; n * n * t],
        };
        chart.fill();
        chart
    }

    /// Minimum penalty of a subtree over `[a, b]` as the `position` child of
    /// a parent with relation `parent`; 0 for leaf children.
    fn best_child(&self, a: usize, b: usize, parent: usize, side: usize) -> u32 {
        if a == b {
            return 0;
        }
        let base = self.span(a, b) * self.t;
        (0..self.t)
            .map(|c| self.m[base + c].saturating_add(self.pen[side][parent * self.t + c]))
            .min()
            .unwrap_or(INF)
    }

    /// Penalty of the best tree over `[i, j]` splitting at `k`.
    fn split_cost(&self, i: usize, j: usize, k: usize) -> u32 {
        if !self.allowed[self.span(i, k)] || !self.allowed[self.span(k + 1, j)] {
            return INF;
        }
        let r = self.unit_tag[k]; // relation of a node splitting at k is the tag of unit k + 1
        self.best_child(i, k, r, 0)
            .saturating_add(self.best_child(k + 1, j, r, 1))
    }

    fn fill(&mut self) {
        for len in 2..=self.n {
            for i in 1..=self.n - len + 1 {
                let j = i + len - 1;
                if !self.allowed[self.span(i, j)] {
                    continue;
                }
                for k in i..j {
                    let cost = self.split_cost(i, j, k);
                    let cell = self.span(i, j) * self.t + self.unit_tag[k];
                    if cost < self.m[cell] {
                        self.m[cell] = cost;
                    }
                }
            }
        }
    }

    /// Rebuilds the winning tree top-down. Among splits achieving the
    /// minimum (penalty within the given parent context), the largest left
    /// sub-span wins.
    fn reconstruct(&self, i: usize, j: usize, context: Option<(usize, usize)>) -> RhetoricalTree {
        if i == j {
            return RhetoricalTree::Leaf(i);
        }
        let ctx = |k: usize| match context {
            Some((parent, side)) => self.pen[side][parent * self.t + self.unit_tag[k]],
            None => 0,
        };
        let best = (i..j)
            .map(|k| self.split_cost(i, j, k).saturating_add(ctx(k)))
            .min()
            .expect("non-empty split range");
        let k = (i..j)
            .rev()
            .find(|&k| self.split_cost(i, j, k).saturating_add(ctx(k)) == best)
            .expect("minimum is attained");
        let r = self.unit_tag[k];
        RhetoricalTree::node(
            self.distinct[r].clone(),
            self.reconstruct(i, k, Some((r, 0))),
            self.reconstruct(k + 1, j, Some((r, 1))),
        )
    }
}

/// Minimum-penalty constraint-respecting parse via the chart dynamic
/// program. `tags[u - 1]` is the tag of unit `u`.
pub fn parse(
    tags: &[TagId],
    constraints: &[SegmentConstraint],
    rules: &[PreferenceRule],
) -> Result<ParseResult, StructureError> {
    let n = tags.len();
    if n == 0 {
        return Err(StructureError::EmptySequence);
    }
    check_constraints(n, constraints)?;
    if n == 1 {
        return Ok(ParseResult {
            tree: RhetoricalTree::Leaf(1),
            penalty: 0,
            candidates: None,
        });
    }

    let chart = Chart::build(tags, constraints, rules);
    let penalty = (1..n).map(|k| chart.split_cost(1, n, k)).min().unwrap();
    if penalty >= INF {
        return Err(StructureError::Internal(
            "no tree satisfies the segmentation constraints".into(),
        ));
    }
    let tree = chart.reconstruct(1, n, None);
    debug_assert_eq!(score_tree(&tree, rules), penalty);
    Ok(ParseResult {
        tree,
        penalty,
        candidates: None,
    })
}

/// Runs the chart parser over every paragraph and then over the sequence of
/// paragraph-initial sentences (the inter-paragraph layer), applying segment
/// detection at both layers.
pub fn parse_document(
    doc: &Document,
    catalog: &RelationCatalog,
) -> Result<DocumentParse, StructureError> {
    let rules = catalog.preference_rules();
    let mut paragraphs = Vec::with_capacity(doc.paragraphs.len());
    let mut warnings = Vec::new();

    for para in &doc.paragraphs {
        let tags: Vec<TagId> = para.sentences.iter().map(|s| s.tag.clone()).collect();
        let scan = detect_segments_full(&para.sentences, catalog);
        for w in scan.warnings {
            warnings.push(format!("paragraph {}: {w}", para.index));
        }
        paragraphs.push(parse(&tags, &scan.constraints, rules)?);
    }

    let firsts: Vec<Sentence> = doc
        .paragraphs
        .iter()
        .map(|p| {
            let mut s = p.sentences[0].clone();
            s.index = p.index;
            s
        })
        .collect();
    let tags: Vec<TagId> = firsts.iter().map(|s| s.tag.clone()).collect();
    let scan = detect_segments_full(&firsts, catalog);
    for w in scan.warnings {
        warnings.push(format!("inter-paragraph layer: {w}"));
    }
    let inter = parse(&tags, &scan.constraints, rules)?;

    Ok(DocumentParse {
        paragraphs,
        inter,
        warnings,
    })
}
