//! Binary rhetorical trees and their bracket notation.
//!
//! Bracket grammar, bit-exact:
//!
//! ```text
//! tree := index | "[" tree " <" TAG "> " tree "]"
//! ```
//!
//! e.g. `[[[1 <EX> 2] <ES> [3 <EG> [4 <EX> 5]]] <SR> 6]`.

use std::fmt;

use thiserror::Error;

use crate::catalog::TagId;

/// Binary tree over consecutive text units (sentences or paragraphs).
/// Leaves carry 1-based unit indices; internal nodes carry the relation of
/// their right sub-span to the preceding part.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RhetoricalTree {
    Leaf(usize),
    Node {
        relation: TagId,
        left: Box<RhetoricalTree>,
        right: Box<RhetoricalTree>,
    },
}

impl RhetoricalTree {
    pub fn node(relation: TagId, left: RhetoricalTree, right: RhetoricalTree) -> Self {
        RhetoricalTree::Node {
            relation,
            left: Box::new(left),
            right: Box::new(right),
        }
    }

    pub fn is_leaf(&self) -> bool {
        matches!(self, RhetoricalTree::Leaf(_))
    }

    /// Root relation; `None` for a leaf.
    pub fn relation(&self) -> Option<&TagId> {
        match self {
            RhetoricalTree::Leaf(_) => None,
            RhetoricalTree::Node { relation, .. } => Some(relation),
        }
    }

    /// (first, last) unit index covered by this subtree.
    pub fn span(&self) -> (usize, usize) {
        match self {
            RhetoricalTree::Leaf(i) => (*i, *i),
            RhetoricalTree::Node { left, right, .. } => (left.span().0, right.span().1),
        }
    }

    pub fn leaf_count(&self) -> usize {
        match self {
            RhetoricalTree::Leaf(_) => 1,
            RhetoricalTree::Node { left, right, .. } => left.leaf_count() + right.leaf_count(),
        }
    }

    /// Leaf indices in in-order.
    pub fn leaves(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.leaf_count());
        self.collect_leaves(&mut out);
        out
    }

    fn collect_leaves(&self, out: &mut Vec<usize>) {
        match self {
            RhetoricalTree::Leaf(i) => out.push(*i),
            RhetoricalTree::Node { left, right, .. } => {
                left.collect_leaves(out);
                right.collect_leaves(out);
            }
        }
    }

    /// True when the tree contains a node (or leaf) spanning exactly
    /// `[start, end]`.
    pub fn has_span(&self, start: usize, end: usize) -> bool {
        let (s, e) = self.span();
        if s == start && e == end {
            return true;
        }
        match self {
            RhetoricalTree::Leaf(_) => false,
            RhetoricalTree::Node { left, right, .. } => {
                // Spans are contiguous: only the child containing `start`
                // can contain the whole interval.
                if start <= left.span().1 {
                    left.has_span(start, end)
                } else {
                    right.has_span(start, end)
                }
            }
        }
    }

    /// Bracket-notation rendering.
    pub fn to_bracket(&self) -> String {
        let mut s = String::new();
        self.write_bracket(&mut s);
        s
    }

    fn write_bracket(&self, out: &mut String) {
        match self {
            RhetoricalTree::Leaf(i) => {
                out.push_str(&i.to_string());
            }
            RhetoricalTree::Node {
                relation,
                left,
                right,
            } => {
                out.push('[');
                left.write_bracket(out);
                out.push_str(" <");
                out.push_str(relation.as_str());
                out.push_str("> ");
                right.write_bracket(out);
                out.push(']');
            }
        }
    }
}

impl fmt::Display for RhetoricalTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_bracket())
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum BracketError {
    #[error("unexpected end of input at byte {0}")]
    UnexpectedEnd(usize),
    #[error("unexpected character `{1}` at byte {0}")]
    UnexpectedChar(usize, char),
    #[error("empty relation tag at byte {0}")]
    EmptyTag(usize),
    #[error("trailing input after tree at byte {0}")]
    TrailingInput(usize),
}

/// Parses bracket notation produced by [`RhetoricalTree::to_bracket`].
pub fn parse_bracket(input: &str) -> Result<RhetoricalTree, BracketError> {
    let bytes = input.as_bytes();
    let (tree, pos) = parse_tree(bytes, 0)?;
    if pos != bytes.len() {
        return Err(BracketError::TrailingInput(pos));
    }
    Ok(tree)
}

fn parse_tree(bytes: &[u8], pos: usize) -> Result<(RhetoricalTree, usize), BracketError> {
    match bytes.get(pos) {
        None => Err(BracketError::UnexpectedEnd(pos)),
        Some(b'[') => {
            let (left, pos) = parse_tree(bytes, pos + 1)?;
            let pos = expect(bytes, pos, b" <")?;
            let tag_start = pos;
            let mut pos = pos;
            while pos < bytes.len() && bytes[pos] != b'>' {
                pos += 1;
            }
            if pos == bytes.len() {
                return Err(BracketError::UnexpectedEnd(pos));
            }
            if pos == tag_start {
                return Err(BracketError::EmptyTag(pos));
            }
            let tag = TagId::new(std::str::from_utf8(&bytes[tag_start..pos]).unwrap());
            let pos = expect(bytes, pos, b"> ")?;
            let (right, pos) = parse_tree(bytes, pos)?;
            match bytes.get(pos) {
                Some(b']') => Ok((RhetoricalTree::node(tag, left, right), pos + 1)),
                Some(&c) => Err(BracketError::UnexpectedChar(pos, c as char)),
                None => Err(BracketError::UnexpectedEnd(pos)),
            }
        }
        Some(c) if c.is_ascii_digit() => {
            let mut end = pos;
            while end < bytes.len() && bytes[end].is_ascii_digit() {
                end += 1;
            }
            let idx: usize = std::str::from_utf8(&bytes[pos..end])
                .unwrap()
                .parse()
                .unwrap();
            Ok((RhetoricalTree::Leaf(idx), end))
        }
        Some(&c) => Err(BracketError::UnexpectedChar(pos, c as char)),
    }
}

fn expect(bytes: &[u8], pos: usize, lit: &[u8]) -> Result<usize, BracketError> {
    if bytes.len() < pos + lit.len() {
        return Err(BracketError::UnexpectedEnd(bytes.len()));
    }
    if &bytes[pos..pos + lit.len()] != lit {
        return Err(BracketError::UnexpectedChar(pos, bytes[pos] as char));
    }
    Ok(pos + lit.len())
}
