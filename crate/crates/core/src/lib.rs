//! Rhetorical structure extraction and abstract generation for expository
//! text.
//!
//! The pipeline mirrors how connective expressions signal inter-sentence
//! relations: text is split into paragraphs and sentences, each sentence is
//! tagged with the relation its connective signals (extension by default),
//! a minimum-penalty binary rhetorical tree is built per paragraph and over
//! paragraph-initial sentences, and abstracts of any length fall out of the
//! tree by penalty-guided reduction.
//!
//! ```
//! use rhetor::{catalog, ingest, parser, abstractor};
//!
//! let cat = catalog::default_catalog();
//! let doc = ingest::tag_relations(
//!     ingest::split_document("This holds. Thus, we are done.").unwrap(),
//!     cat,
//! );
//! let parsed = parser::parse_document(&doc, cat).unwrap();
//! assert_eq!(parsed.paragraphs[0].tree.to_bracket(), "[1 <SR> 2]");
//! ```

pub mod abstractor;
pub mod catalog;
pub mod eval;
pub mod ingest;
pub mod parser;
pub mod tree;

pub use abstractor::{
    gradation_warning, propagate_penalties, reduce, reduce_document, render_abstract,
    render_penalty_tree, AbstractError, AbstractSelection, PenaltyAnnotation, ReductionTarget,
    Selection, SentenceRef,
};
pub use catalog::{
    default_catalog, CatalogError, LexiconEntry, NucleusClass, PreferenceRule, RelationCatalog,
    TagId,
};
pub use eval::{evaluate, CoverageReport, EvalError, GoldAnnotation, LengthBasis};
pub use ingest::{
    detect_segments, split_document, split_document_lines, tag_relations, Document, IngestError,
    Paragraph, SegmentConstraint, Sentence,
};
pub use parser::{
    enumerate_candidates, parse, parse_by_enumeration, parse_document, score_tree, DocumentParse,
    ParseResult, StructureError,
};
pub use tree::{parse_bracket, BracketError, RhetoricalTree};
