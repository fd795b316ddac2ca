//! Relation catalog: relation tags, nucleus classes, the connective
//! lexicon, and structure preference rules.
//!
//! A catalog is loaded once from a TOML config (see `data/default_catalog.toml`
//! for the shipped default and the format documentation) and is immutable
//! afterwards, so it can be shared freely across pipeline instances.

use std::collections::HashMap;
use std::fmt;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Tag id of the extension relation, the default for sentences without any
/// connective. Every catalog must declare it.
pub const EXTENSION_TAG: &str = "EX";

const DEFAULT_CATALOG_TOML: &str = include_str!("../data/default_catalog.toml");

/// Short symbolic name of a rhetorical relation, e.g. `SR` or `EX`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct TagId(String);

impl TagId {
    pub fn new(id: impl Into<String>) -> Self {
        TagId(id.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    /// Tag ids appear between angle brackets in bracket notation, so they
    /// must be bracket- and whitespace-free.
    pub fn is_valid(&self) -> bool {
        !self.0.is_empty()
            && self
                .0
                .chars()
                .all(|c| c.is_alphanumeric() || c == '_' || c == '-')
    }
}

impl fmt::Display for TagId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for TagId {
    fn from(s: &str) -> Self {
        TagId::new(s)
    }
}

/// Which side of a relation carries the important node.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum NucleusClass {
    #[serde(rename = "right")]
    RightNucleus,
    #[serde(rename = "left")]
    LeftNucleus,
    #[serde(rename = "both")]
    BothNucleus,
}

/// A relation tag together with its display name and nucleus class.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelationDef {
    pub id: TagId,
    pub name: String,
    pub nucleus: NucleusClass,
}

/// Where a lexicon pattern may match inside a sentence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PatternPosition {
    /// Pattern tokens must open the sentence. The matched surface is
    /// consumed and re-inserted ahead of the sentence body when rendering
    /// an abstract.
    Start,
    /// Pattern tokens may occur anywhere in the sentence (sentence-predicate
    /// cues). The surface is recorded but left in place.
    Predicate,
}

/// One connective lexicon entry: a literal token-sequence pattern mapped to
/// a relation tag.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LexiconEntry {
    pub pattern: String,
    pub tag: TagId,
    #[serde(default)]
    pub priority: i32,
    #[serde(default = "default_position")]
    pub position: PatternPosition,
}

fn default_position() -> PatternPosition {
    PatternPosition::Start
}

/// A tag id or the wildcard `*`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TagPattern {
    Any,
    Tag(TagId),
}

impl TagPattern {
    pub fn matches(&self, tag: &TagId) -> bool {
        match self {
            TagPattern::Any => true,
            TagPattern::Tag(t) => t == tag,
        }
    }
}

impl Serialize for TagPattern {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        match self {
            TagPattern::Any => ser.serialize_str("*"),
            TagPattern::Tag(t) => ser.serialize_str(t.as_str()),
        }
    }
}

impl<'de> Deserialize<'de> for TagPattern {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> Result<Self, D::Error> {
        let s = String::deserialize(de)?;
        Ok(if s == "*" {
            TagPattern::Any
        } else {
            TagPattern::Tag(TagId::new(s))
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ChildPosition {
    Left,
    Right,
}

/// Local preference on consecutive relations: fires on an internal node
/// whose relation matches `parent` when the child at `child_position` is an
/// internal node whose root relation matches `child_root`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PreferenceRule {
    pub parent: TagPattern,
    pub child_position: ChildPosition,
    pub child_root: TagPattern,
    pub penalty: u32,
}

#[derive(Debug, Error)]
pub enum CatalogError {
    #[error("catalog parse error: {0}")]
    Parse(#[from] toml::de::Error),
    #[error("duplicate relation tag `{0}`")]
    DuplicateTag(TagId),
    #[error("invalid relation tag `{0}`: must be non-empty alphanumeric/_/-")]
    InvalidTag(TagId),
    #[error("catalog does not declare the extension tag `{EXTENSION_TAG}`")]
    MissingExtensionTag,
    #[error("unknown relation tag `{tag}` referenced by {referent}")]
    UnknownTag { tag: TagId, referent: String },
    #[error("empty lexicon pattern for tag `{0}`")]
    EmptyPattern(TagId),
    #[error("preference rule #{0} has penalty 0; active rules require penalty >= 1")]
    ZeroPenalty(usize),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct CatalogConfig {
    relations: Vec<RelationDef>,
    #[serde(default)]
    lexicon: Vec<LexiconEntry>,
    #[serde(default)]
    preferences: Vec<PreferenceRule>,
}

/// Immutable set of relation tags, nucleus classes, lexicon entries and
/// preference rules.
#[derive(Debug, Clone, PartialEq)]
pub struct RelationCatalog {
    relations: Vec<RelationDef>,
    by_id: HashMap<TagId, usize>,
    lexicon: Vec<LexiconEntry>,
    preferences: Vec<PreferenceRule>,
}

impl RelationCatalog {
    /// Parses and validates a catalog from TOML config text.
    pub fn load(source: &str) -> Result<Self, CatalogError> {
        let config: CatalogConfig = toml::from_str(source)?;
        Self::from_config(config)
    }

    fn from_config(config: CatalogConfig) -> Result<Self, CatalogError> {
        let mut by_id = HashMap::new();
        for def in &config.relations {
            if !def.id.is_valid() {
                return Err(CatalogError::InvalidTag(def.id.clone()));
            }
            if by_id.insert(def.id.clone(), by_id.len()).is_some() {
                return Err(CatalogError::DuplicateTag(def.id.clone()));
            }
        }
        if !by_id.contains_key(&TagId::new(EXTENSION_TAG)) {
            return Err(CatalogError::MissingExtensionTag);
        }
        for entry in &config.lexicon {
            if entry.pattern.trim().is_empty() {
                return Err(CatalogError::EmptyPattern(entry.tag.clone()));
            }
            if !by_id.contains_key(&entry.tag) {
                return Err(CatalogError::UnknownTag {
                    tag: entry.tag.clone(),
                    referent: format!("lexicon pattern `{}`", entry.pattern),
                });
            }
        }
        for (i, rule) in config.preferences.iter().enumerate() {
            for pat in [&rule.parent, &rule.child_root] {
                if let TagPattern::Tag(tag) = pat {
                    if !by_id.contains_key(tag) {
                        return Err(CatalogError::UnknownTag {
                            tag: tag.clone(),
                            referent: format!("preference rule #{}", i + 1),
                        });
                    }
                }
            }
            if rule.penalty == 0 {
                return Err(CatalogError::ZeroPenalty(i + 1));
            }
        }
        Ok(RelationCatalog {
            relations: config.relations,
            by_id,
            lexicon: config.lexicon,
            preferences: config.preferences,
        })
    }

    /// Serializes back to config text. Reloading the result yields an equal
    /// catalog.
    pub fn to_config_string(&self) -> String {
        let config = CatalogConfig {
            relations: self.relations.clone(),
            lexicon: self.lexicon.clone(),
            preferences: self.preferences.clone(),
        };
        toml::to_string_pretty(&config).expect("catalog serializes")
    }

    pub fn relations(&self) -> &[RelationDef] {
        &self.relations
    }

    pub fn lexicon(&self) -> &[LexiconEntry] {
        &self.lexicon
    }

    pub fn preference_rules(&self) -> &[PreferenceRule] {
        &self.preferences
    }

    pub fn contains(&self, tag: &TagId) -> bool {
        self.by_id.contains_key(tag)
    }

    pub fn extension_tag(&self) -> TagId {
        TagId::new(EXTENSION_TAG)
    }

    /// Nucleus class of a tag.
    pub fn nucleus_of(&self, tag: &TagId) -> Result<NucleusClass, CatalogError> {
        self.by_id
            .get(tag)
            .map(|&i| self.relations[i].nucleus)
            .ok_or_else(|| CatalogError::UnknownTag {
                tag: tag.clone(),
                referent: "nucleus lookup".to_string(),
            })
    }
}

/// The embedded default catalog: the twelve exemplified relations with
/// their nucleus classes, an English demo lexicon, and the shipped
/// preference rules.
pub fn default_catalog() -> &'static RelationCatalog {
    static CATALOG: OnceLock<RelationCatalog> = OnceLock::new();
    CATALOG.get_or_init(|| {
        RelationCatalog::load(DEFAULT_CATALOG_TOML).expect("embedded default catalog is valid")
    })
}

/// Raw text of the embedded default catalog config.
pub fn default_catalog_source() -> &'static str {
    DEFAULT_CATALOG_TOML
}
