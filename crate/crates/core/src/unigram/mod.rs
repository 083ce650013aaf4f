//! Unigram tokenizer model: vocabulary, normalization, serialization and
//! Viterbi segmentation.

mod lattice;
mod trie;

use std::collections::{BTreeSet, HashMap};
use std::fs;
use std::path::{Path, PathBuf};

use serde::Deserialize;
use thiserror::Error;
use unicode_normalization::UnicodeNormalization;

use crate::canonical;
use trie::Trie;

pub use lattice::{Piece, Segmentation};

/// Default word-boundary marker (U+2581).
pub const DEFAULT_MARKER: char = '▁';

pub const FORMAT_NAME: &str = "transmi-unigram";
pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum ModelError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("malformed tokenizer document: {0}")]
    Malformed(String),
    #[error("duplicate surface {0:?}")]
    DuplicateSurface(String),
    #[error("tokenizer document declares no unk token")]
    MissingUnk,
    #[error("{role} surface {surface:?} is not in the vocabulary")]
    UnknownSurface { role: &'static str, surface: String },
    #[error("entry {0} has an empty surface")]
    EmptySurface(usize),
    #[error("surface {0:?} has a non-finite score")]
    NonFiniteScore(String),
    #[error("addition {0:?} collides with an existing surface")]
    Collision(String),
    #[error("addition {0:?} appears more than once")]
    DuplicateAddition(String),
}

impl ModelError {
    fn io(path: &Path, source: std::io::Error) -> Self {
        ModelError::Io {
            path: path.to_path_buf(),
            source,
        }
    }
}

#[derive(Debug, Clone)]
pub struct TokenEntry {
    pub surface: String,
    pub score: f64,
    pub id: u32,
}

/// An immutable Unigram vocabulary with per-subword log-probability scores.
///
/// Entry order defines token ids. Special tokens (and the unk token) are
/// never produced by segmentation matching and never transliterated.
#[derive(Debug, Clone)]
pub struct UnigramModel {
    entries: Vec<TokenEntry>,
    index: HashMap<String, u32>,
    unk: u32,
    specials: BTreeSet<u32>,
    marker: char,
    trie: Trie,
}

impl PartialEq for UnigramModel {
    fn eq(&self, other: &Self) -> bool {
        self.unk == other.unk
            && self.marker == other.marker
            && self.specials == other.specials
            && self.entries.len() == other.entries.len()
            && self
                .entries
                .iter()
                .zip(&other.entries)
                .all(|(a, b)| a.surface == b.surface && a.score.to_bits() == b.score.to_bits())
    }
}

impl UnigramModel {
    /// Builds a model from `(surface, score)` pairs in id order.
    ///
    /// `unk` and every member of `specials` must name surfaces in `vocab`.
    pub fn new<S: AsRef<str>>(
        vocab: Vec<(String, f64)>,
        unk: &str,
        specials: &[S],
        marker: char,
    ) -> Result<Self, ModelError> {
        let mut entries = Vec::with_capacity(vocab.len());
        let mut index = HashMap::with_capacity(vocab.len());
        for (pos, (surface, score)) in vocab.into_iter().enumerate() {
            if surface.is_empty() {
                return Err(ModelError::EmptySurface(pos));
            }
            if !score.is_finite() {
                return Err(ModelError::NonFiniteScore(surface));
            }
            let id = u32::try_from(pos)
                .map_err(|_| ModelError::Malformed("vocabulary exceeds u32 ids".into()))?;
            if index.insert(surface.clone(), id).is_some() {
                return Err(ModelError::DuplicateSurface(surface));
            }
            entries.push(TokenEntry { surface, score, id });
        }
        let lookup = |role: &'static str, surface: &str| {
            index
                .get(surface)
                .copied()
                .ok_or_else(|| ModelError::UnknownSurface {
                    role,
                    surface: surface.to_string(),
                })
        };
        let unk = lookup("unk", unk)?;
        let specials = specials
            .iter()
            .map(|s| lookup("special", s.as_ref()))
            .collect::<Result<BTreeSet<_>, _>>()?;
        let trie = Trie::build(
            entries
                .iter()
                .filter(|e| e.id != unk && !specials.contains(&e.id))
                .map(|e| (e.surface.as_str(), e.id)),
        );
        Ok(UnigramModel {
            entries,
            index,
            unk,
            specials,
            marker,
            trie,
        })
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[TokenEntry] {
        &self.entries
    }

    pub fn entry(&self, id: u32) -> Option<&TokenEntry> {
        self.entries.get(id as usize)
    }

    pub fn id_of(&self, surface: &str) -> Option<u32> {
        self.index.get(surface).copied()
    }

    pub fn contains(&self, surface: &str) -> bool {
        self.index.contains_key(surface)
    }

    pub fn unk_id(&self) -> u32 {
        self.unk
    }

    pub fn unk_score(&self) -> f64 {
        self.entries[self.unk as usize].score
    }

    /// Special ids as declared; see [`UnigramModel::is_special`] for the
    /// effective set, which also includes unk.
    pub fn specials(&self) -> &BTreeSet<u32> {
        &self.specials
    }

    pub fn is_special(&self, id: u32) -> bool {
        id == self.unk || self.specials.contains(&id)
    }

    pub fn marker(&self) -> char {
        self.marker
    }

    pub fn normalize(&self, text: &str) -> String {
        normalize(text, self.marker)
    }

    /// Highest total score over all segmentations of the normalized text.
    pub fn best_score(&self, text: &str) -> f64 {
        self.tokenize(text).total_score
    }

    /// Returns a new model with `additions` appended after the existing
    /// entries. Scores are stored as given, without renormalization.
    pub fn extend_vocabulary(&self, additions: &[(String, f64)]) -> Result<Self, ModelError> {
        let mut seen = BTreeSet::new();
        for (surface, _) in additions {
            if self.contains(surface) {
                return Err(ModelError::Collision(surface.clone()));
            }
            if !seen.insert(surface.as_str()) {
                return Err(ModelError::DuplicateAddition(surface.clone()));
            }
        }
        let vocab = self
            .entries
            .iter()
            .map(|e| (e.surface.clone(), e.score))
            .chain(additions.iter().cloned())
            .collect();
        let specials: Vec<&str> = self
            .specials
            .iter()
            .map(|&id| self.entries[id as usize].surface.as_str())
            .collect();
        UnigramModel::new(
            vocab,
            &self.entries[self.unk as usize].surface,
            &specials,
            self.marker,
        )
    }

    /// Canonical JSON document: sorted keys, no whitespace, entries in id
    /// order, shortest round-trip scores. Equal models yield equal text.
    pub fn to_canonical_json(&self) -> String {
        let mut out = String::with_capacity(32 * self.entries.len() + 128);
        out.push('{');
        canonical::push_key(&mut out, "format");
        canonical::push_str(&mut out, FORMAT_NAME);
        out.push(',');
        canonical::push_key(&mut out, "marker");
        canonical::push_str(&mut out, self.marker.encode_utf8(&mut [0; 4]));
        out.push(',');
        canonical::push_key(&mut out, "specials");
        out.push('[');
        for (i, &id) in self.specials.iter().enumerate() {
            if i > 0 {
                out.push(',');
            }
            canonical::push_str(&mut out, &self.entries[id as usize].surface);
        }
        out.push_str("],");
        canonical::push_key(&mut out, "unk");
        canonical::push_str(&mut out, &self.entries[self.unk as usize].surface);
        out.push(',');
        canonical::push_key(&mut out, "version");
        canonical::push_u64(&mut out, u64::from(FORMAT_VERSION));
        out.push(',');
        canonical::push_key(&mut out, "vocab");
        out.push('[');
        for (i, e) in self.entries.iter().enumerate() {
            if i > 0 {
                out.push(',');
            }
            out.push('[');
            canonical::push_str(&mut out, &e.surface);
            out.push(',');
            canonical::push_f64(&mut out, e.score);
            out.push(']');
        }
        out.push_str("]}");
        out
    }

    pub fn from_json(text: &str) -> Result<Self, ModelError> {
        let doc: ModelDocument =
            serde_json::from_str(text).map_err(|e| ModelError::Malformed(e.to_string()))?;
        if doc.format != FORMAT_NAME {
            return Err(ModelError::Malformed(format!(
                "unsupported format {:?}",
                doc.format
            )));
        }
        if doc.version != FORMAT_VERSION {
            return Err(ModelError::Malformed(format!(
                "unsupported version {}",
                doc.version
            )));
        }
        let marker = {
            let mut chars = doc.marker.chars();
            match (chars.next(), chars.next()) {
                (Some(c), None) => c,
                _ => {
                    return Err(ModelError::Malformed(format!(
                        "marker must be a single character, got {:?}",
                        doc.marker
                    )))
                }
            }
        };
        let unk = doc.unk.ok_or(ModelError::MissingUnk)?;
        UnigramModel::new(doc.vocab, &unk, &doc.specials, marker)
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ModelDocument {
    format: String,
    version: u32,
    #[serde(default = "default_marker")]
    marker: String,
    unk: Option<String>,
    #[serde(default)]
    specials: Vec<String>,
    vocab: Vec<(String, f64)>,
}

fn default_marker() -> String {
    DEFAULT_MARKER.to_string()
}

pub fn load_model(path: impl AsRef<Path>) -> Result<UnigramModel, ModelError> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| ModelError::io(path, e))?;
    UnigramModel::from_json(&text)
}

pub fn save_model(model: &UnigramModel, path: impl AsRef<Path>) -> Result<(), ModelError> {
    let path = path.as_ref();
    fs::write(path, model.to_canonical_json()).map_err(|e| ModelError::io(path, e))
}

/// NFKC, spaces replaced by `marker`, and `marker` prefixed to non-empty text.
pub fn normalize(text: &str, marker: char) -> String {
    if text.is_empty() {
        return String::new();
    }
    let mut out = String::with_capacity(text.len() + marker.len_utf8());
    out.push(marker);
    for c in text.nfkc() {
        out.push(if c == ' ' { marker } else { c });
    }
    out
}
