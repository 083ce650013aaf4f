//! Training-free adaptation of Unigram tokenizers to Latin-transliterated text.
//!
//! The pipeline has three stages:
//!
//! 1. every vocabulary subword is transliterated into Latin script with a
//!    rule table ([`translit`]),
//! 2. the transliterations are merged into the vocabulary, resolving
//!    ambiguous transliterations with a [`merge::MergeMode`] ([`merge`]),
//! 3. embedding rows for the new subwords are initialized from the original
//!    embedding matrix ([`embed`]).
//!
//! [`unigram`] provides the tokenizer model itself and its Viterbi
//! segmentation; [`cli`] wires everything into the `transmi` binary.

pub mod cli;
pub mod embed;
pub mod merge;
pub mod translit;
pub mod unigram;

mod canonical;

pub use embed::{EmbedError, EmbeddingMatrix};
pub use merge::{MergeMode, MergeOutput, MergeReport, Provenance, Resolution};
pub use translit::{RuleError, RuleTable};
pub use unigram::{ModelError, Segmentation, UnigramModel};
