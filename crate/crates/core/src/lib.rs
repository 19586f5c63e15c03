//! Syllable tokenization for Swahili, with reference BPE and WordPiece
//! tokenizers and corpus statistics for comparing the three.
//!
//! ```
//! use silabi::SyllableTokenizer;
//!
//! let tok = SyllableTokenizer::default();
//! let seq = tok.tokenize("Anakula mkate");
//! assert_eq!(seq.render(" | "), "a na ku la | m ka te");
//!
//! let ids = tok.encode(&seq);
//! let text = tok.decode(&ids, &seq.word_initial_flags()).unwrap();
//! assert_eq!(text, "anakula mkate");
//! ```

pub mod baseline;
pub mod cli;
pub mod corpus;
mod error;
pub mod inventory;
pub mod syllable;
pub mod text;
pub mod vocab;

pub use baseline::{train_bpe, train_wordpiece, MergeTable, WordPieceVocab};
pub use corpus::{compare, compute_report, split_corpus, CorpusReport, Segmenter, SplitSpec};
pub use error::{Error, Result};
pub use inventory::{Syllable, SyllableInventory, INVENTORY_SIZE};
pub use syllable::{decode, encode, one_hot_shape, syllabify_word, SyllableTokenizer, Token, TokenSequence};
pub use text::{normalize, normalize_with, pre_tokenize, UnknownMode};
pub use vocab::Vocabulary;
