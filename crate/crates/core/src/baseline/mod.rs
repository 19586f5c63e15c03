//! Reference BPE and WordPiece implementations used for comparison.

pub mod bpe;
pub mod wordpiece;

pub use bpe::{train_bpe, MergeTable};
pub use wordpiece::{train_wordpiece, WordPieceMerge, WordPieceVocab, CONTINUATION};
