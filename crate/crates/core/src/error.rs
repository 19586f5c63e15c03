use std::io;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: malformed syllable {entry:?}: {reason}")]
    MalformedEntry {
        line: usize,
        entry: String,
        reason: &'static str,
    },

    #[error("line {line}: placeholder \"-\" is not a syllable")]
    PlaceholderInData { line: usize },

    #[error("line {line}: {entry:?} conflicts with earlier entry {existing:?}")]
    ConflictingDuplicate {
        line: usize,
        entry: String,
        existing: String,
    },

    #[error("inventory is empty")]
    EmptyInventory,

    #[error("token id {id} is out of range for a vocabulary of {size}")]
    IdOutOfRange { id: u32, size: usize },

    #[error("{ids} ids but {flags} word-initial flags")]
    LengthMismatch { ids: usize, flags: usize },

    #[error("vocabulary line {line}: {reason}")]
    BadVocabulary { line: usize, reason: String },

    #[error("merge table line {line}: {reason}")]
    BadMergeTable { line: usize, reason: String },

    #[error("corpus is empty")]
    EmptyCorpus,

    #[error("train fraction {0} is outside (0, 1)")]
    InvalidFraction(f64),

    #[error("comparison needs at least two reports, got {0}")]
    TooFewReports(usize),

    #[error(transparent)]
    Io(#[from] io::Error),
}
