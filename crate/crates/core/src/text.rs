//! Normalization and whitespace pre-tokenization shared by every scheme.
//!
//! Normalized text is NFC, lowercase, and restricted to `a`-`z`, the
//! canonical apostrophe and single spaces. Anything else is either dropped
//! ([`UnknownMode::Remove`]) or replaced by [`UNK_MARKER`]
//! ([`UnknownMode::Flag`]).

use unicode_normalization::UnicodeNormalization;

/// The apostrophe every variant is folded to.
pub const APOSTROPHE: char = '\'';

/// Stand-in for an unknown character when unknowns are kept.
pub const UNK_MARKER: char = '\u{FFFD}';

/// What to do with characters outside the normalized alphabet.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub enum UnknownMode {
    /// Drop them.
    #[default]
    Remove,
    /// Replace each with [`UNK_MARKER`] so it surfaces as an UNK token.
    Flag,
}

pub fn is_apostrophe(c: char) -> bool {
    matches!(c, '\'' | '\u{2019}' | '\u{02BC}')
}

/// Folds apostrophe variants to [`APOSTROPHE`] and nothing else.
pub fn canonicalize_apostrophes(s: &str) -> String {
    s.chars()
        .map(|c| if is_apostrophe(c) { APOSTROPHE } else { c })
        .collect()
}

pub fn normalize(text: &str) -> String {
    normalize_with(text, UnknownMode::Remove)
}

pub fn normalize_with(text: &str, mode: UnknownMode) -> String {
    let mut out = String::with_capacity(text.len());
    // Pending separator; emitted lazily so runs collapse and edges trim.
    let mut space = false;
    let push = |out: &mut String, c: char, space: &mut bool| {
        if *space && !out.is_empty() {
            out.push(' ');
        }
        *space = false;
        out.push(c);
    };
    for c in text.nfc() {
        if c.is_whitespace() {
            space = true;
            continue;
        }
        for c in c.to_lowercase() {
            if c.is_ascii_lowercase() {
                push(&mut out, c, &mut space);
            } else if is_apostrophe(c) {
                push(&mut out, APOSTROPHE, &mut space);
            } else if mode == UnknownMode::Flag {
                push(&mut out, UNK_MARKER, &mut space);
            }
        }
    }
    out
}

/// Splits normalized text into its nonempty whitespace-delimited words.
pub fn pre_tokenize(text: &str) -> Vec<&str> {
    text.split_whitespace().collect()
}
