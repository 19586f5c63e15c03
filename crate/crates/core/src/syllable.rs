//! Syllable tokenization: normalize, split on whitespace, then cut each word
//! into inventory syllables.
//!
//! A word is segmented left to right, taking the longest inventory syllable
//! that still lets the rest of the word be segmented. This is the result a
//! longest-first backtracking search would return, computed with a
//! right-to-left table instead of a search. On plain consonant-vowel words
//! it is the same as cutting after every vowel; it also handles syllabic
//! nasals (`mtu` -> `m tu`) and prefers prenasalized clusters as one unit
//! (`ngwe`, not `n gwe`).
//!
//! When no full segmentation exists the table minimizes the number of
//! characters left uncovered. Each one becomes its own UNK token.

use std::fmt;

use crate::error::{Error, Result};
use crate::inventory::SyllableInventory;
use crate::text::{self, UnknownMode, UNK_MARKER};
use crate::vocab::{Vocabulary, UNK_ID};

/// One piece of a segmented word, borrowed from the word.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Segment<'w> {
    pub text: &'w str,
    /// Canonical inventory position, `None` for an uncovered character.
    pub syllable: Option<usize>,
}

impl Segment<'_> {
    pub fn is_unknown(&self) -> bool {
        self.syllable.is_none()
    }
}

#[derive(Clone, Copy)]
enum Step {
    Syllable { index: u32, chars: u32 },
    Unknown,
}

/// Segments one normalized, whitespace-free word.
pub fn syllabify_word<'w>(inventory: &SyllableInventory, word: &'w str) -> Vec<Segment<'w>> {
    let mut starts: Vec<usize> = word.char_indices().map(|(i, _)| i).collect();
    let n = starts.len();
    starts.push(word.len());

    // uncovered[i]: fewest uncovered chars when segmenting word[starts[i]..]
    let mut uncovered = vec![0u32; n + 1];
    let mut steps = vec![Step::Unknown; n];
    for i in (0..n).rev() {
        let mut best: Option<(u32, Step)> = None;
        // shortest first, so `<=` keeps the longest among equal costs
        for m in inventory.prefix_matches(&word[starts[i]..]) {
            let cost = uncovered[i + m.char_len];
            if best.is_none_or(|(b, _)| cost <= b) {
                best = Some((
                    cost,
                    Step::Syllable {
                        index: m.index as u32,
                        chars: m.char_len as u32,
                    },
                ));
            }
        }
        let skip = uncovered[i + 1] + 1;
        let (cost, step) = match best {
            Some((cost, step)) if cost <= skip => (cost, step),
            _ => (skip, Step::Unknown),
        };
        uncovered[i] = cost;
        steps[i] = step;
    }

    let mut out = Vec::new();
    let mut i = 0;
    while i < n {
        let (next, syllable) = match steps[i] {
            Step::Syllable { index, chars } => (i + chars as usize, Some(index as usize)),
            Step::Unknown => (i + 1, None),
        };
        out.push(Segment {
            text: &word[starts[i]..starts[next]],
            syllable,
        });
        i = next;
    }
    out
}

/// Syllable texts of a word; uncovered characters appear as themselves.
pub fn syllabify(inventory: &SyllableInventory, word: &str) -> Vec<String> {
    syllabify_word(inventory, word)
        .into_iter()
        .map(|s| s.text.to_owned())
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    /// Covered text; for UNK tokens, the uncovered character.
    pub text: String,
    pub id: u32,
    /// First token of its word.
    pub word_initial: bool,
}

impl Token {
    pub fn is_unknown(&self) -> bool {
        self.id == UNK_ID
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TokenSequence {
    tokens: Vec<Token>,
}

impl TokenSequence {
    pub fn tokens(&self) -> &[Token] {
        &self.tokens
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    pub fn ids(&self) -> Vec<u32> {
        self.tokens.iter().map(|t| t.id).collect()
    }

    pub fn word_initial_flags(&self) -> Vec<bool> {
        self.tokens.iter().map(|t| t.word_initial).collect()
    }

    pub fn texts(&self) -> Vec<&str> {
        self.tokens.iter().map(|t| t.text.as_str()).collect()
    }

    pub fn unknown_count(&self) -> usize {
        self.tokens.iter().filter(|t| t.is_unknown()).count()
    }

    /// Tokens grouped by word.
    pub fn words(&self) -> Vec<&[Token]> {
        let mut words = Vec::new();
        let mut start = 0;
        for (i, t) in self.tokens.iter().enumerate() {
            if t.word_initial && i > start {
                words.push(&self.tokens[start..i]);
                start = i;
            }
        }
        if start < self.tokens.len() {
            words.push(&self.tokens[start..]);
        }
        words
    }

    /// Tokens separated by spaces and words by `separator`. UNK tokens
    /// print as `[UNK]`.
    pub fn render(&self, separator: &str) -> String {
        let mut out = String::new();
        for (i, t) in self.tokens.iter().enumerate() {
            if i > 0 {
                out.push_str(if t.word_initial { separator } else { " " });
            }
            out.push_str(if t.is_unknown() { crate::vocab::UNK } else { &t.text });
        }
        out
    }

    /// Same layout as [`TokenSequence::render`] with ids instead of texts.
    pub fn render_ids(&self, separator: &str) -> String {
        let mut out = String::new();
        for (i, t) in self.tokens.iter().enumerate() {
            if i > 0 {
                out.push_str(if t.word_initial { separator } else { " " });
            }
            out.push_str(&t.id.to_string());
        }
        out
    }
}

impl fmt::Display for TokenSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(" | "))
    }
}

/// Inventory, vocabulary and unknown-character policy bundled together.
#[derive(Debug, Clone)]
pub struct SyllableTokenizer {
    inventory: SyllableInventory,
    vocab: Vocabulary,
    mode: UnknownMode,
}

impl Default for SyllableTokenizer {
    fn default() -> Self {
        Self::new(SyllableInventory::embedded().clone())
    }
}

impl SyllableTokenizer {
    pub fn new(inventory: SyllableInventory) -> Self {
        let vocab = Vocabulary::from_inventory(&inventory);
        SyllableTokenizer {
            inventory,
            vocab,
            mode: UnknownMode::Remove,
        }
    }

    pub fn with_unknown_mode(mut self, mode: UnknownMode) -> Self {
        self.mode = mode;
        self
    }

    pub fn inventory(&self) -> &SyllableInventory {
        &self.inventory
    }

    pub fn vocabulary(&self) -> &Vocabulary {
        &self.vocab
    }

    pub fn unknown_mode(&self) -> UnknownMode {
        self.mode
    }

    pub fn normalize(&self, text: &str) -> String {
        text::normalize_with(text, self.mode)
    }

    pub fn tokenize(&self, text: &str) -> TokenSequence {
        let normalized = self.normalize(text);
        let mut tokens = Vec::new();
        for word in text::pre_tokenize(&normalized) {
            self.push_word(word, &mut tokens);
        }
        TokenSequence { tokens }
    }

    /// Tokenizes a single already-normalized word.
    pub fn tokenize_word(&self, word: &str) -> TokenSequence {
        let mut tokens = Vec::new();
        self.push_word(word, &mut tokens);
        TokenSequence { tokens }
    }

    fn push_word(&self, word: &str, tokens: &mut Vec<Token>) {
        for (i, seg) in syllabify_word(&self.inventory, word).into_iter().enumerate() {
            tokens.push(Token {
                text: seg.text.to_owned(),
                id: seg.syllable.map_or(UNK_ID, |ix| ix as u32 + crate::vocab::SPECIAL_TOKENS.len() as u32),
                word_initial: i == 0,
            });
        }
    }

    pub fn encode(&self, tokens: &TokenSequence) -> Vec<u32> {
        encode(&self.vocab, tokens)
    }

    pub fn decode(&self, ids: &[u32], word_initial: &[bool]) -> Result<String> {
        decode(&self.vocab, ids, word_initial)
    }

    pub fn one_hot_shape(&self, ids: &[u32]) -> (usize, usize) {
        one_hot_shape(&self.vocab, ids)
    }
}

/// Ids of a token sequence; its length is the `m` of the one-hot matrix.
pub fn encode(vocab: &Vocabulary, tokens: &TokenSequence) -> Vec<u32> {
    tokens
        .tokens
        .iter()
        .map(|t| {
            debug_assert!(t.is_unknown() || vocab.token(t.id) == Some(t.text.as_str()));
            t.id
        })
        .collect()
}

/// Rebuilds text from ids, inserting a space before every word-initial
/// token after the first. PAD, BOS and EOS produce nothing; UNK produces
/// [`UNK_MARKER`].
pub fn decode(vocab: &Vocabulary, ids: &[u32], word_initial: &[bool]) -> Result<String> {
    if ids.len() != word_initial.len() {
        return Err(Error::LengthMismatch {
            ids: ids.len(),
            flags: word_initial.len(),
        });
    }
    let mut out = String::new();
    for (&id, &initial) in ids.iter().zip(word_initial) {
        let token = vocab.token(id).ok_or(Error::IdOutOfRange {
            id,
            size: vocab.len(),
        })?;
        if initial && !out.is_empty() {
            out.push(' ');
        }
        if id == UNK_ID {
            out.push(UNK_MARKER);
        } else if !vocab.is_special(id) {
            out.push_str(token);
        }
    }
    Ok(out)
}

/// `(rows, cols)` of the one-hot matrix for a sentence: one row per
/// inventory syllable, one column per token.
pub fn one_hot_shape(vocab: &Vocabulary, ids: &[u32]) -> (usize, usize) {
    debug_assert!(ids.iter().all(|&id| (id as usize) < vocab.len()));
    (vocab.inventory_len(), ids.len())
}
