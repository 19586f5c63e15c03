//! WordPiece: merges chosen by the likelihood ratio
//! `count(ab) / (count(a) * count(b))`, decoded greedily longest-first.
//!
//! Word-internal pieces carry the `##` prefix. Scores are compared as exact
//! rationals; ties go to the larger `count(ab)` and then to the
//! lexicographically smallest `(a, b)`.

use std::cmp::Ordering;
use std::collections::{BTreeSet, HashMap, HashSet};
use std::io::{self, BufRead, Write};

use crate::baseline::bpe::word_counts;
use crate::error::{Error, Result};
use crate::vocab::UNK;

pub const CONTINUATION: &str = "##";

/// Counts behind one merge decision.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WordPieceMerge {
    pub left: String,
    pub right: String,
    pub pair_count: u64,
    pub left_count: u64,
    pub right_count: u64,
}

impl WordPieceMerge {
    pub fn score(&self) -> f64 {
        self.pair_count as f64 / (self.left_count as f64 * self.right_count as f64)
    }

    /// The merged piece: a continuation piece if `left` is one.
    pub fn merged(&self) -> String {
        join(&self.left, &self.right)
    }
}

fn join(left: &str, right: &str) -> String {
    format!("{left}{}", right.strip_prefix(CONTINUATION).unwrap_or(right))
}

/// Exact comparison of `n1 / d1` against `n2 / d2` for positive denominators.
pub fn compare_ratio(n1: u64, d1: u128, n2: u64, d2: u128) -> Ordering {
    (n1 as u128 * d2).cmp(&(n2 as u128 * d1))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WordPieceVocab {
    pieces: Vec<String>,
    lookup: HashSet<String>,
    merges: Vec<WordPieceMerge>,
    max_chars: usize,
}

impl WordPieceVocab {
    pub fn from_pieces(pieces: Vec<String>) -> Self {
        Self::with_merges(pieces, Vec::new())
    }

    fn with_merges(pieces: Vec<String>, merges: Vec<WordPieceMerge>) -> Self {
        let max_chars = pieces
            .iter()
            .map(|p| p.strip_prefix(CONTINUATION).unwrap_or(p).chars().count())
            .max()
            .unwrap_or(0);
        let lookup = pieces.iter().cloned().collect();
        WordPieceVocab {
            pieces,
            lookup,
            merges,
            max_chars,
        }
    }

    /// Pieces in training order: base pieces sorted, then merge results.
    pub fn pieces(&self) -> &[String] {
        &self.pieces
    }

    pub fn len(&self) -> usize {
        self.pieces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pieces.is_empty()
    }

    pub fn contains(&self, piece: &str) -> bool {
        self.lookup.contains(piece)
    }

    /// Training trace; empty for a vocabulary read from a file.
    pub fn merges(&self) -> &[WordPieceMerge] {
        &self.merges
    }

    /// Greedy longest-match-first. Pieces after the first are looked up with
    /// the `##` prefix. If any position has no match the whole word is `[UNK]`.
    pub fn tokenize(&self, word: &str) -> Vec<String> {
        let chars: Vec<(usize, char)> = word.char_indices().collect();
        let mut out = Vec::new();
        let mut start = 0;
        let mut candidate = String::new();
        while start < chars.len() {
            let from = chars[start].0;
            let longest = (chars.len() - start).min(self.max_chars);
            let mut found = None;
            for len in (1..=longest).rev() {
                let to = chars.get(start + len).map_or(word.len(), |&(b, _)| b);
                candidate.clear();
                if start > 0 {
                    candidate.push_str(CONTINUATION);
                }
                candidate.push_str(&word[from..to]);
                if self.lookup.contains(&candidate) {
                    found = Some(len);
                    break;
                }
            }
            match found {
                Some(len) => {
                    out.push(candidate.clone());
                    start += len;
                }
                None => return vec![UNK.to_owned()],
            }
        }
        out
    }

    /// One piece per line.
    pub fn write(&self, mut writer: impl Write) -> io::Result<()> {
        for piece in &self.pieces {
            writeln!(writer, "{piece}")?;
        }
        Ok(())
    }

    pub fn read(reader: impl BufRead) -> Result<Self> {
        let mut pieces = Vec::new();
        let mut seen = HashSet::new();
        for (i, line) in reader.lines().enumerate() {
            let piece = line?;
            let bad = |reason: &str| Error::BadVocabulary {
                line: i + 1,
                reason: reason.to_owned(),
            };
            if piece.is_empty() || piece == CONTINUATION || piece.chars().any(char::is_whitespace) {
                return Err(bad("empty piece or embedded whitespace"));
            }
            if !seen.insert(piece.clone()) {
                return Err(bad("duplicate piece"));
            }
            pieces.push(piece);
        }
        Ok(Self::from_pieces(pieces))
    }
}

/// Learns a WordPiece vocabulary from normalized lines. Every character seen
/// in training is present both word-initially and as a `##` continuation.
pub fn train_wordpiece<S: AsRef<str>>(corpus: &[S], target_vocab_size: usize) -> Result<WordPieceVocab> {
    let counts = word_counts(corpus);
    if counts.is_empty() {
        return Err(Error::EmptyCorpus);
    }
    let alphabet: BTreeSet<char> = counts.iter().flat_map(|(w, _)| w.chars()).collect();
    let mut pieces: Vec<String> = alphabet
        .iter()
        .flat_map(|c| [c.to_string(), format!("{CONTINUATION}{c}")])
        .collect();
    pieces.sort();
    let mut known: HashSet<String> = pieces.iter().cloned().collect();

    let mut words: Vec<(Vec<String>, u64)> = counts
        .into_iter()
        .map(|(w, f)| (initial_split(&w), f))
        .collect();

    let mut merges = Vec::new();
    while pieces.len() < target_vocab_size {
        let Some(step) = best_pair(&words) else {
            break;
        };
        let merged = step.merged();
        for (symbols, _) in &mut words {
            if symbols.len() > 1 {
                apply_merge(symbols, &step.left, &step.right, &merged);
            }
        }
        if known.insert(merged.clone()) {
            pieces.push(merged);
        }
        merges.push(step);
    }
    Ok(WordPieceVocab::with_merges(pieces, merges))
}

/// `kula` -> `k ##u ##l ##a`
pub fn initial_split(word: &str) -> Vec<String> {
    word.chars()
        .enumerate()
        .map(|(i, c)| {
            if i == 0 {
                c.to_string()
            } else {
                format!("{CONTINUATION}{c}")
            }
        })
        .collect()
}

fn apply_merge(symbols: &mut Vec<String>, left: &str, right: &str, merged: &str) {
    let mut out = Vec::with_capacity(symbols.len());
    let mut i = 0;
    while i < symbols.len() {
        if i + 1 < symbols.len() && symbols[i] == left && symbols[i + 1] == right {
            out.push(merged.to_owned());
            i += 2;
        } else {
            out.push(std::mem::take(&mut symbols[i]));
            i += 1;
        }
    }
    *symbols = out;
}

fn best_pair(words: &[(Vec<String>, u64)]) -> Option<WordPieceMerge> {
    let mut unit: HashMap<&str, u64> = HashMap::new();
    let mut pair: HashMap<(&str, &str), u64> = HashMap::new();
    for (symbols, f) in words {
        for s in symbols {
            *unit.entry(s.as_str()).or_default() += f;
        }
        for w in symbols.windows(2) {
            *pair.entry((w[0].as_str(), w[1].as_str())).or_default() += f;
        }
    }
    pair.into_iter()
        .map(|((l, r), c)| WordPieceMerge {
            left: l.to_owned(),
            right: r.to_owned(),
            pair_count: c,
            left_count: unit[l],
            right_count: unit[r],
        })
        .max_by(|a, b| {
            let da = a.left_count as u128 * a.right_count as u128;
            let db = b.left_count as u128 * b.right_count as u128;
            compare_ratio(a.pair_count, da, b.pair_count, db)
                .then(a.pair_count.cmp(&b.pair_count))
                .then_with(|| (&b.left, &b.right).cmp(&(&a.left, &a.right)))
        })
}
