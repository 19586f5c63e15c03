//! Character-level byte-pair encoding.
//!
//! Training counts adjacent symbol pairs inside words (never across
//! whitespace), weighted by word frequency, and merges the most frequent
//! pair until the vocabulary (base characters plus merges) reaches the
//! target or no pair occurs at least twice. Equal counts go to the
//! lexicographically smallest `(left, right)`.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::io::{self, BufRead, Write};

use crate::error::{Error, Result};
use crate::text::pre_tokenize;
use crate::vocab::UNK;

const ALPHABET_HEADER: &str = "#alphabet:";

type SymbolId = u32;
const UNKNOWN_SYMBOL: SymbolId = SymbolId::MAX;

/// Ordered merges plus the base alphabet they start from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MergeTable {
    alphabet: BTreeSet<char>,
    merges: Vec<(String, String)>,
    // interned view used by the tokenizer
    symbols: Vec<String>,
    char_ids: HashMap<char, SymbolId>,
    ranks: HashMap<(SymbolId, SymbolId), (usize, SymbolId)>,
}

impl MergeTable {
    /// Builds a table, checking that every merge only refers to symbols
    /// available at that point.
    pub fn new(alphabet: BTreeSet<char>, merges: Vec<(String, String)>) -> Result<Self> {
        let mut symbols: Vec<String> = Vec::new();
        let mut ids: HashMap<String, SymbolId> = HashMap::new();
        let mut intern = |s: &str, symbols: &mut Vec<String>| -> SymbolId {
            *ids.entry(s.to_owned()).or_insert_with(|| {
                symbols.push(s.to_owned());
                (symbols.len() - 1) as SymbolId
            })
        };
        let mut char_ids = HashMap::new();
        for &c in &alphabet {
            char_ids.insert(c, intern(&c.to_string(), &mut symbols));
        }
        let mut ranks = HashMap::new();
        for (rank, (left, right)) in merges.iter().enumerate() {
            let known = symbols.len();
            let l = intern(left, &mut symbols);
            let r = intern(right, &mut symbols);
            if l as usize >= known || r as usize >= known {
                return Err(Error::BadMergeTable {
                    line: rank + 1,
                    reason: format!("merge {left:?} {right:?} uses a symbol not built yet"),
                });
            }
            let merged = intern(&format!("{left}{right}"), &mut symbols);
            ranks.entry((l, r)).or_insert((rank, merged));
        }
        Ok(MergeTable {
            alphabet,
            merges,
            symbols,
            char_ids,
            ranks,
        })
    }

    pub fn alphabet(&self) -> &BTreeSet<char> {
        &self.alphabet
    }

    pub fn merges(&self) -> &[(String, String)] {
        &self.merges
    }

    /// Base characters plus one symbol per merge.
    pub fn vocab_size(&self) -> usize {
        self.alphabet.len() + self.merges.len()
    }

    /// Every symbol the table can produce.
    pub fn symbols(&self) -> &[String] {
        &self.symbols
    }

    /// Splits a normalized word into characters and applies the merges in
    /// table order, each one left to right over the current symbols.
    /// Characters outside the alphabet become `[UNK]` and never merge.
    pub fn tokenize(&self, word: &str) -> Vec<String> {
        let mut parts: Vec<SymbolId> = word
            .chars()
            .map(|c| self.char_ids.get(&c).copied().unwrap_or(UNKNOWN_SYMBOL))
            .collect();
        // Applying merges in rank order is the same as repeatedly taking
        // the lowest-ranked pair present, provided ranks only go up.
        let mut floor: Option<usize> = None;
        loop {
            let mut next: Option<(usize, SymbolId, SymbolId, SymbolId)> = None;
            for w in parts.windows(2) {
                if let Some(&(rank, merged)) = self.ranks.get(&(w[0], w[1])) {
                    if floor.is_none_or(|f| rank > f) && next.is_none_or(|n| rank < n.0) {
                        next = Some((rank, w[0], w[1], merged));
                    }
                }
            }
            let Some((rank, left, right, merged)) = next else {
                break;
            };
            parts = merge_pair(&parts, left, right, merged);
            floor = Some(rank);
        }
        parts
            .into_iter()
            .map(|id| match id {
                UNKNOWN_SYMBOL => UNK.to_owned(),
                id => self.symbols[id as usize].clone(),
            })
            .collect()
    }

    /// Writes an `#alphabet:` header followed by one `left right` merge per line.
    pub fn write(&self, mut writer: impl Write) -> io::Result<()> {
        let alphabet: String = self.alphabet.iter().collect();
        writeln!(writer, "{ALPHABET_HEADER}{alphabet}")?;
        for (left, right) in &self.merges {
            writeln!(writer, "{left} {right}")?;
        }
        Ok(())
    }

    /// Reads the format of [`MergeTable::write`]. Without a header the
    /// alphabet is taken from the characters the merges use.
    pub fn read(reader: impl BufRead) -> Result<Self> {
        let mut alphabet: Option<BTreeSet<char>> = None;
        let mut merges = Vec::new();
        for (i, line) in reader.lines().enumerate() {
            let line = line?;
            if let Some(chars) = line.strip_prefix(ALPHABET_HEADER) {
                alphabet = Some(chars.chars().collect());
                continue;
            }
            if line.starts_with('#') || line.trim().is_empty() {
                continue;
            }
            let mut fields = line.split(' ');
            match (fields.next(), fields.next(), fields.next()) {
                (Some(l), Some(r), None) if !l.is_empty() && !r.is_empty() => {
                    merges.push((l.to_owned(), r.to_owned()))
                }
                _ => {
                    return Err(Error::BadMergeTable {
                        line: i + 1,
                        reason: "expected two space-separated symbols".into(),
                    })
                }
            }
        }
        let alphabet = alphabet.unwrap_or_else(|| {
            merges
                .iter()
                .flat_map(|(l, r)| l.chars().chain(r.chars()))
                .collect()
        });
        MergeTable::new(alphabet, merges)
    }
}

fn merge_pair(parts: &[SymbolId], left: SymbolId, right: SymbolId, merged: SymbolId) -> Vec<SymbolId> {
    let mut out = Vec::with_capacity(parts.len());
    let mut i = 0;
    while i < parts.len() {
        if i + 1 < parts.len() && parts[i] == left && parts[i + 1] == right {
            out.push(merged);
            i += 2;
        } else {
            out.push(parts[i]);
            i += 1;
        }
    }
    out
}

/// Word frequencies of normalized lines, in first-seen order.
pub(crate) fn word_counts<S: AsRef<str>>(corpus: &[S]) -> Vec<(String, u64)> {
    let mut index: HashMap<&str, usize> = HashMap::new();
    let mut counts: Vec<(String, u64)> = Vec::new();
    for line in corpus {
        for word in pre_tokenize(line.as_ref()) {
            match index.get(word) {
                Some(&i) => counts[i].1 += 1,
                None => {
                    index.insert(word, counts.len());
                    counts.push((word.to_owned(), 1));
                }
            }
        }
    }
    counts
}

/// Learns a merge table from normalized lines.
pub fn train_bpe<S: AsRef<str>>(corpus: &[S], target_vocab_size: usize) -> Result<MergeTable> {
    let counts = word_counts(corpus);
    if counts.is_empty() {
        return Err(Error::EmptyCorpus);
    }
    let alphabet: BTreeSet<char> = counts.iter().flat_map(|(w, _)| w.chars()).collect();

    let mut symbols: Vec<String> = Vec::new();
    let mut ids: HashMap<String, SymbolId> = HashMap::new();
    let mut intern = |s: String, symbols: &mut Vec<String>| -> SymbolId {
        *ids.entry(s.clone()).or_insert_with(|| {
            symbols.push(s);
            (symbols.len() - 1) as SymbolId
        })
    };
    for &c in &alphabet {
        intern(c.to_string(), &mut symbols);
    }
    let mut words: Vec<Vec<SymbolId>> = counts
        .iter()
        .map(|(w, _)| w.chars().map(|c| intern(c.to_string(), &mut symbols)).collect())
        .collect();
    let freqs: Vec<i64> = counts.iter().map(|&(_, f)| f as i64).collect();

    let mut pair_counts: HashMap<(SymbolId, SymbolId), i64> = HashMap::new();
    let mut occurs_in: HashMap<(SymbolId, SymbolId), HashSet<usize>> = HashMap::new();
    for (wi, word) in words.iter().enumerate() {
        for p in word.windows(2) {
            *pair_counts.entry((p[0], p[1])).or_default() += freqs[wi];
            occurs_in.entry((p[0], p[1])).or_default().insert(wi);
        }
    }

    let mut merges = Vec::new();
    while alphabet.len() + merges.len() < target_vocab_size {
        let best = pair_counts
            .iter()
            .filter(|&(_, &c)| c >= 2)
            .max_by(|(a, ca), (b, cb)| {
                ca.cmp(cb).then_with(|| {
                    let ka = (&symbols[a.0 as usize], &symbols[a.1 as usize]);
                    let kb = (&symbols[b.0 as usize], &symbols[b.1 as usize]);
                    kb.cmp(&ka)
                })
            })
            .map(|(&p, _)| p);
        let Some((left, right)) = best else {
            break;
        };
        let merged_text = format!("{}{}", symbols[left as usize], symbols[right as usize]);
        let merged = intern(merged_text, &mut symbols);
        merges.push((symbols[left as usize].clone(), symbols[right as usize].clone()));

        let affected: Vec<usize> = occurs_in
            .remove(&(left, right))
            .map(|s| s.into_iter().collect())
            .unwrap_or_default();
        for wi in affected {
            let f = freqs[wi];
            for p in words[wi].windows(2) {
                *pair_counts.entry((p[0], p[1])).or_default() -= f;
            }
            words[wi] = merge_pair(&words[wi], left, right, merged);
            for p in words[wi].windows(2) {
                *pair_counts.entry((p[0], p[1])).or_default() += f;
                occurs_in.entry((p[0], p[1])).or_default().insert(wi);
            }
        }
        pair_counts.retain(|_, c| *c > 0);
    }
    MergeTable::new(alphabet, merges)
}
