//! Train/test splitting and per-scheme corpus statistics.
//!
//! Every input line is one sentence. Words always come from the shared
//! normalization and whitespace split, so fertility is comparable across
//! schemes.

use std::collections::HashSet;
use std::fmt::{self, Write as _};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::baseline::{MergeTable, WordPieceVocab};
use crate::error::{Error, Result};
use crate::syllable::{syllabify_word, SyllableTokenizer};
use crate::text::{normalize_with, pre_tokenize, UnknownMode};
use crate::vocab::UNK;

/// A token as seen by the statistics code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Piece {
    pub text: String,
    pub unknown: bool,
}

/// Anything that cuts a normalized word into pieces.
pub trait Segmenter: Sync {
    fn scheme(&self) -> &str;

    fn unknown_mode(&self) -> UnknownMode {
        UnknownMode::Remove
    }

    fn segment_word(&self, word: &str) -> Vec<Piece>;
}

impl Segmenter for SyllableTokenizer {
    fn scheme(&self) -> &str {
        "syllable"
    }

    fn unknown_mode(&self) -> UnknownMode {
        SyllableTokenizer::unknown_mode(self)
    }

    fn segment_word(&self, word: &str) -> Vec<Piece> {
        syllabify_word(self.inventory(), word)
            .into_iter()
            .map(|s| Piece {
                text: s.text.to_owned(),
                unknown: s.is_unknown(),
            })
            .collect()
    }
}

impl Segmenter for MergeTable {
    fn scheme(&self) -> &str {
        "bpe"
    }

    fn segment_word(&self, word: &str) -> Vec<Piece> {
        self.tokenize(word)
            .into_iter()
            .map(|text| Piece {
                unknown: text == UNK,
                text,
            })
            .collect()
    }
}

impl Segmenter for WordPieceVocab {
    fn scheme(&self) -> &str {
        "wordpiece"
    }

    fn segment_word(&self, word: &str) -> Vec<Piece> {
        self.tokenize(word)
            .into_iter()
            .map(|text| Piece {
                unknown: text == UNK,
                text,
            })
            .collect()
    }
}

/// Normalizes a line and segments each of its words.
pub fn segment_line<T: Segmenter + ?Sized>(segmenter: &T, line: &str) -> Vec<Vec<Piece>> {
    let normalized = normalize_with(line, segmenter.unknown_mode());
    pre_tokenize(&normalized)
        .into_iter()
        .map(|w| segmenter.segment_word(w))
        .collect()
}

/// Pieces joined by spaces, words by `separator`; unknowns print as `[UNK]`.
pub fn render_words(words: &[Vec<Piece>], separator: &str) -> String {
    let mut out = String::new();
    for (i, word) in words.iter().enumerate() {
        if i > 0 {
            out.push_str(separator);
        }
        for (j, p) in word.iter().enumerate() {
            if j > 0 {
                out.push(' ');
            }
            out.push_str(if p.unknown { UNK } else { &p.text });
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SplitSpec {
    pub train_fraction: f64,
    pub seed: u64,
    /// Random split when true; otherwise the first lines go to train.
    pub shuffle: bool,
}

impl Default for SplitSpec {
    fn default() -> Self {
        SplitSpec {
            train_fraction: 0.9,
            seed: 42,
            shuffle: true,
        }
    }
}

impl SplitSpec {
    /// `floor(fraction * total)`. The tiny slack absorbs products such as
    /// `0.29 * 100 = 28.999999999999996`.
    pub fn train_count(&self, total: usize) -> Result<usize> {
        if !(self.train_fraction > 0.0 && self.train_fraction < 1.0) {
            return Err(Error::InvalidFraction(self.train_fraction));
        }
        let exact = self.train_fraction * total as f64;
        Ok(((exact + 1e-9).floor() as usize).min(total))
    }
}

/// For each of `total` lines, whether it belongs to the training side.
pub fn split_assignment(total: usize, spec: &SplitSpec) -> Result<Vec<bool>> {
    if total == 0 {
        return Err(Error::EmptyCorpus);
    }
    let train = spec.train_count(total)?;
    let mut in_train = vec![false; total];
    if spec.shuffle {
        let mut order: Vec<usize> = (0..total).collect();
        order.shuffle(&mut ChaCha8Rng::seed_from_u64(spec.seed));
        for &i in &order[..train] {
            in_train[i] = true;
        }
    } else {
        in_train[..train].fill(true);
    }
    Ok(in_train)
}

/// Partitions `lines` into `(train, test)`. Both sides keep input order.
pub fn split_corpus<T: Clone>(lines: &[T], spec: &SplitSpec) -> Result<(Vec<T>, Vec<T>)> {
    let assignment = split_assignment(lines.len(), spec)?;
    let mut train = Vec::new();
    let mut test = Vec::new();
    for (line, to_train) in lines.iter().zip(assignment) {
        if to_train {
            train.push(line.clone());
        } else {
            test.push(line.clone());
        }
    }
    Ok((train, test))
}

#[derive(Debug, Clone, Default)]
struct Tally {
    sentences: u64,
    words: u64,
    tokens: u64,
    unknown: u64,
    chars: u64,
    types: HashSet<String>,
}

impl Tally {
    fn add_line<T: Segmenter + ?Sized>(mut self, segmenter: &T, line: &str) -> Self {
        self.sentences += 1;
        let normalized = normalize_with(line, segmenter.unknown_mode());
        for word in pre_tokenize(&normalized) {
            self.words += 1;
            self.chars += word.chars().count() as u64;
            for piece in segmenter.segment_word(word) {
                self.tokens += 1;
                if piece.unknown {
                    self.unknown += 1;
                    if !self.types.contains(UNK) {
                        self.types.insert(UNK.to_owned());
                    }
                } else if !self.types.contains(&piece.text) {
                    self.types.insert(piece.text);
                }
            }
        }
        self
    }

    fn merge(mut self, mut other: Tally) -> Tally {
        self.sentences += other.sentences;
        self.words += other.words;
        self.tokens += other.tokens;
        self.unknown += other.unknown;
        self.chars += other.chars;
        if self.types.len() < other.types.len() {
            std::mem::swap(&mut self.types, &mut other.types);
        }
        self.types.extend(other.types);
        self
    }
}

/// Accumulates statistics over batches of lines, e.g. while streaming.
pub struct ReportBuilder<'a, T: Segmenter + ?Sized> {
    segmenter: &'a T,
    tally: Tally,
}

impl<'a, T: Segmenter + ?Sized> ReportBuilder<'a, T> {
    pub fn new(segmenter: &'a T) -> Self {
        ReportBuilder {
            segmenter,
            tally: Tally::default(),
        }
    }

    pub fn add_lines<S: AsRef<str> + Sync>(&mut self, lines: &[S]) {
        let segmenter = self.segmenter;
        let batch = lines
            .par_iter()
            .fold(Tally::default, |t, line| t.add_line(segmenter, line.as_ref()))
            .reduce(Tally::default, Tally::merge);
        self.tally = std::mem::take(&mut self.tally).merge(batch);
    }

    pub fn finish(self) -> CorpusReport {
        let t = self.tally;
        let ratio = |n: u64, d: u64| if d == 0 { 0.0 } else { n as f64 / d as f64 };
        CorpusReport {
            scheme: self.segmenter.scheme().to_owned(),
            sentences: t.sentences,
            words: t.words,
            tokens: t.tokens,
            unknown_tokens: t.unknown,
            characters: t.chars,
            vocab_used: t.types.len() as u64,
            fertility: ratio(t.tokens, t.words),
            mean_sequence_length: ratio(t.tokens, t.sentences),
            oov_rate: ratio(t.unknown, t.tokens),
            chars_per_token: ratio(t.chars, t.tokens),
        }
    }
}

/// Token statistics of one scheme over one corpus.
#[derive(Debug, Clone, PartialEq)]
pub struct CorpusReport {
    pub scheme: String,
    pub sentences: u64,
    pub words: u64,
    pub tokens: u64,
    pub unknown_tokens: u64,
    /// Characters inside words (spaces excluded).
    pub characters: u64,
    /// Distinct token types produced; all unknowns count as one type.
    pub vocab_used: u64,
    /// Tokens per word.
    pub fertility: f64,
    /// Tokens per sentence.
    pub mean_sequence_length: f64,
    /// Fraction of tokens that are UNK.
    pub oov_rate: f64,
    /// Characters per token.
    pub chars_per_token: f64,
}

pub const REPORT_COLUMNS: [&str; 11] = [
    "scheme",
    "sentences",
    "words",
    "tokens",
    "unknown_tokens",
    "characters",
    "vocab_used",
    "fertility",
    "mean_sequence_length",
    "oov_rate",
    "chars_per_token",
];

impl CorpusReport {
    fn cells(&self) -> [String; 11] {
        [
            self.scheme.clone(),
            self.sentences.to_string(),
            self.words.to_string(),
            self.tokens.to_string(),
            self.unknown_tokens.to_string(),
            self.characters.to_string(),
            self.vocab_used.to_string(),
            format!("{:.6}", self.fertility),
            format!("{:.6}", self.mean_sequence_length),
            format!("{:.6}", self.oov_rate),
            format!("{:.6}", self.chars_per_token),
        ]
    }

    /// One tab-separated row in [`REPORT_COLUMNS`] order.
    pub fn to_tsv_row(&self) -> String {
        self.cells().join("\t")
    }
}

/// Header plus one row per report.
pub fn reports_to_tsv(reports: &[CorpusReport]) -> String {
    let mut out = REPORT_COLUMNS.join("\t");
    out.push('\n');
    for r in reports {
        out.push_str(&r.to_tsv_row());
        out.push('\n');
    }
    out
}

/// Statistics of `segmenter` over `lines`, tokenized in parallel.
pub fn compute_report<T, S>(segmenter: &T, lines: &[S]) -> CorpusReport
where
    T: Segmenter + ?Sized,
    S: AsRef<str> + Sync,
{
    let mut builder = ReportBuilder::new(segmenter);
    builder.add_lines(lines);
    builder.finish()
}

/// Metrics as rows, one column per scheme.
#[derive(Debug, Clone, PartialEq)]
pub struct Comparison {
    pub schemes: Vec<String>,
    pub rows: Vec<(&'static str, Vec<String>)>,
}

pub fn compare(reports: &[CorpusReport]) -> Result<Comparison> {
    if reports.len() < 2 {
        return Err(Error::TooFewReports(reports.len()));
    }
    let cells: Vec<[String; 11]> = reports.iter().map(CorpusReport::cells).collect();
    let rows = REPORT_COLUMNS
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, &name)| (name, cells.iter().map(|c| c[i].clone()).collect()))
        .collect();
    Ok(Comparison {
        schemes: reports.iter().map(|r| r.scheme.clone()).collect(),
        rows,
    })
}

impl Comparison {
    pub fn to_tsv(&self) -> String {
        let mut out = format!("metric\t{}\n", self.schemes.join("\t"));
        for (name, values) in &self.rows {
            let _ = writeln!(out, "{name}\t{}", values.join("\t"));
        }
        out
    }
}

impl fmt::Display for Comparison {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let label = self
            .rows
            .iter()
            .map(|(n, _)| n.len())
            .max()
            .unwrap_or(0)
            .max("metric".len());
        let widths: Vec<usize> = self
            .schemes
            .iter()
            .enumerate()
            .map(|(i, s)| {
                self.rows
                    .iter()
                    .map(|(_, v)| v[i].len())
                    .max()
                    .unwrap_or(0)
                    .max(s.len())
            })
            .collect();
        write!(f, "{:<label$}", "metric")?;
        for (s, w) in self.schemes.iter().zip(&widths) {
            write!(f, "  {s:>w$}")?;
        }
        writeln!(f)?;
        writeln!(f, "{}", "-".repeat(label + widths.iter().map(|w| w + 2).sum::<usize>()))?;
        for (name, values) in &self.rows {
            write!(f, "{name:<label$}")?;
            for (v, w) in values.iter().zip(&widths) {
                write!(f, "  {v:>w$}")?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}
