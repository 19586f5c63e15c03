use std::collections::HashMap;
use std::io::{self, BufRead, Write};

use crate::error::{Error, Result};
use crate::inventory::SyllableInventory;

pub const PAD: &str = "[PAD]";
pub const UNK: &str = "[UNK]";
pub const BOS: &str = "[BOS]";
pub const EOS: &str = "[EOS]";

pub const PAD_ID: u32 = 0;
pub const UNK_ID: u32 = 1;
pub const BOS_ID: u32 = 2;
pub const EOS_ID: u32 = 3;

pub const SPECIAL_TOKENS: [&str; 4] = [PAD, UNK, BOS, EOS];

/// Bijective token/id map: the four specials at ids 0-3, then the
/// inventory in canonical order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Vocabulary {
    tokens: Vec<String>,
    ids: HashMap<String, u32>,
}

impl Vocabulary {
    pub fn from_inventory(inventory: &SyllableInventory) -> Self {
        let tokens: Vec<String> = SPECIAL_TOKENS
            .iter()
            .map(|s| s.to_string())
            .chain(inventory.entries().iter().map(|s| s.as_str().to_owned()))
            .collect();
        let ids = tokens
            .iter()
            .enumerate()
            .map(|(i, t)| (t.clone(), i as u32))
            .collect();
        Vocabulary { tokens, ids }
    }

    /// Reads the one-token-per-line format written by [`Vocabulary::write`].
    pub fn read(reader: impl BufRead) -> Result<Self> {
        let mut tokens = Vec::new();
        let mut ids = HashMap::new();
        for (i, line) in reader.lines().enumerate() {
            let token = line?;
            let bad = |reason: String| Error::BadVocabulary { line: i + 1, reason };
            if token.is_empty() || token.chars().any(char::is_whitespace) {
                return Err(bad("empty token or embedded whitespace".into()));
            }
            if i < SPECIAL_TOKENS.len() && token != SPECIAL_TOKENS[i] {
                return Err(bad(format!("expected {}", SPECIAL_TOKENS[i])));
            }
            if ids.insert(token.clone(), i as u32).is_some() {
                return Err(bad(format!("duplicate token {token:?}")));
            }
            tokens.push(token);
        }
        if tokens.len() <= SPECIAL_TOKENS.len() {
            return Err(Error::BadVocabulary {
                line: tokens.len(),
                reason: "no entries after the special tokens".into(),
            });
        }
        Ok(Vocabulary { tokens, ids })
    }

    /// One token per line; the line number (from 0) is the id.
    pub fn write(&self, mut writer: impl Write) -> io::Result<()> {
        for token in &self.tokens {
            writeln!(writer, "{token}")?;
        }
        Ok(())
    }

    /// Total size including the specials.
    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    /// Number of inventory rows, i.e. the one-hot dimension.
    pub fn inventory_len(&self) -> usize {
        self.tokens.len() - SPECIAL_TOKENS.len()
    }

    pub fn id(&self, token: &str) -> Option<u32> {
        self.ids.get(token).copied()
    }

    pub fn token(&self, id: u32) -> Option<&str> {
        self.tokens.get(id as usize).map(String::as_str)
    }

    pub fn is_special(&self, id: u32) -> bool {
        (id as usize) < SPECIAL_TOKENS.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = (u32, &str)> {
        self.tokens
            .iter()
            .enumerate()
            .map(|(i, t)| (i as u32, t.as_str()))
    }
}
