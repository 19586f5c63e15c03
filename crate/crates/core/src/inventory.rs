//! The fixed Swahili syllable inventory and prefix matching over it.
//!
//! The embedded syllabary is a 17x13 grid read row-major. Empty cells (`-`)
//! are skipped and a repeated entry keeps its first position, so the
//! canonical order is the grid order with those cells removed. That order
//! fixes token ids downstream.
//!
//! The syllabary is usually quoted as 219 entries, which is its number of
//! non-empty cells. One of those cells repeats `vu`, so the inventory holds
//! [`INVENTORY_SIZE`] = 218 distinct syllables.

use std::collections::HashMap;
use std::fmt;
use std::fs;
use std::path::Path;
use std::sync::OnceLock;

use unicode_normalization::UnicodeNormalization;

use crate::error::{Error, Result};
use crate::text::{is_apostrophe, APOSTROPHE};

/// Distinct syllables in the embedded inventory.
pub const INVENTORY_SIZE: usize = 218;

/// Number of non-empty cells in the published syllabary grid (counts the
/// repeated `vu` twice).
pub const PUBLISHED_SYLLABLE_COUNT: usize = 219;

pub const VOWELS: [char; 5] = ['a', 'e', 'i', 'o', 'u'];

/// Consonants that stand alone as a syllable.
pub const STANDALONE_CONSONANTS: [char; 7] = ['b', 'd', 'f', 'k', 'm', 'n', 's'];

const EMBEDDED: &str = include_str!("../data/syllables.txt");

const PLACEHOLDER: &str = "-";

// Longest syllable, counted in chars: four letters plus an apostrophe.
const MAX_SYLLABLE_CHARS: usize = 5;

pub fn is_vowel(c: char) -> bool {
    VOWELS.contains(&c)
}

/// Letters of the Swahili Latin alphabet (no `q`, no `x`).
pub fn is_swahili_letter(c: char) -> bool {
    c.is_ascii_lowercase() && c != 'q' && c != 'x'
}

/// A single validated syllable in normalized form.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Syllable(Box<str>);

impl Syllable {
    /// Normalizes `raw` (NFC, lowercase, canonical apostrophe) and checks
    /// its shape: at most one vowel, which must come last; a vowel-less
    /// syllable is a single standalone consonant.
    pub fn parse(raw: &str) -> std::result::Result<Self, &'static str> {
        let text: String = raw
            .nfc()
            .flat_map(char::to_lowercase)
            .map(|c| if is_apostrophe(c) { APOSTROPHE } else { c })
            .collect();
        let chars: Vec<char> = text.chars().collect();
        if chars.is_empty() {
            return Err("empty");
        }
        if chars.len() > MAX_SYLLABLE_CHARS {
            return Err("longer than four letters plus an apostrophe");
        }
        if let Some(&c) = chars
            .iter()
            .find(|&&c| c != APOSTROPHE && !is_swahili_letter(c))
        {
            return Err(if c.is_ascii_lowercase() {
                "letter outside the Swahili alphabet"
            } else {
                "character outside the Swahili alphabet"
            });
        }
        let apostrophes = chars.iter().filter(|&&c| c == APOSTROPHE).count();
        if apostrophes > 1 || chars[0] == APOSTROPHE || chars[chars.len() - 1] == APOSTROPHE {
            return Err("misplaced apostrophe");
        }
        if apostrophes == 1 && chars.len() - 1 > 4 {
            return Err("longer than four letters plus an apostrophe");
        }
        match chars.iter().filter(|&&c| is_vowel(c)).count() {
            0 if chars.len() == 1 && STANDALONE_CONSONANTS.contains(&chars[0]) => {}
            0 => return Err("no vowel and not a standalone consonant"),
            1 if is_vowel(chars[chars.len() - 1]) => {}
            1 => return Err("vowel not in final position"),
            _ => return Err("more than one vowel"),
        }
        Ok(Syllable(text.into_boxed_str()))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    /// Length in chars.
    pub fn char_len(&self) -> usize {
        self.0.chars().count()
    }
}

impl fmt::Display for Syllable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl AsRef<str> for Syllable {
    fn as_ref(&self) -> &str {
        &self.0
    }
}

/// An inventory entry that is a prefix of some input.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrefixMatch {
    /// Position of the entry in canonical order.
    pub index: usize,
    /// Length of the match in bytes of the input.
    pub byte_len: usize,
    /// Length of the match in chars.
    pub char_len: usize,
}

#[derive(Debug, Clone, Default)]
struct TrieNode {
    children: Vec<(char, u32)>,
    entry: Option<u32>,
}

#[derive(Debug, Clone)]
struct PrefixTrie {
    nodes: Vec<TrieNode>,
}

impl PrefixTrie {
    fn build(entries: &[Syllable]) -> Self {
        let mut nodes = vec![TrieNode::default()];
        for (index, entry) in entries.iter().enumerate() {
            let mut node = 0usize;
            for c in entry.as_str().chars() {
                node = match nodes[node].children.iter().find(|(k, _)| *k == c) {
                    Some(&(_, next)) => next as usize,
                    None => {
                        let next = nodes.len();
                        nodes.push(TrieNode::default());
                        nodes[node].children.push((c, next as u32));
                        next
                    }
                };
            }
            nodes[node].entry = Some(index as u32);
        }
        for node in &mut nodes {
            node.children.sort_unstable_by_key(|&(c, _)| c);
        }
        PrefixTrie { nodes }
    }

    fn child(&self, node: usize, c: char) -> Option<usize> {
        let children = &self.nodes[node].children;
        children
            .binary_search_by_key(&c, |&(k, _)| k)
            .ok()
            .map(|i| children[i].1 as usize)
    }
}

/// Iterator over every inventory entry that is a prefix of a string, from
/// shortest to longest.
pub struct PrefixMatches<'a> {
    trie: &'a PrefixTrie,
    rest: std::str::CharIndices<'a>,
    node: usize,
    chars: usize,
}

impl Iterator for PrefixMatches<'_> {
    type Item = PrefixMatch;

    fn next(&mut self) -> Option<PrefixMatch> {
        for (offset, c) in self.rest.by_ref() {
            self.node = self.trie.child(self.node, c)?;
            self.chars += 1;
            if let Some(index) = self.trie.nodes[self.node].entry {
                return Some(PrefixMatch {
                    index: index as usize,
                    byte_len: offset + c.len_utf8(),
                    char_len: self.chars,
                });
            }
        }
        None
    }
}

/// The ordered syllable set plus a prefix index built once at load.
#[derive(Debug, Clone)]
pub struct SyllableInventory {
    entries: Vec<Syllable>,
    positions: HashMap<Box<str>, usize>,
    trie: PrefixTrie,
}

impl SyllableInventory {
    /// Parses the embedded syllabary.
    pub fn load() -> Result<Self> {
        Self::parse(EMBEDDED, true)
    }

    /// Shared, lazily parsed copy of the embedded syllabary.
    pub fn embedded() -> &'static SyllableInventory {
        static INVENTORY: OnceLock<SyllableInventory> = OnceLock::new();
        INVENTORY.get_or_init(|| Self::load().expect("embedded syllabary is valid"))
    }

    /// Loads an override file: one syllable per line, `#` starts a comment.
    /// Unlike the embedded grid, a `-` placeholder here is an error.
    pub fn from_path(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_override_str(&fs::read_to_string(path)?)
    }

    pub fn from_override_str(text: &str) -> Result<Self> {
        Self::parse(text, false)
    }

    fn parse(text: &str, allow_placeholders: bool) -> Result<Self> {
        let mut entries: Vec<Syllable> = Vec::new();
        let mut raw_forms: Vec<String> = Vec::new();
        let mut positions: HashMap<Box<str>, usize> = HashMap::new();
        for (lineno, line) in text.lines().enumerate() {
            let line_no = lineno + 1;
            let content = line.split('#').next().unwrap_or_default();
            for cell in content.split_whitespace() {
                if cell == PLACEHOLDER {
                    if allow_placeholders {
                        continue;
                    }
                    return Err(Error::PlaceholderInData { line: line_no });
                }
                let syllable = Syllable::parse(cell).map_err(|reason| Error::MalformedEntry {
                    line: line_no,
                    entry: cell.to_owned(),
                    reason,
                })?;
                if let Some(&at) = positions.get(syllable.as_str()) {
                    if raw_forms[at] != cell {
                        return Err(Error::ConflictingDuplicate {
                            line: line_no,
                            entry: cell.to_owned(),
                            existing: raw_forms[at].clone(),
                        });
                    }
                    continue;
                }
                positions.insert(syllable.as_str().into(), entries.len());
                raw_forms.push(cell.to_owned());
                entries.push(syllable);
            }
        }
        if entries.is_empty() {
            return Err(Error::EmptyInventory);
        }
        let trie = PrefixTrie::build(&entries);
        Ok(SyllableInventory {
            entries,
            positions,
            trie,
        })
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Entries in canonical order.
    pub fn entries(&self) -> &[Syllable] {
        &self.entries
    }

    pub fn get(&self, index: usize) -> Option<&Syllable> {
        self.entries.get(index)
    }

    /// Canonical position of `syllable`; either apostrophe form is accepted.
    pub fn index_of(&self, syllable: &str) -> Option<usize> {
        if syllable.chars().any(|c| is_apostrophe(c) && c != APOSTROPHE) {
            let canonical = crate::text::canonicalize_apostrophes(syllable);
            return self.positions.get(canonical.as_str()).copied();
        }
        self.positions.get(syllable).copied()
    }

    pub fn contains(&self, syllable: &str) -> bool {
        self.index_of(syllable).is_some()
    }

    /// All entries that are prefixes of `s`, shortest first.
    pub fn prefix_matches<'a>(&'a self, s: &'a str) -> PrefixMatches<'a> {
        PrefixMatches {
            trie: &self.trie,
            rest: s.char_indices(),
            node: 0,
            chars: 0,
        }
    }

    /// The longest entry that is a prefix of `s`, with its length in chars.
    /// `s` is expected to be normalized.
    pub fn longest_prefix_match(&self, s: &str) -> Option<(&Syllable, usize)> {
        self.prefix_matches(s)
            .last()
            .map(|m| (&self.entries[m.index], m.char_len))
    }
}
