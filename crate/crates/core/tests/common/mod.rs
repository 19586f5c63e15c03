//! Independent oracles and fixtures shared by the integration tests.
//!
//! Nothing here calls into the tokenizer's segmentation or training code;
//! the oracles work from plain sets and strings.

#![allow(dead_code)]

use std::collections::{BTreeMap, HashMap, HashSet};

use rand::distributions::WeightedIndex;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

/// The syllabary grid, transcribed separately from the embedded data file.
pub const GRID: &str = "\
mbwa mbwe mbwi ndwa ndwe ndwi ngwa ngwe ngwi njwa njwe njwi nywa
nywe shwa shwe shwi chwa chwe chwi pwa pwe pwi pwo swa swe
swi twa twe twi zwa zwe zwi cha che chi cho chu dha
dhe dhi dho dhu gha ghe ghi gho ghu kha khe kho khu
mba mbe mbi mbo mbu nda nde ndi ndo ndu nga nge ngi
ngo ngu ng’a ng’e ng’o nja nje nji njo nju nya nye nyi
nyo nyu sha she shi sho shu tha the thi tho thu vya
vye vyo bwa bwe bwi gwa gwe gwi jwa jwe jwi kwa kwe
kwi lwa lwe lwi mwa mwe mwi nza nze nzi nzo nzu ba
be bi bo bu da de di do du fa fe fi fo
fu ga ge gi go gu ha he hi ho hu ja je
ji jo ju ka ke ki ko ku la le li lo lu
ma me mi mo mu na ne ni no nu pa pe pi
po pu ra re ri ro ru sa se si so su ta
te ti to tu va ve vi vo vu wa we wi wo
wu ya ye yi yo yu vu za ze zi zo zu a
e i o u b d f k m n s - -";

/// Grid cells in row-major order, placeholders included.
pub fn grid_cells() -> Vec<String> {
    GRID.split_whitespace().map(|c| c.replace('’', "'")).collect()
}

/// Distinct non-placeholder cells, first occurrence order.
pub fn oracle_inventory() -> Vec<String> {
    let mut seen = HashSet::new();
    grid_cells()
        .into_iter()
        .filter(|c| c != "-")
        .filter(|c| seen.insert(c.clone()))
        .collect()
}

/// Every way to write `word` as a concatenation of `entries`.
pub fn all_segmentations(entries: &HashSet<String>, word: &str) -> Vec<Vec<String>> {
    fn go(
        entries: &HashSet<String>,
        chars: &[char],
        at: usize,
        memo: &mut HashMap<usize, Vec<Vec<String>>>,
    ) -> Vec<Vec<String>> {
        if at == chars.len() {
            return vec![vec![]];
        }
        if let Some(v) = memo.get(&at) {
            return v.clone();
        }
        let mut out = Vec::new();
        for end in at + 1..=chars.len() {
            let piece: String = chars[at..end].iter().collect();
            if entries.contains(&piece) {
                for rest in go(entries, chars, end, memo) {
                    let mut seg = vec![piece.clone()];
                    seg.extend(rest);
                    out.push(seg);
                }
            }
        }
        memo.insert(at, out.clone());
        out
    }
    let chars: Vec<char> = word.chars().collect();
    go(entries, &chars, 0, &mut HashMap::new())
}

/// Among all full segmentations, the one whose piece lengths are
/// lexicographically largest (longest piece first at every position).
pub fn oracle_segmentation(entries: &HashSet<String>, word: &str) -> Option<Vec<String>> {
    all_segmentations(entries, word)
        .into_iter()
        .max_by_key(|seg| seg.iter().map(|p| p.chars().count()).collect::<Vec<_>>())
}

/// Plain yes/no reachability, no enumeration.
pub fn segmentable(entries: &HashSet<String>, word: &str) -> bool {
    let chars: Vec<char> = word.chars().collect();
    let mut ok = vec![false; chars.len() + 1];
    ok[0] = true;
    for end in 1..=chars.len() {
        ok[end] = (0..end).any(|start| {
            ok[start] && entries.contains(&chars[start..end].iter().collect::<String>())
        });
    }
    ok[chars.len()]
}

/// Hand-simulated BPE: recount every pair from scratch each round.
pub fn naive_bpe(corpus: &[&str], target: usize) -> Vec<(String, String)> {
    let mut freq: BTreeMap<&str, u64> = BTreeMap::new();
    for line in corpus {
        for w in line.split_whitespace() {
            *freq.entry(w).or_default() += 1;
        }
    }
    let alphabet: HashSet<char> = freq.keys().flat_map(|w| w.chars()).collect();
    let mut words: Vec<(Vec<String>, u64)> = freq
        .iter()
        .map(|(w, &f)| (w.chars().map(String::from).collect(), f))
        .collect();
    let mut merges = Vec::new();
    while alphabet.len() + merges.len() < target {
        let mut counts: BTreeMap<(String, String), u64> = BTreeMap::new();
        for (syms, f) in &words {
            for p in syms.windows(2) {
                *counts.entry((p[0].clone(), p[1].clone())).or_default() += f;
            }
        }
        // BTreeMap iterates in (a, b) order; keep the first maximum
        let mut best: Option<(&(String, String), u64)> = None;
        for (pair, &c) in &counts {
            if c >= 2 && best.is_none_or(|(_, b)| c > b) {
                best = Some((pair, c));
            }
        }
        let Some((pair, _)) = best else { break };
        let pair = pair.clone();
        for (syms, _) in &mut words {
            let mut out = Vec::new();
            let mut i = 0;
            while i < syms.len() {
                if i + 1 < syms.len() && syms[i] == pair.0 && syms[i + 1] == pair.1 {
                    out.push(format!("{}{}", pair.0, pair.1));
                    i += 2;
                } else {
                    out.push(syms[i].clone());
                    i += 1;
                }
            }
            *syms = out;
        }
        merges.push(pair);
    }
    merges
}

/// Applies merges literally: for each merge in order, one left-to-right pass.
pub fn apply_merges_in_order(merges: &[(String, String)], alphabet: &HashSet<char>, word: &str) -> Vec<String> {
    let mut syms: Vec<String> = word
        .chars()
        .map(|c| if alphabet.contains(&c) { c.to_string() } else { "[UNK]".to_string() })
        .collect();
    for (a, b) in merges {
        let mut out = Vec::new();
        let mut i = 0;
        while i < syms.len() {
            if i + 1 < syms.len() && &syms[i] == a && &syms[i + 1] == b && syms[i] != "[UNK]" {
                out.push(format!("{a}{b}"));
                i += 2;
            } else {
                out.push(syms[i].clone());
                i += 1;
            }
        }
        syms = out;
    }
    syms
}

/// WordPiece symbol state replayed from a merge list, for brute-force scoring.
pub fn wordpiece_state(corpus: &[&str], merges: &[(String, String)]) -> Vec<(Vec<String>, u64)> {
    let mut freq: BTreeMap<&str, u64> = BTreeMap::new();
    for line in corpus {
        for w in line.split_whitespace() {
            *freq.entry(w).or_default() += 1;
        }
    }
    let mut words: Vec<(Vec<String>, u64)> = freq
        .iter()
        .map(|(w, &f)| {
            let syms = w
                .chars()
                .enumerate()
                .map(|(i, c)| if i == 0 { c.to_string() } else { format!("##{c}") })
                .collect();
            (syms, f)
        })
        .collect();
    for (a, b) in merges {
        let merged = format!("{a}{}", b.trim_start_matches("##"));
        for (syms, _) in &mut words {
            let mut out = Vec::new();
            let mut i = 0;
            while i < syms.len() {
                if i + 1 < syms.len() && &syms[i] == a && &syms[i + 1] == b {
                    out.push(merged.clone());
                    i += 2;
                } else {
                    out.push(syms[i].clone());
                    i += 1;
                }
            }
            *syms = out;
        }
    }
    words
}

/// (pair, count(ab), count(a), count(b)) for every adjacent pair.
pub fn wordpiece_scores(state: &[(Vec<String>, u64)]) -> Vec<((String, String), u64, u64, u64)> {
    let mut unit: HashMap<&str, u64> = HashMap::new();
    let mut pair: BTreeMap<(String, String), u64> = BTreeMap::new();
    for (syms, f) in state {
        for s in syms {
            *unit.entry(s).or_default() += f;
        }
        for p in syms.windows(2) {
            *pair.entry((p[0].clone(), p[1].clone())).or_default() += f;
        }
    }
    pair.into_iter()
        .map(|(p, c)| {
            let (ca, cb) = (unit[p.0.as_str()], unit[p.1.as_str()]);
            (p, c, ca, cb)
        })
        .collect()
}

/// Random Swahili-like text built from inventory syllables, weighted towards
/// open consonant-vowel syllables.
pub struct SyntheticText {
    syllables: Vec<String>,
    weights: WeightedIndex<f64>,
    rng: ChaCha8Rng,
}

impl SyntheticText {
    pub fn new(seed: u64) -> Self {
        let syllables = oracle_inventory();
        let weights: Vec<f64> = syllables
            .iter()
            .map(|s| match s.chars().count() {
                1 if "aeiou".contains(s.as_str()) => 6.0,
                1 => 1.5,
                2 => 8.0,
                _ => 1.0,
            })
            .collect();
        SyntheticText {
            weights: WeightedIndex::new(&weights).unwrap(),
            syllables,
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn syllable(&mut self) -> &str {
        &self.syllables[self.weights.sample(&mut self.rng)]
    }

    /// A word of `min..=max` syllables, plus the syllables used.
    pub fn word(&mut self, min: usize, max: usize) -> (String, Vec<String>) {
        let n = self.rng.gen_range(min..=max);
        let parts: Vec<String> = (0..n).map(|_| self.syllable().to_owned()).collect();
        (parts.concat(), parts)
    }

    pub fn sentence(&mut self) -> String {
        let n = self.rng.gen_range(4..=16);
        let words: Vec<String> = (0..n).map(|_| self.word(1, 4).0).collect();
        let mut s = words.join(" ");
        if let Some(first) = s.get_mut(0..1) {
            first.make_ascii_uppercase();
        }
        s.push('.');
        s
    }

    pub fn sentences(&mut self, n: usize) -> Vec<String> {
        (0..n).map(|_| self.sentence()).collect()
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }
}
