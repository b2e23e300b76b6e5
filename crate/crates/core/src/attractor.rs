//! LZ77 parsing, attractors induced by it, and a brute-force attractor check.
//!
//! Positions are 0-based throughout the library.

use std::ops::Range;

use crate::error::{Error, Result};
use crate::suffix;
use crate::text::Text;

/// One LZ77 phrase: a copy of `copy_len` symbols starting at `source`,
/// optionally followed by a literal.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Phrase {
    pub source: Option<usize>,
    pub copy_len: usize,
    pub literal: Option<u8>,
}

impl Phrase {
    /// Number of text symbols the phrase covers.
    pub fn cover(&self) -> usize {
        self.copy_len + usize::from(self.literal.is_some())
    }
}

/// Greedy LZ77 parse with self-overlapping sources.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lz77Parse {
    phrases: Vec<Phrase>,
    len: usize,
}

impl Lz77Parse {
    pub fn phrases(&self) -> &[Phrase] {
        &self.phrases
    }

    /// Number of phrases, `z`.
    pub fn num_phrases(&self) -> usize {
        self.phrases.len()
    }

    pub fn text_len(&self) -> usize {
        self.len
    }

    /// Start offset of every phrase.
    pub fn phrase_starts(&self) -> Vec<usize> {
        let mut pos = 0;
        self.phrases
            .iter()
            .map(|p| {
                let s = pos;
                pos += p.cover();
                s
            })
            .collect()
    }

    /// Last covered offset of every phrase.
    pub fn phrase_ends(&self) -> Vec<usize> {
        let mut pos = 0;
        self.phrases
            .iter()
            .map(|p| {
                pos += p.cover();
                pos - 1
            })
            .collect()
    }

    /// Replays the phrases, copying symbol by symbol so overlapping sources
    /// work.
    pub fn decode(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(self.len);
        for p in &self.phrases {
            if let Some(src) = p.source {
                for k in 0..p.copy_len {
                    let c = out[src + k];
                    out.push(c);
                }
            }
            if let Some(c) = p.literal {
                out.push(c);
            }
        }
        out
    }
}

/// Computes the greedy LZ77 parse of `text`.
///
/// Each phrase is the longest prefix of the remaining text that also starts
/// at an earlier position (sources may overlap the phrase), followed by one
/// literal unless the copy reaches the end of the text. Among equally long
/// candidates the leftmost source wins.
pub fn lz77_parse(text: &Text) -> Lz77Parse {
    let s = text.as_bytes();
    let n = s.len();
    let sa = suffix::suffix_array(s);
    let isa = suffix::inverse(&sa);
    let lcp = suffix::lcp_array(s, &sa, &isa);

    // Nearest lexicographic neighbours that start earlier in the text.
    let none = usize::MAX;
    let mut psv = vec![none; n];
    let mut nsv = vec![none; n];
    let mut stack: Vec<usize> = Vec::new();
    for &pos in &sa {
        while stack.last().is_some_and(|&top| top > pos) {
            stack.pop();
        }
        psv[pos] = stack.last().copied().unwrap_or(none);
        stack.push(pos);
    }
    stack.clear();
    for &pos in sa.iter().rev() {
        while stack.last().is_some_and(|&top| top > pos) {
            stack.pop();
        }
        nsv[pos] = stack.last().copied().unwrap_or(none);
        stack.push(pos);
    }

    let common = |i: usize, j: usize| -> usize {
        if j == none {
            return 0;
        }
        let mut h = 0;
        while i + h < n && s[i + h] == s[j + h] {
            h += 1;
        }
        h
    };

    let mut phrases = Vec::new();
    let mut i = 0;
    while i < n {
        let len = common(i, psv[i]).max(common(i, nsv[i]));
        let source = if len == 0 {
            None
        } else {
            // every suffix sharing `len` symbols with suffix i sits in one SA
            // interval around i's rank
            let rank = isa[i];
            let mut best = usize::MAX;
            let mut k = rank;
            while k > 0 && lcp[k] >= len {
                k -= 1;
                if sa[k] < i {
                    best = best.min(sa[k]);
                }
            }
            let mut k = rank + 1;
            while k < n && lcp[k] >= len {
                if sa[k] < i {
                    best = best.min(sa[k]);
                }
                k += 1;
            }
            debug_assert!(best < i);
            Some(best)
        };
        let literal = (i + len < n).then(|| s[i + len]);
        let phrase = Phrase {
            source,
            copy_len: len,
            literal,
        };
        i += phrase.cover();
        phrases.push(phrase);
    }
    Lz77Parse { phrases, len: n }
}

/// A set of text positions, strictly increasing.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Attractor {
    positions: Vec<usize>,
}

impl Attractor {
    /// Sorts and deduplicates `positions`, then checks they lie in `[0, n)`.
    pub fn new(mut positions: Vec<usize>, n: usize) -> Result<Self> {
        positions.sort_unstable();
        positions.dedup();
        if positions.is_empty() {
            return Err(Error::InvalidAttractor("no positions".into()));
        }
        if let Some(&p) = positions.iter().find(|&&p| p >= n) {
            return Err(Error::InvalidAttractor(format!(
                "position {p} outside text of length {n}"
            )));
        }
        Ok(Attractor { positions })
    }

    pub fn positions(&self) -> &[usize] {
        &self.positions
    }

    /// Number of positions, `γ`.
    pub fn gamma(&self) -> usize {
        self.positions.len()
    }
}

/// One attractor position at the last symbol of every phrase.
pub fn attractor_from_lz77(parse: &Lz77Parse, text: &Text) -> Attractor {
    debug_assert_eq!(parse.text_len(), text.len());
    Attractor {
        positions: parse.phrase_ends(),
    }
}

/// Outcome of [`validate_attractor`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Validation {
    pub valid: bool,
    /// An interval whose substring has no occurrence crossing the candidate.
    pub witness: Option<Range<usize>>,
}

/// Largest text the command-line validator accepts; the check is cubic in
/// the worst case.
pub const VALIDATOR_MAX_LEN: usize = 500;

/// Exhaustive check that every substring has an occurrence containing a
/// candidate position. Quadratic after a naive suffix sort; meant for texts
/// of a few hundred symbols.
pub fn validate_attractor(text: &Text, candidate: &Attractor) -> Validation {
    let s = text.as_bytes();
    let n = s.len();

    let mut before = vec![0usize; n + 1];
    for i in 0..n {
        before[i + 1] = before[i] + usize::from(candidate.positions.binary_search(&i).is_ok());
    }
    let covered = |start: usize, len: usize| before[start + len] > before[start];

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| s[a..].cmp(&s[b..]));
    let adjacent_lcp: Vec<usize> = order
        .windows(2)
        .map(|w| s[w[0]..].iter().zip(&s[w[1]..]).take_while(|(a, b)| a == b).count())
        .collect();

    for len in 1..=n {
        // equal substrings of length `len` are runs of the sorted order with
        // adjacent common prefix >= len
        let mut group_start: Option<usize> = None;
        let mut group_covered = false;
        for (k, &pos) in order.iter().enumerate() {
            let continues = k > 0 && adjacent_lcp[k - 1] >= len;
            if !continues {
                if let (Some(start), false) = (group_start, group_covered) {
                    return Validation {
                        valid: false,
                        witness: Some(start..start + len),
                    };
                }
                group_start = None;
                group_covered = false;
            }
            if pos + len > n {
                continue;
            }
            if group_start.is_none() {
                group_start = Some(pos);
            }
            group_covered |= covered(pos, len);
        }
        if let (Some(start), false) = (group_start, group_covered) {
            return Validation {
                valid: false,
                witness: Some(start..start + len),
            };
        }
    }
    Validation {
        valid: true,
        witness: None,
    }
}
