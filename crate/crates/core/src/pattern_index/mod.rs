//! Pattern location on top of a Γ-tree.
//!
//! Every occurrence of a pattern either crosses a boundary between two
//! consecutive leaves (primary) or lies inside an unmarked leaf, in which
//! case it is a copy of an occurrence inside that leaf's source
//! (secondary). Primary occurrences are found by splitting the pattern at
//! each position and searching the two halves among the text around leaf
//! boundaries; secondary ones by following sources back to their targets.

mod boundary;
pub(crate) mod grid;
pub(crate) mod sources;
pub(crate) mod ztrie;

use std::ops::RangeInclusive;

use crate::error::Result;
use crate::gamma_tree::{GammaTree, PaddedText};
use crate::kr::{pow2_floor, PrefixHashes};
use crate::text::check_pattern;

use grid::Grid;
use sources::SourceArray;
use ztrie::{Probe, ZTrie};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum OccurrenceKind {
    Primary,
    Secondary,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Occurrence {
    pub pos: usize,
    pub kind: OccurrenceKind,
}

/// The ranges of one split `P = P[..k] · P[k..]`: Y elements that start with
/// the reversed left part and X elements that start with the right part.
/// `None` when either side matches nothing.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Split {
    pub k: usize,
    pub ranges: Option<(RangeInclusive<usize>, RangeInclusive<usize>)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PatternIndex {
    pub(crate) x_pos: Vec<usize>,
    /// Leaf boundary after each Y element, indexed by Y rank.
    pub(crate) y_end: Vec<usize>,
    pub(crate) max_leaf: usize,
    pub(crate) grid: Grid,
    pub(crate) x_trie: ZTrie,
    pub(crate) y_trie: ZTrie,
    pub(crate) sources: SourceArray,
}

/// Sizes of the pattern-side structures.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct PatternStats {
    pub boundaries: usize,
    pub x_trie_nodes: usize,
    pub y_trie_nodes: usize,
    pub grid_levels: usize,
    pub sources: usize,
}

impl PatternIndex {
    pub fn build(tree: &GammaTree, padded: &PaddedText) -> Self {
        let s = padded.as_bytes();
        let reversed: Vec<u8> = s.iter().rev().copied().collect();
        let leaves = tree.leaf_starts();
        let b = boundary::build(s, &reversed, &leaves);
        let n = s.len();

        let window = tree.top_block_len();
        let forward = PrefixHashes::new(*tree.kr(), s, window);
        let x_lens: Vec<usize> = b.x_pos.iter().map(|&p| n - p).collect();
        let x_trie = ZTrie::build(s, &forward, &b.x_pos, &x_lens, &b.x_lcp);
        drop(forward);

        let backward = PrefixHashes::new(*tree.kr(), &reversed, window);
        let y_starts: Vec<usize> = b.y_end.iter().map(|&e| n - e).collect();
        let y_trie = ZTrie::build(&reversed, &backward, &y_starts, &b.y_len, &b.y_lcp);

        PatternIndex {
            grid: Grid::new(&b.y_of_x),
            max_leaf: b.y_len.iter().copied().max().unwrap_or(0),
            x_pos: b.x_pos,
            y_end: b.y_end,
            x_trie,
            y_trie,
            sources: SourceArray::new(tree.sources()),
        }
    }

    pub fn boundaries(&self) -> usize {
        self.x_pos.len()
    }

    pub fn stats(&self) -> PatternStats {
        PatternStats {
            boundaries: self.boundaries(),
            x_trie_nodes: self.x_trie.nodes.len(),
            y_trie_nodes: self.y_trie.nodes.len(),
            grid_levels: self.grid.levels().len(),
            sources: self.sources.len(),
        }
    }

    /// Verified ranges for every split `k = 1..m-1`.
    ///
    /// Each trie answer is checked deterministically. The first candidate
    /// that passes a fingerprint test against the pattern is compared
    /// symbol by symbol with the text (the anchor); later candidates on the
    /// same side are compared with the anchor's text instead, where equal
    /// fingerprints of power-of-two prefixes and suffixes decide equality
    /// exactly.
    pub fn find_split_ranges(&self, tree: &GammaTree, pattern: &[u8]) -> Result<Vec<Split>> {
        check_pattern(pattern)?;
        Ok(self.splits(tree, pattern))
    }

    fn splits(&self, tree: &GammaTree, pattern: &[u8]) -> Vec<Split> {
        let m = pattern.len();
        let kr = *tree.kr();
        let forward = PrefixHashes::new(kr, pattern, m);
        let reversed: Vec<u8> = pattern.iter().rev().copied().collect();
        let backward = PrefixHashes::new(kr, &reversed, m);
        let mut scratch = Vec::new();

        // Y side first, longest left part first
        let mut y_ranges = vec![None; m];
        let mut anchor: Option<(usize, usize)> = None; // P[..k0] == S[e-k0..e]
        for k in (1..m.min(self.max_leaf + 1)).rev() {
            let probe = Probe {
                bytes: &reversed,
                hashes: &backward,
                offset: m - k,
            };
            let Some(v) = self.y_trie.search(&probe) else {
                continue;
            };
            let (lo, hi) = self.y_trie.range(v);
            let e = self.y_end[lo];
            if tree.substring_fp(e - k, e).hash != forward.hash(0, k) {
                continue;
            }
            let ok = match anchor {
                Some((e0, k0)) => text_equal(tree, e - k, e0 - k0, k),
                None => {
                    scratch.clear();
                    tree.extract_padded_into(e - k, k, &mut scratch);
                    let ok = scratch == pattern[..k];
                    if ok {
                        anchor = Some((e, k));
                    }
                    ok
                }
            };
            if ok {
                y_ranges[k] = Some(lo..=hi);
            }
        }

        // X side only where the left part matched, shortest offset first
        let mut anchor: Option<(usize, usize)> = None; // P[k0..] == S[a..a+m-k0]
        let mut out = Vec::with_capacity(m - 1);
        for (k, y_range) in y_ranges.into_iter().enumerate().skip(1) {
            let ranges = y_range.and_then(|y_range| {
                let probe = Probe {
                    bytes: pattern,
                    hashes: &forward,
                    offset: k,
                };
                let v = self.x_trie.search(&probe)?;
                let (lo, hi) = self.x_trie.range(v);
                let a = self.x_pos[lo];
                let len = m - k;
                if tree.substring_fp(a, a + len).hash != forward.hash(k, m) {
                    return None;
                }
                let ok = match anchor {
                    Some((a0, k0)) => text_equal(tree, a, a0 + (k - k0), len),
                    None => {
                        scratch.clear();
                        tree.extract_padded_into(a, len, &mut scratch);
                        let ok = scratch == pattern[k..];
                        if ok {
                            anchor = Some((a, k));
                        }
                        ok
                    }
                };
                ok.then_some((y_range, lo..=hi))
            });
            out.push(Split { k, ranges });
        }
        out
    }

    /// Occurrences that cross a leaf boundary.
    pub fn primary_occurrences(&self, tree: &GammaTree, pattern: &[u8]) -> Result<Vec<Occurrence>> {
        check_pattern(pattern)?;
        let mut out = Vec::new();
        self.primaries(tree, pattern, |pos| out.push(pos));
        Ok(out
            .into_iter()
            .map(|pos| Occurrence {
                pos,
                kind: OccurrenceKind::Primary,
            })
            .collect())
    }

    fn primaries(&self, tree: &GammaTree, pattern: &[u8], mut emit: impl FnMut(usize)) {
        let m = pattern.len();
        let all_x = self.boundaries() - 1;
        if m == 1 {
            // the symbol followed by anything: every X element qualifies
            let hashes = PrefixHashes::new(*tree.kr(), pattern, 1);
            let probe = Probe {
                bytes: pattern,
                hashes: &hashes,
                offset: 0,
            };
            let Some(v) = self.y_trie.search(&probe) else {
                return;
            };
            let (lo, hi) = self.y_trie.range(v);
            if tree.symbol_at(self.y_end[lo] - 1) != pattern[0] {
                return;
            }
            self.grid.report(0, all_x, lo, hi, |y| emit(self.y_end[y] - 1));
            return;
        }
        for split in self.splits(tree, pattern) {
            if let Some((ys, xs)) = split.ranges {
                self.grid.report(*xs.start(), *xs.end(), *ys.start(), *ys.end(), |y| {
                    emit(self.y_end[y] - split.k)
                });
            }
        }
    }

    /// Copies of `primaries` made through sources, each reported once.
    pub fn secondary_occurrences(&self, primaries: &[Occurrence], m: usize) -> Vec<Occurrence> {
        let mut out = Vec::new();
        let span = m.max(2);
        for occ in primaries {
            self.sources.expand(occ.pos, span, |pos| {
                out.push(Occurrence {
                    pos,
                    kind: OccurrenceKind::Secondary,
                })
            });
        }
        out
    }

    /// Primary then secondary occurrences, in discovery order, without
    /// deduplication.
    pub fn locate_detailed(&self, tree: &GammaTree, pattern: &[u8]) -> Result<Vec<Occurrence>> {
        let mut occ = self.primary_occurrences(tree, pattern)?;
        let secondary = self.secondary_occurrences(&occ, pattern.len());
        occ.extend(secondary);
        Ok(occ)
    }

    /// Sorted starting positions of all occurrences.
    pub fn locate(&self, tree: &GammaTree, pattern: &[u8]) -> Result<Vec<usize>> {
        let mut pos: Vec<usize> = self
            .locate_detailed(tree, pattern)?
            .into_iter()
            .map(|o| o.pos)
            .collect();
        pos.sort_unstable();
        debug_assert!(pos.windows(2).all(|w| w[0] < w[1]));
        Ok(pos)
    }
}

/// Whether padded-text substrings `[a, a+len)` and `[b, b+len)` are equal,
/// decided by their power-of-two prefixes and suffixes. Exact when the
/// fingerprint function is collision-free on power-of-two lengths.
fn text_equal(tree: &GammaTree, a: usize, b: usize, len: usize) -> bool {
    if len == 0 || a == b {
        return true;
    }
    let l = pow2_floor(len);
    tree.substring_fp(a, a + l).hash == tree.substring_fp(b, b + l).hash
        && (l == len || tree.substring_fp(a + len - l, a + len).hash == tree.substring_fp(b + len - l, b + len).hash)
}

#[cfg(test)]
mod tests;
