//! The Γ-tree: a level-halving block decomposition of the padded text.
//!
//! Level 0 cuts the padded text into blocks of length `b0`. At every level a
//! block is *marked* when it lies within distance `< b_l` of an attractor
//! position; marked blocks are split in two at the next level, while
//! unmarked blocks store a pointer to an occurrence of their content that
//! crosses an attractor position. That occurrence always falls inside two
//! consecutive marked blocks of the same level, so the tree is navigable
//! top-down without ever storing the text.
//!
//! Blocks live in flat per-level arrays. The children of the `k`-th marked
//! block of level `l` are the blocks at slots `2k` and `2k + 1` of level
//! `l + 1`.

mod build;

use crate::attractor::Attractor;
use crate::error::{Error, Result};
use crate::kr::{ExtendedFingerprint, KrFunction};
use crate::text::{Text, RESERVED_SYMBOL};

/// The text followed by a sentinel 0 and zero padding up to a whole number
/// of top-level blocks, together with the attractor extended by the
/// sentinel position.
#[derive(Clone, Debug)]
pub struct PaddedText {
    bytes: Vec<u8>,
    original_len: usize,
    top_block_len: usize,
    attractor: Vec<usize>,
}

impl PaddedText {
    /// `b0` is the smallest power of two (at least 2) such that `γ'` blocks
    /// of that length hold the text plus its sentinel, where `γ' = γ + 1`
    /// counts the sentinel as an attractor position. The padded length is
    /// then exactly `γ' · b0`.
    pub fn new(text: &Text, attractor: &Attractor) -> Result<Self> {
        let n = text.len();
        if let Some(&p) = attractor.positions().last() {
            if p >= n {
                return Err(Error::InvalidAttractor(format!(
                    "position {p} outside text of length {n}"
                )));
            }
        }
        let mut positions = attractor.positions().to_vec();
        positions.push(n);
        let gamma = positions.len();
        let top_block_len = (n + 1).div_ceil(gamma).max(2).next_power_of_two();
        let mut bytes = Vec::with_capacity(gamma * top_block_len);
        bytes.extend_from_slice(text.as_bytes());
        bytes.resize(gamma * top_block_len, RESERVED_SYMBOL);
        Ok(PaddedText {
            bytes,
            original_len: n,
            top_block_len,
            attractor: positions,
        })
    }

    pub fn as_bytes(&self) -> &[u8] {
        &self.bytes
    }

    pub fn original_len(&self) -> usize {
        self.original_len
    }

    pub fn padded_len(&self) -> usize {
        self.bytes.len()
    }

    pub fn top_block_len(&self) -> usize {
        self.top_block_len
    }

    /// Attractor positions including the sentinel, strictly increasing.
    pub fn effective_attractor(&self) -> &[usize] {
        &self.attractor
    }
}

/// An explicit block: its level and its slot within that level.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct BlockRef {
    pub level: usize,
    pub index: usize,
}

/// How an unmarked block reaches its content.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) struct Pointer {
    /// Slot of the marked block holding the start of the source.
    pub target: usize,
    /// Offset of the source inside that block. When nonzero the source
    /// continues into slot `target + 1`.
    pub offset: usize,
    /// Fingerprint of the part of the source inside `target`.
    pub source_suffix: ExtendedFingerprint,
}

#[derive(Clone, Debug)]
pub(crate) struct Level {
    pub block_len: usize,
    pub marked: Vec<bool>,
    /// Fingerprint of every explicit block.
    pub block_hash: Vec<u64>,
    /// One per unmarked block, in slot order.
    pub pointers: Vec<Pointer>,
    /// One per marked block of the last level.
    pub symbols: Vec<u8>,

    // derived on construction and on load
    pub starts: Vec<usize>,
    pub marked_before: Vec<usize>,
    pub block_pow: ExtendedFingerprint,
}

impl Level {
    #[inline]
    fn marked_rank(&self, slot: usize) -> usize {
        self.marked_before[slot]
    }

    #[inline]
    fn unmarked_rank(&self, slot: usize) -> usize {
        slot - self.marked_before[slot]
    }

    #[inline]
    fn block_fp(&self, slot: usize) -> ExtendedFingerprint {
        ExtendedFingerprint {
            hash: self.block_hash[slot],
            ..self.block_pow
        }
    }

    pub fn len(&self) -> usize {
        self.marked.len()
    }

    pub fn marked_count(&self) -> usize {
        self.marked_before[self.len()]
    }
}

/// What an explicit block stores, as seen from outside.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BlockKind {
    /// Split into two children at the next level.
    Internal { left: BlockRef },
    /// A marked block of the last level; holds one symbol.
    Symbol(u8),
    /// Copies its content from `source_start`, which lies in `first` and,
    /// when `second` is set, continues into it.
    Pointer {
        first: BlockRef,
        second: Option<BlockRef>,
        offset: usize,
        source_start: usize,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BlockInfo {
    pub block: BlockRef,
    pub start: usize,
    pub len: usize,
    pub kind: BlockKind,
}

impl BlockInfo {
    pub fn is_marked(&self) -> bool {
        !matches!(self.kind, BlockKind::Pointer { .. })
    }

    pub fn is_leaf(&self) -> bool {
        !matches!(self.kind, BlockKind::Internal { .. })
    }
}

/// A source interval and the unmarked block that copies it.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Source {
    pub source_start: usize,
    pub target_start: usize,
    pub len: usize,
}

/// Size accounting of a built tree.
#[derive(Clone, Debug, PartialEq, serde::Serialize)]
pub struct TreeStats {
    pub n: usize,
    pub padded_len: usize,
    /// Attractor size including the sentinel position.
    pub gamma: usize,
    pub top_block_len: usize,
    /// Number of halvings; levels are numbered `0..=levels`.
    pub levels: usize,
    pub leaves: usize,
    pub marked_count: usize,
    pub marked_per_level: Vec<usize>,
    pub explicit_count: usize,
    pub stored_fp_count: usize,
    /// `3γ'·lg(n'/γ') + γ'`.
    pub leaf_bound: f64,
}

impl TreeStats {
    pub fn bound_ratio(&self) -> f64 {
        self.leaves as f64 / self.leaf_bound
    }
}

#[derive(Clone, Debug)]
pub struct GammaTree {
    kr: KrFunction,
    n: usize,
    padded_len: usize,
    attractor: Vec<usize>,
    levels: Vec<Level>,
    /// Fingerprints of the first `i` top-level blocks, `i = 0..=t0`.
    top_prefix: Vec<ExtendedFingerprint>,
}

impl GammaTree {
    /// Builds the tree over `text` and `attractor`.
    ///
    /// With `verify_sources` every source found by fingerprint lookup is
    /// confirmed symbol by symbol, so the tree is correct regardless of
    /// fingerprint collisions. Without it the build is Monte Carlo.
    pub fn build(
        text: &Text,
        attractor: &Attractor,
        kr: KrFunction,
        verify_sources: bool,
    ) -> Result<Self> {
        let padded = PaddedText::new(text, attractor)?;
        Self::build_padded(&padded, kr, verify_sources)
    }

    pub fn build_padded(padded: &PaddedText, kr: KrFunction, verify_sources: bool) -> Result<Self> {
        let (levels, top_prefix) = build::build_levels(padded, kr, verify_sources)?;
        Ok(Self::assemble(
            kr,
            padded.original_len(),
            padded.padded_len(),
            padded.effective_attractor().to_vec(),
            levels,
            top_prefix,
        ))
    }

    /// Fills in the derived per-level fields.
    pub(crate) fn assemble(
        kr: KrFunction,
        n: usize,
        padded_len: usize,
        attractor: Vec<usize>,
        mut levels: Vec<Level>,
        top_prefix: Vec<ExtendedFingerprint>,
    ) -> Self {
        let mut starts: Vec<usize> = (0..levels[0].len())
            .map(|i| i * levels[0].block_len)
            .collect();
        for level in levels.iter_mut() {
            let mut before = Vec::with_capacity(level.len() + 1);
            let mut count = 0;
            before.push(0);
            for &m in &level.marked {
                count += usize::from(m);
                before.push(count);
            }
            let (r_pow, r_pow_inv) = kr.powers(level.block_len as u64);
            level.block_pow = ExtendedFingerprint {
                hash: 0,
                r_pow,
                r_pow_inv,
            };
            let half = level.block_len / 2;
            let next: Vec<usize> = starts
                .iter()
                .zip(&level.marked)
                .filter(|(_, &m)| m)
                .flat_map(|(&s, _)| [s, s + half])
                .collect();
            level.marked_before = before;
            level.starts = std::mem::replace(&mut starts, next);
        }
        GammaTree {
            kr,
            n,
            padded_len,
            attractor,
            levels,
            top_prefix,
        }
    }

    pub fn kr(&self) -> &KrFunction {
        &self.kr
    }

    /// Length of the original text.
    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn padded_len(&self) -> usize {
        self.padded_len
    }

    pub fn top_block_len(&self) -> usize {
        self.levels[0].block_len
    }

    /// Number of levels, `L + 1`; the last one has blocks of length 1.
    pub fn level_count(&self) -> usize {
        self.levels.len()
    }

    /// Attractor positions including the sentinel.
    pub fn effective_attractor(&self) -> &[usize] {
        &self.attractor
    }

    pub(crate) fn levels(&self) -> &[Level] {
        &self.levels
    }

    pub(crate) fn top_prefix(&self) -> &[ExtendedFingerprint] {
        &self.top_prefix
    }

    fn check_range(&self, start: usize, end: usize, limit: usize) -> Result<()> {
        if start > end || end > limit {
            return Err(Error::PositionOutOfRange {
                start,
                end,
                len: limit,
            });
        }
        Ok(())
    }

    /// `S[i]`, 0-based.
    pub fn extract_symbol(&self, i: usize) -> Result<u8> {
        self.check_range(i, i + 1, self.n)?;
        Ok(self.symbol_at(i))
    }

    /// Symbol of the padded text at `i < n'`.
    pub(crate) fn symbol_at(&self, i: usize) -> u8 {
        let b0 = self.levels[0].block_len;
        let (mut level, mut slot, mut off) = (0, i / b0, i % b0);
        loop {
            let lv = &self.levels[level];
            if lv.marked[slot] {
                let rank = lv.marked_rank(slot);
                if level + 1 == self.levels.len() {
                    return lv.symbols[rank];
                }
                let half = lv.block_len / 2;
                slot = 2 * rank + usize::from(off >= half);
                off %= half;
                level += 1;
            } else {
                let p = &lv.pointers[lv.unmarked_rank(slot)];
                off += p.offset;
                slot = p.target;
                if off >= lv.block_len {
                    off -= lv.block_len;
                    slot += 1;
                }
            }
        }
    }

    /// `S[start..start+len]`, 0-based.
    pub fn extract(&self, start: usize, len: usize) -> Result<Vec<u8>> {
        self.check_range(start, start + len, self.n)?;
        let mut out = Vec::with_capacity(len);
        self.extract_padded_into(start, len, &mut out);
        Ok(out)
    }

    /// Appends padded-text symbols `[start, start+len)` to `out`.
    pub(crate) fn extract_padded_into(&self, start: usize, len: usize, out: &mut Vec<u8>) {
        if len == 0 {
            return;
        }
        let b0 = self.levels[0].block_len;
        let end = start + len;
        let mut pos = start;
        while pos < end {
            let slot = pos / b0;
            let off = pos % b0;
            let take = (b0 - off).min(end - pos);
            self.extract_block(0, slot, off, take, out);
            pos += take;
        }
    }

    /// Appends `len` symbols of block `(level, slot)` starting at `off`.
    fn extract_block(&self, level: usize, slot: usize, off: usize, len: usize, out: &mut Vec<u8>) {
        let lv = &self.levels[level];
        if lv.marked[slot] {
            let rank = lv.marked_rank(slot);
            if level + 1 == self.levels.len() {
                out.push(lv.symbols[rank]);
                return;
            }
            let half = lv.block_len / 2;
            if off < half {
                let take = (half - off).min(len);
                self.extract_block(level + 1, 2 * rank, off, take, out);
                if take < len {
                    self.extract_block(level + 1, 2 * rank + 1, 0, len - take, out);
                }
            } else {
                self.extract_block(level + 1, 2 * rank + 1, off - half, len, out);
            }
        } else {
            let p = &lv.pointers[lv.unmarked_rank(slot)];
            let off = off + p.offset;
            let b = lv.block_len;
            if off >= b {
                self.extract_block(level, p.target + 1, off - b, len, out);
            } else {
                let take = (b - off).min(len);
                self.extract_block(level, p.target, off, take, out);
                if take < len {
                    self.extract_block(level, p.target + 1, 0, len - take, out);
                }
            }
        }
    }

    /// Fingerprint of the padded-text prefix of length `j ≤ n'`.
    pub fn prefix_fingerprint(&self, j: usize) -> Result<ExtendedFingerprint> {
        self.check_range(0, j, self.padded_len)?;
        Ok(self.prefix_fp(j))
    }

    pub(crate) fn prefix_fp(&self, j: usize) -> ExtendedFingerprint {
        let kr = &self.kr;
        let b0 = self.levels[0].block_len;
        let mut acc = self.top_prefix[j / b0];
        let (mut level, mut slot, mut k) = (0, j / b0, j % b0);
        // invariant: acc covers the text before block (level, slot), and we
        // still need the fingerprint of that block's first k symbols
        while k > 0 {
            let lv = &self.levels[level];
            if lv.marked[slot] {
                let left = 2 * lv.marked_rank(slot);
                let child = &self.levels[level + 1];
                let half = child.block_len;
                if k >= half {
                    acc = kr.concat(acc, child.block_fp(left));
                    slot = left + 1;
                    k -= half;
                } else {
                    slot = left;
                }
                level += 1;
            } else {
                let p = &lv.pointers[lv.unmarked_rank(slot)];
                let head = lv.block_len - p.offset;
                if p.offset == 0 {
                    slot = p.target;
                } else if k >= head {
                    acc = kr.concat(acc, p.source_suffix);
                    slot = p.target + 1;
                    k -= head;
                } else {
                    // prefix of length k of the source = inverse of the
                    // target block's first `offset` symbols, then its first
                    // `offset + k` symbols
                    let lead = kr.split_left(lv.block_fp(p.target), p.source_suffix);
                    acc = kr.concat(acc, kr.inverse(lead));
                    slot = p.target;
                    k += p.offset;
                }
            }
        }
        acc
    }

    /// Fingerprint of padded-text symbols `[start, end)`, `end ≤ n'`.
    pub fn substring_fingerprint(&self, start: usize, end: usize) -> Result<ExtendedFingerprint> {
        self.check_range(start, end, self.padded_len)?;
        Ok(self.substring_fp(start, end))
    }

    #[inline]
    pub(crate) fn substring_fp(&self, start: usize, end: usize) -> ExtendedFingerprint {
        if start == end {
            return ExtendedFingerprint::EMPTY;
        }
        self.kr
            .split_right(self.prefix_fp(end), self.prefix_fp(start))
    }

    /// Every explicit block of `level`, in slot order.
    pub fn blocks(&self, level: usize) -> Vec<BlockInfo> {
        let lv = &self.levels[level];
        let last = level + 1 == self.levels.len();
        (0..lv.len())
            .map(|slot| {
                let kind = if lv.marked[slot] {
                    let rank = lv.marked_rank(slot);
                    if last {
                        BlockKind::Symbol(lv.symbols[rank])
                    } else {
                        BlockKind::Internal {
                            left: BlockRef {
                                level: level + 1,
                                index: 2 * rank,
                            },
                        }
                    }
                } else {
                    let p = &lv.pointers[lv.unmarked_rank(slot)];
                    BlockKind::Pointer {
                        first: BlockRef {
                            level,
                            index: p.target,
                        },
                        second: (p.offset > 0).then_some(BlockRef {
                            level,
                            index: p.target + 1,
                        }),
                        offset: p.offset,
                        source_start: lv.starts[p.target] + p.offset,
                    }
                };
                BlockInfo {
                    block: BlockRef { level, index: slot },
                    start: lv.starts[slot],
                    len: lv.block_len,
                    kind,
                }
            })
            .collect()
    }

    /// Leaves (unmarked blocks and marked last-level blocks) sorted by start.
    /// Their intervals tile the padded text.
    pub fn leaves(&self) -> Vec<BlockInfo> {
        let mut out: Vec<BlockInfo> = (0..self.levels.len())
            .flat_map(|l| self.blocks(l))
            .filter(BlockInfo::is_leaf)
            .collect();
        out.sort_by_key(|b| b.start);
        out
    }

    /// Leaf start positions in increasing order.
    pub fn leaf_starts(&self) -> Vec<usize> {
        let mut out = Vec::new();
        for (l, lv) in self.levels.iter().enumerate() {
            let last = l + 1 == self.levels.len();
            for slot in 0..lv.len() {
                if !lv.marked[slot] || last {
                    out.push(lv.starts[slot]);
                }
            }
        }
        out.sort_unstable();
        out
    }

    /// One source per unmarked block, in no particular order.
    pub fn sources(&self) -> Vec<Source> {
        let mut out = Vec::new();
        for lv in &self.levels {
            let mut next = 0;
            for slot in 0..lv.len() {
                if lv.marked[slot] {
                    continue;
                }
                let p = &lv.pointers[next];
                next += 1;
                out.push(Source {
                    source_start: lv.starts[p.target] + p.offset,
                    target_start: lv.starts[slot],
                    len: lv.block_len,
                });
            }
        }
        out
    }

    pub fn stats(&self) -> TreeStats {
        let marked_per_level: Vec<usize> = self.levels.iter().map(Level::marked_count).collect();
        let explicit_count: usize = self.levels.iter().map(Level::len).sum();
        let unmarked: usize = self.levels.iter().map(|l| l.pointers.len()).sum();
        let internal: usize = marked_per_level[..marked_per_level.len() - 1].iter().sum();
        let gamma = self.attractor.len();
        let top = self.levels[0].block_len;
        TreeStats {
            n: self.n,
            padded_len: self.padded_len,
            gamma,
            top_block_len: top,
            levels: self.levels.len() - 1,
            leaves: explicit_count - internal,
            marked_count: marked_per_level.iter().sum(),
            marked_per_level,
            explicit_count,
            stored_fp_count: explicit_count + unmarked + self.top_prefix.len(),
            leaf_bound: 3.0 * gamma as f64 * (self.padded_len as f64 / gamma as f64).log2()
                + gamma as f64,
        }
    }
}

#[cfg(test)]
mod tests;
