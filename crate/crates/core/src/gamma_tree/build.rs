use std::collections::HashMap;

use super::{Level, PaddedText, Pointer};
use crate::error::{Error, Result};
use crate::kr::{ExtendedFingerprint, KrFunction, PrefixHashes};

/// Builds the per-level arrays and the top-level prefix fingerprints.
pub(super) fn build_levels(
    padded: &PaddedText,
    kr: KrFunction,
    verify_sources: bool,
) -> Result<(Vec<Level>, Vec<ExtendedFingerprint>)> {
    let s = padded.as_bytes();
    let n_pad = s.len();
    let attractor = padded.effective_attractor();
    let b0 = padded.top_block_len();
    let hashes = PrefixHashes::new(kr, s, b0);

    let mut levels = Vec::new();
    let mut starts: Vec<usize> = (0..n_pad / b0).map(|i| i * b0).collect();
    let mut block_len = b0;
    loop {
        let last = block_len == 1;
        let marked: Vec<bool> = starts
            .iter()
            .map(|&st| near_attractor(attractor, st, block_len))
            .collect();
        let block_hash: Vec<u64> = starts
            .iter()
            .map(|&st| hashes.hash(st, st + block_len))
            .collect();

        let pointers = find_sources(
            s,
            &hashes,
            attractor,
            &starts,
            &marked,
            &block_hash,
            block_len,
            levels.len(),
            verify_sources,
        )?;

        let symbols = if last {
            starts
                .iter()
                .zip(&marked)
                .filter(|(_, &m)| m)
                .map(|(&st, _)| s[st])
                .collect()
        } else {
            Vec::new()
        };

        let half = block_len / 2;
        let next: Vec<usize> = starts
            .iter()
            .zip(&marked)
            .filter(|(_, &m)| m)
            .flat_map(|(&st, _)| [st, st + half])
            .collect();

        levels.push(Level {
            block_len,
            marked,
            block_hash,
            pointers,
            symbols,
            starts: Vec::new(),
            marked_before: Vec::new(),
            block_pow: ExtendedFingerprint::EMPTY,
        });
        if last {
            break;
        }
        starts = next;
        block_len = half;
    }

    let top_prefix = (0..=n_pad / b0)
        .map(|i| hashes.extended(0, i * b0))
        .collect();
    Ok((levels, top_prefix))
}

/// Whether block `[start, start+len)` is within distance `< len` of some
/// attractor position, i.e. some position lies in `(start-len, start+2len-1)`.
fn near_attractor(attractor: &[usize], start: usize, len: usize) -> bool {
    let lo = (start + 1).saturating_sub(len);
    let i = attractor.partition_point(|&a| a < lo);
    i < attractor.len() && attractor[i] < start + 2 * len - 1
}

/// For every unmarked block, finds the leftmost occurrence of its content
/// that covers an attractor position, trying positions in increasing order.
#[allow(clippy::too_many_arguments)]
fn find_sources(
    s: &[u8],
    hashes: &PrefixHashes,
    attractor: &[usize],
    starts: &[usize],
    marked: &[bool],
    block_hash: &[u64],
    block_len: usize,
    level: usize,
    verify: bool,
) -> Result<Vec<Pointer>> {
    let unmarked: Vec<usize> = (0..starts.len()).filter(|&k| !marked[k]).collect();
    if unmarked.is_empty() {
        return Ok(Vec::new());
    }
    let mut pending: HashMap<u64, Vec<usize>> = HashMap::new();
    for &slot in &unmarked {
        pending.entry(block_hash[slot]).or_default().push(slot);
    }
    let mut found: HashMap<usize, usize> = HashMap::with_capacity(unmarked.len());

    let n_pad = s.len();
    let mut next_window = 0;
    'scan: for &a in attractor {
        let lo = (a + 1).saturating_sub(block_len).max(next_window);
        let hi = a.min(n_pad - block_len);
        for j in lo..=hi {
            let h = hashes.hash(j, j + block_len);
            if let Some(slots) = pending.get_mut(&h) {
                slots.retain(|&slot| {
                    let st = starts[slot];
                    let ok = !verify || s[j..j + block_len] == s[st..st + block_len];
                    if ok {
                        found.insert(slot, j);
                    }
                    !ok
                });
                if slots.is_empty() {
                    pending.remove(&h);
                }
                if found.len() == unmarked.len() {
                    break 'scan;
                }
            }
        }
        next_window = next_window.max(hi + 1);
    }

    unmarked
        .iter()
        .map(|&slot| {
            let Some(&j) = found.get(&slot) else {
                return Err(Error::SourceNotFound {
                    level,
                    index: slot,
                    start: starts[slot],
                    len: block_len,
                });
            };
            // the source covers an attractor position, so every block it
            // touches at this level is explicit and marked
            let target = starts.partition_point(|&st| st <= j) - 1;
            debug_assert!(marked[target]);
            let offset = j - starts[target];
            debug_assert!(offset == 0 || starts.get(target + 1) == Some(&(starts[target] + block_len)));
            let source_suffix = hashes.extended(j, starts[target] + block_len);
            Ok(Pointer {
                target,
                offset,
                source_suffix,
            })
        })
        .collect()
}
