//! Sources of all unmarked blocks, sorted by start, with predecessor search
//! on the start and range-maximum queries on the end.

use crate::gamma_tree::Source;

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct SourceArray {
    entries: Vec<Source>,
    /// `table[k][i]` is the index of a maximal end in `[i, i + 2^k)`.
    table: Vec<Vec<u32>>,
}

impl SourceArray {
    pub fn new(mut entries: Vec<Source>) -> Self {
        entries.sort_by_key(|s| (s.source_start, s.target_start));
        let table = sparse_table(&entries);
        SourceArray { entries, table }
    }

    pub fn entries(&self) -> &[Source] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    /// Number of sources starting at or before `pos`.
    #[inline]
    pub fn count_starting_by(&self, pos: usize) -> usize {
        self.entries.partition_point(|s| s.source_start <= pos)
    }

    /// Index of a source with the rightmost end among `[a, b]`.
    #[inline]
    pub fn rightmost_end(&self, a: usize, b: usize) -> usize {
        let k = (usize::BITS - 1 - (b - a + 1).leading_zeros()) as usize;
        let i = self.table[k][a] as usize;
        let j = self.table[k][b + 1 - (1 << k)] as usize;
        if end(&self.entries[j]) > end(&self.entries[i]) {
            j
        } else {
            i
        }
    }

    /// Reports every copy of the occurrence `[pos, pos+len)` made by some
    /// source, then every copy of those copies, and so on. Each position is
    /// reported once.
    pub fn expand(&self, pos: usize, len: usize, mut emit: impl FnMut(usize)) {
        if self.entries.is_empty() {
            return;
        }
        let mut occurrences = vec![pos];
        let mut ranges = Vec::new();
        while let Some(p) = occurrences.pop() {
            let r = self.count_starting_by(p);
            if r == 0 {
                continue;
            }
            ranges.push((0, r - 1));
            while let Some((a, b)) = ranges.pop() {
                let k = self.rightmost_end(a, b);
                let src = &self.entries[k];
                if src.source_start + src.len < p + len {
                    continue;
                }
                let copy = src.target_start + (p - src.source_start);
                emit(copy);
                occurrences.push(copy);
                if k > a {
                    ranges.push((a, k - 1));
                }
                if k < b {
                    ranges.push((k + 1, b));
                }
            }
        }
    }
}

#[inline]
fn end(s: &Source) -> usize {
    s.source_start + s.len
}

fn sparse_table(entries: &[Source]) -> Vec<Vec<u32>> {
    let n = entries.len();
    let mut table = vec![(0..n as u32).collect::<Vec<u32>>()];
    let mut k = 1;
    while (1 << k) <= n {
        let prev = &table[k - 1];
        let half = 1 << (k - 1);
        let row = (0..=n - (1 << k))
            .map(|i| {
                let (a, b) = (prev[i], prev[i + half]);
                if end(&entries[b as usize]) > end(&entries[a as usize]) {
                    b
                } else {
                    a
                }
            })
            .collect();
        table.push(row);
        k += 1;
    }
    table
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn rmq_matches_scan() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for n in [1usize, 2, 5, 17, 64, 100] {
            let entries: Vec<Source> = (0..n)
                .map(|i| Source {
                    source_start: rng.gen_range(0..50),
                    target_start: 1000 + i,
                    len: 1 << rng.gen_range(0..5),
                })
                .collect();
            let sa = SourceArray::new(entries);
            for a in 0..n {
                for b in a..n {
                    let k = sa.rightmost_end(a, b);
                    assert!((a..=b).contains(&k));
                    let best = (a..=b).map(|i| end(&sa.entries()[i])).max().unwrap();
                    assert_eq!(end(&sa.entries()[k]), best);
                }
            }
        }
    }

    #[test]
    fn predecessor() {
        let sa = SourceArray::new(vec![
            Source { source_start: 4, target_start: 20, len: 2 },
            Source { source_start: 1, target_start: 10, len: 2 },
        ]);
        assert_eq!(sa.count_starting_by(0), 0);
        assert_eq!(sa.count_starting_by(1), 1);
        assert_eq!(sa.count_starting_by(9), 2);
    }

    #[test]
    fn chained_copies() {
        // [0,4) copied to [8,12), whose part [8,10) is copied to [20,22)
        let sa = SourceArray::new(vec![
            Source { source_start: 0, target_start: 8, len: 4 },
            Source { source_start: 8, target_start: 20, len: 2 },
        ]);
        let mut out = Vec::new();
        sa.expand(1, 1, |p| out.push(p));
        out.sort_unstable();
        assert_eq!(out, vec![9, 21]);
        out.clear();
        sa.expand(1, 3, |p| out.push(p));
        assert_eq!(out, vec![9]);
        out.clear();
        sa.expand(2, 3, |p| out.push(p));
        assert!(out.is_empty());
    }
}
