//! Permutation grid with orthogonal range reporting, as a wavelet matrix.

/// Plain bitvector with a rank directory (one cumulative count per word).
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct BitVec {
    words: Vec<u64>,
    len: usize,
    ranks: Vec<u32>,
}

impl BitVec {
    pub fn from_words(words: Vec<u64>, len: usize) -> Self {
        let mut ranks = Vec::with_capacity(words.len() + 1);
        let mut acc = 0u32;
        ranks.push(0);
        for w in &words {
            acc += w.count_ones();
            ranks.push(acc);
        }
        BitVec { words, len, ranks }
    }

    pub fn from_bits(bits: impl ExactSizeIterator<Item = bool>) -> Self {
        let len = bits.len();
        let mut words = vec![0u64; len.div_ceil(64)];
        for (i, b) in bits.enumerate() {
            if b {
                words[i / 64] |= 1 << (i % 64);
            }
        }
        Self::from_words(words, len)
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    pub fn len(&self) -> usize {
        self.len
    }

    /// Ones in `[0, i)`.
    #[inline]
    pub fn rank1(&self, i: usize) -> usize {
        let (w, b) = (i / 64, i % 64);
        let partial = if b == 0 {
            0
        } else {
            (self.words[w] & ((1u64 << b) - 1)).count_ones()
        };
        (self.ranks[w] + partial) as usize
    }

    #[inline]
    pub fn rank0(&self, i: usize) -> usize {
        i - self.rank1(i)
    }
}

/// Points `(x, y_of_x[x])` of a permutation, queried by rectangle.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct Grid {
    len: usize,
    /// Most significant bit first.
    levels: Vec<BitVec>,
}

impl Grid {
    pub fn new(y_of_x: &[usize]) -> Self {
        let len = y_of_x.len();
        let bits = bit_width(len);
        let mut cur = y_of_x.to_vec();
        let mut levels = Vec::with_capacity(bits);
        for depth in 0..bits {
            let shift = bits - 1 - depth;
            let bv = BitVec::from_bits(cur.iter().map(|&y| (y >> shift) & 1 == 1));
            // stable partition: zeros first
            let (zeros, ones): (Vec<usize>, Vec<usize>) =
                cur.iter().partition(|&&y| (y >> shift) & 1 == 0);
            cur = zeros;
            cur.extend(ones);
            levels.push(bv);
        }
        Grid { len, levels }
    }

    pub fn from_levels(len: usize, levels: Vec<BitVec>) -> Self {
        Grid { len, levels }
    }

    pub fn levels(&self) -> &[BitVec] {
        &self.levels
    }

    pub fn len(&self) -> usize {
        self.len
    }

    /// Calls `emit(y)` for every point with `x ∈ [x1, x2]` and `y ∈ [y1, y2]`
    /// (inclusive; empty when `x1 > x2` or `y1 > y2`).
    pub fn report(&self, x1: usize, x2: usize, y1: usize, y2: usize, mut emit: impl FnMut(usize)) {
        if x1 > x2 || y1 > y2 || x1 >= self.len || y1 >= self.len {
            return;
        }
        let x2 = x2.min(self.len - 1);
        let y2 = y2.min(self.len - 1);
        let bits = self.levels.len();
        if bits == 0 {
            // a single point (0, 0)
            emit(0);
            return;
        }
        // (depth, begin, end, smallest value in this subtree)
        let mut stack = vec![(0usize, x1, x2 + 1, 0usize)];
        while let Some((depth, b, e, base)) = stack.pop() {
            if b >= e {
                continue;
            }
            let span = 1usize << (bits - depth);
            let top = base + span - 1;
            if top < y1 || base > y2 {
                continue;
            }
            if depth == bits {
                // a permutation has one point per value
                emit(base);
                continue;
            }
            let bv = &self.levels[depth];
            let zeros = bv.rank0(bv.len());
            let half = span / 2;
            stack.push((depth + 1, zeros + bv.rank1(b), zeros + bv.rank1(e), base + half));
            stack.push((depth + 1, bv.rank0(b), bv.rank0(e), base));
        }
    }
}

/// Bits needed to write every value below `len`.
pub(crate) fn bit_width(len: usize) -> usize {
    if len <= 1 {
        0
    } else {
        (usize::BITS - (len - 1).leading_zeros()) as usize
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::seq::SliceRandom;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn naive(perm: &[usize], x1: usize, x2: usize, y1: usize, y2: usize) -> Vec<usize> {
        let mut v: Vec<usize> = (x1..=x2.min(perm.len().saturating_sub(1)))
            .map(|x| perm[x])
            .filter(|&y| y1 <= y && y <= y2)
            .collect();
        v.sort_unstable();
        v
    }

    fn query(g: &Grid, x1: usize, x2: usize, y1: usize, y2: usize) -> Vec<usize> {
        let mut v = Vec::new();
        g.report(x1, x2, y1, y2, |y| v.push(y));
        v.sort_unstable();
        v
    }

    #[test]
    fn rank() {
        let bv = BitVec::from_bits((0..200).map(|i| i % 3 == 0));
        for i in 0..=200 {
            assert_eq!(bv.rank1(i), (0..i).filter(|j| j % 3 == 0).count());
        }
    }

    #[test]
    fn singleton_and_full() {
        let g = Grid::new(&[0]);
        assert_eq!(query(&g, 0, 0, 0, 0), vec![0]);
        let g = Grid::new(&[2, 0, 1]);
        assert_eq!(query(&g, 0, 2, 0, 2), vec![0, 1, 2]);
        assert_eq!(query(&g, 1, 0, 0, 2), Vec::<usize>::new());
        assert_eq!(query(&g, 0, 2, 2, 1), Vec::<usize>::new());
    }

    #[test]
    fn random_rectangles_match_filter() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for len in [1usize, 2, 3, 7, 64, 65, 100, 257] {
            let mut perm: Vec<usize> = (0..len).collect();
            perm.shuffle(&mut rng);
            let g = Grid::new(&perm);
            assert_eq!(query(&g, 0, len - 1, 0, len - 1).len(), len);
            for _ in 0..1000 {
                let (a, b) = (rng.gen_range(0..len), rng.gen_range(0..len));
                let (c, d) = (rng.gen_range(0..len), rng.gen_range(0..len));
                let (x1, x2) = (a.min(b), a.max(b));
                let (y1, y2) = (c.min(d), c.max(d));
                assert_eq!(query(&g, x1, x2, y1, y2), naive(&perm, x1, x2, y1, y2));
            }
        }
    }
}
