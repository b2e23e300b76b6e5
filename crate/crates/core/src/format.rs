//! Binary index file. See `docs/index-format.md` for the layout.

use crc::{Crc, CRC_64_XZ};

use crate::error::{Error, Result};
use crate::gamma_tree::{GammaTree, Level, Pointer, Source};
use crate::index::Index;
use crate::kr::{ExtendedFingerprint, KrFunction};
use crate::pattern_index::grid::{bit_width, BitVec, Grid};
use crate::pattern_index::sources::SourceArray;
use crate::pattern_index::ztrie::{Node, ZTrie, NONE};
use crate::pattern_index::PatternIndex;

pub const MAGIC: &[u8; 4] = b"GIDX";
pub const FORMAT_VERSION: u32 = 1;
const FLAG_VERIFIED: u32 = 1;
const CHECKSUM: Crc<u64> = Crc::<u64>::new(&CRC_64_XZ);

#[derive(Default)]
struct Writer {
    buf: Vec<u8>,
}

impl Writer {
    fn u32(&mut self, v: u32) {
        self.buf.extend_from_slice(&v.to_le_bytes());
    }

    fn u64(&mut self, v: u64) {
        self.buf.extend_from_slice(&v.to_le_bytes());
    }

    fn usize(&mut self, v: usize) {
        self.u64(v as u64);
    }

    fn usizes(&mut self, v: &[usize]) {
        self.usize(v.len());
        v.iter().for_each(|&x| self.usize(x));
    }

    fn u64s(&mut self, v: &[u64]) {
        self.usize(v.len());
        v.iter().for_each(|&x| self.u64(x));
    }

    fn bytes(&mut self, v: &[u8]) {
        self.usize(v.len());
        self.buf.extend_from_slice(v);
    }

    fn fp(&mut self, f: ExtendedFingerprint) {
        self.u64(f.hash);
        self.u64(f.r_pow);
        self.u64(f.r_pow_inv);
    }

    /// Writes a section as a length prefix followed by its body.
    fn section(&mut self, body: impl FnOnce(&mut Writer)) {
        let mut inner = Writer::default();
        body(&mut inner);
        self.bytes(&inner.buf);
    }
}

struct Reader<'a> {
    buf: &'a [u8],
    pos: usize,
}

fn corrupt(what: impl Into<String>) -> Error {
    Error::Corrupt(what.into())
}

impl<'a> Reader<'a> {
    fn new(buf: &'a [u8]) -> Self {
        Reader { buf, pos: 0 }
    }

    fn take(&mut self, n: usize) -> Result<&'a [u8]> {
        let end = self
            .pos
            .checked_add(n)
            .filter(|&e| e <= self.buf.len())
            .ok_or_else(|| corrupt("unexpected end of data"))?;
        let out = &self.buf[self.pos..end];
        self.pos = end;
        Ok(out)
    }

    fn u32(&mut self) -> Result<u32> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().unwrap()))
    }

    fn u64(&mut self) -> Result<u64> {
        Ok(u64::from_le_bytes(self.take(8)?.try_into().unwrap()))
    }

    fn usize(&mut self) -> Result<usize> {
        usize::try_from(self.u64()?).map_err(|_| corrupt("integer overflow"))
    }

    /// A count of items of `width` bytes each, checked against what is left.
    fn count(&mut self, width: usize) -> Result<usize> {
        let n = self.usize()?;
        if n.checked_mul(width).is_none_or(|b| b > self.buf.len() - self.pos) {
            return Err(corrupt("length prefix exceeds data"));
        }
        Ok(n)
    }

    fn usizes(&mut self) -> Result<Vec<usize>> {
        let n = self.count(8)?;
        (0..n).map(|_| self.usize()).collect()
    }

    fn u64s(&mut self) -> Result<Vec<u64>> {
        let n = self.count(8)?;
        (0..n).map(|_| self.u64()).collect()
    }

    fn bytes(&mut self) -> Result<&'a [u8]> {
        let n = self.count(1)?;
        self.take(n)
    }

    fn fp(&mut self) -> Result<ExtendedFingerprint> {
        Ok(ExtendedFingerprint {
            hash: self.u64()?,
            r_pow: self.u64()?,
            r_pow_inv: self.u64()?,
        })
    }

    fn section(&mut self) -> Result<Reader<'a>> {
        Ok(Reader::new(self.bytes()?))
    }

    fn finish(&self, what: &str) -> Result<()> {
        if self.pos == self.buf.len() {
            Ok(())
        } else {
            Err(corrupt(format!("trailing bytes in {what} section")))
        }
    }
}

fn ensure(cond: bool, what: &str) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(corrupt(what))
    }
}

pub(crate) fn encode(index: &Index) -> Vec<u8> {
    let tree = &index.tree;
    let pat = &index.patterns;
    let kr = tree.kr();
    let mut w = Writer::default();
    w.buf.extend_from_slice(MAGIC);
    w.u32(FORMAT_VERSION);
    w.u32(if index.verified { FLAG_VERIFIED } else { 0 });
    w.u32(index.security_exponent);
    w.u64(kr.modulus());
    w.u64(kr.base());
    w.usize(tree.len());
    w.usize(tree.padded_len());
    w.usize(tree.top_block_len());
    w.usize(tree.level_count() - 1);
    w.usize(tree.effective_attractor().len());

    w.section(|s| s.usizes(tree.effective_attractor()));
    w.section(|s| {
        for level in tree.levels() {
            s.usize(level.len());
            let bits = BitVec::from_bits(level.marked.iter().copied());
            s.u64s(bits.words());
            s.u64s(&level.block_hash);
            s.usize(level.pointers.len());
            for p in &level.pointers {
                s.usize(p.target);
                s.usize(p.offset);
                s.fp(p.source_suffix);
            }
            s.bytes(&level.symbols);
        }
        s.usize(tree.top_prefix().len());
        tree.top_prefix().iter().for_each(|&f| s.fp(f));
    });
    w.section(|s| {
        s.usizes(&pat.x_pos);
        s.usizes(&pat.y_end);
        s.usize(pat.max_leaf);
    });
    w.section(|s| {
        s.usize(pat.grid.len());
        s.usize(pat.grid.levels().len());
        for bv in pat.grid.levels() {
            s.u64s(bv.words());
        }
    });
    for trie in [&pat.x_trie, &pat.y_trie] {
        w.section(|s| write_trie(s, trie));
    }
    w.section(|s| {
        let entries = pat.sources.entries();
        s.usize(entries.len());
        for e in entries {
            s.usize(e.source_start);
            s.usize(e.target_start);
            s.usize(e.len);
        }
    });
    let sum = CHECKSUM.checksum(&w.buf);
    w.u64(sum);
    w.buf
}

fn write_trie(s: &mut Writer, t: &ZTrie) {
    s.usize(t.nodes.len());
    for v in &t.nodes {
        s.usize(v.len);
        s.u64(v.parent as u64);
        s.u64(v.lo as u64);
        s.u64(v.hi as u64);
        s.usize(v.handle_len);
        s.u64(v.handle_hash);
        s.u64(v.handle_head);
        s.u64(v.handle_tail);
        s.u64(v.full_hash);
        s.u64(v.exit as u64);
    }
    s.u64s(&t.child_start.iter().map(|&x| x as u64).collect::<Vec<_>>());
    s.bytes(&t.child_symbol);
    s.u64s(&t.child_node.iter().map(|&x| x as u64).collect::<Vec<_>>());
    s.usize(t.navigator.len());
    for &(k, h, v) in &t.navigator {
        s.usize(k);
        s.u64(h);
        s.u64(v as u64);
    }
}

fn read_u32_index(r: &mut Reader, bound: usize, what: &str) -> Result<u32> {
    let v = r.u64()?;
    ensure(v < bound as u64 && v < NONE as u64, what)?;
    Ok(v as u32)
}

fn read_trie(r: &mut Reader, elements: usize) -> Result<ZTrie> {
    let count = r.count(80)?;
    ensure(count >= 1, "trie without root")?;
    let mut nodes = Vec::with_capacity(count);
    for i in 0..count {
        let len = r.usize()?;
        let parent = r.u64()?;
        let parent = if i == 0 {
            ensure(parent == NONE as u64, "root has a parent")?;
            NONE
        } else {
            ensure(parent < count as u64, "bad parent")?;
            parent as u32
        };
        let lo = read_u32_index(r, elements.max(1), "bad node range")?;
        let hi = read_u32_index(r, elements.max(1), "bad node range")?;
        ensure(lo <= hi, "bad node range")?;
        let handle_len = r.usize()?;
        ensure(i == 0 || (1..=len).contains(&handle_len), "bad handle")?;
        let node = Node {
            len,
            parent,
            lo,
            hi,
            handle_len,
            handle_hash: r.u64()?,
            handle_head: r.u64()?,
            handle_tail: r.u64()?,
            full_hash: r.u64()?,
            exit: u8::try_from(r.u64()?).map_err(|_| corrupt("bad exit symbol"))?,
        };
        nodes.push(node);
    }
    for v in &nodes[1..] {
        ensure(nodes[v.parent as usize].len < v.len, "child not deeper than parent")?;
    }
    let child_start: Vec<u32> = r
        .u64s()?
        .into_iter()
        .map(|x| u32::try_from(x).map_err(|_| corrupt("bad child offset")))
        .collect::<Result<_>>()?;
    let child_symbol = r.bytes()?.to_vec();
    let child_node: Vec<u32> = r
        .u64s()?
        .into_iter()
        .map(|x| {
            ensure(x > 0 && x < count as u64, "bad child")?;
            Ok(x as u32)
        })
        .collect::<Result<_>>()?;
    ensure(child_start.len() == count + 1, "bad child offsets")?;
    ensure(child_symbol.len() == child_node.len(), "bad child arrays")?;
    ensure(
        child_start.windows(2).all(|w| w[0] <= w[1])
            && *child_start.last().unwrap() as usize == child_node.len()
            && child_start[0] == 0,
        "bad child offsets",
    )?;
    let nav = r.count(24)?;
    let mut navigator = Vec::with_capacity(nav);
    for _ in 0..nav {
        let k = r.usize()?;
        let h = r.u64()?;
        let v = r.u64()?;
        ensure(v > 0 && v < count as u64, "bad navigator entry")?;
        navigator.push((k, h, v as u32));
    }
    ensure(navigator.windows(2).all(|w| w[0] <= w[1]), "navigator not sorted")?;
    Ok(ZTrie {
        nodes,
        child_start,
        child_symbol,
        child_node,
        navigator,
    })
}

pub(crate) fn decode(bytes: &[u8]) -> Result<Index> {
    if bytes.len() < 4 || &bytes[..4] != MAGIC {
        return Err(Error::BadMagic);
    }
    if bytes.len() < 4 + 12 + 7 * 8 + 8 {
        return Err(corrupt("file too short"));
    }
    let (body, tail) = bytes.split_at(bytes.len() - 8);
    let stored = u64::from_le_bytes(tail.try_into().unwrap());
    let computed = CHECKSUM.checksum(body);
    if stored != computed {
        return Err(Error::ChecksumMismatch { stored, computed });
    }

    let mut r = Reader::new(body);
    r.take(4)?;
    let version = r.u32()?;
    if version != FORMAT_VERSION {
        return Err(Error::VersionMismatch {
            found: version,
            expected: FORMAT_VERSION,
        });
    }
    let flags = r.u32()?;
    let security_exponent = r.u32()?;
    let q = r.u64()?;
    let base = r.u64()?;
    let kr = KrFunction::from_parts(q, base).map_err(|e| corrupt(e.to_string()))?;
    let n = r.usize()?;
    let padded_len = r.usize()?;
    let b0 = r.usize()?;
    let halvings = r.usize()?;
    let gamma = r.usize()?;
    ensure(b0.is_power_of_two() && b0 >= 2, "bad top block length")?;
    ensure(b0.trailing_zeros() as usize == halvings, "level count does not match block length")?;
    ensure(gamma >= 2 && gamma.checked_mul(b0) == Some(padded_len), "bad padded length")?;
    ensure(n < padded_len && n >= 1, "bad text length")?;

    let mut s = r.section()?;
    let attractor = s.usizes()?;
    s.finish("attractor")?;
    ensure(attractor.len() == gamma, "attractor size mismatch")?;
    ensure(attractor.windows(2).all(|w| w[0] < w[1]), "attractor not increasing")?;
    ensure(attractor.last() == Some(&n), "attractor lacks the sentinel")?;

    let mut s = r.section()?;
    let mut levels = Vec::with_capacity(halvings + 1);
    let mut expected = gamma;
    for l in 0..=halvings {
        let block_len = b0 >> l;
        let count = s.usize()?;
        ensure(count == expected, "explicit block count mismatch")?;
        let words = s.u64s()?;
        ensure(words.len() == count.div_ceil(64), "bad marked bitmap")?;
        let bits = BitVec::from_words(words, count);
        let marked: Vec<bool> = (0..count).map(|i| bits.rank1(i + 1) > bits.rank1(i)).collect();
        let marked_count = marked.iter().filter(|&&m| m).count();
        let block_hash = s.u64s()?;
        ensure(block_hash.len() == count, "bad block fingerprints")?;
        let unmarked = s.count(40)?;
        ensure(unmarked == count - marked_count, "pointer count mismatch")?;
        let mut pointers = Vec::with_capacity(unmarked);
        for _ in 0..unmarked {
            let target = s.usize()?;
            let offset = s.usize()?;
            let source_suffix = s.fp()?;
            ensure(target < count && marked[target] && offset < block_len, "bad pointer")?;
            ensure(
                offset == 0 || (target + 1 < count && marked[target + 1]),
                "bad pointer",
            )?;
            pointers.push(Pointer {
                target,
                offset,
                source_suffix,
            });
        }
        let symbols = s.bytes()?.to_vec();
        let last = l == halvings;
        ensure(symbols.len() == if last { marked_count } else { 0 }, "bad symbols")?;
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
        expected = 2 * marked_count;
    }
    let top = s.count(24)?;
    ensure(top == gamma + 1, "bad prefix fingerprints")?;
    let top_prefix = (0..top).map(|_| s.fp()).collect::<Result<Vec<_>>>()?;
    s.finish("tree")?;
    let tree = GammaTree::assemble(kr, n, padded_len, attractor, levels, top_prefix);

    let mut s = r.section()?;
    let x_pos = s.usizes()?;
    let y_end = s.usizes()?;
    let max_leaf = s.usize()?;
    s.finish("boundary")?;
    let count = x_pos.len();
    ensure(count >= 1 && y_end.len() == count, "bad boundary arrays")?;
    ensure(x_pos.iter().all(|&p| p > 0 && p < padded_len), "bad X position")?;
    ensure(y_end.iter().all(|&e| e > 0 && e < padded_len), "bad Y position")?;
    ensure(max_leaf >= 1 && max_leaf <= b0, "bad leaf length")?;

    let mut s = r.section()?;
    let grid_len = s.usize()?;
    let grid_levels = s.count(8)?;
    ensure(grid_len == count, "grid size mismatch")?;
    let mut bvs = Vec::with_capacity(grid_levels);
    for _ in 0..grid_levels {
        let words = s.u64s()?;
        ensure(words.len() == grid_len.div_ceil(64), "bad grid level")?;
        bvs.push(BitVec::from_words(words, grid_len));
    }
    s.finish("grid")?;
    ensure(grid_levels == bit_width(grid_len), "bad grid depth")?;
    let grid = Grid::from_levels(grid_len, bvs);

    let mut s = r.section()?;
    let x_trie = read_trie(&mut s, count)?;
    s.finish("X trie")?;
    let mut s = r.section()?;
    let y_trie = read_trie(&mut s, count)?;
    s.finish("Y trie")?;

    let mut s = r.section()?;
    let entries = s.count(24)?;
    let mut sources = Vec::with_capacity(entries);
    for _ in 0..entries {
        let src = Source {
            source_start: s.usize()?,
            target_start: s.usize()?,
            len: s.usize()?,
        };
        ensure(
            src.len >= 1
                && src.source_start.checked_add(src.len).is_some_and(|e| e <= padded_len)
                && src.target_start.checked_add(src.len).is_some_and(|e| e <= padded_len),
            "bad source",
        )?;
        sources.push(src);
    }
    s.finish("sources")?;
    r.finish("index")?;

    let patterns = PatternIndex {
        x_pos,
        y_end,
        max_leaf,
        grid,
        x_trie,
        y_trie,
        sources: SourceArray::new(sources),
    };
    Ok(Index {
        tree,
        patterns,
        verified: flags & FLAG_VERIFIED != 0,
        security_exponent,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::text::Text;

    fn sample() -> Index {
        Index::from_text(&Text::try_from("abracadabra abracadabra cadabra").unwrap()).unwrap()
    }

    #[test]
    fn roundtrip_is_byte_identical() {
        let index = sample();
        let bytes = index.to_bytes();
        assert_eq!(&bytes[..4], MAGIC);
        let loaded = Index::from_bytes(&bytes).unwrap();
        assert_eq!(loaded.to_bytes(), bytes);
        assert_eq!(loaded.locate(b"abra").unwrap(), index.locate(b"abra").unwrap());
        assert_eq!(loaded.extract(0, 5).unwrap(), b"abrac");
    }

    #[test]
    fn every_flipped_byte_is_rejected() {
        let bytes = sample().to_bytes();
        for i in 0..bytes.len() {
            let mut bad = bytes.clone();
            bad[i] ^= 0x20;
            let err = Index::from_bytes(&bad).unwrap_err();
            if i < 4 {
                assert!(matches!(err, Error::BadMagic));
            } else {
                assert!(matches!(err, Error::ChecksumMismatch { .. }), "byte {i}: {err}");
            }
        }
    }

    #[test]
    fn version_and_truncation() {
        let bytes = sample().to_bytes();
        let mut v2 = bytes[..bytes.len() - 8].to_vec();
        v2[4] = 2;
        let sum = CHECKSUM.checksum(&v2);
        v2.extend_from_slice(&sum.to_le_bytes());
        assert!(matches!(
            Index::from_bytes(&v2),
            Err(Error::VersionMismatch { found: 2, expected: 1 })
        ));
        assert!(Index::from_bytes(&bytes[..10]).is_err());
        assert!(matches!(Index::from_bytes(b"nope"), Err(Error::BadMagic)));
    }
}
