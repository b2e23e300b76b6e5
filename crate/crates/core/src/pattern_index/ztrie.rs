//! Weak prefix search over a sorted multiset of text substrings: a compact
//! trie navigated by fat binary search over two-fattest handle lengths.
//!
//! Given a pattern that prefixes at least one stored string, the search
//! returns the highest node whose string the pattern prefixes, in
//! `O(log |p|)` fingerprint lookups. For any other pattern it may return an
//! arbitrary node, so callers verify.

use crate::kr::{pow2_floor, PrefixHashes};

pub(crate) const NONE: u32 = u32::MAX;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub(crate) struct Node {
    pub len: usize,
    pub parent: u32,
    /// Range of the multiset under this node, inclusive.
    pub lo: u32,
    pub hi: u32,
    pub handle_len: usize,
    pub handle_hash: u64,
    /// Hashes of the handle's longest power-of-two prefix and suffix.
    pub handle_head: u64,
    pub handle_tail: u64,
    pub full_hash: u64,
    /// First symbol below the parent.
    pub exit: u8,
}

/// A pattern read as `bytes[offset..]`, with prefix hashes of `bytes`.
pub(crate) struct Probe<'a> {
    pub bytes: &'a [u8],
    pub hashes: &'a PrefixHashes,
    pub offset: usize,
}

impl Probe<'_> {
    #[inline]
    pub fn len(&self) -> usize {
        self.bytes.len() - self.offset
    }

    #[inline]
    pub fn hash(&self, a: usize, b: usize) -> u64 {
        self.hashes.hash(self.offset + a, self.offset + b)
    }

    #[inline]
    pub fn at(&self, i: usize) -> u8 {
        self.bytes[self.offset + i]
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct ZTrie {
    pub nodes: Vec<Node>,
    /// `children[child_start[v]..child_start[v+1]]`, sorted by symbol.
    pub child_start: Vec<u32>,
    pub child_symbol: Vec<u8>,
    pub child_node: Vec<u32>,
    /// `(handle_len, handle_hash, node)` for every non-root node, sorted.
    pub navigator: Vec<(usize, u64, u32)>,
}

/// The integer in `(a, b]` with the most trailing zeros (`a < b`).
#[inline]
pub(crate) fn two_fattest(a: usize, b: usize) -> usize {
    debug_assert!(a < b);
    let top = usize::BITS - 1 - (a ^ b).leading_zeros();
    b & (usize::MAX << top)
}

impl ZTrie {
    /// Builds the trie of the strings `text[starts[i]..starts[i]+lens[i])`,
    /// which must be sorted; `lcp[i]` is the longest common prefix of
    /// strings `i-1` and `i` (`lcp[0]` is ignored).
    pub fn build(text: &[u8], hashes: &PrefixHashes, starts: &[usize], lens: &[usize], lcp: &[usize]) -> Self {
        let count = starts.len();
        let mut nodes = vec![Node {
            parent: NONE,
            hi: count.saturating_sub(1) as u32,
            ..Node::default()
        }];
        let mut children: Vec<Vec<(u8, u32)>> = vec![Vec::new()];
        let mut path: Vec<u32> = vec![0];

        let symbol = |elem: u32, depth: usize| text[starts[elem as usize] + depth];

        for i in 0..count {
            let common = if i == 0 { 0 } else { lcp[i] };
            let mut popped = NONE;
            while nodes[*path.last().unwrap() as usize].len > common {
                popped = path.pop().unwrap();
                nodes[popped as usize].hi = (i - 1) as u32;
            }
            let top = *path.last().unwrap();
            if nodes[top as usize].len < common {
                // split the edge from `top` to `popped` at depth `common`
                let mid = nodes.len() as u32;
                let lo = nodes[popped as usize].lo;
                nodes.push(Node {
                    len: common,
                    parent: top,
                    lo,
                    ..Node::default()
                });
                let edge = children[top as usize].last_mut().unwrap();
                debug_assert_eq!(edge.1, popped);
                edge.1 = mid;
                children.push(vec![(symbol(lo, common), popped)]);
                nodes[popped as usize].parent = mid;
                path.push(mid);
            }
            let top = *path.last().unwrap();
            if lens[i] > common {
                let leaf = nodes.len() as u32;
                nodes.push(Node {
                    len: lens[i],
                    parent: top,
                    lo: i as u32,
                    ..Node::default()
                });
                children.push(Vec::new());
                children[top as usize].push((symbol(i as u32, common), leaf));
                path.push(leaf);
            }
        }
        for &v in &path {
            nodes[v as usize].hi = count.saturating_sub(1) as u32;
        }

        let mut navigator = Vec::with_capacity(nodes.len());
        for v in 1..nodes.len() {
            let parent_len = nodes[nodes[v].parent as usize].len;
            let node = &mut nodes[v];
            let st = starts[node.lo as usize];
            let k = two_fattest(parent_len, node.len);
            let l = pow2_floor(k);
            node.handle_len = k;
            node.handle_hash = hashes.hash(st, st + k);
            node.handle_head = hashes.hash(st, st + l);
            node.handle_tail = hashes.hash(st + k - l, st + k);
            node.full_hash = hashes.hash(st, st + node.len);
            node.exit = text[st + parent_len];
            navigator.push((k, node.handle_hash, v as u32));
        }
        navigator.sort_unstable();

        let mut child_start = Vec::with_capacity(nodes.len() + 1);
        let mut child_symbol = Vec::new();
        let mut child_node = Vec::new();
        for list in &children {
            child_start.push(child_symbol.len() as u32);
            for &(c, v) in list {
                child_symbol.push(c);
                child_node.push(v);
            }
        }
        child_start.push(child_symbol.len() as u32);

        ZTrie {
            nodes,
            child_start,
            child_symbol,
            child_node,
            navigator,
        }
    }

    pub fn child(&self, v: u32, c: u8) -> Option<u32> {
        let (a, b) = (
            self.child_start[v as usize] as usize,
            self.child_start[v as usize + 1] as usize,
        );
        self.child_symbol[a..b]
            .binary_search(&c)
            .ok()
            .map(|i| self.child_node[a + i])
    }

    /// A node whose handle is `p[0..f)`, confirmed on the handle's
    /// power-of-two prefix and suffix.
    fn lookup(&self, f: usize, p: &Probe) -> Option<u32> {
        let h = p.hash(0, f);
        let from = self.navigator.partition_point(|e| (e.0, e.1) < (f, h));
        let l = pow2_floor(f);
        let (head, tail) = (p.hash(0, l), p.hash(f - l, f));
        self.navigator[from..]
            .iter()
            .take_while(|e| e.0 == f && e.1 == h)
            .map(|e| e.2)
            .find(|&v| {
                let node = &self.nodes[v as usize];
                node.handle_head == head && node.handle_tail == tail
            })
    }

    /// The highest node whose string `p` prefixes, if `p` prefixes some
    /// stored string. Otherwise either `None` or an arbitrary node.
    pub fn search(&self, p: &Probe) -> Option<u32> {
        let m = p.len();
        if m == 0 || self.nodes.len() == 1 {
            return None;
        }
        let (mut a, mut b) = (0, m);
        let mut u = 0u32;
        while a < b {
            let f = two_fattest(a, b);
            match self.lookup(f, p) {
                Some(v) => {
                    u = v;
                    a = self.nodes[v as usize].len;
                }
                None => b = f - 1,
            }
        }
        let mut v = u;
        let len = self.nodes[v as usize].len;
        if len < m {
            v = self.child(v, p.at(len))?;
        }
        if v != 0 {
            let parent = self.nodes[v as usize].parent;
            let pl = self.nodes[parent as usize].len;
            let node = &self.nodes[v as usize];
            let confirmed = pl < m && self.nodes[parent as usize].full_hash == p.hash(0, pl) && node.exit == p.at(pl);
            if !confirmed {
                v = parent;
            }
        }
        let node = &self.nodes[v as usize];
        let parent_len = if v == 0 { 0 } else { self.nodes[node.parent as usize].len };
        (v != 0 && parent_len < m && m <= node.len).then_some(v)
    }

    pub fn range(&self, v: u32) -> (usize, usize) {
        let node = &self.nodes[v as usize];
        (node.lo as usize, node.hi as usize)
    }
}
