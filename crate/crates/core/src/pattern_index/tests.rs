use std::collections::BTreeSet;

use proptest::prelude::*;

use super::*;
use crate::attractor::{attractor_from_lz77, lz77_parse};
use crate::kr::KrFunction;
use crate::oracle::{classify_occurrences, naive_occurrences, naive_prefix_range};
use crate::text::Text;

struct Fixture {
    padded: Vec<u8>,
    tree: GammaTree,
    index: PatternIndex,
}

fn fixture(s: &[u8]) -> Fixture {
    let text = Text::new(s.to_vec()).unwrap();
    let gamma = attractor_from_lz77(&lz77_parse(&text), &text);
    let padded = PaddedText::new(&text, &gamma).unwrap();
    let tree = GammaTree::build_padded(&padded, KrFunction::new(2, 1).unwrap(), true).unwrap();
    let index = PatternIndex::build(&tree, &padded);
    Fixture {
        padded: padded.as_bytes().to_vec(),
        tree,
        index,
    }
}

impl Fixture {
    fn text(&self) -> &[u8] {
        &self.padded[..self.tree.len()]
    }

    fn check(&self, p: &[u8]) {
        let detailed = self.index.locate_detailed(&self.tree, p).unwrap();
        let mut seen = BTreeSet::new();
        for o in &detailed {
            assert!(seen.insert(o.pos), "{:?} reported twice for {p:?}", o.pos);
        }
        let expected = naive_occurrences(self.text(), p);
        assert_eq!(seen.into_iter().collect::<Vec<_>>(), expected, "pattern {p:?}");

        let report = classify_occurrences(self.text(), p, &self.tree.leaf_starts());
        let mut primary: Vec<usize> = detailed
            .iter()
            .filter(|o| o.kind == OccurrenceKind::Primary)
            .map(|o| o.pos)
            .collect();
        primary.sort_unstable();
        assert_eq!(primary, report.primary, "primaries of {p:?}");
    }

    fn check_all_substrings(&self, max_len: usize) {
        let text = self.text();
        let mut patterns = BTreeSet::new();
        for i in 0..text.len() {
            for l in 1..=max_len.min(text.len() - i) {
                patterns.insert(&text[i..i + l]);
            }
        }
        for p in patterns {
            self.check(p);
        }
    }
}

#[test]
fn single_symbol_pattern() {
    let f = fixture(b"abaababa");
    assert_eq!(f.index.locate(&f.tree, b"a").unwrap(), vec![0, 2, 3, 5, 7]);
    assert_eq!(f.index.locate(&f.tree, b"b").unwrap(), vec![1, 4, 6]);
    assert!(f.index.locate(&f.tree, b"c").unwrap().is_empty());
}

#[test]
fn rejects_bad_patterns() {
    let f = fixture(b"abaababa");
    assert!(f.index.locate(&f.tree, b"").is_err());
    assert!(f.index.locate(&f.tree, b"a\0").is_err());
}

#[test]
fn whole_text_is_one_primary() {
    let f = fixture(b"abaababa");
    let occ = f.index.locate_detailed(&f.tree, b"abaababa").unwrap();
    assert_eq!(
        occ,
        vec![Occurrence {
            pos: 0,
            kind: OccurrenceKind::Primary
        }]
    );
}

#[test]
fn exhaustive_small_texts() {
    for s in [
        &b"a"[..],
        b"ab",
        b"aaaa",
        b"abab",
        b"abaababa",
        b"mississippi",
        b"abracadabra abracadabra",
        b"aaaaaaaaaaaaaaaaaaaaaaaaaaaaaab",
    ] {
        let f = fixture(s);
        f.check_all_substrings(s.len());
        f.check(b"zz");
        f.check(b"abba");
    }
}

#[test]
fn split_ranges_match_naive_prefix_ranges() {
    let f = fixture(b"abaababaabaababaababa");
    let leaves = f.tree.leaf_starts();
    let s = &f.padded;
    let mut xs: Vec<&[u8]> = leaves[1..].iter().map(|&p| &s[p..]).collect();
    xs.sort();
    let mut ys: Vec<Vec<u8>> = leaves
        .windows(2)
        .map(|w| s[w[0]..w[1]].iter().rev().copied().collect())
        .collect();
    ys.sort();
    for p in [&b"ab"[..], b"aab", b"babaa", b"abaababaab", b"bb", b"abc"] {
        let splits = f.index.find_split_ranges(&f.tree, p).unwrap();
        assert_eq!(splits.len(), p.len() - 1);
        for split in splits {
            let left: Vec<u8> = p[..split.k].iter().rev().copied().collect();
            let expected = match (
                naive_prefix_range(&ys, &left),
                naive_prefix_range(&xs, &p[split.k..]),
            ) {
                (Some((a, b)), Some((c, d))) => Some((a..=b, c..=d)),
                _ => None,
            };
            assert_eq!(split.ranges, expected, "{p:?} split {}", split.k);
        }
    }
}

#[test]
fn occurrences_not_crossing_a_boundary_lie_in_unmarked_leaves() {
    let f = fixture(b"abaababaabaababaababaabaababaabaab");
    let leaves = f.tree.leaves();
    let text = f.text();
    for i in 0..text.len() {
        for j in i + 2..=text.len() {
            let leaf = leaves.iter().rev().find(|l| l.start <= i).unwrap();
            let inside = j <= leaf.start + leaf.len;
            if inside {
                assert!(!leaf.is_marked(), "[{i},{j}) inside a marked leaf");
            }
        }
    }
}

#[test]
fn repetitive_text_has_secondaries() {
    let s: Vec<u8> = b"abcab".iter().copied().cycle().take(300).collect();
    let f = fixture(&s);
    let occ = f.index.locate_detailed(&f.tree, b"bcab").unwrap();
    assert!(occ.iter().any(|o| o.kind == OccurrenceKind::Secondary));
    f.check_all_substrings(10);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn random_texts_all_short_substrings(s in proptest::collection::vec(1u8..=3, 1..150)) {
        let f = fixture(&s);
        f.check_all_substrings(8);
        f.check(&[1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 2]);
        f.check(&[4]);
    }

    #[test]
    fn random_binary_long_patterns(
        s in proptest::collection::vec(prop_oneof![Just(b'a'), Just(b'b')], 20..300),
        start in 0usize..300, len in 1usize..64,
    ) {
        let f = fixture(&s);
        let start = start % s.len();
        let len = 1 + (len - 1) % (s.len() - start);
        f.check(&s[start..start + len]);
        let mut mutated = s[start..start + len].to_vec();
        let last = mutated.len() - 1;
        mutated[last] = b'c';
        f.check(&mutated);
    }
}
