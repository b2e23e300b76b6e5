use proptest::prelude::*;

use super::*;
use crate::attractor::{attractor_from_lz77, lz77_parse, Attractor};
use crate::kr::KrFunction;

fn kr() -> KrFunction {
    KrFunction::new(2, 7).unwrap()
}

fn lz_tree(s: &[u8]) -> (Text, GammaTree) {
    let text = Text::new(s.to_vec()).unwrap();
    let gamma = attractor_from_lz77(&lz77_parse(&text), &text);
    let tree = GammaTree::build(&text, &gamma, kr(), true).unwrap();
    (text, tree)
}

fn padded_bytes(text: &Text, tree: &GammaTree) -> Vec<u8> {
    let mut v = text.as_bytes().to_vec();
    v.resize(tree.padded_len(), 0);
    v
}

/// Structural checks that hold for every tree.
fn check_invariants(text: &Text, tree: &GammaTree) {
    let s = padded_bytes(text, tree);
    let attractor = tree.effective_attractor();
    let stats = tree.stats();

    assert!(attractor.contains(&text.len()));
    assert_eq!(tree.padded_len() % tree.top_block_len(), 0);
    assert_eq!(tree.padded_len() / tree.top_block_len(), attractor.len());
    assert_eq!(tree.levels().last().unwrap().block_len, 1);

    // leaves tile the padded text
    let mut pos = 0;
    for leaf in tree.leaves() {
        assert_eq!(leaf.start, pos);
        pos += leaf.len;
    }
    assert_eq!(pos, tree.padded_len());
    assert_eq!(stats.leaves, tree.leaves().len());
    assert_eq!(stats.explicit_count, 2 * stats.leaves - stats.gamma);
    assert!(stats.leaves as f64 <= stats.leaf_bound);

    for l in 0..tree.level_count() {
        let blocks = tree.blocks(l);
        let marked = blocks.iter().filter(|b| b.is_marked()).count();
        assert!(marked <= 3 * stats.gamma);
        for b in &blocks {
            let near = attractor.iter().any(|&a| {
                let end = b.start + b.len - 1;
                let dist = if a < b.start {
                    b.start - a
                } else {
                    a.saturating_sub(end)
                };
                dist < b.len
            });
            assert_eq!(near, b.is_marked(), "marking rule at {b:?}");
            assert_eq!(
                tree.kr().hash(&s[b.start..b.start + b.len]),
                tree.levels()[l].block_hash[b.block.index]
            );
            if let BlockKind::Pointer {
                first,
                second,
                offset,
                source_start,
            } = b.kind
            {
                assert!(offset < b.len);
                assert_eq!(second.is_some(), offset > 0);
                assert!(blocks[first.index].is_marked());
                if let Some(sec) = second {
                    assert!(blocks[sec.index].is_marked());
                    assert_eq!(blocks[sec.index].start, blocks[first.index].start + b.len);
                }
                let src = source_start..source_start + b.len;
                assert!(attractor.iter().any(|a| src.contains(a)));
                assert_eq!(s[src], s[b.start..b.start + b.len]);
            }
        }
    }

    assert_eq!(tree.extract(0, text.len()).unwrap(), text.as_bytes());
    for (i, &c) in text.iter().enumerate() {
        assert_eq!(tree.extract_symbol(i).unwrap(), c);
    }
    let k = tree.kr();
    for j in 0..=tree.padded_len() {
        assert_eq!(tree.prefix_fingerprint(j).unwrap(), k.of_string(&s[..j]), "prefix {j}");
    }
}

#[test]
fn single_symbol() {
    let (text, tree) = lz_tree(b"a");
    assert_eq!(tree.extract_symbol(0).unwrap(), b'a');
    assert!(matches!(
        tree.extract_symbol(1),
        Err(Error::PositionOutOfRange { .. })
    ));
    check_invariants(&text, &tree);
}

#[test]
fn abaababa() {
    let (text, tree) = lz_tree(b"abaababa");
    assert_eq!(tree.effective_attractor(), &[0, 1, 3, 6, 7, 8]);
    check_invariants(&text, &tree);
    assert_eq!(tree.extract(2, 0).unwrap(), b"");
    assert_eq!(tree.extract(2, 4).unwrap(), b"aaba");
    assert!(tree.extract(5, 4).is_err());
    assert_eq!(
        tree.prefix_fingerprint(0).unwrap(),
        ExtendedFingerprint::EMPTY
    );
    assert_eq!(
        tree.prefix_fingerprint(tree.padded_len()).unwrap(),
        *tree.top_prefix().last().unwrap()
    );
}

#[test]
fn non_attractor_is_rejected() {
    let text = Text::try_from("abab").unwrap();
    let bad = Attractor::new(vec![1], 4).unwrap();
    let err = GammaTree::build(&text, &bad, kr(), true).unwrap_err();
    assert!(matches!(err, Error::SourceNotFound { .. }), "{err}");
}

#[test]
fn attractor_outside_text_is_rejected() {
    let text = Text::try_from("abab").unwrap();
    let bad = Attractor::new(vec![5], 6).unwrap();
    assert!(matches!(
        GammaTree::build(&text, &bad, kr(), true),
        Err(Error::InvalidAttractor(_))
    ));
}

#[test]
fn every_position_in_attractor() {
    let text = Text::try_from("abcdefgh").unwrap();
    let all = Attractor::new((0..8).collect(), 8).unwrap();
    let tree = GammaTree::build(&text, &all, kr(), true).unwrap();
    assert_eq!(tree.top_block_len(), 2);
    assert_eq!(tree.level_count(), 2);
    check_invariants(&text, &tree);
}

#[test]
fn fibonacci_610() {
    let mut a = b"b".to_vec();
    let mut b = b"a".to_vec();
    while b.len() < 610 {
        let next = [b.as_slice(), a.as_slice()].concat();
        a = std::mem::replace(&mut b, next);
    }
    assert_eq!(b.len(), 610);
    let (text, tree) = lz_tree(&b);
    check_invariants(&text, &tree);
}

#[test]
fn substring_fingerprints_compose() {
    let (text, tree) = lz_tree(b"abracadabra abracadabra abracadabra");
    let s = padded_bytes(&text, &tree);
    let k = tree.kr();
    for i in 0..=s.len() {
        for j in i..=s.len() {
            assert_eq!(tree.substring_fingerprint(i, j).unwrap(), k.of_string(&s[i..j]));
        }
    }
    assert!(tree.substring_fingerprint(3, 2).is_err());
    assert!(tree.substring_fingerprint(0, s.len() + 1).is_err());
}

#[test]
fn monte_carlo_build_matches_on_default_modulus() {
    let text = Text::try_from("mississippi mississippi").unwrap();
    let gamma = attractor_from_lz77(&lz77_parse(&text), &text);
    let verified = GammaTree::build(&text, &gamma, kr(), true).unwrap();
    let unverified = GammaTree::build(&text, &gamma, kr(), false).unwrap();
    assert_eq!(verified.sources(), unverified.sources());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn random_texts(s in proptest::collection::vec(1u8..=3, 1..120)) {
        let (text, tree) = lz_tree(&s);
        check_invariants(&text, &tree);
    }

    #[test]
    fn random_extract_ranges(
        s in proptest::collection::vec(prop_oneof![Just(b'x'), Just(b'y')], 1..200),
        a in 0usize..200, b in 0usize..200,
    ) {
        let (text, tree) = lz_tree(&s);
        let n = text.len();
        let (i, j) = ((a % (n + 1)).min(b % (n + 1)), (a % (n + 1)).max(b % (n + 1)));
        prop_assert_eq!(tree.extract(i, j - i).unwrap(), &s[i..j]);
    }
}
