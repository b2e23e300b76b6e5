//! Brute-force references for tests and cross-checks.

/// Every `i` with `text[i..i+m] == pattern`, ascending. The empty pattern
/// occurs nowhere.
pub fn naive_occurrences(text: &[u8], pattern: &[u8]) -> Vec<usize> {
    if pattern.is_empty() || pattern.len() > text.len() {
        return Vec::new();
    }
    text.windows(pattern.len())
        .enumerate()
        .filter(|(_, w)| *w == pattern)
        .map(|(i, _)| i)
        .collect()
}

/// Occurrences split by whether they cross a leaf boundary.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct OracleReport {
    pub occurrences: Vec<usize>,
    pub primary: Vec<usize>,
    pub secondary: Vec<usize>,
}

/// Classifies occurrences against the leaf starts of a tree.
///
/// An occurrence `[pos, pos+m)` with `m ≥ 2` is primary when it contains
/// both `q-1` and `q` for some leaf start `q > 0`. A single-symbol
/// occurrence is read as the pattern followed by any symbol, so it is
/// primary when `pos + 1` is a leaf start.
pub fn classify_occurrences(text: &[u8], pattern: &[u8], leaf_starts: &[usize]) -> OracleReport {
    let occurrences = naive_occurrences(text, pattern);
    let span = pattern.len().max(2);
    let (primary, secondary) = occurrences.iter().partition(|&&pos| {
        let i = leaf_starts.partition_point(|&q| q <= pos);
        i < leaf_starts.len() && leaf_starts[i] < pos + span
    });
    OracleReport {
        occurrences,
        primary,
        secondary,
    }
}

/// The maximal range `(first, last)` of `sorted` whose elements start with
/// `prefix`, by linear scan.
pub fn naive_prefix_range<S: AsRef<[u8]>>(sorted: &[S], prefix: &[u8]) -> Option<(usize, usize)> {
    let hits: Vec<usize> = sorted
        .iter()
        .enumerate()
        .filter(|(_, s)| s.as_ref().starts_with(prefix))
        .map(|(i, _)| i)
        .collect();
    let (&first, &last) = (hits.first()?, hits.last()?);
    debug_assert_eq!(last - first + 1, hits.len(), "input not sorted");
    Some((first, last))
}
