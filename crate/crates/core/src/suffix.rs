//! Suffix array plumbing used at build time only.

/// Suffix array of `s` (ranks of all suffixes, ties impossible).
pub(crate) fn suffix_array(s: &[u8]) -> Vec<usize> {
    assert!(s.len() < i32::MAX as usize, "text too long for a 32-bit suffix sorter");
    let (_, sa) = divsufsort::sort(s).into_parts();
    sa.into_iter().map(|p| p as usize).collect()
}

pub(crate) fn inverse(sa: &[usize]) -> Vec<usize> {
    let mut isa = vec![0; sa.len()];
    for (rank, &pos) in sa.iter().enumerate() {
        isa[pos] = rank;
    }
    isa
}

/// Kasai et al.: `lcp[k]` is the longest common prefix of the suffixes at
/// ranks `k-1` and `k`; `lcp[0] = 0`.
pub(crate) fn lcp_array(s: &[u8], sa: &[usize], isa: &[usize]) -> Vec<usize> {
    let n = s.len();
    let mut lcp = vec![0; n];
    let mut h = 0usize;
    for i in 0..n {
        let rank = isa[i];
        if rank == 0 {
            h = 0;
            continue;
        }
        let j = sa[rank - 1];
        while i + h < n && j + h < n && s[i + h] == s[j + h] {
            h += 1;
        }
        lcp[rank] = h;
        h = h.saturating_sub(1);
    }
    lcp
}
