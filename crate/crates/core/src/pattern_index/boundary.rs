//! The two sorted multisets around leaf boundaries.
//!
//! For each leaf start `p_i > 0`, X holds the suffix of the padded text from
//! `p_i` and Y holds the reversed leaf that ends right before `p_i`.

use crate::suffix;

pub(crate) struct Boundaries {
    /// Start of each X element in the padded text, in X order.
    pub x_pos: Vec<usize>,
    pub x_lcp: Vec<usize>,
    /// End (exclusive) of each Y leaf in the padded text, in Y order.
    pub y_end: Vec<usize>,
    pub y_len: Vec<usize>,
    pub y_lcp: Vec<usize>,
    /// X rank to Y rank of the same boundary.
    pub y_of_x: Vec<usize>,
}

/// `padded` is the padded text, `reversed` its reverse.
pub(crate) fn build(padded: &[u8], reversed: &[u8], leaf_starts: &[usize]) -> Boundaries {
    let n = padded.len();
    let bounds = &leaf_starts[1..];
    let count = bounds.len();

    // X: order by suffix rank; adjacent LCPs are range minima of the LCP
    // array between consecutive chosen ranks
    let sa = suffix::suffix_array(padded);
    let isa = suffix::inverse(&sa);
    let lcp = suffix::lcp_array(padded, &sa, &isa);
    let mut chosen = vec![usize::MAX; n];
    for (i, &p) in bounds.iter().enumerate() {
        chosen[isa[p]] = i;
    }
    let mut x_of_bound = vec![0; count];
    let mut x_pos = Vec::with_capacity(count);
    let mut x_lcp = Vec::with_capacity(count);
    let mut running = usize::MAX;
    for rank in 0..n {
        running = running.min(lcp[rank]);
        let i = chosen[rank];
        if i != usize::MAX {
            x_of_bound[i] = x_pos.len();
            x_lcp.push(if x_pos.is_empty() { 0 } else { running });
            x_pos.push(bounds[i]);
            running = usize::MAX;
        }
    }
    drop((sa, isa, lcp, chosen));

    // Y: reversed leaves are short on aggregate, so compare them directly
    let y_slice = |i: usize| {
        let (start, end) = (leaf_starts[i], leaf_starts[i + 1]);
        &reversed[n - end..n - start]
    };
    let mut y_order: Vec<usize> = (0..count).collect();
    y_order.sort_by(|&a, &b| y_slice(a).cmp(y_slice(b)));
    let mut y_of_bound = vec![0; count];
    for (y, &i) in y_order.iter().enumerate() {
        y_of_bound[i] = y;
    }
    let y_lcp = (0..count)
        .map(|y| {
            if y == 0 {
                0
            } else {
                let (a, b) = (y_slice(y_order[y - 1]), y_slice(y_order[y]));
                a.iter().zip(b).take_while(|(c, d)| c == d).count()
            }
        })
        .collect();
    let y_end = y_order.iter().map(|&i| leaf_starts[i + 1]).collect();
    let y_len = y_order.iter().map(|&i| y_slice(i).len()).collect();

    let mut y_of_x = vec![0; count];
    for i in 0..count {
        y_of_x[x_of_bound[i]] = y_of_bound[i];
    }
    Boundaries {
        x_pos,
        x_lcp,
        y_end,
        y_len,
        y_lcp,
        y_of_x,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn orders_match_direct_comparison() {
        let padded = b"abaababaabaab\0\0\0";
        let reversed: Vec<u8> = padded.iter().rev().copied().collect();
        let leaves = [0, 2, 3, 5, 8, 9, 12, 14];
        let b = build(padded, &reversed, &leaves);
        assert_eq!(b.x_pos.len(), leaves.len() - 1);

        let xs: Vec<&[u8]> = b.x_pos.iter().map(|&p| &padded[p..]).collect();
        assert!(xs.windows(2).all(|w| w[0] < w[1]));
        for i in 1..xs.len() {
            let l = xs[i - 1].iter().zip(xs[i]).take_while(|(a, c)| a == c).count();
            assert_eq!(b.x_lcp[i], l);
        }

        let ys: Vec<Vec<u8>> = b
            .y_end
            .iter()
            .zip(&b.y_len)
            .map(|(&e, &l)| padded[e - l..e].iter().rev().copied().collect())
            .collect();
        assert!(ys.windows(2).all(|w| w[0] <= w[1]));
        for i in 1..ys.len() {
            let l = ys[i - 1].iter().zip(&ys[i]).take_while(|(a, c)| a == c).count();
            assert_eq!(b.y_lcp[i], l);
        }

        // both coordinates of a point describe the same boundary
        for (x, &y) in b.y_of_x.iter().enumerate() {
            assert_eq!(b.x_pos[x], b.y_end[y]);
        }
    }
}
