// SPDX-License-Identifier: Apache-2.0

use serde::Serialize;

/// Iterates of `h(n) = ⌈n/s⌉ - 1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HStats {
    pub s: usize,
    pub n: usize,
    /// `h_seq[0] = n`, then `h_seq[k] = ⌈h_seq[k-1]/s⌉ - 1`, stopping at the
    /// first value `<= s`.
    pub h_seq: Vec<usize>,
    /// Largest `j >= 1` with `h_seq[j] > s`, or 0 if there is none.
    pub h_star: usize,
    /// `h_seq[h_star]`; equals `n` when `h_star = 0`.
    pub remainder: usize,
}

impl HStats {
    /// `h^(1)(n), h^(2)(n), …` without the leading `n`.
    pub fn iterates(&self) -> &[usize] {
        &self.h_seq[1..]
    }

    /// Number of recursive calls the block recursion makes before reaching a
    /// base case of at most `s` inputs.
    pub fn recursion_levels(&self) -> usize {
        self.h_seq.len() - 1
    }
}

/// # Panics
/// If `s < 2` or `n == 0`.
pub fn h_stats(n: usize, s: usize) -> HStats {
    assert!(s >= 2 && n >= 1, "h_stats needs n >= 1 and s >= 2");
    let mut h_seq = vec![n];
    let mut cur = n;
    while cur > s {
        cur = cur.div_ceil(s) - 1;
        h_seq.push(cur);
    }
    let h_star = (1..h_seq.len()).rev().find(|&j| h_seq[j] > s).unwrap_or(0);
    HStats {
        s,
        n,
        remainder: h_seq[h_star],
        h_seq,
        h_star,
    }
}
