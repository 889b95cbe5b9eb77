//! Error-free longest increasing subsequence by patience sorting, and a
//! quadratic DP used to cross-check it.

use crate::compare::Comparator;
use crate::error::{Error, Result};

/// Largest input the quadratic oracles accept by default.
pub const ORACLE_CAP: usize = 2000;

const NONE: usize = usize::MAX;

/// State of the patience front while scanning a sequence.
///
/// `front[j]` is the sequence index of the smallest item that ends an
/// increasing subsequence of length `j + 1`; `prec[i]` is the index of the
/// item that precedes item `i` in the chain it was appended to.
#[derive(Debug, Clone)]
pub struct PatienceState {
    front: Vec<usize>,
    prec: Vec<usize>,
}

impl PatienceState {
    pub fn with_capacity(n: usize) -> Self {
        Self {
            front: Vec::new(),
            prec: Vec::with_capacity(n),
        }
    }

    /// Current best length.
    pub fn k(&self) -> usize {
        self.front.len()
    }

    pub fn front(&self) -> &[usize] {
        &self.front
    }

    /// Feeds `seq[i]`, which must be the next item in order.
    pub fn push<T: Copy, C: Comparator<T>>(&mut self, seq: &[T], i: usize, cmp: &C) {
        debug_assert_eq!(i, self.prec.len());
        let x = seq[i];
        self.prec.push(NONE);
        if self.front.is_empty() {
            self.front.push(i);
            return;
        }
        if cmp.less(x, seq[self.front[0]]) {
            self.front[0] = i;
            return;
        }
        // j = max { j : L[j] < x }, with L[1] < x already established
        let j = 1 + self.front[1..].partition_point(|&f| cmp.less(seq[f], x));
        if j == self.front.len() {
            self.front.push(i);
        } else {
            self.front[j] = i;
        }
        self.prec[i] = self.front[j - 1];
    }

    /// Indices of the chain ending at `front[len - 1]`, in forward order.
    pub fn implied(&self, len: usize) -> Vec<usize> {
        if len == 0 {
            return Vec::new();
        }
        let mut out = Vec::with_capacity(len);
        let mut cur = self.front[len - 1];
        while cur != NONE {
            out.push(cur);
            cur = self.prec[cur];
        }
        out.reverse();
        out
    }

    /// Whether `L[1] < L[2] < … < L[k]` under `cmp`.
    pub fn front_is_increasing<T: Copy, C: Comparator<T>>(&self, seq: &[T], cmp: &C) -> bool {
        self.front
            .windows(2)
            .all(|w| cmp.less(seq[w[0]], seq[w[1]]))
    }
}

/// Indices of a longest subsequence of `seq` that is increasing under `cmp`.
pub fn lis_indices<T: Copy, C: Comparator<T>>(seq: &[T], cmp: &C) -> Vec<usize> {
    let mut state = PatienceState::with_capacity(seq.len());
    for i in 0..seq.len() {
        state.push(seq, i, cmp);
    }
    state.implied(state.k())
}

/// A longest subsequence of `seq` that is increasing under `cmp`, in order.
pub fn exact_lis<T: Copy, C: Comparator<T>>(seq: &[T], cmp: &C) -> Vec<T> {
    lis_indices(seq, cmp).into_iter().map(|i| seq[i]).collect()
}

/// LIS length by `dp[i] = 1 + max dp[j]` over `j < i, s[j] < s[i]`.
pub fn lis_dp_oracle(seq: &[u32]) -> Result<usize> {
    lis_dp_oracle_capped(seq, ORACLE_CAP)
}

pub fn lis_dp_oracle_capped(seq: &[u32], cap: usize) -> Result<usize> {
    if seq.len() > cap {
        return Err(Error::OracleCapExceeded { len: seq.len(), cap });
    }
    let mut dp = vec![0usize; seq.len()];
    let mut best = 0;
    for i in 0..seq.len() {
        let prev = (0..i)
            .filter(|&j| seq[j] < seq[i])
            .map(|j| dp[j])
            .max()
            .unwrap_or(0);
        dp[i] = prev + 1;
        best = best.max(dp[i]);
    }
    Ok(best)
}
