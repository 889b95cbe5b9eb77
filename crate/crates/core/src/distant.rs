//! Longest subsequence that is `2d`-distant in an approximate order.
//!
//! A subsequence `s'_1, …, s'_m` is `2d`-distant in `apx` when
//! `pos(s'_i) + 2d ≤ pos(s'_{i+1})` for every adjacent pair. If `apx` has
//! maximum dislocation at most `d`, such a subsequence is truly increasing,
//! and the longest one is at least `|LIS| / 2d` long.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lis::{lis_indices, ORACLE_CAP};
use crate::model::Permutation;
use crate::sort::ApproxOrder;

const NONE: usize = usize::MAX;

/// How the dislocation budget `d` is chosen.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum DMode {
    Fixed(usize),
    /// `d = ⌈c · log₂ n⌉`.
    Auto { c: f64 },
    /// The measured maximum dislocation of the approximate order. Needs the
    /// true ranks, so it is only available in experiments.
    Measured,
}

pub const DEFAULT_C: f64 = 4.0;

impl Default for DMode {
    fn default() -> Self {
        DMode::Auto { c: DEFAULT_C }
    }
}

impl DMode {
    pub fn validate(&self) -> Result<()> {
        match *self {
            DMode::Auto { c } if !(c.is_finite() && c >= 0.0) => Err(Error::InvalidParameter(
                format!("auto d constant c = {c} must be finite and non-negative"),
            )),
            _ => Ok(()),
        }
    }

    /// Resolves `d` for an input of length `n` sorted with error rate `p`.
    /// `measured` is the measured maximum dislocation, required in
    /// `Measured` mode. With `p = 0` every sorter is exact, so the automatic
    /// budget is 0.
    pub fn resolve(&self, n: usize, p: f64, measured: Option<u64>) -> Result<usize> {
        self.validate()?;
        match *self {
            DMode::Fixed(d) => Ok(d),
            DMode::Auto { .. } if p == 0.0 => Ok(0),
            DMode::Auto { c } => Ok(auto_d(c, n)),
            DMode::Measured => measured.map(|m| m as usize).ok_or_else(|| {
                Error::InvalidParameter("measured d needs the true ranks".into())
            }),
        }
    }
}

/// `⌈c · log₂ n⌉`, 0 for `n ≤ 1`.
pub fn auto_d(c: f64, n: usize) -> usize {
    if n <= 1 {
        return 0;
    }
    (c * (n as f64).log2()).ceil() as usize
}

impl fmt::Display for DMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DMode::Fixed(d) => write!(f, "fixed:{d}"),
            DMode::Auto { c } => write!(f, "auto:c={c}"),
            DMode::Measured => f.write_str("measured"),
        }
    }
}

impl FromStr for DMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidParameter(format!("bad d mode {s:?}; expected auto:c=<float>, fixed:<int> or measured"));
        let mode = if s == "measured" {
            DMode::Measured
        } else if s == "auto" {
            DMode::default()
        } else if let Some(c) = s.strip_prefix("auto:c=") {
            DMode::Auto { c: c.parse().map_err(|_| bad())? }
        } else if let Some(d) = s.strip_prefix("fixed:") {
            DMode::Fixed(d.parse().map_err(|_| bad())?)
        } else {
            return Err(bad());
        };
        mode.validate()?;
        Ok(mode)
    }
}

impl TryFrom<String> for DMode {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<DMode> for String {
    fn from(m: DMode) -> Self {
        m.to_string()
    }
}

/// Validity of a returned subsequence, recomputed from the definitions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidityFlags {
    #[serde(rename = "subsequence")]
    pub is_subsequence_of_input: bool,
    #[serde(rename = "distant")]
    pub is_2d_distant: bool,
    #[serde(rename = "increasing")]
    pub is_truly_increasing: bool,
}

impl ValidityFlags {
    pub fn all(&self) -> bool {
        self.is_subsequence_of_input && self.is_2d_distant && self.is_truly_increasing
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LisResult {
    pub length: usize,
    pub d_used: usize,
    pub subseq: Vec<u32>,
    pub flags: ValidityFlags,
}

impl LisResult {
    /// Wraps `subseq`, computing the flags with [`validate`].
    pub fn new(subseq: Vec<u32>, s: &Permutation, apx: &ApproxOrder, d: usize) -> Self {
        let flags = validate(&subseq, s, apx, d);
        Self {
            length: subseq.len(),
            d_used: d,
            subseq,
            flags,
        }
    }
}

/// Patience-style state over positions in the approximate order.
///
/// `front[j]` holds the sequence index of the item with the smallest
/// position that ends a `gap`-distant chain of length `j + 1`.
#[derive(Debug, Clone)]
pub struct DistantState {
    gap: usize,
    front: Vec<usize>,
    front_pos: Vec<usize>,
    prec: Vec<usize>,
}

impl DistantState {
    pub fn new(gap: usize, capacity: usize) -> Self {
        Self {
            gap,
            front: Vec::new(),
            front_pos: Vec::new(),
            prec: Vec::with_capacity(capacity),
        }
    }

    pub fn k(&self) -> usize {
        self.front.len()
    }

    /// Positions of `L[1..=k]`.
    pub fn front_positions(&self) -> &[usize] {
        &self.front_pos
    }

    /// Feeds the next item, whose position in the approximate order is `pos`.
    pub fn push(&mut self, pos: usize) {
        let i = self.prec.len();
        self.prec.push(NONE);
        if self.front.is_empty() {
            self.front.push(i);
            self.front_pos.push(pos);
            return;
        }
        if pos < self.front_pos[0] {
            self.front[0] = i;
            self.front_pos[0] = pos;
            return;
        }
        // j = max { j : pos(L[j]) < pos }; positions on the front are
        // strictly increasing, so this is a binary search
        let j = self.front_pos.partition_point(|&q| q < pos);
        if self.front_pos[j - 1] + self.gap <= pos {
            if j == self.front.len() {
                self.front.push(i);
                self.front_pos.push(pos);
            } else {
                self.front[j] = i;
                self.front_pos[j] = pos;
            }
            self.prec[i] = self.front[j - 1];
        }
    }

    /// Whether `L[1..=k]` is itself `gap`-distant.
    pub fn front_is_distant(&self) -> bool {
        self.front_pos.windows(2).all(|w| w[0] + self.gap <= w[1])
    }

    /// Indices of the chain implied by `L[len]`, in forward order.
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
}

/// Indices of a longest subsequence whose consecutive positions differ by
/// at least `gap`. `positions[i]` is the position of item `i`; positions
/// must be distinct.
pub fn longest_distant_indices(positions: &[usize], gap: usize) -> Vec<usize> {
    let mut st = DistantState::new(gap, positions.len());
    for &q in positions {
        st.push(q);
    }
    st.implied(st.k())
}

fn positions_in(s: &Permutation, apx: &ApproxOrder) -> Result<Vec<usize>> {
    if s.len() != apx.len() {
        return Err(Error::Inconsistent(format!(
            "sequence has {} elements but the approximate order has {}",
            s.len(),
            apx.len()
        )));
    }
    s.iter()
        .map(|x| {
            apx.pos(x)
                .ok_or_else(|| Error::Inconsistent(format!("element {x} missing from the approximate order")))
        })
        .collect()
}

/// Longest subsequence of `s` that is `2d`-distant in `apx`.
pub fn approx_lis(s: &Permutation, apx: &ApproxOrder, d: usize) -> Result<LisResult> {
    let positions = positions_in(s, apx)?;
    let subseq = longest_distant_indices(&positions, 2 * d)
        .into_iter()
        .map(|i| s.as_slice()[i])
        .collect();
    Ok(LisResult::new(subseq, s, apx, d))
}

/// Splits `s` into `2d` classes by `pos(·, apx) mod 2d`, solves each with
/// the error-free LIS under the `apx` order and keeps the longest.
///
/// `d = 0` runs the LIS on the whole sequence under the `apx` order.
pub fn recipe_lis(s: &Permutation, apx: &ApproxOrder, d: usize) -> Result<LisResult> {
    let positions = positions_in(s, apx)?;
    let by_pos = |a: usize, b: usize| positions[a] < positions[b];
    let best: Vec<usize> = if d == 0 {
        lis_indices(&(0..s.len()).collect::<Vec<_>>(), &by_pos)
    } else {
        let classes = 2 * d;
        // positions are 1..=n, so at most n + 1 residues occur
        let mut members: Vec<Vec<usize>> = vec![Vec::new(); classes.min(s.len() + 1)];
        for (i, &q) in positions.iter().enumerate() {
            members[q % classes].push(i);
        }
        members
            .iter()
            .map(|m| lis_indices(m, &by_pos).into_iter().map(|k| m[k]).collect::<Vec<_>>())
            .fold(Vec::new(), |best, cand| if cand.len() > best.len() { cand } else { best })
    };
    let subseq = best.into_iter().map(|i| s.as_slice()[i]).collect();
    Ok(LisResult::new(subseq, s, apx, d))
}

/// `max dp[i]` with `dp[i] = 1 + max dp[j]` over `j < i` and
/// `pos(s[j]) + 2d ≤ pos(s[i])`.
pub fn longest_distant_oracle(s: &Permutation, apx: &ApproxOrder, d: usize) -> Result<usize> {
    if s.len() > ORACLE_CAP {
        return Err(Error::OracleCapExceeded {
            len: s.len(),
            cap: ORACLE_CAP,
        });
    }
    let pos = positions_in(s, apx)?;
    let mut dp = vec![0usize; pos.len()];
    for i in 0..pos.len() {
        dp[i] = 1 + (0..i)
            .filter(|&j| pos[j] + 2 * d <= pos[i])
            .map(|j| dp[j])
            .max()
            .unwrap_or(0);
    }
    Ok(dp.into_iter().max().unwrap_or(0))
}

/// Recomputes the validity flags of `subseq` against `s` and `apx`.
pub fn validate(subseq: &[u32], s: &Permutation, apx: &ApproxOrder, d: usize) -> ValidityFlags {
    let in_s: Option<Vec<usize>> = subseq.iter().map(|&x| s.pos(x)).collect();
    let in_apx: Option<Vec<usize>> = subseq.iter().map(|&x| apx.pos(x)).collect();
    ValidityFlags {
        is_subsequence_of_input: in_s.is_some_and(|p| p.windows(2).all(|w| w[0] < w[1])),
        is_2d_distant: in_apx.is_some_and(|p| p.windows(2).all(|w| w[0] + 2 * d <= w[1])),
        is_truly_increasing: subseq.windows(2).all(|w| w[0] < w[1]),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::compare::TrueOrder;
    use crate::lis::exact_lis;

    fn perm(v: &[u32]) -> Permutation {
        Permutation::new(v.to_vec()).unwrap()
    }

    #[test]
    fn d_zero_with_true_order_is_exact_lis() {
        let s = perm(&[2, 8, 4, 9, 5, 1, 3, 7, 6]);
        let apx = ApproxOrder::sorted(9);
        let r = approx_lis(&s, &apx, 0).unwrap();
        assert_eq!(r.length, exact_lis(s.as_slice(), &TrueOrder).len());
        assert!(r.flags.all());
    }

    #[test]
    fn two_distant_small_example() {
        // <2,8,4,9,5,1> normalized to ranks
        let s = Permutation::from_keys(&[2, 8, 4, 9, 5, 1]).unwrap();
        assert_eq!(s.as_slice(), &[2, 5, 3, 6, 4, 1]);
        let apx = ApproxOrder::sorted(6);
        let r = approx_lis(&s, &apx, 1).unwrap();
        assert_eq!(longest_distant_oracle(&s, &apx, 1).unwrap(), 2);
        assert_eq!(r.length, 2);
        assert_eq!(r.subseq, vec![2, 4]);
        assert!(r.flags.all());
    }

    #[test]
    fn large_d_gives_single_element() {
        let s = perm(&[3, 1, 4, 2, 5, 6]);
        let apx = ApproxOrder::sorted(6);
        assert_eq!(longest_distant_oracle(&s, &apx, 3).unwrap(), 1);
        assert_eq!(approx_lis(&s, &apx, 3).unwrap().length, 1);
        assert_eq!(approx_lis(&s, &apx, 100).unwrap().length, 1);
    }

    #[test]
    fn empty_and_singleton() {
        let e = Permutation::identity(0);
        let r = approx_lis(&e, &ApproxOrder::sorted(0), 2).unwrap();
        assert_eq!(r.length, 0);
        assert!(r.flags.all());
        let one = Permutation::identity(1);
        assert_eq!(approx_lis(&one, &ApproxOrder::sorted(1), 2).unwrap().subseq, vec![1]);
        assert_eq!(recipe_lis(&one, &ApproxOrder::sorted(1), 2).unwrap().length, 1);
    }

    #[test]
    fn mismatched_orders_are_rejected() {
        let s = Permutation::identity(4);
        assert!(matches!(
            approx_lis(&s, &ApproxOrder::sorted(3), 1),
            Err(Error::Inconsistent(_))
        ));
    }

    #[test]
    fn recipe_on_identity_takes_every_fourth() {
        let s = Permutation::identity(16);
        let r = recipe_lis(&s, &ApproxOrder::sorted(16), 2).unwrap();
        assert_eq!(r.length, 4);
        assert!(r.flags.all());
        assert!(approx_lis(&s, &ApproxOrder::sorted(16), 2).unwrap().length >= 4);
    }

    #[test]
    fn recipe_with_zero_d_is_lis_under_apx() {
        let s = perm(&[2, 8, 4, 9, 5, 1, 3, 7, 6]);
        let r = recipe_lis(&s, &ApproxOrder::sorted(9), 0).unwrap();
        assert_eq!(r.length, 4);
    }

    #[test]
    fn validator_cases() {
        let s = perm(&[2, 5, 3, 6, 4, 1]);
        let apx = ApproxOrder::sorted(6);
        let empty = validate(&[], &s, &apx, 1);
        assert!(empty.all());
        let good = validate(&[2, 6], &s, &apx, 1);
        assert!(good.all());
        // adjacent picks one apart in apx
        let close = validate(&[2, 3], &s, &apx, 1);
        assert!(!close.is_2d_distant);
        assert!(close.is_subsequence_of_input && close.is_truly_increasing);
        let out_of_order = validate(&[3, 5], &s, &apx, 0);
        assert!(!out_of_order.is_subsequence_of_input);
        let missing = validate(&[2, 9], &s, &apx, 0);
        assert!(!missing.is_subsequence_of_input && !missing.is_2d_distant);
        let falling = validate(&[5, 4], &s, &apx, 0);
        assert!(!falling.is_truly_increasing);
    }

    #[test]
    fn front_stays_distant() {
        let positions = [5usize, 1, 9, 3, 12, 7, 2, 15, 11, 4, 14, 8, 6, 13, 10];
        for gap in 0..6 {
            let mut st = DistantState::new(gap, positions.len());
            for &q in &positions {
                st.push(q);
                assert!(st.front_is_distant());
                for j in 1..=st.k() {
                    let chain = st.implied(j);
                    assert_eq!(chain.len(), j);
                    assert!(chain.windows(2).all(|w| w[0] < w[1]
                        && positions[w[0]] + gap <= positions[w[1]]));
                }
            }
        }
    }

    #[test]
    fn d_mode_parsing() {
        assert_eq!("auto:c=4".parse::<DMode>().unwrap(), DMode::Auto { c: 4.0 });
        assert_eq!("auto".parse::<DMode>().unwrap(), DMode::Auto { c: 4.0 });
        assert_eq!("fixed:7".parse::<DMode>().unwrap(), DMode::Fixed(7));
        assert_eq!("measured".parse::<DMode>().unwrap(), DMode::Measured);
        assert!("auto:c=-1".parse::<DMode>().is_err());
        assert!("fixed:x".parse::<DMode>().is_err());
        assert!("nope".parse::<DMode>().is_err());
        for m in [DMode::Fixed(3), DMode::Auto { c: 2.5 }, DMode::Measured] {
            assert_eq!(m.to_string().parse::<DMode>().unwrap(), m);
        }
    }

    #[test]
    fn d_resolution() {
        assert_eq!(DMode::Auto { c: 4.0 }.resolve(4096, 0.1, None).unwrap(), 48);
        assert_eq!(DMode::Auto { c: 1.5 }.resolve(1000, 0.1, None).unwrap(), 15);
        assert_eq!(DMode::Auto { c: 4.0 }.resolve(1, 0.1, None).unwrap(), 0);
        assert_eq!(DMode::Auto { c: 4.0 }.resolve(4096, 0.0, None).unwrap(), 0);
        assert_eq!(DMode::Fixed(3).resolve(10, 0.0, Some(99)).unwrap(), 3);
        assert_eq!(DMode::Measured.resolve(10, 0.1, Some(4)).unwrap(), 4);
        assert!(DMode::Measured.resolve(10, 0.1, None).is_err());
    }

    #[test]
    fn result_json_shape() {
        let s = perm(&[2, 5, 3, 6, 4, 1]);
        let r = approx_lis(&s, &ApproxOrder::sorted(6), 1).unwrap();
        let json = serde_json::to_string(&r).unwrap();
        assert_eq!(
            json,
            r#"{"length":2,"d_used":1,"subseq":[2,4],"flags":{"subsequence":true,"distant":true,"increasing":true}}"#
        );
    }
}
