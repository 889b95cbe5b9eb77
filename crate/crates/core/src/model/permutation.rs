use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A permutation of `1..=n`. The value of an element is its true rank.
///
/// Positions are 1-based throughout the crate.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<u32>", into = "Vec<u32>")]
pub struct Permutation {
    elems: Vec<u32>,
    // positions[v - 1] is the 1-based position of element v
    positions: Vec<u32>,
}

impl Permutation {
    pub fn new(elems: Vec<u32>) -> Result<Self> {
        let positions = inverse(&elems)?;
        Ok(Self { elems, positions })
    }

    pub fn identity(n: usize) -> Self {
        let elems: Vec<u32> = (1..=n as u32).collect();
        Self {
            positions: elems.clone(),
            elems,
        }
    }

    pub fn reversed(n: usize) -> Self {
        let elems: Vec<u32> = (1..=n as u32).rev().collect();
        let positions = (1..=n as u32).rev().collect();
        Self { elems, positions }
    }

    /// Replaces arbitrary distinct keys by their ranks, keeping the order
    /// of the input.
    pub fn from_keys<K: Ord + Clone + std::fmt::Debug>(keys: &[K]) -> Result<Self> {
        let mut idx: Vec<usize> = (0..keys.len()).collect();
        idx.sort_by(|&a, &b| keys[a].cmp(&keys[b]));
        if let Some(w) = idx.windows(2).find(|w| keys[w[0]] == keys[w[1]]) {
            return Err(Error::Malformed(format!(
                "key {:?} appears more than once",
                keys[w[0]]
            )));
        }
        let mut elems = vec![0u32; keys.len()];
        for (rank0, &i) in idx.iter().enumerate() {
            elems[i] = rank0 as u32 + 1;
        }
        Self::new(elems)
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.elems
    }

    pub fn iter(&self) -> impl ExactSizeIterator<Item = u32> + '_ {
        self.elems.iter().copied()
    }

    /// 1-based position of `x`, or `None` when `x` is not in `1..=n`.
    pub fn pos(&self, x: u32) -> Option<usize> {
        let i = (x as usize).checked_sub(1)?;
        self.positions.get(i).map(|&p| p as usize)
    }

    /// Rank of `x`: the number of elements no larger than it. Equal to the value.
    pub fn rank(&self, x: u32) -> Option<usize> {
        (x >= 1 && (x as usize) <= self.len()).then_some(x as usize)
    }

    /// Element at 1-based position `i`.
    pub fn at(&self, i: usize) -> Option<u32> {
        i.checked_sub(1).and_then(|i| self.elems.get(i).copied())
    }

    pub fn into_vec(self) -> Vec<u32> {
        self.elems
    }
}

impl TryFrom<Vec<u32>> for Permutation {
    type Error = Error;

    fn try_from(elems: Vec<u32>) -> Result<Self> {
        Self::new(elems)
    }
}

impl From<Permutation> for Vec<u32> {
    fn from(p: Permutation) -> Self {
        p.elems
    }
}

impl AsRef<[u32]> for Permutation {
    fn as_ref(&self) -> &[u32] {
        &self.elems
    }
}

/// Checks that `elems` is a permutation of `1..=n` and returns the 1-based
/// position of every value.
pub(crate) fn inverse(elems: &[u32]) -> Result<Vec<u32>> {
    let n = elems.len();
    let mut positions = vec![0u32; n];
    for (i, &x) in elems.iter().enumerate() {
        if x == 0 || x as usize > n {
            return Err(Error::OutOfRange { element: x, n });
        }
        let slot = &mut positions[x as usize - 1];
        if *slot != 0 {
            return Err(Error::Duplicate(x));
        }
        *slot = i as u32 + 1;
    }
    Ok(positions)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn positions_are_one_based() {
        let p = Permutation::new(vec![3, 1, 2]).unwrap();
        assert_eq!(p.pos(3), Some(1));
        assert_eq!(p.pos(1), Some(2));
        assert_eq!(p.pos(2), Some(3));
        assert_eq!(p.pos(0), None);
        assert_eq!(p.pos(4), None);
        assert_eq!(p.at(1), Some(3));
        assert_eq!(p.rank(2), Some(2));
    }

    #[test]
    fn rejects_duplicates_and_out_of_range() {
        assert_eq!(Permutation::new(vec![1, 1]), Err(Error::Duplicate(1)));
        assert_eq!(
            Permutation::new(vec![1, 3]),
            Err(Error::OutOfRange { element: 3, n: 2 })
        );
        assert!(Permutation::new(vec![0]).is_err());
    }

    #[test]
    fn keys_are_normalized_to_ranks() {
        let p = Permutation::from_keys(&[40, -7, 12, 100]).unwrap();
        assert_eq!(p.as_slice(), &[3, 1, 2, 4]);
        assert!(Permutation::from_keys(&[5, 5]).is_err());
    }

    #[test]
    fn identity_and_reversed() {
        assert_eq!(Permutation::identity(5).as_slice(), &[1, 2, 3, 4, 5]);
        let r = Permutation::reversed(4);
        assert_eq!(r.as_slice(), &[4, 3, 2, 1]);
        assert_eq!(r.pos(4), Some(1));
        assert_eq!(r, Permutation::new(vec![4, 3, 2, 1]).unwrap());
    }

    #[test]
    fn json_form_is_validated() {
        let p: Permutation = serde_json::from_str("[2, 1, 3]").unwrap();
        assert_eq!(p.pos(2), Some(1));
        assert!(serde_json::from_str::<Permutation>("[2, 2]").is_err());
    }
}
