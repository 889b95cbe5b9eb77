use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::model::permutation::inverse;

/// Per-element and aggregate `|pos − rank|` of a sequence over `1..=n`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DislocationReport {
    pub max_disl: u64,
    pub total_disl: u64,
    /// Dislocation of the element at each position, in sequence order.
    pub per_element: Vec<u32>,
}

impl DislocationReport {
    pub fn is_sorted(&self) -> bool {
        self.max_disl == 0
    }
}

/// Dislocation of every element of `seq`, where the rank of value `v` is `v`.
pub fn dislocation(seq: &[u32]) -> Result<DislocationReport> {
    inverse(seq)?;
    let per_element: Vec<u32> = seq
        .iter()
        .enumerate()
        .map(|(i, &x)| (i as u32 + 1).abs_diff(x))
        .collect();
    let max_disl = per_element.iter().copied().max().unwrap_or(0) as u64;
    let total_disl = per_element.iter().map(|&d| d as u64).sum();
    Ok(DislocationReport {
        max_disl,
        total_disl,
        per_element,
    })
}
