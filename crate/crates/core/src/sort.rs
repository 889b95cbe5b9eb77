//! Approximate sorting under a noisy comparator.
//!
//! Two sorters are provided: a plain top-down merge sort that trusts every
//! comparison, and a windowed variant. The windowed sorter re-ranks each
//! merged run before it is merged again: every element counts its wins
//! against the elements around it, the count is corrected for the known
//! error rate, and the run is reordered by the resulting rank estimates.
//! Merging nearly sorted runs only adds dislocation, so repairing each run
//! keeps a single early mistake from being carried through every level.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::compare::Comparator;
use crate::error::{Error, Result};
use crate::model::permutation::inverse;
use crate::model::{
    dislocation, generate_permutation, ComparisonOracle, DislocationReport, Permutation,
    PermutationKind,
};
use crate::seed::derive_seed;

/// Total order produced by an approximate sorter, with O(1) position lookup.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<u32>", into = "Vec<u32>")]
pub struct ApproxOrder {
    order: Vec<u32>,
    pos_index: Vec<u32>,
}

impl ApproxOrder {
    pub fn from_order(order: Vec<u32>) -> Result<Self> {
        let pos_index = inverse(&order)?;
        Ok(Self { order, pos_index })
    }

    pub fn sorted(n: usize) -> Self {
        let order: Vec<u32> = (1..=n as u32).collect();
        Self {
            pos_index: order.clone(),
            order,
        }
    }

    pub fn order(&self) -> &[u32] {
        &self.order
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    /// 1-based position of `x` in the order.
    pub fn pos(&self, x: u32) -> Option<usize> {
        let i = (x as usize).checked_sub(1)?;
        self.pos_index.get(i).map(|&p| p as usize)
    }

    pub fn dislocation(&self) -> DislocationReport {
        dislocation(&self.order).expect("an ApproxOrder is always a permutation")
    }
}

impl TryFrom<Vec<u32>> for ApproxOrder {
    type Error = Error;

    fn try_from(order: Vec<u32>) -> Result<Self> {
        Self::from_order(order)
    }
}

impl From<ApproxOrder> for Vec<u32> {
    fn from(a: ApproxOrder) -> Self {
        a.order
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SorterId {
    NoisyMergesort,
    WindowedRefine,
    /// Sorts by true value. A reference point, not a noisy sorter.
    IdentityOracle,
}

impl fmt::Display for SorterId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SorterId::NoisyMergesort => "noisy-mergesort",
            SorterId::WindowedRefine => "windowed-refine",
            SorterId::IdentityOracle => "identity-oracle",
        })
    }
}

impl FromStr for SorterId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "noisy-mergesort" => Ok(SorterId::NoisyMergesort),
            "windowed-refine" => Ok(SorterId::WindowedRefine),
            "identity-oracle" => Ok(SorterId::IdentityOracle),
            other => Err(Error::InvalidParameter(format!("unknown sorter {other:?}"))),
        }
    }
}

pub const DEFAULT_PASSES: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SorterSpec {
    pub id: SorterId,
    /// Window width for `windowed-refine`; `None` means `4⌈log₂ n⌉`.
    pub window: Option<usize>,
    /// Refinement passes for `windowed-refine`.
    pub passes: usize,
}

impl SorterSpec {
    pub fn noisy_mergesort() -> Self {
        Self {
            id: SorterId::NoisyMergesort,
            window: None,
            passes: 0,
        }
    }

    pub fn windowed_refine() -> Self {
        Self {
            id: SorterId::WindowedRefine,
            window: None,
            passes: DEFAULT_PASSES,
        }
    }

    pub fn windowed(window: usize, passes: usize) -> Self {
        Self {
            id: SorterId::WindowedRefine,
            window: Some(window),
            passes,
        }
    }

    pub fn identity_oracle() -> Self {
        Self {
            id: SorterId::IdentityOracle,
            window: None,
            passes: 0,
        }
    }

    pub fn from_id(id: SorterId) -> Self {
        match id {
            SorterId::NoisyMergesort => Self::noisy_mergesort(),
            SorterId::WindowedRefine => Self::windowed_refine(),
            SorterId::IdentityOracle => Self::identity_oracle(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.window == Some(0) {
            return Err(Error::InvalidParameter("window width must be at least 1".into()));
        }
        Ok(())
    }

    /// Window width actually used for an input of size `n` (0 when the sorter
    /// has no refinement stage).
    pub fn window_for(&self, n: usize) -> usize {
        match self.id {
            SorterId::WindowedRefine => self.window.unwrap_or_else(|| default_window(n)),
            _ => 0,
        }
    }

    pub fn passes_used(&self) -> usize {
        match self.id {
            SorterId::WindowedRefine => self.passes,
            _ => 0,
        }
    }
}

/// `4⌈log₂ n⌉`, at least 1.
pub fn default_window(n: usize) -> usize {
    (4 * ceil_log2(n)).max(1)
}

pub(crate) fn ceil_log2(n: usize) -> usize {
    if n <= 1 {
        0
    } else {
        (usize::BITS - (n - 1).leading_zeros()) as usize
    }
}

/// Orders `items` using only `cmp`, whose answers are wrong with rate `p`.
///
/// `identity-oracle` needs true values and is rejected here; use
/// [`approx_sort`] for permutations.
pub fn sort_items<T: Copy, C: Comparator<T>>(
    items: &[T],
    cmp: &C,
    spec: &SorterSpec,
    p: f64,
) -> Result<Vec<T>> {
    spec.validate()?;
    if !(0.0..0.5).contains(&p) {
        return Err(Error::InvalidParameter(format!("error rate {p} outside [0, 0.5)")));
    }
    let mut v = items.to_vec();
    match spec.id {
        SorterId::NoisyMergesort => merge_sort(&mut v, cmp),
        SorterId::WindowedRefine => {
            let w = spec.window_for(v.len());
            let mut r = Refiner::new(p, v.len());
            r.sort(&mut v, cmp, level_half_width(w, p));
            for _ in 0..spec.passes {
                r.pass(&mut v, cmp, (w / 2).max(1));
            }
        }
        SorterId::IdentityOracle => {
            return Err(Error::InvalidParameter(
                "identity-oracle sorting needs true element values".into(),
            ))
        }
    }
    Ok(v)
}

/// Approximately sorts `s` with comparisons from `oracle`.
pub fn approx_sort(s: &Permutation, oracle: &ComparisonOracle, spec: &SorterSpec) -> Result<ApproxOrder> {
    let order = match spec.id {
        SorterId::IdentityOracle => return Ok(ApproxOrder::sorted(s.len())),
        _ => sort_items(s.as_slice(), oracle, spec, oracle.p())?,
    };
    ApproxOrder::from_order(order)
}

/// Top-down stable merge sort that takes every answer of `cmp` at face value.
pub fn merge_sort<T: Copy, C: Comparator<T>>(v: &mut [T], cmp: &C) {
    if v.len() < 2 {
        return;
    }
    let mut buf = v.to_vec();
    merge_sort_rec(v, &mut buf, cmp);
}

// Sorts `v`, using `buf` (same contents on entry) as scratch.
fn merge_sort_rec<T: Copy, C: Comparator<T>>(v: &mut [T], buf: &mut [T], cmp: &C) {
    let n = v.len();
    if n < 2 {
        return;
    }
    let mid = n / 2;
    {
        let (bl, br) = buf.split_at_mut(mid);
        let (vl, vr) = v.split_at_mut(mid);
        // sort halves into buf
        merge_sort_rec(bl, vl, cmp);
        merge_sort_rec(br, vr, cmp);
    }
    let (left, right) = buf.split_at(mid);
    merge_into(left, right, v, cmp);
}

fn merge_into<T: Copy, C: Comparator<T>>(left: &[T], right: &[T], out: &mut [T], cmp: &C) {
    let (mut i, mut j) = (0, 0);
    for slot in out.iter_mut() {
        let take_right = i == left.len() || (j < right.len() && cmp.less(right[j], left[i]));
        if take_right {
            *slot = right[j];
            j += 1;
        } else {
            *slot = left[i];
            i += 1;
        }
    }
}

/// Half-width of the window used after each merge. Noisier comparisons give
/// noisier win counts, so the window grows with `1 / (1 − 2p)²`, up to 4w.
fn level_half_width(w: usize, p: f64) -> usize {
    let k = (0.5 / ((1.0 - 2.0 * p) * (1.0 - 2.0 * p))).ceil().clamp(1.0, 4.0) as usize;
    (w * k).max(1)
}

/// One sliding-window pass with half-width `h`; see [`Refiner::pass`].
pub fn refine_pass<T: Copy, C: Comparator<T>>(v: &mut [T], cmp: &C, h: usize, p: f64) {
    Refiner::new(p, v.len()).pass(v, cmp, h);
}

struct Refiner {
    p: f64,
    wins: Vec<u32>,
    keys: Vec<(f64, u32)>,
}

impl Refiner {
    fn new(p: f64, n: usize) -> Self {
        Self {
            p,
            wins: Vec::with_capacity(n),
            keys: Vec::with_capacity(n),
        }
    }

    // Merge sort that refines every merged run with half-width `h`.
    fn sort<T: Copy, C: Comparator<T>>(&mut self, v: &mut [T], cmp: &C, h: usize) {
        let n = v.len();
        if n <= 2 * h {
            self.pass(v, cmp, n);
            return;
        }
        let mid = n / 2;
        {
            let (a, b) = v.split_at_mut(mid);
            self.sort(a, cmp, h);
            self.sort(b, cmp, h);
        }
        let buf = v.to_vec();
        let (left, right) = buf.split_at(mid);
        merge_into(left, right, v, cmp);
        self.pass(v, cmp, h);
    }

    /// Element `i` counts its wins against positions `i − h ..= i + h`.
    /// With `t` opponents and `b` of them truly smaller, the expected count
    /// is `b(1 − p) + (t − b)p`, so `b` is estimated as
    /// `(wins − tp) / (1 − 2p)`. The slice is then stably sorted by
    /// `window start + estimate`.
    fn pass<T: Copy, C: Comparator<T>>(&mut self, v: &mut [T], cmp: &C, h: usize) {
        let n = v.len();
        if n < 2 || h == 0 {
            return;
        }
        let p = self.p;
        // each pair inside a window is asked once; the answer scores a win
        // for exactly one side
        self.wins.clear();
        self.wins.resize(n, 0);
        for i in 0..n {
            let x = v[i];
            for j in (i + 1)..(i + h + 1).min(n) {
                if cmp.less(v[j], x) {
                    self.wins[i] += 1;
                } else {
                    self.wins[j] += 1;
                }
            }
        }
        self.keys.clear();
        for i in 0..n {
            let lo = i.saturating_sub(h);
            let t = ((i + h + 1).min(n) - lo - 1) as f64;
            let b = ((self.wins[i] as f64 - t * p) / (1.0 - 2.0 * p)).clamp(0.0, t);
            self.keys.push((lo as f64 + b, i as u32));
        }
        self.keys.sort_unstable_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
        let old = v.to_vec();
        for (slot, &(_, i)) in v.iter_mut().zip(self.keys.iter()) {
            *slot = old[i as usize];
        }
    }
}

/// One `(n, seed)` measurement of a sorter.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurveRow {
    pub n: usize,
    pub seed: u64,
    pub max_disl: u64,
    pub total_disl: u64,
    pub sorter: SorterId,
    pub p: f64,
    pub w: usize,
    pub r: usize,
}

/// Per-`n` aggregate of a dislocation sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurvePoint {
    pub n: usize,
    pub seeds: usize,
    pub max_disl_median: f64,
    pub max_disl_p95: u64,
    pub max_disl_max: u64,
    pub total_disl_mean: f64,
}

/// Sorts a uniform permutation of every size in `n_list` for every seed.
///
/// Seed `s` draws the permutation from `s` and the oracle from a value
/// derived from `s`, so rows are reproducible individually.
pub fn dislocation_rows(spec: &SorterSpec, p: f64, n_list: &[usize], seeds: &[u64]) -> Result<Vec<CurveRow>> {
    spec.validate()?;
    ComparisonOracle::persistent(p, 0)?;
    let cells: Vec<(usize, u64)> = n_list
        .iter()
        .flat_map(|&n| seeds.iter().map(move |&s| (n, s)))
        .collect();
    cells
        .par_iter()
        .map(|&(n, seed)| {
            let s = generate_permutation(PermutationKind::Uniform, n, seed)?;
            let oracle = ComparisonOracle::persistent(p, derive_seed(seed, 1))?;
            let apx = approx_sort(&s, &oracle, spec)?;
            let rep = apx.dislocation();
            Ok(CurveRow {
                n,
                seed,
                max_disl: rep.max_disl,
                total_disl: rep.total_disl,
                sorter: spec.id,
                p,
                w: spec.window_for(n),
                r: spec.passes_used(),
            })
        })
        .collect()
}

/// CSV with header `n,seed,max_disl,total_disl,sorter,p,w,r`.
pub fn write_curve_csv<W: std::io::Write>(out: W, rows: &[CurveRow]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in rows {
        w.serialize(r).map_err(|e| Error::Malformed(e.to_string()))?;
    }
    if rows.is_empty() {
        w.write_record(["n", "seed", "max_disl", "total_disl", "sorter", "p", "w", "r"])
            .map_err(|e| Error::Malformed(e.to_string()))?;
    }
    w.flush().map_err(|e| Error::Malformed(e.to_string()))
}

pub fn summarize_curve(rows: &[CurveRow]) -> Vec<CurvePoint> {
    let mut ns: Vec<usize> = rows.iter().map(|r| r.n).collect();
    ns.sort_unstable();
    ns.dedup();
    ns.into_iter()
        .map(|n| {
            let cell: Vec<&CurveRow> = rows.iter().filter(|r| r.n == n).collect();
            let mut maxes: Vec<u64> = cell.iter().map(|r| r.max_disl).collect();
            maxes.sort_unstable();
            let total: f64 = cell.iter().map(|r| r.total_disl as f64).sum();
            CurvePoint {
                n,
                seeds: cell.len(),
                max_disl_median: median_sorted(&maxes),
                max_disl_p95: nearest_rank(&maxes, 0.95),
                max_disl_max: *maxes.last().unwrap_or(&0),
                total_disl_mean: total / cell.len().max(1) as f64,
            }
        })
        .collect()
}

/// Measures a sorter over `n_list × seeds` and aggregates per `n`.
pub fn measure_dislocation_curve(
    spec: &SorterSpec,
    p: f64,
    n_list: &[usize],
    seeds: &[u64],
) -> Result<Vec<CurvePoint>> {
    Ok(summarize_curve(&dislocation_rows(spec, p, n_list, seeds)?))
}

pub(crate) fn median_sorted(v: &[u64]) -> f64 {
    match v.len() {
        0 => 0.0,
        l if l % 2 == 1 => v[l / 2] as f64,
        l => (v[l / 2 - 1] + v[l / 2]) as f64 / 2.0,
    }
}

/// Nearest-rank quantile of an ascending slice.
pub(crate) fn nearest_rank(v: &[u64], q: f64) -> u64 {
    if v.is_empty() {
        return 0;
    }
    let rank = (q * v.len() as f64).ceil() as usize;
    v[rank.clamp(1, v.len()) - 1]
}
