//! Hard instances for approximate LIS under persistent errors.
//!
//! `S*` lists the largest `η` elements in increasing order followed by the
//! rest in decreasing order. `S_(i)` moves the maximum `n` to position `i`.
//! Each `S_(i)` differs from `S*` in exactly `η − i` pairs, so the
//! comparison outcomes of different members are hard to tell apart once
//! `η ≈ log n / (2 log((1−p)/p))`.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::compare::Comparator;
use crate::distant::{longest_distant_indices, DMode};
use crate::error::{Error, Result};
use crate::model::{ComparisonOracle, Permutation};
use crate::seed::derive_seed;
use crate::sort::{sort_items, SorterId, SorterSpec};

/// `⌈log₂ n / (2 log₂((1−p)/p))⌉`.
///
/// At `p = 0` the quotient vanishes for every `n`; the limit of the
/// formula as `p → 0⁺` is 1, which is what this returns.
pub fn eta(n: usize, p: f64) -> Result<usize> {
    if !(0.0..0.5).contains(&p) {
        return Err(Error::InvalidParameter(format!("p = {p} must lie in [0, 1/2)")));
    }
    if n < 2 {
        return Err(Error::InvalidParameter("n must be at least 2".into()));
    }
    if p == 0.0 {
        return Ok(1);
    }
    let ratio = ((1.0 - p) / p).log2();
    Ok(((n as f64).log2() / (2.0 * ratio)).ceil().max(1.0) as usize)
}

#[derive(Debug, Clone, PartialEq)]
pub struct AdversarialFamily {
    pub n: usize,
    pub p: f64,
    pub eta: usize,
    // members[i - 1] is S_(i) for i < eta; members[eta - 1] is S*
    members: Vec<Permutation>,
}

impl AdversarialFamily {
    pub fn members(&self) -> &[Permutation] {
        &self.members
    }

    /// `S_(i)` for `1 ≤ i ≤ η`, where `S_(η) = S*`.
    pub fn member(&self, i: usize) -> Option<&Permutation> {
        i.checked_sub(1).and_then(|i| self.members.get(i))
    }

    pub fn s_star(&self) -> &Permutation {
        &self.members[self.eta - 1]
    }

    /// Uniform draw over all `η` members; returns the 1-based member index.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> (usize, &Permutation) {
        let i = rng.gen_range(1..=self.eta);
        (i, &self.members[i - 1])
    }
}

/// Builds `{S_(1), …, S_(η−1), S*}` for `n ≥ 4` and `p ∈ [0, 1/2)`.
pub fn build_family(n: usize, p: f64) -> Result<AdversarialFamily> {
    if n < 4 {
        return Err(Error::InvalidParameter(format!("n = {n} must be at least 4")));
    }
    let eta = eta(n, p)?;
    if eta > n {
        return Err(Error::InvalidParameter(format!(
            "eta = {eta} exceeds n = {n}; p is too close to 1/2"
        )));
    }
    let n32 = n as u32;
    let e32 = eta as u32;
    let tail = (1..=n32 - e32).rev();
    let members = (1..=eta)
        .map(|i| {
            let mut v = Vec::with_capacity(n);
            // top block n−η+1 .. n−1 with n inserted at slot i
            let mut top = (n32 - e32 + 1)..n32;
            v.extend(top.by_ref().take(i - 1));
            v.push(n32);
            v.extend(top);
            v.extend(tail.clone());
            Permutation::new(v)
        })
        .collect::<Result<_>>()?;
    Ok(AdversarialFamily { n, p, eta, members })
}

/// Number of unordered pairs whose relative order differs between `a` and
/// `b`.
pub fn wrong_pair_count(a: &Permutation, b: &Permutation) -> Result<u64> {
    if a.len() != b.len() {
        return Err(Error::Inconsistent(format!(
            "sequences over different element sets (n = {} vs {})",
            a.len(),
            b.len()
        )));
    }
    // relabel b by positions in a; discordant pairs are inversions
    let mut v: Vec<usize> = b.iter().map(|x| a.pos(x).expect("same element set")).collect();
    let mut buf = v.clone();
    Ok(count_inversions(&mut v, &mut buf))
}

fn count_inversions(v: &mut [usize], buf: &mut [usize]) -> u64 {
    let n = v.len();
    if n < 2 {
        return 0;
    }
    let mid = n / 2;
    let mut inv = {
        let (vl, vr) = v.split_at_mut(mid);
        let (bl, br) = buf.split_at_mut(mid);
        count_inversions(vl, bl) + count_inversions(vr, br)
    };
    let (mut i, mut j) = (0, mid);
    for slot in buf.iter_mut() {
        if j == n || (i < mid && v[i] < v[j]) {
            *slot = v[i];
            i += 1;
        } else {
            inv += (mid - i) as u64;
            *slot = v[j];
            j += 1;
        }
    }
    v.copy_from_slice(buf);
    inv
}

/// What an algorithm under test gets to see: the length of the input and a
/// persistent noisy comparator over sequence indices.
///
/// The element values stay private, so an algorithm cannot look at them:
///
/// ```compile_fail
/// use noisy_lis_core::adversarial::BlindView;
/// fn peek(view: &BlindView<'_>) -> u32 {
///     view.seq[0]
/// }
/// ```
pub struct BlindView<'a> {
    seq: &'a [u32],
    oracle: &'a ComparisonOracle,
}

impl<'a> BlindView<'a> {
    pub fn new(seq: &'a [u32], oracle: &'a ComparisonOracle) -> Self {
        Self { seq, oracle }
    }

    pub fn len(&self) -> usize {
        self.seq.len()
    }

    pub fn is_empty(&self) -> bool {
        self.seq.is_empty()
    }

    /// Error rate of the underlying comparisons. Part of the model, so the
    /// algorithm may use it.
    pub fn error_rate(&self) -> f64 {
        self.oracle.p()
    }

    /// Observed `s_i ≺ s_j` (0-based indices).
    pub fn less(&self, i: usize, j: usize) -> bool {
        self.oracle.less(self.seq[i], self.seq[j])
    }
}

impl Comparator<usize> for BlindView<'_> {
    fn less(&self, a: usize, b: usize) -> bool {
        BlindView::less(self, a, b)
    }
}

/// An LIS procedure that works from comparisons alone.
pub trait LisProcedure: Sync {
    fn name(&self) -> String;

    /// Returns the chosen items as 0-based sequence indices, in order.
    fn run(&self, view: &BlindView<'_>) -> Vec<usize>;
}

/// Approximate sort followed by the longest `2d`-distant subsequence.
#[derive(Debug, Clone, Copy)]
pub struct ApproxLisProcedure {
    sorter: SorterSpec,
    d_mode: DMode,
}

impl ApproxLisProcedure {
    /// `d_mode` must not be `Measured` and the sorter must not need true
    /// values.
    pub fn new(sorter: SorterSpec, d_mode: DMode) -> Result<Self> {
        sorter.validate()?;
        d_mode.validate()?;
        if d_mode == DMode::Measured {
            return Err(Error::InvalidParameter(
                "measured d needs the true ranks, which the algorithm may not see".into(),
            ));
        }
        if sorter.id == SorterId::IdentityOracle {
            return Err(Error::InvalidParameter(
                "identity-oracle sorting needs true element values".into(),
            ));
        }
        Ok(Self { sorter, d_mode })
    }
}

impl LisProcedure for ApproxLisProcedure {
    fn name(&self) -> String {
        format!("approx-lis[{},{}]", self.sorter.id, self.d_mode)
    }

    fn run(&self, view: &BlindView<'_>) -> Vec<usize> {
        let n = view.len();
        let idx: Vec<usize> = (0..n).collect();
        let order = sort_items(&idx, view, &self.sorter, view.error_rate()).expect("validated sorter");
        let mut pos = vec![0usize; n];
        for (p, &i) in order.iter().enumerate() {
            pos[i] = p + 1;
        }
        let d = self.d_mode.resolve(n, view.error_rate(), None).expect("validated d mode");
        longest_distant_indices(&pos, 2 * d)
    }
}

/// Success predicate for one trial. A returned subsequence succeeds when
/// it is a valid, truly increasing subsequence and the enabled conditions
/// hold.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SuccessCriterion {
    /// Require `length ≥ η / (c · log₂ n)` when set.
    pub approx_constant: Option<f64>,
    /// Require at least two of the first `η` positions when `η ≥ 2`.
    pub require_head_pair: bool,
}

impl Default for SuccessCriterion {
    fn default() -> Self {
        Self {
            approx_constant: Some(1.0),
            require_head_pair: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FailureConfig {
    pub n: usize,
    pub p: f64,
    pub trials: usize,
    pub seed: u64,
    pub criterion: SuccessCriterion,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FailureTrial {
    pub trial: usize,
    pub seed: u64,
    pub member_index: usize,
    pub returned_length: usize,
    pub truly_increasing: bool,
    pub success: bool,
}

/// `{n, p, eta, trials, failures, ci_low, ci_high}`; the interval is the
/// 95% Wilson score interval of the failure rate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FailureSummary {
    pub n: usize,
    pub p: f64,
    pub eta: usize,
    pub trials: usize,
    pub failures: usize,
    pub ci_low: f64,
    pub ci_high: f64,
}

impl FailureSummary {
    pub fn failure_rate(&self) -> f64 {
        if self.trials == 0 {
            0.0
        } else {
            self.failures as f64 / self.trials as f64
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FailureReport {
    pub summary: FailureSummary,
    pub rows: Vec<FailureTrial>,
}

const Z95: f64 = 1.959_963_984_540_054;

/// 95% Wilson score interval for `k` successes out of `n`.
pub fn wilson_interval(k: usize, n: usize) -> (f64, f64) {
    if n == 0 {
        return (0.0, 1.0);
    }
    let (k, n) = (k as f64, n as f64);
    let phat = k / n;
    let z2 = Z95 * Z95;
    let denom = 1.0 + z2 / n;
    let centre = (phat + z2 / (2.0 * n)) / denom;
    let half = Z95 * (phat * (1.0 - phat) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    ((centre - half).max(0.0), (centre + half).min(1.0))
}

/// CSV with header `trial,seed,member_index,returned_length,truly_increasing,success`.
pub fn write_failure_csv<W: std::io::Write>(out: W, rows: &[FailureTrial]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let io = |e: csv::Error| Error::Malformed(e.to_string());
    if rows.is_empty() {
        w.write_record([
            "trial",
            "seed",
            "member_index",
            "returned_length",
            "truly_increasing",
            "success",
        ])
        .map_err(io)?;
    }
    for r in rows {
        w.serialize(r).map_err(io)?;
    }
    w.flush().map_err(|e| Error::Malformed(e.to_string()))
}

/// Scores one returned index list on family member `member` (1-based).
pub fn score_trial(
    family: &AdversarialFamily,
    member: usize,
    returned: &[usize],
    criterion: &SuccessCriterion,
) -> (bool, bool) {
    let seq = family.member(member).expect("member index in range").as_slice();
    let valid = returned.windows(2).all(|w| w[0] < w[1]) && returned.iter().all(|&i| i < seq.len());
    if !valid {
        return (false, false);
    }
    let increasing = returned.windows(2).all(|w| seq[w[0]] < seq[w[1]]);
    let mut ok = increasing && !returned.is_empty();
    if let Some(c) = criterion.approx_constant {
        let need = family.eta as f64 / (c * (family.n as f64).log2());
        ok &= returned.len() as f64 >= need;
    }
    if criterion.require_head_pair && family.eta >= 2 {
        ok &= returned.iter().filter(|&&i| i < family.eta).count() >= 2;
    }
    (increasing, ok)
}

/// Runs `algorithm` on members drawn uniformly from the family, each trial
/// with its own persistent oracle, and counts failures.
pub fn failure_experiment(algorithm: &dyn LisProcedure, config: &FailureConfig) -> Result<FailureReport> {
    let family = build_family(config.n, config.p)?;
    let rows: Vec<FailureTrial> = (0..config.trials)
        .into_par_iter()
        .map(|trial| {
            let seed = derive_seed(config.seed, trial as u64);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let (member_index, seq) = family.sample(&mut rng);
            let oracle = ComparisonOracle::persistent(config.p, derive_seed(seed, 1))?;
            let returned = algorithm.run(&BlindView::new(seq.as_slice(), &oracle));
            let (truly_increasing, success) =
                score_trial(&family, member_index, &returned, &config.criterion);
            Ok(FailureTrial {
                trial,
                seed,
                member_index,
                returned_length: returned.len(),
                truly_increasing,
                success,
            })
        })
        .collect::<Result<_>>()?;
    let failures = rows.iter().filter(|r| !r.success).count();
    let (ci_low, ci_high) = wilson_interval(failures, rows.len());
    Ok(FailureReport {
        summary: FailureSummary {
            n: config.n,
            p: config.p,
            eta: family.eta,
            trials: rows.len(),
            failures,
            ci_low,
            ci_high,
        },
        rows,
    })
}
