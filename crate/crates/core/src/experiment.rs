//! End-to-end trials and parameter sweeps.
//!
//! A trial generates a permutation, sorts it with a noisy oracle, runs the
//! distant LIS and the partition recipe, validates the output and, when the
//! input is small enough, compares against the exact LIS. Records are pure
//! functions of the configuration; wall-clock timings are kept apart so the
//! records stay reproducible byte for byte.

use std::io::Write;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::compare::TrueOrder;
use crate::distant::{approx_lis, recipe_lis, DMode};
use crate::error::{Error, Result};
use crate::lis::{exact_lis, lis_dp_oracle_capped, ORACLE_CAP};
use crate::model::{generate_permutation, ComparisonOracle, PermutationKind};
use crate::seed::derive_seed;
use crate::sort::{approx_sort, median_sorted, SorterSpec};

/// Bumped whenever a CSV or JSON layout changes.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub n: usize,
    pub p: f64,
    pub seed: u64,
    pub kind: PermutationKind,
    pub sorter: SorterSpec,
    pub d_mode: DMode,
    /// Largest `n` for which the exact LIS is computed and cross-checked.
    pub oracle_cap: usize,
}

impl RunConfig {
    pub fn new(n: usize, p: f64, seed: u64) -> Self {
        Self {
            n,
            p,
            seed,
            kind: PermutationKind::Uniform,
            sorter: SorterSpec::windowed_refine(),
            d_mode: DMode::default(),
            oracle_cap: ORACLE_CAP,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::InvalidParameter("n must be at least 1".into()));
        }
        if let PermutationKind::PlantedLis(l) = self.kind {
            if l == 0 || l > self.n {
                return Err(Error::InvalidParameter(format!(
                    "planted length {l} must lie in 1..={}",
                    self.n
                )));
            }
        }
        ComparisonOracle::persistent(self.p, 0)?;
        self.sorter.validate()?;
        self.d_mode.validate()
    }
}

/// Wall-clock time per phase, in milliseconds.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct PhaseTimings {
    pub generate_ms: f64,
    pub sort_ms: f64,
    pub approx_lis_ms: f64,
    pub recipe_ms: f64,
    pub exact_ms: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub seed: u64,
    pub n: usize,
    pub p: f64,
    pub kind: PermutationKind,
    pub sorter: String,
    pub w: usize,
    pub r: usize,
    pub d_mode: DMode,
    pub d_used: usize,
    pub max_disl: u64,
    pub total_disl: u64,
    /// Exact LIS length; only computed when `n` is within the oracle cap.
    pub exact_lis_len: Option<usize>,
    /// Lower bound on the LIS known from the generator.
    pub planted_lis_len: Option<usize>,
    pub approx_len: usize,
    pub recipe_len: usize,
    pub truly_increasing: bool,
    pub is_2d_distant: bool,
    pub is_subsequence: bool,
    #[serde(skip)]
    pub timings: PhaseTimings,
}

impl TrialRecord {
    /// Whether the measured dislocation fit within the budget used.
    pub fn within_budget(&self) -> bool {
        self.max_disl <= self.d_used as u64
    }

    /// `exact_lis_len / approx_len`. Above the oracle cap the planted length
    /// stands in for the exact one, which makes the ratio a lower bound.
    pub fn ratio(&self) -> Option<f64> {
        self.exact_lis_len
            .or(self.planted_lis_len)
            .map(|e| e as f64 / self.approx_len.max(1) as f64)
    }

    pub const CSV_HEADER: [&'static str; 20] = [
        "schema_version",
        "seed",
        "n",
        "p",
        "kind",
        "sorter",
        "w",
        "r",
        "d_mode",
        "d_used",
        "max_disl",
        "total_disl",
        "exact_lis_len",
        "planted_lis_len",
        "approx_len",
        "recipe_len",
        "ratio",
        "truly_increasing",
        "is_2d_distant",
        "is_subsequence",
    ];

    pub fn csv_fields(&self) -> Vec<String> {
        let opt = |v: Option<usize>| v.map(|x| x.to_string()).unwrap_or_default();
        vec![
            SCHEMA_VERSION.to_string(),
            self.seed.to_string(),
            self.n.to_string(),
            self.p.to_string(),
            self.kind.to_string(),
            self.sorter.clone(),
            self.w.to_string(),
            self.r.to_string(),
            self.d_mode.to_string(),
            self.d_used.to_string(),
            self.max_disl.to_string(),
            self.total_disl.to_string(),
            opt(self.exact_lis_len),
            opt(self.planted_lis_len),
            self.approx_len.to_string(),
            self.recipe_len.to_string(),
            self.ratio().map(|r| format!("{r:.6}")).unwrap_or_default(),
            self.truly_increasing.to_string(),
            self.is_2d_distant.to_string(),
            self.is_subsequence.to_string(),
        ]
    }
}

fn ms(t: Instant) -> f64 {
    t.elapsed().as_secs_f64() * 1e3
}

/// One full pipeline run. Deterministic given the configuration.
pub fn run_trial(config: &RunConfig) -> Result<TrialRecord> {
    config.validate()?;
    let mut timings = PhaseTimings::default();

    let t = Instant::now();
    let s = generate_permutation(config.kind, config.n, config.seed)?;
    timings.generate_ms = ms(t);

    let oracle = ComparisonOracle::persistent(config.p, derive_seed(config.seed, 1))?;
    let t = Instant::now();
    let apx = approx_sort(&s, &oracle, &config.sorter)?;
    timings.sort_ms = ms(t);

    let disl = apx.dislocation();
    let d = config.d_mode.resolve(config.n, config.p, Some(disl.max_disl))?;

    let t = Instant::now();
    let approx = approx_lis(&s, &apx, d)?;
    timings.approx_lis_ms = ms(t);

    let t = Instant::now();
    let recipe = recipe_lis(&s, &apx, d)?;
    timings.recipe_ms = ms(t);

    let t = Instant::now();
    let exact_lis_len = if config.n <= config.oracle_cap {
        let fast = exact_lis(s.as_slice(), &TrueOrder).len();
        let slow = lis_dp_oracle_capped(s.as_slice(), config.oracle_cap)?;
        if fast != slow {
            return Err(Error::Inconsistent(format!(
                "patience LIS {fast} disagrees with DP oracle {slow}"
            )));
        }
        Some(fast)
    } else {
        None
    };
    timings.exact_ms = ms(t);

    let planted_lis_len = match config.kind {
        PermutationKind::PlantedLis(l) => Some(l),
        PermutationKind::Identity => Some(config.n),
        _ => None,
    };

    Ok(TrialRecord {
        seed: config.seed,
        n: config.n,
        p: config.p,
        kind: config.kind,
        sorter: config.sorter.id.to_string(),
        w: config.sorter.window_for(config.n),
        r: config.sorter.passes_used(),
        d_mode: config.d_mode,
        d_used: d,
        max_disl: disl.max_disl,
        total_disl: disl.total_disl,
        exact_lis_len,
        planted_lis_len,
        approx_len: approx.length,
        recipe_len: recipe.length,
        truly_increasing: approx.flags.is_truly_increasing,
        is_2d_distant: approx.flags.is_2d_distant,
        is_subsequence: approx.flags.is_subsequence_of_input,
        timings,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepConfig {
    pub n_list: Vec<usize>,
    pub p_list: Vec<f64>,
    pub sorters: Vec<SorterSpec>,
    pub d_modes: Vec<DMode>,
    pub seeds: Vec<u64>,
    pub kind: PermutationKind,
    pub oracle_cap: usize,
}

/// One `(n, p, sorter, d-mode)` combination of a sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepCell {
    pub cell: usize,
    pub n: usize,
    pub p: f64,
    pub sorter: SorterSpec,
    pub d_mode: DMode,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub cell: usize,
    pub seed: u64,
    pub outcome: std::result::Result<TrialRecord, String>,
}

impl SweepConfig {
    pub fn cells(&self) -> Vec<SweepCell> {
        let mut cells = Vec::new();
        for &n in &self.n_list {
            for &p in &self.p_list {
                for &sorter in &self.sorters {
                    for &d_mode in &self.d_modes {
                        cells.push(SweepCell {
                            cell: cells.len(),
                            n,
                            p,
                            sorter,
                            d_mode,
                        });
                    }
                }
            }
        }
        cells
    }

    pub fn validate(&self) -> Result<()> {
        for cell in self.cells() {
            self.run_config(&cell, 0).validate()?;
        }
        Ok(())
    }

    fn run_config(&self, cell: &SweepCell, seed: u64) -> RunConfig {
        RunConfig {
            n: cell.n,
            p: cell.p,
            seed,
            kind: self.kind,
            sorter: cell.sorter,
            d_mode: cell.d_mode,
            oracle_cap: self.oracle_cap,
        }
    }
}

/// Runs every cell for every seed on the rayon pool. Rows come back in
/// `(cell, seed)` order; a failing trial is recorded and the sweep goes on.
pub fn run_sweep(config: &SweepConfig) -> Vec<SweepRow> {
    let jobs: Vec<(SweepCell, u64)> = config
        .cells()
        .into_iter()
        .flat_map(|c| config.seeds.iter().map(move |&s| (c.clone(), s)))
        .collect();
    jobs.par_iter()
        .map(|(cell, seed)| SweepRow {
            cell: cell.cell,
            seed: *seed,
            outcome: run_trial(&config.run_config(cell, *seed)).map_err(|e| e.to_string()),
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellSummary {
    pub cell: usize,
    pub n: usize,
    pub p: f64,
    pub sorter: String,
    pub d_mode: DMode,
    pub trials: usize,
    pub failed: usize,
    pub within_budget: usize,
    /// Trials within budget whose output was not truly increasing.
    pub soundness_violations: usize,
    pub median_d_used: f64,
    pub median_max_disl: f64,
    pub median_approx_len: f64,
    pub median_recipe_len: f64,
    pub median_exact_lis_len: Option<f64>,
    pub median_ratio: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepSummary {
    pub schema_version: u32,
    pub cells: Vec<CellSummary>,
}

fn median_f64(mut v: Vec<f64>) -> Option<f64> {
    if v.is_empty() {
        return None;
    }
    v.sort_by(f64::total_cmp);
    let l = v.len();
    Some(if l % 2 == 1 { v[l / 2] } else { (v[l / 2 - 1] + v[l / 2]) / 2.0 })
}

fn median_u64(mut v: Vec<u64>) -> f64 {
    v.sort_unstable();
    median_sorted(&v)
}

pub fn summarize_sweep(config: &SweepConfig, rows: &[SweepRow]) -> SweepSummary {
    let cells = config
        .cells()
        .into_iter()
        .map(|c| {
            let recs: Vec<&TrialRecord> = rows
                .iter()
                .filter(|r| r.cell == c.cell)
                .filter_map(|r| r.outcome.as_ref().ok())
                .collect();
            let total = rows.iter().filter(|r| r.cell == c.cell).count();
            let ratios: Vec<f64> = recs.iter().filter_map(|r| r.ratio()).collect();
            let exact: Vec<f64> = recs
                .iter()
                .filter_map(|r| r.exact_lis_len.map(|e| e as f64))
                .collect();
            CellSummary {
                cell: c.cell,
                n: c.n,
                p: c.p,
                sorter: c.sorter.id.to_string(),
                d_mode: c.d_mode,
                trials: total,
                failed: total - recs.len(),
                within_budget: recs.iter().filter(|r| r.within_budget()).count(),
                soundness_violations: recs
                    .iter()
                    .filter(|r| r.within_budget() && !r.truly_increasing)
                    .count(),
                median_d_used: median_u64(recs.iter().map(|r| r.d_used as u64).collect()),
                median_max_disl: median_u64(recs.iter().map(|r| r.max_disl).collect()),
                median_approx_len: median_u64(recs.iter().map(|r| r.approx_len as u64).collect()),
                median_recipe_len: median_u64(recs.iter().map(|r| r.recipe_len as u64).collect()),
                median_exact_lis_len: median_f64(exact),
                median_ratio: median_f64(ratios),
            }
        })
        .collect();
    SweepSummary {
        schema_version: SCHEMA_VERSION,
        cells,
    }
}

/// Writes trial records as CSV with [`TrialRecord::CSV_HEADER`].
pub fn write_records_csv<W: Write>(out: W, records: &[TrialRecord]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let io = |e: csv::Error| Error::Malformed(e.to_string());
    w.write_record(TrialRecord::CSV_HEADER).map_err(io)?;
    for r in records {
        w.write_record(r.csv_fields()).map_err(io)?;
    }
    w.flush().map_err(|e| Error::Malformed(e.to_string()))
}

/// Sweep CSV: `cell`, the trial columns, then `error` (empty on success).
pub fn write_sweep_csv<W: Write>(out: W, rows: &[SweepRow]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let io = |e: csv::Error| Error::Malformed(e.to_string());
    let mut header = vec!["cell"];
    header.extend(TrialRecord::CSV_HEADER);
    header.push("error");
    w.write_record(&header).map_err(io)?;
    for row in rows {
        let mut fields = vec![row.cell.to_string()];
        match &row.outcome {
            Ok(rec) => {
                fields.extend(rec.csv_fields());
                fields.push(String::new());
            }
            Err(e) => {
                let mut blank = vec![String::new(); TrialRecord::CSV_HEADER.len()];
                blank[0] = SCHEMA_VERSION.to_string();
                blank[1] = row.seed.to_string();
                fields.extend(blank);
                fields.push(e.clone());
            }
        }
        w.write_record(&fields).map_err(io)?;
    }
    w.flush().map_err(|e| Error::Malformed(e.to_string()))
}

/// Timing sidecar: `cell,seed,n,generate_ms,sort_ms,approx_lis_ms,recipe_ms,exact_ms`.
pub fn write_timings_csv<W: Write>(out: W, rows: &[SweepRow]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let io = |e: csv::Error| Error::Malformed(e.to_string());
    w.write_record([
        "cell",
        "seed",
        "n",
        "generate_ms",
        "sort_ms",
        "approx_lis_ms",
        "recipe_ms",
        "exact_ms",
    ])
    .map_err(io)?;
    for row in rows {
        if let Ok(rec) = &row.outcome {
            let t = rec.timings;
            w.write_record([
                row.cell.to_string(),
                row.seed.to_string(),
                rec.n.to_string(),
                format!("{:.4}", t.generate_ms),
                format!("{:.4}", t.sort_ms),
                format!("{:.4}", t.approx_lis_ms),
                format!("{:.4}", t.recipe_ms),
                format!("{:.4}", t.exact_ms),
            ])
            .map_err(io)?;
        }
    }
    w.flush().map_err(|e| Error::Malformed(e.to_string()))
}

/// Median time of one phase over the successful trials of a cell, in
/// milliseconds.
pub fn median_phase_ms(rows: &[SweepRow], cell: usize, phase: impl Fn(&PhaseTimings) -> f64) -> Option<f64> {
    median_f64(
        rows.iter()
            .filter(|r| r.cell == cell)
            .filter_map(|r| r.outcome.as_ref().ok())
            .map(|r| phase(&r.timings))
            .collect(),
    )
}
