use std::fs;
use std::io::Write;
use std::path::PathBuf;

use noisy_lis_core::adversarial::{
    build_family, failure_experiment, write_failure_csv, ApproxLisProcedure, FailureConfig,
    SuccessCriterion,
};
use noisy_lis_core::experiment::{
    run_sweep, run_trial, summarize_sweep, write_records_csv, write_sweep_csv, write_timings_csv,
    RunConfig, SweepConfig,
};
use noisy_lis_core::model::io::{format_permutation_json, format_permutation_lines};
use noisy_lis_core::sort::{dislocation_rows, summarize_curve, write_curve_csv, DEFAULT_PASSES};
use noisy_lis_core::{generate_permutation, ComparisonOracle, SorterId, SorterSpec};
use serde::Serialize;

use crate::args::{CurveArgs, Format, GenArgs, LowerboundArgs, RunArgs, SorterArgs, SweepArgs};
use crate::Failure;

type CmdResult = Result<(), Failure>;

fn config<E: ToString>(e: E) -> Failure {
    Failure::Config(e.to_string())
}

fn runtime<E: ToString>(e: E) -> Failure {
    Failure::Runtime(e.to_string())
}

fn seed_or_random(seed: Option<u64>) -> u64 {
    seed.unwrap_or_else(|| {
        let s = rand::random();
        eprintln!("seed: {s} (generated; pass --seed {s} to reproduce)");
        s
    })
}

fn emit(out: &Option<PathBuf>, bytes: &[u8]) -> CmdResult {
    match out {
        Some(path) => fs::write(path, bytes).map_err(|e| runtime(format!("{}: {e}", path.display()))),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(bytes).and_then(|_| stdout.flush()).map_err(runtime)
        }
    }
}

fn json<T: Serialize>(value: &T) -> Result<Vec<u8>, Failure> {
    let mut s = serde_json::to_string_pretty(value).map_err(runtime)?;
    s.push('\n');
    Ok(s.into_bytes())
}

fn sorter_spec(id: SorterId, window: Option<usize>, passes: Option<usize>) -> Result<SorterSpec, Failure> {
    if id != SorterId::WindowedRefine && (window.is_some() || passes.is_some()) {
        return Err(config("--window and --passes only apply to windowed-refine"));
    }
    let spec = match id {
        SorterId::WindowedRefine => SorterSpec {
            id,
            window,
            passes: passes.unwrap_or(DEFAULT_PASSES),
        },
        _ => SorterSpec::from_id(id),
    };
    spec.validate().map_err(config)?;
    Ok(spec)
}

fn sorter_from(a: &SorterArgs) -> Result<SorterSpec, Failure> {
    sorter_spec(a.sorter, a.window, a.passes)
}

fn check_p(p: f64) -> CmdResult {
    ComparisonOracle::persistent(p, 0).map(|_| ()).map_err(config)
}

pub fn gen(a: GenArgs) -> CmdResult {
    if a.n == 0 {
        return Err(config("--n must be at least 1"));
    }
    let seed = seed_or_random(a.common.seed);
    let perm = generate_permutation(a.kind, a.n, seed).map_err(config)?;
    let text = match a.common.format.unwrap_or(Format::Csv) {
        Format::Csv => format_permutation_lines(&perm),
        Format::Json => format_permutation_json(&perm) + "\n",
    };
    emit(&a.common.out, text.as_bytes())
}

pub fn run(a: RunArgs) -> CmdResult {
    let cfg = RunConfig {
        n: a.n,
        p: a.p,
        seed: seed_or_random(a.common.seed),
        kind: a.kind,
        sorter: sorter_from(&a.sorter)?,
        d_mode: a.d,
        oracle_cap: a.oracle_cap,
    };
    cfg.validate().map_err(config)?;
    let rec = run_trial(&cfg).map_err(runtime)?;
    let bytes = match a.common.format.unwrap_or(Format::Csv) {
        Format::Csv => {
            let mut buf = Vec::new();
            write_records_csv(&mut buf, std::slice::from_ref(&rec)).map_err(runtime)?;
            buf
        }
        Format::Json => json(&rec)?,
    };
    emit(&a.common.out, &bytes)?;
    if let Some(path) = &a.timings {
        emit(&Some(path.clone()), &json(&rec.timings)?)?;
    }
    Ok(())
}

pub fn sweep(a: SweepArgs) -> CmdResult {
    let sorters = a
        .sorter
        .iter()
        .map(|&id| {
            if id == SorterId::WindowedRefine {
                sorter_spec(id, a.window, a.passes)
            } else {
                sorter_spec(id, None, None)
            }
        })
        .collect::<Result<Vec<_>, _>>()?;
    let base = seed_or_random(a.common.seed);
    let cfg = SweepConfig {
        n_list: a.n,
        p_list: a.p,
        sorters,
        d_modes: a.d,
        seeds: (0..a.trials).map(|i| base.wrapping_add(i)).collect(),
        kind: a.kind,
        oracle_cap: a.oracle_cap,
    };
    cfg.validate().map_err(config)?;
    let rows = run_sweep(&cfg);
    let summary = summarize_sweep(&cfg, &rows);
    let failed: usize = summary.cells.iter().map(|c| c.failed).sum();
    if failed > 0 {
        eprintln!("warning: {failed} trial(s) failed; see the error column");
    }
    let bytes = match a.common.format.unwrap_or(Format::Csv) {
        Format::Csv => {
            let mut buf = Vec::new();
            write_sweep_csv(&mut buf, &rows).map_err(runtime)?;
            buf
        }
        Format::Json => json(&summary)?,
    };
    emit(&a.common.out, &bytes)?;
    if let Some(path) = &a.summary {
        emit(&Some(path.clone()), &json(&summary)?)?;
    }
    if let Some(path) = &a.timings {
        let mut buf = Vec::new();
        write_timings_csv(&mut buf, &rows).map_err(runtime)?;
        emit(&Some(path.clone()), &buf)?;
    }
    Ok(())
}

pub fn lowerbound(a: LowerboundArgs) -> CmdResult {
    check_p(a.p)?;
    build_family(a.n, a.p).map_err(config)?;
    let alg = ApproxLisProcedure::new(sorter_from(&a.sorter)?, a.d).map_err(config)?;
    if !(a.success_c > 0.0) {
        return Err(config("--success-c must be positive"));
    }
    if a.trials == 0 {
        eprintln!("warning: --trials 0 runs nothing; the summary is empty");
    }
    let cfg = FailureConfig {
        n: a.n,
        p: a.p,
        trials: a.trials,
        seed: seed_or_random(a.common.seed),
        criterion: SuccessCriterion {
            approx_constant: (!a.no_length_check).then_some(a.success_c),
            require_head_pair: !a.no_head_pair,
        },
    };
    let report = failure_experiment(&alg, &cfg).map_err(runtime)?;
    let bytes = match a.common.format.unwrap_or(Format::Json) {
        Format::Csv => {
            let mut buf = Vec::new();
            write_failure_csv(&mut buf, &report.rows).map_err(runtime)?;
            buf
        }
        Format::Json => json(&report.summary)?,
    };
    emit(&a.common.out, &bytes)?;
    if let Some(path) = &a.summary {
        emit(&Some(path.clone()), &json(&report.summary)?)?;
    }
    Ok(())
}

pub fn disl_curve(a: CurveArgs) -> CmdResult {
    check_p(a.p)?;
    if a.n.contains(&0) {
        return Err(config("every --n must be at least 1"));
    }
    let spec = sorter_from(&a.sorter)?;
    let base = seed_or_random(a.common.seed);
    let seeds: Vec<u64> = (0..a.trials).map(|i| base.wrapping_add(i)).collect();
    let rows = dislocation_rows(&spec, a.p, &a.n, &seeds).map_err(runtime)?;
    let bytes = match a.common.format.unwrap_or(Format::Csv) {
        Format::Csv => {
            let mut buf = Vec::new();
            write_curve_csv(&mut buf, &rows).map_err(runtime)?;
            buf
        }
        Format::Json => json(&summarize_curve(&rows))?,
    };
    emit(&a.common.out, &bytes)
}
