use noisy_lis_core::experiment::*;
use noisy_lis_core::*;

fn sweep(n_list: Vec<usize>, p_list: Vec<f64>, seeds: u64) -> SweepConfig {
    SweepConfig {
        n_list,
        p_list,
        sorters: vec![SorterSpec::windowed_refine()],
        d_modes: vec![DMode::default()],
        seeds: (0..seeds).collect(),
        kind: PermutationKind::Uniform,
        oracle_cap: ORACLE_CAP,
    }
}

#[test]
fn full_record_at_4096() {
    let mut cfg = RunConfig::new(4096, 0.05, 7);
    cfg.d_mode = "auto:c=4".parse().unwrap();
    let r = run_trial(&cfg).unwrap();
    assert_eq!(r.d_used, 48);
    assert_eq!(r.w, 48);
    assert_eq!(r.r, 3);
    assert!(r.approx_len >= r.recipe_len && r.approx_len > 0);
    assert!(r.within_budget() && r.truly_increasing && r.is_2d_distant && r.is_subsequence);
    // above the cap the exact length is absent, not an error
    assert_eq!(r.exact_lis_len, None);
    assert_eq!(r.csv_fields().len(), TrialRecord::CSV_HEADER.len());
}

#[test]
fn error_free_run_finds_the_exact_lis() {
    let mut cfg = RunConfig::new(16, 0.0, 1);
    cfg.d_mode = DMode::Measured;
    let r = run_trial(&cfg).unwrap();
    assert_eq!(Some(r.approx_len), r.exact_lis_len);
    assert_eq!(r.ratio(), Some(1.0));
}

#[test]
fn ratio_present_for_small_cells() {
    let cfg = sweep((8..=13).map(|k| 1 << k).collect(), vec![0.05], 30);
    let rows = run_sweep(&cfg);
    let summary = summarize_sweep(&cfg, &rows);
    for (cell, c) in cfg.cells().iter().zip(&summary.cells) {
        assert_eq!(c.failed, 0);
        assert_eq!(c.soundness_violations, 0);
        assert_eq!(c.median_ratio.is_some(), cell.n <= 2000, "{c:?}");
    }
    for row in &rows {
        let rec = row.outcome.as_ref().unwrap();
        assert_eq!(rec.ratio().is_some(), rec.n <= 2000);
        assert!(rec.approx_len >= rec.recipe_len);
    }
}

#[test]
fn zero_noise_ratio_is_one() {
    let mut cfg = sweep(vec![100, 500], vec![0.0], 10);
    cfg.d_modes = vec![DMode::Measured];
    let rows = run_sweep(&cfg);
    for row in &rows {
        assert_eq!(row.outcome.as_ref().unwrap().ratio(), Some(1.0));
    }
}

#[test]
fn planted_length_stands_in_above_the_cap() {
    let mut cfg = sweep(vec![3000], vec![0.05], 2);
    cfg.kind = PermutationKind::PlantedLis(500);
    for row in run_sweep(&cfg) {
        let rec = row.outcome.unwrap();
        assert_eq!(rec.exact_lis_len, None);
        assert_eq!(rec.planted_lis_len, Some(500));
        assert!(rec.ratio().is_some());
    }
}

#[test]
fn sweep_csv_is_reproducible() {
    let cfg = sweep(vec![64, 300], vec![0.1, 0.2], 4);
    let write = || {
        let mut buf = Vec::new();
        write_sweep_csv(&mut buf, &run_sweep(&cfg)).unwrap();
        String::from_utf8(buf).unwrap()
    };
    let a = write();
    assert_eq!(a, write());
    let header = a.lines().next().unwrap();
    assert!(header.starts_with("cell,schema_version,seed,n,p,"));
    assert!(header.ends_with(",error"));
    assert_eq!(a.lines().count(), 1 + 4 * 4);
    let mut t = Vec::new();
    write_timings_csv(&mut t, &run_sweep(&cfg)).unwrap();
    assert!(String::from_utf8(t).unwrap().starts_with("cell,seed,n,generate_ms"));
}

#[test]
fn failing_trials_are_recorded() {
    let mut cfg = sweep(vec![50], vec![0.1], 3);
    cfg.kind = PermutationKind::PlantedLis(80);
    let rows = run_sweep(&cfg);
    assert_eq!(rows.len(), 3);
    assert!(rows.iter().all(|r| r.outcome.is_err()));
    let summary = summarize_sweep(&cfg, &rows);
    assert_eq!(summary.cells[0].failed, 3);
    let mut buf = Vec::new();
    write_sweep_csv(&mut buf, &rows).unwrap();
    let text = String::from_utf8(buf).unwrap();
    assert!(text.lines().nth(1).unwrap().contains("planted length"));
}
