use noisy_lis_core::model::{Observed, OracleConfig, OracleMode};
use noisy_lis_core::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn wrong_pairs(o: &ComparisonOracle, n: u32) -> u64 {
    let mut wrong = 0;
    for x in 1..=n {
        for y in (x + 1)..=n {
            if o.compare(x, y).unwrap() == Observed::Greater {
                wrong += 1;
            }
        }
    }
    wrong
}

#[test]
fn repeated_queries_agree_with_the_first() {
    let o = ComparisonOracle::persistent(0.3, 99).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut first = std::collections::HashMap::new();
    for _ in 0..100_000 {
        let x = rng.gen_range(1..=500u32);
        let y = rng.gen_range(1..=500u32);
        if x == y {
            continue;
        }
        let key = (x.min(y), x.max(y));
        let got = o.compare(key.0, key.1).unwrap();
        assert_eq!(*first.entry(key).or_insert(got), got);
    }
}

#[test]
fn antisymmetry() {
    let o = ComparisonOracle::persistent(0.25, 5).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for _ in 0..20_000 {
        let x = rng.gen_range(1..=10_000u32);
        let y = rng.gen_range(1..=10_000u32);
        if x == y {
            continue;
        }
        assert_eq!(o.compare(x, y).unwrap(), o.compare(y, x).unwrap().reverse());
        assert_ne!(o.less(x, y), o.less(y, x));
    }
}

#[test]
fn error_rate_within_three_sd() {
    let n = 2000u32;
    let pairs = (n as f64) * (n as f64 - 1.0) / 2.0;
    for p in [0.05, 0.1, 0.25] {
        let sd = (pairs * p * (1.0 - p)).sqrt();
        for seed in 0..20 {
            let o = ComparisonOracle::persistent(p, seed).unwrap();
            let wrong = wrong_pairs(&o, n) as f64;
            let z = (wrong - pairs * p) / sd;
            assert!(z.abs() <= 3.0, "p={p} seed={seed} z={z:.2}");
        }
    }
}

#[test]
fn wrong_fraction_at_ten_thousand() {
    let n = 10_000u32;
    let pairs = (n as f64) * (n as f64 - 1.0) / 2.0;
    for seed in [3, 4, 5] {
        let o = ComparisonOracle::persistent(0.1, seed).unwrap();
        let frac = wrong_pairs(&o, n) as f64 / pairs;
        assert!((frac - 0.1).abs() <= 0.005, "seed {seed}: {frac}");
    }
}

#[test]
fn disjoint_pairs_look_independent() {
    // 2x2 table of flip outcomes for pairs {a, b} and {c, d}, all distinct
    let p = 0.3;
    let o = ComparisonOracle::persistent(p, 77).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut table = [[0f64; 2]; 2];
    let samples = 40_000;
    let mut taken = 0;
    while taken < samples {
        let v: Vec<u32> = (0..4).map(|_| rng.gen_range(1..=100_000u32)).collect();
        if (0..4).any(|i| (i + 1..4).any(|j| v[i] == v[j])) {
            continue;
        }
        let f1 = o.is_flipped(v[0], v[1]) as usize;
        let f2 = o.is_flipped(v[2], v[3]) as usize;
        table[f1][f2] += 1.0;
        taken += 1;
    }
    let total = samples as f64;
    let rows = [table[0][0] + table[0][1], table[1][0] + table[1][1]];
    let cols = [table[0][0] + table[1][0], table[0][1] + table[1][1]];
    let mut chi2 = 0.0;
    for i in 0..2 {
        for j in 0..2 {
            let e = rows[i] * cols[j] / total;
            chi2 += (table[i][j] - e).powi(2) / e;
        }
    }
    // 1 degree of freedom, 0.1% level
    assert!(chi2 < 10.83, "chi2 = {chi2}");
}

#[test]
fn threshold_mode_keeps_far_pairs_correct() {
    for tau in [0, 1, 5, 40] {
        let o = ComparisonOracle::threshold(0.4, tau, 11).unwrap();
        let mut near_flips = 0;
        for x in 1..=400u32 {
            for y in (x + 1)..=400u32 {
                if y - x > tau {
                    assert!(o.less(x, y) && !o.less(y, x));
                } else if o.is_flipped(x, y) {
                    near_flips += 1;
                }
            }
        }
        if tau >= 5 {
            assert!(near_flips > 0);
        }
    }
}

#[test]
fn error_free_mode_is_exact() {
    let o = ComparisonOracle::error_free();
    assert_eq!(o.compare(3, 7).unwrap(), Observed::Less);
    assert_eq!(wrong_pairs(&o, 300), 0);
    let bad = OracleConfig {
        p: 0.1,
        seed: 0,
        mode: OracleMode::ErrorFree,
        tau: None,
    };
    assert!(ComparisonOracle::new(bad).is_err());
}

#[test]
fn oracle_config_round_trip() {
    let o = ComparisonOracle::threshold(0.2, 3, 17).unwrap();
    let json = serde_json::to_string(&o).unwrap();
    let back: ComparisonOracle = serde_json::from_str(&json).unwrap();
    for x in 1..50u32 {
        for y in (x + 1)..50 {
            assert_eq!(o.compare(x, y).unwrap(), back.compare(x, y).unwrap());
        }
    }
    assert!(serde_json::from_str::<ComparisonOracle>(r#"{"p":0.7,"seed":1,"mode":"persistent-bernoulli"}"#).is_err());
}

#[test]
fn dislocation_of_reversed_matches_loop() {
    for n in 1..=40usize {
        let rev = Permutation::reversed(n);
        let rep = dislocation(rev.as_slice()).unwrap();
        let mut total = 0u64;
        let mut max = 0u64;
        for i in 1..=n {
            let d = (i as i64 - (n + 1 - i) as i64).unsigned_abs();
            total += d;
            max = max.max(d);
        }
        assert_eq!((rep.max_disl, rep.total_disl), (max, total));
    }
}

#[test]
fn generator_kinds() {
    assert_eq!(generate_permutation(PermutationKind::Identity, 5, 0).unwrap().as_slice(), &[1, 2, 3, 4, 5]);
    assert_eq!(generate_permutation(PermutationKind::Reversed, 4, 0).unwrap().as_slice(), &[4, 3, 2, 1]);
    let a = generate_permutation(PermutationKind::Uniform, 100, 8).unwrap();
    let b = generate_permutation(PermutationKind::Uniform, 100, 8).unwrap();
    assert_eq!(a, b);
    assert!(generate_permutation(PermutationKind::PlantedLis(201), 200, 0).is_err());
    assert!(generate_permutation(PermutationKind::Uniform, 0, 0).is_err());
    for seed in 0..20 {
        let s = generate_permutation(PermutationKind::PlantedLis(50), 200, seed).unwrap();
        assert!(lis_dp_oracle(s.as_slice()).unwrap() >= 50);
    }
}

#[test]
fn uniform_shuffle_is_unbiased() {
    // every value should land in position 1 about equally often
    let n = 8;
    let trials = 16_000;
    let mut counts = vec![0f64; n];
    for seed in 0..trials {
        let s = generate_permutation(PermutationKind::Uniform, n, seed).unwrap();
        counts[s.as_slice()[0] as usize - 1] += 1.0;
    }
    let e = trials as f64 / n as f64;
    let chi2: f64 = counts.iter().map(|c| (c - e).powi(2) / e).sum();
    // 7 degrees of freedom, 0.1% level
    assert!(chi2 < 24.32, "chi2 = {chi2}");
}
