//! Kept in its own binary so no other test competes for the CPU.

use std::time::Instant;

use noisy_lis_core::*;

fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(f64::total_cmp);
    v[v.len() / 2]
}

#[test]
fn approx_lis_time_doubles() {
    let time_at = |n: usize| {
        let d = DMode::default().resolve(n, 0.05, None).unwrap();
        let runs: Vec<f64> = (0..15)
            .map(|seed| {
                let s = generate_permutation(PermutationKind::Uniform, n, seed).unwrap();
                let o = ComparisonOracle::persistent(0.05, seed).unwrap();
                let apx = approx_sort(&s, &o, &SorterSpec::noisy_mergesort()).unwrap();
                let t = Instant::now();
                // repeat to get above timer resolution
                for _ in 0..5 {
                    std::hint::black_box(approx_lis(&s, &apx, d).unwrap());
                }
                t.elapsed().as_secs_f64()
            })
            .collect();
        median(runs)
    };
    let small = time_at(1 << 15);
    let large = time_at(1 << 16);
    let ratio = large / small;
    assert!((1.7..=2.6).contains(&ratio), "ratio {ratio:.3}");
}
