use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use noisy_lis_core::*;

const SIZES: [usize; 3] = [1 << 12, 1 << 14, 1 << 16];

fn sorters(c: &mut Criterion) {
    let mut g = c.benchmark_group("approx_sort");
    g.sample_size(10);
    for n in SIZES {
        let s = generate_permutation(PermutationKind::Uniform, n, 1).unwrap();
        let o = ComparisonOracle::persistent(0.1, 1).unwrap();
        for spec in [SorterSpec::windowed_refine(), SorterSpec::noisy_mergesort()] {
            g.bench_with_input(BenchmarkId::new(spec.id.to_string(), n), &s, |b, s| {
                b.iter(|| approx_sort(s, &o, &spec).unwrap())
            });
        }
    }
    g.finish();
}

fn distant(c: &mut Criterion) {
    let mut g = c.benchmark_group("approx_lis");
    g.sample_size(10);
    for n in SIZES {
        let s = generate_permutation(PermutationKind::Uniform, n, 2).unwrap();
        let o = ComparisonOracle::persistent(0.1, 2).unwrap();
        let apx = approx_sort(&s, &o, &SorterSpec::windowed_refine()).unwrap();
        let d = DMode::default().resolve(n, 0.1, None).unwrap();
        g.bench_with_input(BenchmarkId::from_parameter(n), &(s, apx), |b, (s, apx)| {
            b.iter(|| approx_lis(s, apx, d).unwrap())
        });
    }
    g.finish();
}

fn exact(c: &mut Criterion) {
    let mut g = c.benchmark_group("exact_lis");
    for n in SIZES {
        let s = generate_permutation(PermutationKind::Uniform, n, 3).unwrap();
        g.bench_with_input(BenchmarkId::from_parameter(n), &s, |b, s| {
            b.iter(|| exact_lis(s.as_slice(), &TrueOrder).len())
        });
    }
    g.finish();
}

criterion_group!(benches, sorters, distant, exact);
criterion_main!(benches);
