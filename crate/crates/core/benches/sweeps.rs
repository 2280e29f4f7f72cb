use bandforge::fixtures;
use bandforge::interval::CertifyOptions;
use bandforge::sweep::{
    antisymmetric_palindromes, certify_batch, kohn_cases, kohn_sweep, matignon_pairs,
    matignon_sweep, palindrome_sweep, ExecMode, PALINDROME_VALUES,
};
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

const MODES: [(&str, ExecMode); 2] = [
    ("sequential", ExecMode::Sequential),
    ("parallel", ExecMode::Parallel),
];

fn palindromes(c: &mut Criterion) {
    let forms = antisymmetric_palindromes(4, &PALINDROME_VALUES);
    let mut g = c.benchmark_group("palindrome_sweep");
    g.sample_size(20);
    for (name, mode) in MODES {
        g.bench_with_input(BenchmarkId::from_parameter(name), &forms, |b, f| {
            b.iter(|| palindrome_sweep(mode, f))
        });
    }
    g.finish();
}

fn kohn(c: &mut Criterion) {
    let cases = kohn_cases(40);
    let pairs = matignon_pairs(40);
    let mut g = c.benchmark_group("kohn_matignon");
    for (name, mode) in MODES {
        g.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| (kohn_sweep(mode, &cases), matignon_sweep(mode, &pairs)))
        });
    }
    g.finish();
}

fn certification(c: &mut Criterion) {
    let a = fixtures::appendix_a().expect("fixture");
    let b = fixtures::appendix_b().expect("fixture");
    let batch = vec![a.clone(), b.clone(), a, b];
    let opts = CertifyOptions::default();
    let mut g = c.benchmark_group("certify_batch");
    g.sample_size(10);
    for (name, mode) in MODES {
        g.bench_with_input(BenchmarkId::from_parameter(name), &batch, |bench, ts| {
            bench.iter(|| certify_batch(mode, ts, &opts))
        });
    }
    g.finish();
}

criterion_group!(benches, palindromes, kohn, certification);
criterion_main!(benches);
