use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion, Throughput};
use ncf_core::analysis::{balance_profile, FactorIndex};
use ncf_core::word::{limit_prefix, Flavor};
use ncf_core::{tn_step, ExactReal};

fn arith(n: u64, count: u64) -> Vec<u64> {
    (0..count).map(|i| n + i).collect()
}

fn prefix(c: &mut Criterion) {
    let digits = arith(2, 40);
    let mut g = c.benchmark_group("limit_prefix");
    g.sample_size(10);
    for len in [100_000usize, 1_000_000, 10_000_000] {
        g.throughput(Throughput::Elements(len as u64));
        for flavor in [Flavor::Primal, Flavor::Dual] {
            g.bench_with_input(BenchmarkId::new(flavor.to_string(), len), &len, |b, &len| {
                b.iter(|| limit_prefix(black_box(&digits), 2, len, flavor).unwrap())
            });
        }
    }
    g.finish();
}

fn balance(c: &mut Criterion) {
    let w = limit_prefix(&arith(2, 40), 2, 100_000, Flavor::Dual).unwrap();
    let mut g = c.benchmark_group("balance_profile");
    g.sample_size(10);
    for l_max in [256usize, 2048] {
        g.bench_with_input(BenchmarkId::from_parameter(l_max), &l_max, |b, &l| {
            b.iter(|| balance_profile(black_box(&w), l).unwrap())
        });
    }
    g.finish();
}

fn suffix_array(c: &mut Criterion) {
    let mut g = c.benchmark_group("factor_index");
    g.sample_size(10);
    for len in [1usize << 16, 1 << 20] {
        let w = limit_prefix(&arith(3, 40), 3, len, Flavor::Primal).unwrap();
        g.throughput(Throughput::Elements(len as u64));
        g.bench_with_input(BenchmarkId::new("build+count", len), &w, |b, w| {
            b.iter(|| FactorIndex::new(black_box(w.as_slice())).factor_counts(200))
        });
    }
    g.finish();
}

fn surd_steps(c: &mut Criterion) {
    let x = ExactReal::surd(-1, 1, 1, 2).unwrap();
    let y = ExactReal::surd(-1, 1, 3, 7).unwrap();
    c.bench_function("tn_step/sqrt2-1 x1000", |b| {
        b.iter(|| {
            let mut s = x.clone();
            for _ in 0..1000 {
                s = tn_step(black_box(&s), 2).unwrap().1;
            }
            s
        })
    });
    c.bench_function("tn_step/(sqrt7-1)/3 x100", |b| {
        b.iter(|| {
            let mut s = y.clone();
            for _ in 0..100 {
                s = tn_step(black_box(&s), 3).unwrap().1;
            }
            s
        })
    });
}

criterion_group!(kernels, prefix, balance, suffix_array, surd_steps);
criterion_main!(kernels);
