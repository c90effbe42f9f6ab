use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use pspin_core::analytic::{gse, rate};
use pspin_core::empirical::{
    alternating_max, brute_force_max, sample_tensor, symmetric_max, Budget,
};
use pspin_core::SpinSet;

fn analytic(c: &mut Criterion) {
    let mut group = c.benchmark_group("gse");
    for set in SpinSet::ALL {
        group.bench_with_input(BenchmarkId::new(set.as_str(), "p=2..7"), &set, |b, &set| {
            b.iter(|| {
                (2..=7)
                    .map(|p| gse(set, p).unwrap().xi_multipartite)
                    .sum::<f64>()
            })
        });
    }
    group.finish();

    c.bench_function("rate/ising p=5 x100", |b| {
        b.iter(|| {
            (0..100)
                .map(|k| rate(SpinSet::Ising, 5, 0.9 + 0.005 * k as f64).unwrap().phi)
                .sum::<f64>()
        })
    });
}

fn maximizers(c: &mut Criterion) {
    let budget = Budget::default();
    let mut group = c.benchmark_group("brute_force");
    for (p, n) in [(2u32, 6usize), (2, 10), (3, 5)] {
        let t = sample_tensor(p, n, 1).unwrap();
        let sets = vec![SpinSet::Ising; p as usize];
        group.bench_with_input(BenchmarkId::new(format!("p={p}"), n), &t, |b, t| {
            b.iter(|| brute_force_max(black_box(t), &sets, &budget).unwrap().value)
        });
    }
    group.finish();

    let mut group = c.benchmark_group("alternating");
    for (p, n) in [(2u32, 16usize), (3, 8), (4, 6)] {
        let t = sample_tensor(p, n, 2).unwrap();
        let sets = vec![SpinSet::Spherical; p as usize];
        group.bench_with_input(BenchmarkId::new(format!("p={p}"), n), &t, |b, t| {
            b.iter(|| alternating_max(black_box(t), &sets, 8, 3).unwrap().value)
        });
    }
    group.finish();

    let t = sample_tensor(3, 6, 4).unwrap();
    c.bench_function("symmetric/spherical p=3 n=6", |b| {
        b.iter(|| {
            symmetric_max(black_box(&t), SpinSet::Spherical, 8, 5, &budget)
                .unwrap()
                .value
        })
    });
}

criterion_group!(benches, analytic, maximizers);
criterion_main!(benches);
