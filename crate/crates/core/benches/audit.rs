//! Benchmarks for the full audit and the heavier kernels.
//!
//! With the default `parallel` feature the audit is measured on the global
//! rayon pool and on a single-thread pool as the sequential baseline. Build
//! with `--no-default-features` to measure the true sequential code path
//! (no rayon in the binary at all).

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use mfarm_core::model::AuditConfig;
use mfarm_core::stats::{friedman_test, ks_two_sample, wilcoxon_signed_rank};
use mfarm_core::{generate_panel, run_audit, GroupSpec, SynthSpec};

fn production_spec(n_cases: usize) -> SynthSpec {
    SynthSpec {
        n_cases,
        base_group: "BASE".into(),
        groups: (0..12)
            .map(|i| GroupSpec {
                name: format!("G{i}"),
                mean_shift: 0.04 * ((i % 3) as f64 - 1.0),
                noise_scale: 0.05,
                variance_multiplier: if i % 4 == 0 { 4.0 } else { 1.0 },
                coupling: if i % 5 == 0 { 0.6 } else { 0.0 },
            })
            .collect(),
        label_balance: 0.5,
        seed: 99,
    }
}

fn bench_full_audit(c: &mut Criterion) {
    let config = AuditConfig::default();
    let mut group = c.benchmark_group("full_audit");
    for n in [200usize, 1020] {
        let panel = generate_panel(&production_spec(n)).unwrap().panel;

        #[cfg(feature = "parallel")]
        {
            group.bench_with_input(BenchmarkId::new("parallel", n), &panel, |b, panel| {
                b.iter(|| run_audit(black_box(panel), &config).unwrap())
            });
            let single = rayon::ThreadPoolBuilder::new()
                .num_threads(1)
                .build()
                .unwrap();
            group.bench_with_input(BenchmarkId::new("single_thread", n), &panel, |b, panel| {
                b.iter(|| single.install(|| run_audit(black_box(panel), &config).unwrap()))
            });
        }

        #[cfg(not(feature = "parallel"))]
        group.bench_with_input(BenchmarkId::new("sequential", n), &panel, |b, panel| {
            b.iter(|| run_audit(black_box(panel), &config).unwrap())
        });
    }
    group.finish();
}

fn bench_kernels(c: &mut Criterion) {
    let config = AuditConfig::default();
    let panel = generate_panel(&production_spec(1020)).unwrap().panel;
    let base = panel.base_column().to_vec();
    let shifted = panel.column(1).to_vec();
    let columns: Vec<&[f64]> = (0..panel.n_groups()).map(|g| panel.column(g)).collect();

    c.bench_function("wilcoxon_signed_rank_1020", |b| {
        b.iter(|| wilcoxon_signed_rank(black_box(&shifted), black_box(&base), &config).unwrap())
    });
    c.bench_function("ks_two_sample_1020", |b| {
        b.iter(|| ks_two_sample(black_box(&shifted), black_box(&base)).unwrap())
    });
    c.bench_function("friedman_13x1020", |b| {
        b.iter(|| friedman_test(black_box(&columns)).unwrap())
    });
}

criterion_group!(benches, bench_full_audit, bench_kernels);
criterion_main!(benches);
