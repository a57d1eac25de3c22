//! Parallel vs sequential throughput on the two data-parallel workloads:
//! the per-prime congruence sweep and registry series verification.
//!
//! With the default `parallel` feature the first variant runs on the rayon
//! pool; building with `--no-default-features` makes both variants run the
//! same sequential path, which is the apples-to-apples fallback measurement.

use criterion::{criterion_group, criterion_main, BatchSize, Criterion};
use pi_series_core::congruence::{builtin_claims, sweep, sweep_sequential, Claim, ClaimKind};
use pi_series_core::primes::primes_in;
use pi_series_core::series::{builtin_registry, verify_entries, verify_entries_sequential, SeriesEntry};

fn sweep_claims() -> Vec<Claim> {
    builtin_claims()
        .into_iter()
        .filter(|c| matches!(c.kind, ClaimKind::Congruence { .. } | ClaimKind::QuadForm { .. }))
        .collect()
}

fn theorem_entries() -> Vec<SeriesEntry> {
    let registry = builtin_registry();
    ["W2", "W3", "W6", "W8", "W12", "W15", "F4X36", "F4N64", "F4X196", "F4N324", "F4X1296", "F4X5776"]
        .iter()
        .map(|id| pi_series_core::series::find_entry(&registry, id).unwrap().clone())
        .collect()
}

fn bench_congruence_sweep(c: &mut Criterion) {
    let claims = sweep_claims();
    let primes = primes_in(3, 120, &[]);
    let mut group = c.benchmark_group("congruence-sweep-p120");
    group.sample_size(10);
    group.bench_function("parallel", |b| {
        b.iter_batched(|| (), |_| sweep(&claims, &primes), BatchSize::LargeInput)
    });
    group.bench_function("sequential", |b| {
        b.iter_batched(|| (), |_| sweep_sequential(&claims, &primes), BatchSize::LargeInput)
    });
    group.finish();
}

fn bench_series_verification(c: &mut Criterion) {
    let entries = theorem_entries();
    let mut group = c.benchmark_group("verify-proven-series-30-digits");
    group.sample_size(10);
    group.bench_function("parallel", |b| {
        b.iter_batched(|| (), |_| verify_entries(&entries, 30), BatchSize::LargeInput)
    });
    group.bench_function("sequential", |b| {
        b.iter_batched(|| (), |_| verify_entries_sequential(&entries, 30), BatchSize::LargeInput)
    });
    group.finish();
}

criterion_group!(benches, bench_congruence_sweep, bench_series_verification);
criterion_main!(benches);
