//! Single-thread pool against the full rayon pool on the same workloads.
//! A `--no-default-features` build runs the plain sequential path instead.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use engel_core::catalog::{build, Recipe};
use engel_core::checks::CheckId;
use engel_core::harness::{run, RunConfig};
use engel_core::sinks::{ProfileConfig, SinkProfile};
use rayon::ThreadPool;

fn pools() -> [(&'static str, ThreadPool); 2] {
    let one = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
    let all = rayon::ThreadPoolBuilder::new().build().unwrap();
    [("sequential", one), ("parallel", all)]
}

fn catalog_run(c: &mut Criterion) {
    let cfg = RunConfig {
        max_order: 200,
        lemmas: CheckId::ALL.to_vec(),
        ..RunConfig::default()
    };
    let mut group = c.benchmark_group("verify_max_order_200");
    group.sample_size(10);
    for (name, pool) in pools() {
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| pool.install(|| run(&cfg).unwrap()))
        });
    }
    group.finish();
}

fn sink_profile(c: &mut Criterion) {
    let s6 = build("S6", &Recipe::Symmetric { n: 6 }).unwrap();
    let mut group = c.benchmark_group("sink_profile_s6");
    group.sample_size(10);
    for (name, pool) in pools() {
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| pool.install(|| SinkProfile::compute(&s6.group, ProfileConfig::default()).unwrap()))
        });
    }
    group.finish();
}

criterion_group!(benches, catalog_run, sink_profile);
criterion_main!(benches);
