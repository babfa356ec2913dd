//! Verification suite on one worker versus the default pool.
//! Without the `parallel` feature both arms run sequentially.

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use mgf_core::parallel::with_jobs;
use mgf_core::space::{corpus, CorpusSpec, GeneratorKind};
use mgf_core::verify::{run_suite_on, CapsTable, SuiteConfig};

fn suite(c: &mut Criterion) {
    let spec = CorpusSpec { kind: GeneratorKind::RandomTree, depth: 4, max_branching: 3, skew: 0.5, count: 32, seed: 7, ..Default::default() };
    let instances = corpus(&spec).unwrap();
    let config = SuiteConfig::default();
    let caps = CapsTable::default();
    let mut group = c.benchmark_group("suite");
    group.sample_size(10);
    for (label, jobs) in [("sequential", 1), ("parallel", 0)] {
        group.bench_with_input(BenchmarkId::new(label, spec.count), &jobs, |b, &jobs| {
            b.iter(|| with_jobs(jobs, || run_suite_on(black_box(&instances), &config, &caps).unwrap()))
        });
    }
    group.finish();
}

criterion_group!(benches, suite);
criterion_main!(benches);
