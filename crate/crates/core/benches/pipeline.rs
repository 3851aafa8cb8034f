use criterion::{criterion_group, criterion_main, Criterion};

use fondgr::bench::{self, BenchConfig};
use fondgr::data;
use fondgr::par::Parallelism;
use fondgr::recognizer::{load_bundle, recognize, RecognizerOptions};

const MODES: [(&str, Parallelism); 2] = [
    ("parallel", Parallelism::Parallel),
    ("sequential", Parallelism::Sequential),
];

fn recognition(c: &mut Criterion) {
    let rp = load_bundle(&data::grid_bundle_dir()).unwrap();
    let mut group = c.benchmark_group("recognize_grid");
    for (name, mode) in MODES {
        let opts = RecognizerOptions {
            parallelism: mode,
            ..Default::default()
        };
        group.bench_function(name, |b| b.iter(|| recognize(&rp, &opts).unwrap()));
    }
    group.finish();
}

fn benchmark_run(c: &mut Criterion) {
    let mut cfg = BenchConfig::standard(0);
    for ds in &mut cfg.datasets {
        ds.problems = 4;
    }
    let mut group = c.benchmark_group("bench_small");
    group.sample_size(10);
    for (name, mode) in MODES {
        let cfg = BenchConfig {
            parallelism: mode,
            ..cfg.clone()
        };
        group.bench_function(name, |b| b.iter(|| bench::run(&cfg).unwrap()));
    }
    group.finish();
}

criterion_group!(benches, recognition, benchmark_run);
criterion_main!(benches);
