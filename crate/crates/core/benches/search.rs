use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use selfdual_core::axioms::check_axioms;
use selfdual_core::search::{find_bad_coloring, SearchConfig};
use selfdual_core::{Mode, Parallelism};

const PATHS: [(&str, Parallelism); 2] = [("sequential", Parallelism::Sequential), ("parallel", Parallelism::Parallel)];

fn bad_colorings(c: &mut Criterion) {
    let mut group = c.benchmark_group("find_bad_coloring");
    group.sample_size(10);
    let cases = [
        ("inj_K2_M3_N5", 5, 2, 3, Mode::InjectionsOnly),
        ("inj_K2_M3_N6", 6, 2, 3, Mode::InjectionsOnly),
        ("surj_K2_M3_N6", 6, 2, 3, Mode::SurjectionsOnly),
        ("conn_K1_M3_N5", 5, 1, 3, Mode::Connections),
    ];
    for (label, n, k, m, mode) in cases {
        for (path, parallelism) in PATHS {
            let cfg = SearchConfig { parallelism, ..Default::default() };
            group.bench_with_input(BenchmarkId::new(label, path), &cfg, |b, cfg| {
                b.iter(|| find_bad_coloring(n, k, m, 2, mode, cfg).expect("within budget"))
            });
        }
    }
    group.finish();
}

fn axiom_check(c: &mut Criterion) {
    let mut group = c.benchmark_group("check_axioms");
    group.sample_size(10);
    for (label, len, alphabet) in [("L4_A1", 4, 1), ("L5_A1", 5, 1)] {
        for (path, parallelism) in PATHS {
            group.bench_function(BenchmarkId::new(label, path), |b| {
                b.iter(|| check_axioms(len, alphabet, parallelism).expect("within guard"))
            });
        }
    }
    group.finish();
}

criterion_group!(benches, bad_colorings, axiom_check);
criterion_main!(benches);
