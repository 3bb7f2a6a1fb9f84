//! Parallel versus sequential timings. `par::sequential` pins the work to a
//! one-thread pool; building with `--no-default-features` removes rayon
//! entirely and both variants then run the same sequential code.

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use maxqp::par;
use maxqp::schemes::PartitionInput;
use maxqp::{brute_force, generate, solve_baker, solve_bounded_degree, solve_partition_scheme, GeneratorSpec, WeightedGraph};

fn instance(spec: &str) -> WeightedGraph {
    generate(&spec.parse::<GeneratorSpec>().unwrap()).unwrap()
}

fn compare(c: &mut Criterion, group: &str, label: &str, run: impl Fn() + Sync + Send) {
    let mut g = c.benchmark_group(group);
    g.sample_size(10);
    g.bench_function(BenchmarkId::new("parallel", label), |b| b.iter(&run));
    g.bench_function(BenchmarkId::new("sequential", label), |b| b.iter(|| par::sequential(&run)));
    g.finish();
}

fn brute(c: &mut Criterion) {
    let g = instance("kind=sparse-random n=22 m=50 weights=real seed=1");
    compare(c, "brute_force", "n=22", || {
        black_box(brute_force(&g, 28).unwrap());
    });
}

fn greedy(c: &mut Criterion) {
    let g = instance("kind=sparse-random n=200000 m=400000 weights=real seed=2");
    compare(c, "greedy_matching", "n=2e5", || {
        black_box(solve_bounded_degree(&g).unwrap());
    });
}

fn baker(c: &mut Criterion) {
    let g = instance("kind=grid-spin-glass rows=8 cols=40 seed=3");
    compare(c, "baker", "grid 8x40 eps=0.5", || {
        black_box(solve_baker(&g, 0.5, 20).unwrap());
    });
}

fn partition(c: &mut Criterion) {
    let g = instance("kind=planar-triangulation n=60 seed=4");
    compare(c, "partition_scheme", "triangulation n=60 eps=1", || {
        black_box(solve_partition_scheme(&g, 1.0, PartitionInput::Heuristic, 20).unwrap());
    });
}

criterion_group!(benches, brute, greedy, baker, partition);
criterion_main!(benches);
