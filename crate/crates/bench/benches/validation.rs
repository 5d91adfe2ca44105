use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use snapmesh::validation::{compute_metrics, partition_regions, NavGraph};
use snapmesh::{bundled, generate, validate_map, GenRng, MethodConfig, NavConfig};
use snapmesh_bench::bundled_config;

fn validation(c: &mut Criterion) {
    let lib = bundled::library();
    let map = generate(&bundled_config(MethodConfig::arena(12), 33), &lib).unwrap();
    let mut group = c.benchmark_group("validate");
    group.sample_size(20);
    for n_points in [400, 4000] {
        let nav = NavConfig {
            n_points,
            ..NavConfig::default()
        };
        group.bench_with_input(BenchmarkId::from_parameter(n_points), &nav, |b, nav| {
            b.iter(|| validate_map(&map, &lib, nav).unwrap())
        });
    }
    group.finish();
}

fn regions(c: &mut Criterion) {
    let mut rng = GenRng::from_seed(5);
    let n = 2000;
    let edges: Vec<(usize, usize)> = (0..3 * n).map(|_| (rng.index(n), rng.index(n))).collect();
    let graph = NavGraph::from_edges(n, edges);
    c.bench_function("partition_regions/2000", |b| {
        b.iter(|| compute_metrics(&partition_regions(&graph).sizes, n).unwrap())
    });
}

criterion_group!(benches, validation, regions);
criterion_main!(benches);
