use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use localcut::connectivity::{fallback_exact, vertex_connectivity_undirected, ConnectivityConfig};
use localcut::mkecs::{baseline_mkecs, mkecs_directed};
use localcut_bench::{random_strongly_connected, separator};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn vertex_connectivity(c: &mut Criterion) {
    let mut group = c.benchmark_group("vertex_connectivity");
    group.sample_size(10);
    for side in [10, 20] {
        let inst = separator(side, 3, 2);
        let u = inst.undirected.clone().expect("undirected family");
        group.bench_with_input(BenchmarkId::new("sampled", side), &u, |b, u| {
            let mut rng = ChaCha8Rng::seed_from_u64(3);
            b.iter(|| vertex_connectivity_undirected(u, ConnectivityConfig::default(), &mut rng));
        });
        group.bench_with_input(BenchmarkId::new("exact", side), &inst.graph, |b, g| b.iter(|| fallback_exact(g)));
    }
    group.finish();
}

fn mkecs(c: &mut Criterion) {
    let mut group = c.benchmark_group("mkecs");
    group.sample_size(10);
    for n in [50, 200] {
        let g = random_strongly_connected(n, 4 * n, 5);
        group.bench_with_input(BenchmarkId::new("local", n), &g, |b, g| {
            let mut rng = ChaCha8Rng::seed_from_u64(3);
            b.iter(|| mkecs_directed(g, 3, None, &mut rng).unwrap());
        });
        group.bench_with_input(BenchmarkId::new("baseline", n), &g, |b, g| b.iter(|| baseline_mkecs(g, 3)));
    }
    group.finish();
}

criterion_group!(benches, vertex_connectivity, mkecs);
criterion_main!(benches);
