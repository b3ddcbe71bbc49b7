use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};

use radarsim_bench::{medium_graph, small_experiment};
use radarsim_core::ingest::{parse_series, serialize_series_to_string, TreeSeries};
use radarsim_core::measurement::{radar_run, tracetree_round};
use radarsim_core::metrics::compute_metrics;
use radarsim_core::rng;
use radarsim_core::routing::{compute_routing_state, designate_load_balancers};
use radarsim_core::topology::{generate_random_graph, rewire_step};

fn bench_generation(c: &mut Criterion) {
    c.bench_function("generate_graph_n1000_m3000", |b| {
        b.iter(|| generate_random_graph(black_box(1000), black_box(3000), 7).unwrap())
    });
}

fn bench_rewiring(c: &mut Criterion) {
    let g = medium_graph();
    let mut rng = rng::stream(7, rng::DOMAIN_REWIRE, 0);
    c.bench_function("rewire_step_n1000", |b| {
        b.iter(|| rewire_step(black_box(&g), &mut rng, 1).unwrap())
    });
}

fn bench_routing(c: &mut Criterion) {
    let g = medium_graph();
    let destinations: Vec<u32> = (0..50).map(|i| i * 19 + 3).collect();
    c.bench_function("routing_state_50_destinations", |b| {
        b.iter(|| compute_routing_state(black_box(&g), black_box(&destinations)).unwrap())
    });
}

fn bench_round(c: &mut Criterion) {
    let g = medium_graph();
    let destinations: Vec<u32> = (0..50).map(|i| i * 19 + 3).collect();
    let state = compute_routing_state(&g, &destinations).unwrap();
    let lbs = designate_load_balancers(g.node_count(), 0.25, 7).unwrap();
    c.bench_function("tracetree_round_50_destinations", |b| {
        let mut round = 0;
        b.iter(|| {
            round += 1;
            tracetree_round(&g, &state, &lbs, 999, &destinations, 7, round).unwrap()
        })
    });
}

fn bench_pipeline(c: &mut Criterion) {
    let cfg = small_experiment();
    let mut group = c.benchmark_group("pipeline");
    group.sample_size(20);
    group.bench_function("radar_run_20_rounds", |b| {
        b.iter(|| radar_run(black_box(&cfg)).unwrap())
    });

    let series = radar_run(&cfg).unwrap();
    group.bench_function("compute_metrics_20_rounds", |b| {
        b.iter(|| compute_metrics(black_box(&series.views)).unwrap())
    });

    let text = serialize_series_to_string(&TreeSeries::from_simulation(&series));
    group.bench_function("parse_series_20_rounds", |b| {
        b.iter(|| parse_series(black_box(text.as_bytes())).unwrap())
    });
    group.finish();
}

criterion_group!(
    benches,
    bench_generation,
    bench_rewiring,
    bench_routing,
    bench_round,
    bench_pipeline
);
criterion_main!(benches);
