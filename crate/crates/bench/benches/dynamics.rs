use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use rbnlab_core::transition::{build_transition_diagram, prestige_centrality};
use rbnlab_core::turing::build_frequency_distribution;
use rbnlab_core::{derive_stream, BooleanNetwork, NetworkState, RbnParams};

fn dynamics(c: &mut Criterion) {
    let mut rng = derive_stream(3, 0);
    let big = BooleanNetwork::random(RbnParams::new(500, 5, 0.3), &mut rng).unwrap();
    let initial = NetworkState::random(500, &mut rng);
    let small = BooleanNetwork::random(RbnParams::new(10, 5, 0.5), &mut rng).unwrap();
    let diagram = build_transition_diagram(&small, 20).unwrap();

    c.bench_function("evolve N=500 T=250", |b| b.iter(|| big.evolve(black_box(&initial), 250).unwrap()));
    c.bench_function("transition diagram N=10", |b| {
        b.iter(|| build_transition_diagram(black_box(&small), 20).unwrap())
    });
    c.bench_function("prestige N=10", |b| b.iter(|| prestige_centrality(black_box(&diagram), Default::default())));

    let mut group = c.benchmark_group("enumeration");
    group.sample_size(10);
    group.bench_function("(2,2) cap 500", |b| b.iter(|| build_frequency_distribution(2, 500).unwrap()));
    group.finish();
}

criterion_group!(benches, dynamics);
criterion_main!(benches);
