// Copyright 2026 The hdbsm Authors
// SPDX-License-Identifier: Apache-2.0

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use hdbsm::{
    build_fig2_network, classify_setup, evolve, make_hyper_state, outcome_distribution, run_sdc,
    sample, BellIndex, DetectorModel, Policy, SdcConfig, Setup,
};

fn bench_evolve(c: &mut Criterion) {
    let network = build_fig2_network();
    let state = make_hyper_state(BellIndex::new(2, 1, 0)).unwrap();
    c.bench_function("evolve/fig2", |b| {
        b.iter(|| evolve(black_box(&state), &network).unwrap())
    });
}

fn bench_classify(c: &mut Criterion) {
    let mut group = c.benchmark_group("classify");
    for setup in [Setup::Fig1, Setup::Fig2] {
        group.bench_function(setup.to_string(), |b| {
            b.iter(|| {
                classify_setup(black_box(setup), 4, DetectorModel::Pnrd, Policy::Strict).unwrap()
            })
        });
    }
    group.finish();
}

fn bench_sample(c: &mut Criterion) {
    let state = evolve(
        &make_hyper_state(BellIndex::new(0, 0, 0)).unwrap(),
        &build_fig2_network(),
    )
    .unwrap();
    let dist = outcome_distribution(&state, DetectorModel::Pnrd).unwrap();
    c.bench_function("sample/10k", |b| {
        b.iter(|| sample(black_box(&dist), 10_000, 7))
    });
}

fn bench_sdc(c: &mut Criterion) {
    let config = SdcConfig {
        setup: Setup::Fig2,
        shots: 1000,
        ..SdcConfig::default()
    };
    let messages = BellIndex::all(4);
    c.bench_function("sdc/fig2/16x1000", |b| {
        b.iter(|| run_sdc(black_box(&config), &messages).unwrap())
    });
}

criterion_group!(
    benches,
    bench_evolve,
    bench_classify,
    bench_sample,
    bench_sdc
);
criterion_main!(benches);
