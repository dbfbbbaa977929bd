use criterion::{criterion_group, criterion_main, Criterion};
use ecs_core::bell::{bm_parity, bm_threshold, bm_threshold_generic, BellSettings};
use ecs_core::circuits::{ghz_reference, run_w_circuit, WCircuitSpec};
use ecs_core::elements::{apply_beam_splitter, BeamSplitterSpec};
use ecs_core::fockoracle::{operator_matrix, OperatorKind};
use ecs_core::measure::GhzSign;
use ecs_core::optimize::{maximize, OptimizerConfig};
use num_complex::Complex64 as C64;
use std::hint::black_box;

fn settings() -> BellSettings {
    BellSettings::from_params(&[0.1, -0.37, 0.0, -0.37, -0.29, -0.29, 0.17, 0.17, 0.0, 0.0, 0.0, 0.0]).unwrap()
}

fn state_algebra(c: &mut Criterion) {
    let one = C64::new(1.0, 0.0);
    let ghz = ghz_reference(C64::new(0.8, 0.2), one, -one, 3).unwrap();
    c.bench_function("ghz_overlap", |b| b.iter(|| black_box(&ghz).overlap(black_box(&ghz)).unwrap()));
    let spec = BeamSplitterSpec::new(1.1, 0.3, 0, 1).unwrap();
    c.bench_function("beam_splitter_ghz", |b| b.iter(|| apply_beam_splitter(black_box(&ghz), &spec).unwrap()));
    let w = WCircuitSpec {
        gamma: C64::new(3.0, 0.0),
        theta: 0.6,
        apply_final_displacement: true,
    };
    c.bench_function("w_circuit", |b| b.iter(|| run_w_circuit(black_box(&w)).unwrap()));
}

fn correlators(c: &mut Criterion) {
    let one = C64::new(1.0, 0.0);
    let alpha = C64::new(0.5, 0.0);
    let s = settings();
    c.bench_function("bm_parity_closed", |b| b.iter(|| bm_parity(black_box(alpha), GhzSign::Minus, &s)));
    c.bench_function("bm_threshold_closed", |b| b.iter(|| bm_threshold(black_box(alpha), one, -one, &s).unwrap()));
    let ghz = ghz_reference(alpha, one, -one, 3).unwrap();
    c.bench_function("bm_threshold_generic", |b| b.iter(|| bm_threshold_generic(black_box(&ghz), &s).unwrap()));
}

fn search(c: &mut Criterion) {
    let one = C64::new(1.0, 0.0);
    let alpha = C64::new(0.18, 0.0);
    let obj = move |s: &BellSettings| bm_threshold(alpha, one, -one, s).unwrap_or(f64::NAN);
    let config = OptimizerConfig {
        restarts: 4,
        ..OptimizerConfig::for_alpha(0.18)
    };
    let mut group = c.benchmark_group("optimizer");
    group.sample_size(10);
    group.bench_function("threshold_4_restarts", |b| b.iter(|| maximize(&obj, &config).unwrap()));
    group.finish();
}

fn oracle(c: &mut Criterion) {
    let mut group = c.benchmark_group("oracle");
    group.sample_size(10);
    group.bench_function("displacement_matrix_30", |b| {
        b.iter(|| operator_matrix(OperatorKind::Displacement(C64::new(1.0, 0.5)), &[30]).unwrap())
    });
    group.bench_function("beam_splitter_matrix_20x20", |b| {
        b.iter(|| operator_matrix(OperatorKind::BeamSplitter { theta: 1.2, phi: 3.0 }, &[20, 20]).unwrap())
    });
    group.finish();
}

criterion_group!(benches, state_algebra, correlators, search, oracle);
criterion_main!(benches);
