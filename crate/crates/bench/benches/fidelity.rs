use std::f64::consts::{FRAC_PI_2, PI};

use blochmap::{
    build_map, extract_functional, maximize, Family, MeasScheme, MeasurementEvaluator, QuadratureSpec,
};
use criterion::{criterion_group, criterion_main, Criterion};

fn bench_measurement(c: &mut Criterion) {
    let q = QuadratureSpec::default();
    let map = build_map(Family::Rotation, Some(FRAC_PI_2), Some(PI / 3.0), None).unwrap();
    let ev = MeasurementEvaluator::new(MeasScheme::Rho1, &q, PI / 3.0);
    c.bench_function("measurement_fidelity_rho1", |b| {
        b.iter(|| std::hint::black_box(ev.fidelity(&map)))
    });
    c.bench_function("measurement_evaluator_new_rho3", |b| {
        b.iter(|| std::hint::black_box(MeasurementEvaluator::new(MeasScheme::Rho3, &q, PI / 3.0)))
    });
}

fn bench_quantum(c: &mut Criterion) {
    let q = QuadratureSpec::default();
    let map = build_map(Family::Orthog, Some(0.8), None, None).unwrap();
    c.bench_function("extract_and_maximize_orthog", |b| {
        b.iter(|| {
            let f = extract_functional(&map, &q).unwrap();
            std::hint::black_box(maximize(&f))
        })
    });
}

criterion_group!(benches, bench_measurement, bench_quantum);
criterion_main!(benches);
