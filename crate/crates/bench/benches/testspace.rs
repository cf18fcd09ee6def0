use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;
use testspace::corpus;
use testspace::logic::{build_logic, roundtrip_logic, Orthoalgebra};
use testspace::metric::{hausdorff_distance, matching_distance_bottleneck, matching_distance_exhaustive, sample_frames};
use testspace::semiclassical::{auto_basis, extract_semiclassical, DEFAULT_BASIS_RADIUS, DEFAULT_MARGIN};
use testspace::states::{dispersion_free_states, solve_state};

fn logic(c: &mut Criterion) {
    let triangle = corpus::triangle();
    c.bench_function("build_logic/triangle", |b| b.iter(|| build_logic(black_box(&triangle)).unwrap()));
    let b4 = Orthoalgebra::boolean(4);
    c.bench_function("roundtrip/boolean-4", |b| b.iter(|| roundtrip_logic(black_box(&b4)).unwrap()));
}

fn states(c: &mut Criterion) {
    let grid = corpus::stateless_grid();
    c.bench_function("solve_state/stateless-grid", |b| b.iter(|| solve_state(black_box(&grid))));
    let triangle = corpus::triangle();
    c.bench_function("dispersion_free/triangle", |b| {
        b.iter(|| dispersion_free_states(black_box(&triangle)).unwrap())
    });
}

fn metric(c: &mut Criterion) {
    let mut group = c.benchmark_group("orthogonal_pairs");
    group.sample_size(10);
    for count in [1000, 4000] {
        let s = sample_frames(3, count, 1).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(count), &s, |b, s| b.iter(|| s.orthogonal_pairs()));
    }
    group.finish();

    let s = sample_frames(8, 2, 3).unwrap();
    let (a, b) = (s.test_points(0), s.test_points(1));
    c.bench_function("hausdorff/d8", |bench| bench.iter(|| hausdorff_distance(black_box(&a), black_box(&b))));
    c.bench_function("matching/exhaustive/d8", |bench| {
        bench.iter(|| matching_distance_exhaustive(black_box(&a), black_box(&b)))
    });
    c.bench_function("matching/bottleneck/d8", |bench| {
        bench.iter(|| matching_distance_bottleneck(black_box(&a), black_box(&b)))
    });
}

fn extraction(c: &mut Criterion) {
    let s = sample_frames(3, 2000, 7).unwrap();
    let basis = auto_basis(&s, 50, DEFAULT_BASIS_RADIUS).unwrap();
    let mut group = c.benchmark_group("extract");
    group.sample_size(10);
    group.bench_function("auto_basis/50", |b| b.iter(|| auto_basis(&s, 50, DEFAULT_BASIS_RADIUS).unwrap()));
    group.bench_function("greedy/2000-frames", |b| {
        b.iter(|| extract_semiclassical(&s, &basis, 0.35, DEFAULT_MARGIN).unwrap())
    });
    group.finish();
}

criterion_group!(benches, logic, states, metric, extraction);
criterion_main!(benches);
