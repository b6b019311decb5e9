use criterion::{black_box, criterion_group, criterion_main, Criterion};

use polylam::attainable::full_boundary;
use polylam::laminate::{build_sequence, make_schedule};
use polylam::linalg::{conjugate, eigvals_sym3, CrystalSpectrum, SymMat3};
use polylam::t2::{sample_t2_curve, solve_double_connection, Branch};

fn std_s() -> CrystalSpectrum {
    CrystalSpectrum::new(0.2, 0.3, 0.5).unwrap()
}

fn bench_eigvals(c: &mut Criterion) {
    let m = SymMat3::new(0.3, 0.4, 0.3, 0.05, -0.02, 0.01);
    c.bench_function("eigvals_sym3", |b| b.iter(|| eigvals_sym3(black_box(&m)).unwrap()));
}

fn bench_curve(c: &mut Criterion) {
    let s = std_s();
    c.bench_function("sample_t2_curve_alpha_64", |b| {
        b.iter(|| sample_t2_curve(black_box(&s), Branch::Alpha, 64).unwrap())
    });
}

fn bench_sequence(c: &mut Criterion) {
    let s = std_s();
    let curve = sample_t2_curve(&s, Branch::Alpha, 33).unwrap();
    let conn = solve_double_connection(&curve[16], &s, 1e-9).unwrap();
    let s0 = s.diag().scale(conn.point.lambda1);
    let t0 = conjugate(&conn.r1, &SymMat3::from_diag(conn.point.t));
    let a = SymMat3::lerp(&s0, &t0, 0.5);
    let sched = make_schedule(&conn, &a, &s).unwrap();
    c.bench_function("build_sequence_k20", |b| {
        b.iter(|| build_sequence(black_box(&sched), 20).unwrap())
    });
}

fn bench_boundary(c: &mut Criterion) {
    let s = std_s();
    c.bench_function("full_boundary_64", |b| {
        b.iter(|| full_boundary(black_box(&s), 64).unwrap())
    });
}

criterion_group!(kernels, bench_eigvals, bench_curve, bench_sequence, bench_boundary);
criterion_main!(kernels);
