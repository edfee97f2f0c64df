use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};

use entkit::{
    er_numeric, hermitian_eig, lambda_max_numeric, make_determinant, make_dicke,
    make_dicke_mixture, make_sigma_theta, partial_trace, phase_twirl, relative_entropy,
    two_component, ErConfig, GmeConfig, Restriction,
};
use entkit_bench::random_hermitian;

fn bench_hermitian_eig(c: &mut Criterion) {
    let m16 = random_hermitian(16, 1);
    let m64 = random_hermitian(64, 2);
    c.bench_function("hermitian_eig 16x16", |b| {
        b.iter(|| hermitian_eig(black_box(&m16)).unwrap())
    });
    c.bench_function("hermitian_eig 64x64", |b| {
        b.iter(|| hermitian_eig(black_box(&m64)).unwrap())
    });
}

fn bench_gme(c: &mut Criterion) {
    let s52 = make_dicke(5, 2).unwrap();
    let det3 = make_determinant(3).unwrap();
    let cfg = GmeConfig {
        starts: 8,
        seed: 7,
        ..GmeConfig::default()
    };
    c.bench_function("lambda_max_numeric S(5,2) 8 starts", |b| {
        b.iter(|| lambda_max_numeric(black_box(&s52), &cfg).unwrap())
    });
    c.bench_function("lambda_max_numeric Det3 8 starts", |b| {
        b.iter(|| lambda_max_numeric(black_box(&det3), &cfg).unwrap())
    });
}

fn bench_quantum_ops(c: &mut Criterion) {
    let rho6 = make_dicke(6, 3).unwrap().density().unwrap();
    c.bench_function("partial_trace 6->3 qubits", |b| {
        b.iter(|| partial_trace(black_box(&rho6), &[0, 2, 4]).unwrap())
    });
    c.bench_function("phase_twirl 6 qubits", |b| {
        b.iter(|| phase_twirl(black_box(&rho6)).unwrap())
    });
    let sigma = make_sigma_theta(6, 0.9);
    c.bench_function("relative_entropy 64x64", |b| {
        b.iter(|| relative_entropy(black_box(&rho6), black_box(&sigma)).unwrap())
    });
}

fn bench_er(c: &mut Criterion) {
    let rho = make_dicke_mixture(&two_component(3, 0, 1, 0.3).unwrap());
    let restricted = ErConfig {
        ensemble_size: 8,
        starts: 4,
        max_iters: 400,
        tol: 1e-9,
        seed: 11,
        restrict: Restriction::DickeDiagonal,
    };
    c.bench_function("er_numeric restricted rho_{3;0,1}(0.3)", |b| {
        b.iter(|| er_numeric(black_box(&rho), &restricted).unwrap())
    });
    let unrestricted = ErConfig {
        ensemble_size: 24,
        starts: 2,
        max_iters: 150,
        tol: 1e-8,
        seed: 11,
        restrict: Restriction::None,
    };
    c.bench_function("er_numeric ensemble rho_{3;0,1}(0.3)", |b| {
        b.iter(|| er_numeric(black_box(&rho), &unrestricted).unwrap())
    });
}

criterion_group! {
    name = benches;
    config = Criterion::default().sample_size(10);
    targets = bench_hermitian_eig, bench_gme, bench_quantum_ops, bench_er
}
criterion_main!(benches);
