use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use lowrank_core::families::gen_antidiag;
use lowrank_core::krylov::{cg_solve, chebyshev_spectrum};
use lowrank_core::linalg::svd_values;
use lowrank_core::operator::{Base, LowRankUpdate, PerturbedOperator};
use lowrank_core::Seed;

fn matvec(c: &mut Criterion) {
    let mut group = c.benchmark_group("matvec");
    for n in [256usize, 1024, 4096] {
        let mut rng = Seed::new(1, 0).rng();
        let (u, v, x) = (rng.gaussian_vec(n), rng.gaussian_vec(n), rng.gaussian_vec(n));
        let op = PerturbedOperator::new(
            Base::Csr(gen_antidiag(n).unwrap()),
            Some(LowRankUpdate::rank_one(&u, &v).unwrap()),
        )
        .unwrap();
        let dense = op.to_dense().unwrap();
        let mut y = vec![0.0; n];
        group.bench_with_input(BenchmarkId::new("csr_rank1", n), &n, |b, _| {
            b.iter(|| op.apply_into(black_box(&x), &mut y).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("dense", n), &n, |b, _| {
            b.iter(|| dense.matvec_into(black_box(&x), &mut y).unwrap())
        });
    }
    group.finish();
}

fn svd(c: &mut Criterion) {
    let mut group = c.benchmark_group("jacobi_svd");
    for n in [16usize, 50, 100] {
        let m = Seed::new(2, 0).rng().gaussian_matrix(n, n);
        group.bench_with_input(BenchmarkId::from_parameter(n), &m, |b, m| {
            b.iter(|| svd_values(black_box(m)).unwrap())
        });
    }
    group.finish();
}

fn cg(c: &mut Criterion) {
    let mut group = c.benchmark_group("cg_chebyshev_n1000");
    let b_vec = vec![1.0; 1000];
    for kappa in [1e2, 1e4] {
        let op = PerturbedOperator::unperturbed(Base::Diagonal(chebyshev_spectrum(1000, kappa))).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(kappa), &op, |b, op| {
            b.iter(|| cg_solve(op, black_box(&b_vec), 1e-8, 10_000).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, matvec, svd, cg);
criterion_main!(benches);
