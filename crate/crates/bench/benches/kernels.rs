use std::hint::black_box;

use beauville_core::exact::{QMatrix, Rat, RatFunc};
use beauville_core::ncfam::{random_matrix, LegFamily};
use beauville_core::poisson::{classical_hamiltonians, random_plane_polynomial};
use beauville_core::quantize::{HElem, LocalSeries};
use beauville_core::rng::trial_rng;
use beauville_core::weyl::{do_commutator, rational_hamiltonians, OpFamilySpec, RatDiffOp};
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

fn invertible(dim: usize) -> QMatrix<Rat> {
    let mut rng = trial_rng(1, dim as u64);
    loop {
        let m = random_matrix(&mut rng, dim, 5);
        if m.inverse().is_ok() {
            return m;
        }
    }
}

fn matrix_kernels(c: &mut Criterion) {
    let mut g = c.benchmark_group("matrix");
    for dim in [8, 16, 27] {
        let a = invertible(dim);
        let b = a.inverse().unwrap();
        g.bench_with_input(BenchmarkId::new("inverse", dim), &a, |bn, a| {
            bn.iter(|| black_box(a.inverse().unwrap()))
        });
        g.bench_with_input(BenchmarkId::new("inverse_generic", dim), &a, |bn, a| {
            bn.iter(|| black_box(a.inverse_generic().unwrap()))
        });
        g.bench_with_input(BenchmarkId::new("mul", dim), &(&a, &b), |bn, (a, b)| {
            bn.iter(|| black_box(a.mul(b)))
        });
        g.bench_with_input(
            BenchmarkId::new("mul_generic", dim),
            &(&a, &b),
            |bn, (a, b)| bn.iter(|| black_box(a.mul_generic(b))),
        );
    }
    g.finish();
}

fn matrix_family(c: &mut Criterion) {
    let mut g = c.benchmark_group("leg_family");
    g.sample_size(10);
    for (n, d) in [(2, 2), (3, 2), (2, 3)] {
        let mut rng = trial_rng(2, 0);
        let fam = loop {
            let f = LegFamily::random(&mut rng, n, d, 5).unwrap();
            if f.hamiltonians().is_ok() {
                break f;
            }
        };
        g.bench_function(
            BenchmarkId::new("hamiltonians", format!("n{n}d{d}")),
            |bn| bn.iter(|| black_box(fam.hamiltonians().unwrap())),
        );
    }
    g.finish();
}

fn poisson(c: &mut Criterion) {
    let mut rng = trial_rng(3, 0);
    let fs: Vec<RatFunc> = (0..3)
        .map(|_| random_plane_polynomial(&mut rng, 2, 5))
        .collect();
    let hs = classical_hamiltonians(&fs).unwrap();
    c.bench_function("poisson/hamiltonians_n2", |bn| {
        bn.iter(|| black_box(classical_hamiltonians(&fs).unwrap()))
    });
    c.bench_function("poisson/bracket_n2", |bn| {
        bn.iter(|| black_box(hs[0].bracket(&hs[1])))
    });
}

fn weyl(c: &mut Criterion) {
    let mut g = c.benchmark_group("weyl");
    g.sample_size(10);
    for t in ["d1", "d2", "z*d1 + 3/2"] {
        let op = RatDiffOp::parse_one_var(t).unwrap();
        let spec = OpFamilySpec::new(vec![Rat::from_int(0), Rat::from_int(1)], op).unwrap();
        let hs = rational_hamiltonians(&spec);
        g.bench_function(BenchmarkId::new("hamiltonians_n2", t), |bn| {
            bn.iter(|| black_box(rational_hamiltonians(&spec)))
        });
        g.bench_function(BenchmarkId::new("commutator_n2", t), |bn| {
            bn.iter(|| black_box(do_commutator(&hs[0], &hs[1])))
        });
    }
    g.finish();
}

fn hbar(c: &mut Criterion) {
    let mut rng = trial_rng(4, 0);
    for m in [3, 5] {
        let f = HElem::function(m, RatFunc::var(1, 0).add(&RatFunc::one(1)));
        let a = LocalSeries::monomial(&f, HElem::random(&mut rng, m, 2, 3), 2).unwrap();
        let b = LocalSeries::monomial(&f, HElem::random(&mut rng, m, 2, 3), 1).unwrap();
        c.bench_function(&format!("hbar/series_mul_M{m}"), |bn| {
            bn.iter(|| black_box(a.mul(&b).unwrap()))
        });
    }
}

criterion_group!(benches, matrix_kernels, matrix_family, poisson, weyl, hbar);
criterion_main!(benches);
