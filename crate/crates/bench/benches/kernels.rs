use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use commvar::commodel::{commuting_to_config, config_to_commuting, joint_diagonalize, TupleKind};
use commvar::numkit::Tolerances;
use commvar::rankstrata::{cayley, cayley_inv, subquotient_chart};
use commvar::sample::{gen_random_commuting, random_configuration, random_skew_hermitian, SplitMix64};
use commvar::spectrumops::{multiply, multiply_tuple};
use commvar::symuniverse::UniverseBasis;

fn joint_diagonalization(c: &mut Criterion) {
    let tol = Tolerances::default();
    let mut group = c.benchmark_group("joint_diagonalize");
    for s in [4, 8, 16] {
        let t = gen_random_commuting(1, 3, s, TupleKind::Unitary);
        group.bench_with_input(BenchmarkId::from_parameter(s), &t, |b, t| {
            b.iter(|| joint_diagonalize(black_box(t), &tol).unwrap())
        });
    }
    group.finish();
}

fn cayley_pair(c: &mut Criterion) {
    let tol = Tolerances::default();
    let x = random_skew_hermitian(&mut SplitMix64::new(2), 8);
    let a = cayley(&x, &tol).unwrap();
    c.bench_function("cayley/8", |b| b.iter(|| cayley(black_box(&x), &tol).unwrap()));
    c.bench_function("cayley_inv/8", |b| b.iter(|| cayley_inv(black_box(&a), &tol).unwrap()));
}

fn products(c: &mut Criterion) {
    let tol = Tolerances::default();
    let mut rng = SplitMix64::new(3);
    let u = UniverseBasis::new(2, 1);
    let a = random_configuration(&mut rng, &u, 2);
    let b = random_configuration(&mut rng, &u, 2);
    let (ta, tb) = (config_to_commuting(&a), config_to_commuting(&b));
    c.bench_function("multiply/configurations", |bch| bch.iter(|| multiply(black_box(&a), &b, &tol).unwrap()));
    c.bench_function("multiply/tuples", |bch| bch.iter(|| multiply_tuple(black_box(&ta), &tb, &tol).unwrap()));
}

fn round_trip(c: &mut Criterion) {
    let tol = Tolerances::default();
    let u = UniverseBasis::new(3, 2);
    let config = random_configuration(&mut SplitMix64::new(4), &u, 5);
    let tuple = config_to_commuting(&config);
    c.bench_function("round_trip/n3_D2_rank5", |b| {
        b.iter(|| commuting_to_config(&config_to_commuting(black_box(&config)), &tol).unwrap())
    });
    c.bench_function("chart/n3_D2_rank5", |b| b.iter(|| subquotient_chart(black_box(&tuple), &tol).unwrap()));
}

criterion_group!(kernels, joint_diagonalization, cayley_pair, products, round_trip);
criterion_main!(kernels);
