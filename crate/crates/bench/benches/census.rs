use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use nilpairs_core::census::{brute_count, class_count, CensusBudget, LambdaMode, Variety};
use nilpairs_core::constructions::good_pair;
use nilpairs_core::linalg::char_poly;
use nilpairs_core::subalgebra::algebra_dim;
use nilpairs_core::{FieldCtx, MatrixF, Scalar};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn counting(c: &mut Criterion) {
    let f2 = FieldCtx::prime(2).unwrap();
    let f4 = FieldCtx::of_order(4).unwrap();
    let budget = CensusBudget::default();
    c.bench_function("brute X n=2 q=4", |b| b.iter(|| brute_count(Variety::X, 2, black_box(&f4)).unwrap()));
    c.bench_function("class X n=3 q=2", |b| {
        b.iter(|| class_count(Variety::X, 3, black_box(&f2), LambdaMode::All, &budget).unwrap())
    });
    c.bench_function("class X n=4 q=2", |b| {
        b.iter(|| class_count(Variety::X, 4, black_box(&f2), LambdaMode::All, &budget).unwrap())
    });
}

fn kernels(c: &mut Criterion) {
    let f4 = FieldCtx::of_order(4).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let m = MatrixF::random(&f4, 8, 8, &mut rng);
    c.bench_function("char_poly 8x8 GF(4)", |b| b.iter(|| char_poly(black_box(&m))));
    let f2 = FieldCtx::prime(2).unwrap();
    let pair = good_pair(&f2, 3, Scalar::ONE).unwrap();
    c.bench_function("algebra_dim good pair n=6", |b| {
        b.iter(|| algebra_dim(&f2, 6, black_box(&[pair.a.clone(), pair.b.clone()])).unwrap())
    });
}

criterion_group!(benches, counting, kernels);
criterion_main!(benches);
