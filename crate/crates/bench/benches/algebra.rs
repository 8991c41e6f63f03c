use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use ovnn_core::Octonion;

fn random_pairs(count: usize) -> Vec<(Octonion, Octonion)> {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    (0..count)
        .map(|_| {
            (
                Octonion::new(std::array::from_fn(|_| rng.random_range(-2.0..2.0))),
                Octonion::new(std::array::from_fn(|_| rng.random_range(-2.0..2.0))),
            )
        })
        .collect()
}

fn bench_products(c: &mut Criterion) {
    let pairs = random_pairs(256);
    c.bench_function("product_table_form", |b| {
        b.iter(|| {
            let mut acc = Octonion::ZERO;
            for (x, y) in &pairs {
                acc = acc + black_box(*x) * black_box(*y);
            }
            acc
        })
    });
    c.bench_function("product_matrix_form", |b| {
        b.iter(|| {
            let mut acc = Octonion::ZERO;
            for (x, y) in &pairs {
                acc = acc + black_box(x).mul_matrix_form(black_box(y));
            }
            acc
        })
    });
    c.bench_function("norm", |b| {
        b.iter(|| pairs.iter().map(|(x, _)| black_box(x).norm()).sum::<f64>())
    });
}

criterion_group!(benches, bench_products);
criterion_main!(benches);
