use criterion::{black_box, criterion_group, criterion_main, Criterion};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use weylcalc_core::brackets::{bracket_expansion_pair, bracket_expansion_theta, normal_quantize, normal_symbol, star_normal};
use weylcalc_core::ncalg::random_element;
use weylcalc_core::poly::int;
use weylcalc_core::{AlgebraSpec, NCPoly, ScalarContext};
use std::sync::Arc;

fn weyl_products(c: &mut Criterion) {
    let alg = AlgebraSpec::weyl(2);
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let pairs: Vec<(NCPoly, NCPoly)> = (0..16).map(|_| (random_element(&alg, &mut rng, 5, 4), random_element(&alg, &mut rng, 5, 4))).collect();
    c.bench_function("weyl2 product deg5", |b| {
        b.iter(|| {
            for (x, y) in &pairs {
                black_box(x.checked_mul(y).unwrap());
            }
        })
    });
    c.bench_function("weyl2 commutator deg5", |b| {
        b.iter(|| {
            for (x, y) in &pairs {
                black_box(x.commutator(y).unwrap());
            }
        })
    });
    c.bench_function("weyl2 paired expansion deg5", |b| {
        b.iter(|| {
            for (x, y) in &pairs {
                black_box(bracket_expansion_pair(x, y).unwrap());
            }
        })
    });
    let syms: Vec<_> = pairs.iter().map(|(x, y)| (normal_symbol(x).unwrap(), normal_symbol(y).unwrap())).collect();
    c.bench_function("weyl2 star product deg5", |b| {
        b.iter(|| {
            for (x, y) in &syms {
                black_box(normal_quantize(&star_normal(x, y).unwrap(), &alg).unwrap());
            }
        })
    });
}

fn theta_expansion(c: &mut Criterion) {
    let table = vec![
        vec![int(0), int(1), int(-2)],
        vec![int(-1), int(0), int(3)],
        vec![int(2), int(-3), int(0)],
    ];
    let alg = AlgebraSpec::constant(&["u1", "u2", "u3"], table, Arc::new(ScalarContext::bare())).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let pairs: Vec<(NCPoly, NCPoly)> = (0..8).map(|_| (random_element(&alg, &mut rng, 4, 3), random_element(&alg, &mut rng, 4, 3))).collect();
    c.bench_function("theta expansion m3 deg4", |b| {
        b.iter(|| {
            for (x, y) in &pairs {
                black_box(bracket_expansion_theta(x, y).unwrap());
            }
        })
    });
}

criterion_group!(benches, weyl_products, theta_expansion);
criterion_main!(benches);
