mod common;

use common::{random_fraction, random_poly, rng};
use proptest::prelude::*;
use weylcalc_core::poly::int;
use weylcalc_core::{Error, ScalarContext};

fn q_ctx() -> ScalarContext {
    ScalarContext::with_coordinates(&["q"]).unwrap()
}

#[test]
fn rational_addition() {
    let ctx = ScalarContext::bare();
    let a = ctx.constant(int(1) / int(2));
    let b = ctx.constant(int(1) / int(3));
    assert_eq!(ctx.add(&a, &b), ctx.constant(int(5) / int(6)));
}

#[test]
fn polar_relation_applies_on_multiplication() {
    let ctx = ScalarContext::polar();
    let s = ctx.symbol("s").unwrap();
    let c = ctx.symbol("c").unwrap();
    assert_eq!(ctx.mul(&s, &s), ctx.sub(&ctx.one(), &ctx.mul(&c, &c)));
    assert_eq!(ctx.format(&ctx.mul(&s, &s)), "-c^2 + 1");
}

#[test]
fn polynomial_derivative() {
    let ctx = q_ctx();
    let q = ctx.symbol("q").unwrap();
    let f = ctx.add(&ctx.pow(&q, 3).unwrap(), &q);
    assert_eq!(ctx.format(&ctx.diff_by_name(&f, "q").unwrap()), "3*q^2 + 1");
}

#[test]
fn division_round_trip_on_example() {
    let ctx = q_ctx();
    let q = ctx.symbol("q").unwrap();
    let a = ctx.add(&ctx.scale(&ctx.mul(&q, &q), &int(3)), &ctx.one());
    let back = ctx.mul(&ctx.div(&a, &q).unwrap(), &q);
    assert_eq!(back, a);
}

#[test]
fn polar_derivative_tables() {
    let ctx = ScalarContext::polar();
    let s = ctx.symbol("s").unwrap();
    let c = ctx.symbol("c").unwrap();
    assert_eq!(ctx.diff_by_name(&c, "theta").unwrap(), ctx.neg(&s));
    assert_eq!(ctx.diff_by_name(&s, "theta").unwrap(), c);
    // d/dθ (s/c) = (c·c + s·s)/c² = 1/c²
    let t = ctx.div(&s, &c).unwrap();
    let expected = ctx.inv(&ctx.mul(&c, &c)).unwrap();
    assert_eq!(ctx.diff_by_name(&t, "theta").unwrap(), expected);
}

#[test]
fn relation_rewriting_examples() {
    let ctx = ScalarContext::polar();
    let s = ctx.symbol("s").unwrap();
    let c = ctx.symbol("c").unwrap();
    let s2c = ctx.mul(&ctx.mul(&s, &s), &c);
    assert_eq!(ctx.format(&s2c), "-c^3 + c");
    // (1 - c²)² = 1 - 2c² + c⁴
    let s4 = ctx.pow(&s, 4).unwrap();
    assert_eq!(ctx.format(&s4), "c^4 - 2*c^2 + 1");
    assert_eq!(ctx.reduce(&s4), s4);
    let pythagoras = ctx.add(&ctx.mul(&s, &s), &ctx.mul(&c, &c));
    assert!(pythagoras.is_one());
    assert!(ctx.diff_by_name(&pythagoras, "theta").unwrap().is_zero());
}

#[test]
fn division_by_zero_is_an_error() {
    let ctx = q_ctx();
    let q = ctx.symbol("q").unwrap();
    assert!(matches!(ctx.div(&q, &ctx.zero()), Err(Error::DivisionByZero)));
    assert!(matches!(ctx.diff_by_name(&q, "x"), Err(Error::UnknownCoordinate(_))));
}

#[test]
fn division_round_trip_on_random_functions() {
    let ctx = ScalarContext::with_coordinates(&["x", "y"]).unwrap();
    let mut r = rng(17);
    for _ in 0..100 {
        let a = random_fraction(&ctx, &mut r, &["x", "y", "h"]);
        let b = random_fraction(&ctx, &mut r, &["x", "y"]);
        if b.is_zero() {
            continue;
        }
        assert_eq!(ctx.mul(&ctx.div(&a, &b).unwrap(), &b), a);
    }
}

#[test]
fn h_truncation_is_display_only() {
    let ctx = q_ctx();
    let q = ctx.symbol("q").unwrap();
    let h = ctx.h();
    let a = ctx.add(&q, &ctx.add(&ctx.mul(&h, &q), &ctx.mul(&h, &h)));
    assert_eq!(ctx.format(&ctx.truncate_h(&a, 1)), "h*q + q");
    assert_eq!(ctx.format(&ctx.truncate_h(&a, 0)), "q");
}

fn leibniz_holds(seed: u64) -> Result<(), TestCaseError> {
    let ctx = ScalarContext::polar();
    let mut r = rng(seed);
    let syms = ["r", "c", "s", "h"];
    let a = random_fraction(&ctx, &mut r, &syms);
    let b = random_fraction(&ctx, &mut r, &syms);
    for j in 0..2 {
        let lhs = ctx.diff(&ctx.mul(&a, &b), j).unwrap();
        let rhs = ctx.add(&ctx.mul(&ctx.diff(&a, j).unwrap(), &b), &ctx.mul(&a, &ctx.diff(&b, j).unwrap()));
        prop_assert_eq!(lhs, rhs);
    }
    let rt = ctx.diff(&ctx.diff(&a, 0).unwrap(), 1).unwrap();
    let tr = ctx.diff(&ctx.diff(&a, 1).unwrap(), 0).unwrap();
    prop_assert_eq!(rt, tr);
    Ok(())
}

#[test]
fn leibniz_with_large_common_denominators() {
    // Products whose reduced denominators reach degree 16 in c.
    for seed in [20, 777] {
        leibniz_holds(seed).unwrap();
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn field_laws(seed in any::<u64>()) {
        let ctx = ScalarContext::polar();
        let mut r = rng(seed);
        let syms = ["r", "c", "s", "h"];
        let a = random_fraction(&ctx, &mut r, &syms);
        let b = random_fraction(&ctx, &mut r, &syms);
        let c = random_poly(&ctx, &mut r, &syms, 2, 3);
        prop_assert_eq!(ctx.add(&ctx.add(&a, &b), &c), ctx.add(&a, &ctx.add(&b, &c)));
        prop_assert_eq!(ctx.mul(&a, &ctx.add(&b, &c)), ctx.add(&ctx.mul(&a, &b), &ctx.mul(&a, &c)));
        prop_assert_eq!(ctx.mul(&a, &b), ctx.mul(&b, &a));
        if !a.is_zero() {
            prop_assert!(ctx.mul(&a, &ctx.inv(&a).unwrap()).is_one());
        }
    }

    #[test]
    fn leibniz_and_mixed_partials(seed in any::<u64>()) {
        leibniz_holds(seed)?;
    }

    #[test]
    fn reduction_is_idempotent_and_compatible(seed in any::<u64>()) {
        let ctx = ScalarContext::polar();
        let mut r = rng(seed);
        let syms = ["r", "c", "s"];
        let a = random_poly(&ctx, &mut r, &syms, 4, 4);
        let b = random_poly(&ctx, &mut r, &syms, 4, 4);
        prop_assert_eq!(ctx.reduce(&a), a.clone());
        let ab = ctx.mul(&a, &b);
        prop_assert_eq!(ctx.reduce(&ab), ctx.reduce(&ctx.mul(&ctx.reduce(&a), &ctx.reduce(&b))));
        prop_assert_eq!(ctx.reduce(&ctx.reduce(&ab)), ctx.reduce(&ab));
    }
}
