#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use weylcalc_core::{Scalar, ScalarContext};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A random polynomial scalar in the named symbols.
pub fn random_poly<R: Rng>(ctx: &ScalarContext, rng: &mut R, syms: &[&str], max_deg: u32, max_terms: usize) -> Scalar {
    let mut out = ctx.zero();
    for _ in 0..rng.gen_range(1..=max_terms) {
        let mut t = ctx.integer(rng.gen_range(-4..=4));
        for _ in 0..rng.gen_range(0..=max_deg) {
            let s = syms[rng.gen_range(0..syms.len())];
            t = ctx.mul(&t, &ctx.symbol(s).unwrap());
        }
        out = ctx.add(&out, &t);
    }
    out
}

/// A random rational function with a nonzero denominator.
pub fn random_fraction<R: Rng>(ctx: &ScalarContext, rng: &mut R, syms: &[&str]) -> Scalar {
    let num = random_poly(ctx, rng, syms, 3, 3);
    loop {
        let den = random_poly(ctx, rng, syms, 2, 2);
        if !den.is_zero() {
            return ctx.div(&num, &den).unwrap();
        }
    }
}
