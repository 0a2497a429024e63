mod common;

use std::sync::Arc;

use common::rng;
use proptest::prelude::*;
use rand::Rng;
use weylcalc_core::calculus::{
    ad, ad_generator_formula, apply_derivation, chain_rule_check, cyclic_variational, differential, euler_operator,
    ideal_preserved, is_commutator_sum, necklace, op_partial, pair, partial, partial_multi, partial_raw, partial_seq,
};
use weylcalc_core::ncalg::random_element;
use weylcalc_core::poly::int;
use weylcalc_core::{AlgebraSpec, DerivationSpec, Error, NCPoly, RawTerm, ScalarContext, Var};

fn free3() -> Arc<AlgebraSpec> {
    AlgebraSpec::free(&["u1", "u2", "u3"], Arc::new(ScalarContext::bare())).unwrap()
}

fn word(alg: &Arc<AlgebraSpec>, letters: &[usize]) -> NCPoly {
    letters.iter().fold(NCPoly::one(alg), |acc, &g| &acc * &NCPoly::gen(alg, g))
}

#[test]
fn partial_deletes_each_occurrence() {
    let f = free3();
    let x = word(&f, &[0, 1, 0]);
    assert_eq!(partial(&x, Var::Gen(0)).unwrap(), &word(&f, &[1, 0]) + &word(&f, &[0, 1]));
    let w = AlgebraSpec::weyl(1);
    assert_eq!(partial(&word(&w, &[0, 1]), Var::Gen(1)).unwrap(), NCPoly::gen(&w, 0));
}

#[test]
fn partial_is_well_defined_on_the_quotient() {
    let w = AlgebraSpec::weyl(1);
    let raw = [RawTerm::word(w.ctx(), &[1, 1, 0, 0])];
    let before = partial_raw(&w, &raw, 1).unwrap();
    let after = partial(&word(&w, &[1, 1, 0, 0]), Var::Gen(1)).unwrap();
    assert_eq!(before, after);
}

#[test]
fn op_partial_inserts_the_argument() {
    let f = free3();
    let x = NCPoly::gen(&f, 2);
    assert_eq!(op_partial(&word(&f, &[0, 1]), 1, &x).unwrap(), word(&f, &[0, 2]));
    assert_eq!(op_partial(&word(&f, &[0, 0]), 0, &x).unwrap(), &word(&f, &[2, 0]) + &word(&f, &[0, 2]));
}

#[test]
fn multi_partials() {
    let w = AlgebraSpec::weyl(1);
    let h = word(&w, &[1, 1, 0, 0]);
    assert_eq!(partial_multi(&h, &[0, 0]).unwrap(), h);
    let pq = partial_seq(&h, &[Var::Gen(1), Var::Gen(0)]).unwrap();
    let qp = partial_seq(&h, &[Var::Gen(0), Var::Gen(1)]).unwrap();
    assert_eq!(pq, qp);
    assert_eq!(pq, partial_multi(&h, &[1, 1]).unwrap());
    // p²q² = q²p² + 4h qp + 2h², so ∂²/∂q∂p gives 4qp + 4h.
    assert_eq!(pq.to_string(), "4 q p + 4*h");
    assert!(partial_multi(&h, &[3, 0]).unwrap().is_zero());
}

#[test]
fn differential_of_a_two_letter_word() {
    let f = free3();
    let d = differential(&word(&f, &[0, 1]));
    assert_eq!(d.format(), "(1)·du1·(u2) + (u1)·du2·(1)");
    assert!(differential(&NCPoly::constant(&f, int(5))).is_empty());
}

#[test]
fn pairing_examples() {
    let f = free3();
    let x = DerivationSpec::new(&f, vec![word(&f, &[0, 0]), NCPoly::zero(&f), NCPoly::zero(&f)]).unwrap();
    let form = differential(&word(&f, &[1, 0, 2]));
    assert_eq!(pair(&form, &x).unwrap(), word(&f, &[1, 0, 0, 2]));
    let zero = DerivationSpec::new(&f, vec![NCPoly::zero(&f); 3]).unwrap();
    assert!(apply_derivation(&zero, &word(&f, &[0, 1, 2])).unwrap().is_zero());
}

#[test]
fn euler_operator_reading() {
    let f = free3();
    let h = word(&f, &[0, 1]);
    assert_eq!(euler_operator(&h).unwrap(), h.scale_rational(&int(2)));
    // The left-multiplication reading Σ u_k ∂H/∂u_k gives u1u2 + u2u1 instead.
    let mut left = NCPoly::zero(&f);
    for k in 0..3 {
        left = &left + &(&NCPoly::gen(&f, k) * &partial(&h, Var::Gen(k)).unwrap());
    }
    assert_eq!(left, &word(&f, &[0, 1]) + &word(&f, &[1, 0]));
    assert_ne!(left, h.scale_rational(&int(2)));
}

#[test]
fn ideal_is_preserved_by_inner_derivations() {
    let ctx = Arc::new(ScalarContext::bare());
    let alg = AlgebraSpec::constant(&["a", "b", "c"], vec![
        vec![int(0), int(1), int(0)],
        vec![int(-1), int(0), int(2)],
        vec![int(0), int(-2), int(0)],
    ], ctx).unwrap();
    let f = &NCPoly::gen(&alg, 0) * &NCPoly::gen(&alg, 2);
    let phi = NCPoly::gen(&alg, 1);
    let psi = &NCPoly::gen(&alg, 2) + &NCPoly::one(&alg);
    for (i, j) in [(0, 1), (1, 2), (0, 2)] {
        assert!(ideal_preserved(&alg, &f, &phi, &psi, i, j).unwrap());
    }
}

#[test]
fn chain_rule_examples() {
    let f = AlgebraSpec::free(&["a", "b"], Arc::new(ScalarContext::bare())).unwrap();
    let a = NCPoly::gen(&f, 0);
    let b = NCPoly::gen(&f, 1);
    let h = a.pow(2).unwrap();
    let u = vec![a.pow(2).unwrap(), b.clone()];
    assert!(chain_rule_check(&h, &u, 0, &NCPoly::one(&f)).unwrap());
    assert!(chain_rule_check(&h, &[a.clone(), b.clone()], 1, &a).unwrap());
    assert!(matches!(chain_rule_check(&h, &[a], 0, &b), Err(Error::Malformed(_))));
}

#[test]
fn cyclic_derivative_examples() {
    let f = free3();
    assert_eq!(cyclic_variational(&word(&f, &[0, 1]), 0).unwrap(), NCPoly::gen(&f, 1));
    assert_eq!(cyclic_variational(&word(&f, &[0, 0]), 0).unwrap(), NCPoly::gen(&f, 0).scale_rational(&int(2)));
    assert!(cyclic_variational(&NCPoly::constant(&f, int(3)), 1).unwrap().is_zero());
    assert!(cyclic_variational(&NCPoly::gen(&AlgebraSpec::weyl(1), 0), 0).is_err());
}

#[test]
fn necklace_kills_commutators() {
    let f = free3();
    let x = word(&f, &[0, 1, 2]);
    let y = word(&f, &[2, 0]);
    let c = x.commutator(&y).unwrap();
    assert!(is_commutator_sum(&c).unwrap());
    assert!(necklace(&c).unwrap().is_empty());
    assert!(!is_commutator_sum(&x).unwrap());
}

fn random_free(seed: u64) -> (Arc<AlgebraSpec>, rand_chacha::ChaCha8Rng) {
    (free3(), rng(seed))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn mixed_partials_commute(seed in any::<u64>()) {
        let w = AlgebraSpec::weyl(2);
        let mut r = rng(seed);
        let h = random_element(&w, &mut r, 6, 4);
        for i in 0..4 {
            for j in 0..4 {
                let a = partial_seq(&h, &[Var::Gen(i), Var::Gen(j)]).unwrap();
                let b = partial_seq(&h, &[Var::Gen(j), Var::Gen(i)]).unwrap();
                prop_assert_eq!(a, b);
            }
        }
    }

    #[test]
    fn euler_on_homogeneous(seed in any::<u64>(), deg in 0usize..6) {
        let (f, mut r) = random_free(seed);
        let mut h = NCPoly::zero(&f);
        for _ in 0..3 {
            let letters: Vec<usize> = (0..deg).map(|_| r.gen_range(0..3)).collect();
            h = &h + &word(&f, &letters).scale_rational(&int(r.gen_range(1..5)));
        }
        prop_assert_eq!(euler_operator(&h).unwrap(), h.scale_rational(&int(deg as i64)));
        prop_assert_eq!(apply_derivation(&DerivationSpec::radial(&f), &h).unwrap(), h.scale_rational(&int(deg as i64)));
    }

    #[test]
    fn pairing_and_leibniz(seed in any::<u64>()) {
        let (f, mut r) = random_free(seed);
        let h = random_element(&f, &mut r, 4, 3);
        let g = random_element(&f, &mut r, 3, 3);
        let x = DerivationSpec::new(&f, (0..3).map(|_| random_element(&f, &mut r, 2, 2)).collect()).unwrap();
        prop_assert_eq!(pair(&differential(&h), &x).unwrap(), apply_derivation(&x, &h).unwrap());
        let lhs = apply_derivation(&x, &(&h * &g)).unwrap();
        let rhs = &(&apply_derivation(&x, &h).unwrap() * &g) + &(&h * &apply_derivation(&x, &g).unwrap());
        prop_assert_eq!(lhs, rhs);
        prop_assert_eq!(op_partial(&h, 1, &NCPoly::one(&f)).unwrap(), partial(&h, Var::Gen(1)).unwrap());
    }

    #[test]
    fn inner_derivation_formula(seed in any::<u64>()) {
        let mut r = rng(seed);
        let ctx = Arc::new(ScalarContext::bare());
        let mut t = vec![vec![int(0); 3]; 3];
        for i in 0..3 {
            for j in i + 1..3 {
                let k = r.gen_range(-2..=2);
                t[i][j] = int(k);
                t[j][i] = int(-k);
            }
        }
        let alg = AlgebraSpec::constant(&["a", "b", "c"], t, ctx).unwrap();
        let h = random_element(&alg, &mut r, 4, 3);
        for i in 0..3 {
            prop_assert_eq!(ad(&NCPoly::gen(&alg, i), &h).unwrap(), ad_generator_formula(&h, i).unwrap());
        }
        prop_assert!(ad(&h, &h).unwrap().is_zero());
    }

    #[test]
    fn heisenberg_equals_hamilton(seed in any::<u64>(), n in 1usize..=3) {
        let w = AlgebraSpec::weyl(n);
        let mut r = rng(seed);
        let h = random_element(&w, &mut r, 5, 4);
        for i in 0..n {
            let q = NCPoly::gen(&w, i);
            let p = NCPoly::gen(&w, n + i);
            prop_assert_eq!(h.commutator(&q).unwrap().div_h_power(1).unwrap(), partial(&h, Var::Gen(n + i)).unwrap());
            prop_assert_eq!(h.commutator(&p).unwrap().div_h_power(1).unwrap(), partial(&h, Var::Gen(i)).unwrap().neg());
        }
    }

    #[test]
    fn chain_rule_on_random_triples(seed in any::<u64>()) {
        let (f, mut r) = random_free(seed);
        let h = random_element(&f, &mut r, 3, 3);
        let u: Vec<NCPoly> = (0..3).map(|_| random_element(&f, &mut r, 2, 2)).collect();
        let x = random_element(&f, &mut r, 2, 2);
        let alpha = r.gen_range(0..3);
        prop_assert!(chain_rule_check(&h, &u, alpha, &x).unwrap());
    }

    #[test]
    fn cyclic_congruence(seed in any::<u64>()) {
        let (f, mut r) = random_free(seed);
        let g = random_element(&f, &mut r, 5, 4);
        let chi = random_element(&f, &mut r, 2, 2);
        for j in 0..3 {
            let lhs = op_partial(&g, j, &chi).unwrap();
            let rhs = &cyclic_variational(&g, j).unwrap() * &chi;
            prop_assert!(is_commutator_sum(&(&lhs - &rhs)).unwrap());
        }
    }
}
