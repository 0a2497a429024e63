mod common;

use std::sync::Arc;

use common::rng;
use weylcalc_core::brackets::{dagger, normal_symbol};
use weylcalc_core::canon::{
    attempt_inverse, attempt_inverse_polys, check_canonical_classical, check_canonical_quantum, classical_lift,
    compose_polys, corpus, gauge_lift, gauge_lift_classical, grad_log_det, grad_log_det_routes, identity_matrix,
    lift_left, lift_right, linear_polys, lr_difference, mechanical_lr, nc_jacobian, abelianize, naive_transformed_hamiltonian,
    psi_defect, random_tame,
};
use weylcalc_core::poly::int;
use weylcalc_core::{AlgebraSpec, ClassicalPair, Error, InverseSearch, NCPoly, PointMap, Poly, QuantumPair, ScalarContext, Side};

fn cubic() -> PointMap {
    // Q = q³ + q
    let q = Poly::var(1, 0);
    PointMap::polynomial(&[&q.pow(3) + &q]).unwrap()
}

fn identity2() -> PointMap {
    PointMap::polynomial(&[Poly::var(2, 0), Poly::var(2, 1)]).unwrap()
}

fn triangular() -> Vec<Poly> {
    let q1 = Poly::var(2, 0);
    let q2 = Poly::var(2, 1);
    vec![q1.clone(), &q2 + &q1.pow(2)]
}

#[test]
fn polar_jacobian() {
    let m = PointMap::polar();
    let j = m.jacobian();
    assert_eq!(m.ctx().format(&j.det), "r");
    let r = m.ctx().symbol("r").unwrap();
    let routes = grad_log_det_routes(&m, 0).unwrap();
    let rinv = m.ctx().inv(&r).unwrap();
    assert!(routes.iter().all(|g| *g == rinv));
    assert!(grad_log_det(&m, 1).unwrap().is_zero());
}

#[test]
fn cubic_map() {
    let m = cubic();
    let ctx = m.ctx();
    assert_eq!(ctx.format(&m.jacobian().entries[0][0]), "3*q1^2 + 1");
    let r = lift_right(&m).unwrap();
    assert_eq!(r.p[0].to_string(), "(1/(3*q1^2 + 1)) p1");
    let psi = psi_defect(&m).unwrap();
    assert!(psi.is_zero());
    assert_eq!(psi.psi[0].to_string(), "p1 + 6*h*q1/(3*q1^2 + 1)");
    let a = identity_matrix(m.target_ctx(), 1);
    assert!(lr_difference(&m, &a).unwrap().agrees());
}

#[test]
fn identity_map() {
    let m = identity2();
    let j = m.jacobian();
    assert!(j.entries[0][0].is_one() && j.entries[0][1].is_zero() && j.entries[1][1].is_one());
    let p: Vec<NCPoly> = (0..2).map(|i| NCPoly::gen(m.alg(), i)).collect();
    assert_eq!(lift_right(&m).unwrap().p, p);
    assert_eq!(lift_left(&m).unwrap().p, p);
    for side in [Side::Left, Side::Right] {
        let (h, defect) = naive_transformed_hamiltonian(&m, side).unwrap();
        assert_eq!(h.to_string(), "p1 p1 + p2 p2");
        assert!(defect.is_zero());
    }
    let zero = m.ctx().zero();
    let (hlr, hrl) = mechanical_lr(&m, &identity_matrix(m.target_ctx(), 2), &zero).unwrap();
    assert_eq!(hlr, hrl);
    assert!(check_canonical_quantum(&QuantumPair { p, q: lift_right(&m).unwrap().q }).unwrap().is_canonical());
}

#[test]
fn linear_map_lifts() {
    // A = [[2,1],[1,1]], A⁻¹ = [[1,-1],[-1,2]] is symmetric, so P = A⁻¹ p.
    let m = PointMap::polynomial(&linear_polys(&[vec![2, 1], vec![1, 1]])).unwrap();
    let c = classical_lift(&m).unwrap();
    assert_eq!(c.p[0].format(), "p1 - p2");
    assert_eq!(c.p[1].format(), "-p1 + 2*p2");
    assert_eq!(lift_left(&m).unwrap(), lift_right(&m).unwrap());
    assert!(psi_defect(&m).unwrap().is_zero());
    match attempt_inverse(&m, 1).unwrap() {
        InverseSearch::Found(g) => assert_eq!(g, linear_polys(&[vec![1, -1], vec![-1, 2]])),
        other => panic!("expected an inverse, got {other:?}"),
    }
}

#[test]
fn gauge_on_identity() {
    let m = identity2();
    let ctx = m.ctx();
    // f = −q1 q2 gives P_i = p_i + ∂_i(q1 q2).
    let f = ctx.neg(&ctx.mul(&ctx.coordinate(0), &ctx.coordinate(1)));
    let pair = gauge_lift(&m, &f).unwrap();
    assert_eq!(pair.p[0].to_string(), "p1 + q2");
    assert_eq!(pair.p[1].to_string(), "p2 + q1");
    assert!(check_canonical_quantum(&pair).unwrap().is_canonical());
    assert!(check_canonical_classical(&gauge_lift_classical(&m, &f).unwrap()).unwrap().is_canonical());
    assert_eq!(gauge_lift(&m, &ctx.zero()).unwrap(), lift_right(&m).unwrap());
}

#[test]
fn h_dependent_rescaling_is_canonical() {
    // P = ψ(h) p, Q = q/ψ(h) with ψ(h) = (1 + h)/(1 − h).
    let ctx = Arc::new(ScalarContext::with_coordinates(&["q"]).unwrap());
    let d = AlgebraSpec::diffop(ctx.clone(), Some(&["p".to_string()])).unwrap();
    let one = ctx.one();
    let psi = ctx.div(&ctx.add(&one, &ctx.h()), &ctx.sub(&one, &ctx.h())).unwrap();
    let p = NCPoly::gen(&d, 0).scale(&psi);
    let q = NCPoly::scalar(&d, ctx.div(&ctx.coordinate(0), &psi).unwrap());
    assert!(check_canonical_quantum(&QuantumPair { p: vec![p], q: vec![q] }).unwrap().is_canonical());
}

#[test]
fn non_canonical_pairs_are_reported() {
    let w = AlgebraSpec::weyl(1);
    let q = NCPoly::gen(&w, 0);
    let p = NCPoly::gen(&w, 1);
    assert_eq!(q.commutator(&p).unwrap().to_string(), "-h");
    let rep = check_canonical_quantum(&QuantumPair { p: vec![q.clone()], q: vec![p.clone()] }).unwrap();
    assert!(!rep.is_canonical());
    assert_eq!(rep.failures().next().unwrap().value, "-2*h");

    let ps = normal_symbol(&p).unwrap();
    let qs = normal_symbol(&q).unwrap();
    let two = ps.constant_like(ps.ctx().integer(2));
    let rep = check_canonical_classical(&ClassicalPair { p: vec![two.mul(&ps).unwrap()], q: vec![qs] }).unwrap();
    // {2p, q} − 1 = 1
    assert_eq!(rep.failures().next().unwrap().value, "1");
}

#[test]
fn classical_gauge_is_canonical() {
    let w = AlgebraSpec::weyl(1);
    let q = normal_symbol(&NCPoly::gen(&w, 0)).unwrap();
    let p = normal_symbol(&NCPoly::gen(&w, 1)).unwrap();
    // P = p + f'(q) with f = q³
    let three = q.constant_like(q.ctx().integer(3));
    let pp = p.add(&three.mul(&q).unwrap().mul(&q).unwrap()).unwrap();
    assert!(check_canonical_classical(&ClassicalPair { p: vec![pp], q: vec![q] }).unwrap().is_canonical());
}

#[test]
fn grad_log_det_of_a_diagonal_map() {
    // Q = (q1²/2, q2²/2) has J = diag(q1, q2).
    let half = int(1) / int(2);
    let m = PointMap::polynomial(&[Poly::var(2, 0).pow(2).scale(&half), Poly::var(2, 1).pow(2).scale(&half)]).unwrap();
    let ctx = m.ctx();
    assert_eq!(grad_log_det(&m, 0).unwrap(), ctx.inv(&ctx.coordinate(0)).unwrap());
    let lin = PointMap::polynomial(&linear_polys(&[vec![1, 3], vec![0, 1]])).unwrap();
    assert!(grad_log_det(&lin, 0).unwrap().is_zero());
}

#[test]
fn inverse_search() {
    let f = triangular();
    match attempt_inverse_polys(&f, 2).unwrap() {
        InverseSearch::Found(g) => {
            let q1 = Poly::var(2, 0);
            assert_eq!(g, vec![q1.clone(), &Poly::var(2, 1) - &q1.pow(2)]);
            assert_eq!(compose_polys(&g, &f), vec![Poly::var(2, 0), Poly::var(2, 1)]);
        }
        other => panic!("expected an inverse, got {other:?}"),
    }
    assert_eq!(attempt_inverse_polys(&f, 1).unwrap(), InverseSearch::NoneUpTo(1));
    assert!(matches!(attempt_inverse_polys(&f, 0), Err(Error::DegreeBound)));
}

#[test]
fn singular_maps_are_rejected() {
    let q = Poly::var(2, 0);
    assert!(matches!(PointMap::polynomial(&[q.clone(), q]), Err(Error::SingularJacobian)));
}

#[test]
fn noncommutative_jacobian() {
    let f = AlgebraSpec::free(&["x1", "x2"], Arc::new(ScalarContext::bare())).unwrap();
    let x1 = NCPoly::gen(&f, 0);
    let x2 = NCPoly::gen(&f, 1);
    let id = nc_jacobian(&[x1.clone(), x2.clone()]).unwrap();
    let chi = &x1 * &x2;
    assert_eq!(id.apply(0, 0, &chi).unwrap(), chi);
    assert!(id.apply(0, 1, &chi).unwrap().is_zero());
    let j = nc_jacobian(&[&x1 * &x2, &x2 + &(&x1 * &x1)]).unwrap();
    assert_eq!(j.variational[0][0], x2);
    // The abelianized variational matrix is the commutative Jacobian.
    let a = abelianize(&j.variational[1][0]).unwrap();
    assert_eq!(a, Poly::var(2, 0).scale(&int(2)));
}

#[test]
fn random_tame_maps_lift_canonically() {
    let mut r = rng(99);
    for k in 0..20 {
        let n = 2 + k % 2;
        let m = PointMap::polynomial(&random_tame(&mut r, n, 3)).unwrap();
        assert!(check_canonical_quantum(&lift_right(&m).unwrap()).unwrap().is_canonical(), "{}", m.describe());
        assert!(check_canonical_quantum(&lift_left(&m).unwrap()).unwrap().is_canonical(), "{}", m.describe());
    }
}

#[test]
fn corpus_properties() {
    let maps = corpus();
    assert!(maps.len() >= 20);
    for m in &maps {
        let right = lift_right(m).unwrap();
        let left = lift_left(m).unwrap();
        assert!(check_canonical_classical(&classical_lift(m).unwrap()).unwrap().is_canonical());
        for i in 0..m.n() {
            assert_eq!(dagger(&left.p[i]).unwrap(), right.p[i].neg());
        }
        let constant_det = (0..m.n()).all(|i| grad_log_det(m, i).unwrap().is_zero());
        assert_eq!(left == right, constant_det, "{}", m.describe());
    }
}
