//! Every public library operation is reachable from a script.

use std::collections::BTreeSet;

use weylcalc::report::{emit_text, Status};
use weylcalc::run_script;

/// (library function, script, fragment expected in the text report)
const AUDIT: &[(&str, &str, &str)] = &[
    // scalars
    ("ScalarContext::add/sub/mul/div", "coords q; print (q + 1)/(q - 1)*q - q;", "2*q/(q - 1)"),
    ("ScalarContext::diff", "context polar; print diff(s/c, theta);", "c^-2"),
    ("ScalarContext::reduce", "context polar; print s^2;", "-c^2 + 1"),
    // ncalg
    ("normalize", "algebra weyl n=1; print normalize(p*q);", "q p + h"),
    ("normalize_with", "algebra weyl n=1; print normalize(p*p*q, 5);", "q p p + 2*h p"),
    ("to_raw", "algebra weyl n=1; print normalize(p*q, 1);", "q p + h"),
    ("nc_mul", "algebra weyl n=1; print (q + p)*(q - p);", "q q - p p + h"),
    ("commutator", "algebra weyl n=1; print [p^2, q^2];", "4*h q p + 2*h^2"),
    ("embed_weyl", "algebra weyl n=1; let A = p*q; coords q; algebra diffop p; print embed(A);", "q p + h"),
    // calculus
    ("partial", "algebra weyl n=1; print diff(q*q*p, q);", "2 q p"),
    ("partial_seq", "algebra weyl n=1; print diff(q*q*p, q, p);", "2 q"),
    ("op_partial", "algebra free x1, x2; print opdiff(x1*x2*x1, x1, x2);", "x1 x2 x2 + x2 x2 x1"),
    ("partial_multi", "algebra weyl n=1; print diffmulti(p^2*q^2, 1, 1);", "4 q p + 4*h"),
    ("differential", "algebra free u1, u2; print differential(u1*u2);", "(1)·du1·(u2) + (u1)·du2·(1)"),
    ("pair", "algebra free u1, u2; print pairing(differential(u1*u2), u1, u2);", "2 u1 u2"),
    ("apply_derivation", "algebra free x, y; print derive(x*y, y, x);", "x x + y y"),
    ("euler_operator", "algebra free x, y; print euler(x*y*x);", "3 x y x"),
    ("ad", "algebra weyl n=1; print ad(p, q^2);", "2*h q"),
    ("ad_generator_formula", "algebra weyl n=1; print adgen(q^2, p);", "2*h q"),
    ("ideal_preserved", "algebra commutator a, b with [a, b] = 1; check ideal(a, b, a, a, b);", "PASS"),
    ("free_shadow", "algebra commutator a, b with [a, b] = 1; check ideal(a*b, 1, b, a, b);", "PASS"),
    ("lift_words", "algebra commutator a, b with [a, b] = 1; check ideal(b, a, 1, b, a);", "PASS"),
    ("substitute", "algebra free u1, u2; let H = u1*u2; algebra weyl n=1; print subst(H, p, q);", "q p + h"),
    ("chain_rule_check", "algebra free u1, u2; let H = u1*u2*u1; algebra weyl n=1; check chain(H, (q*p, p), p, q);", "PASS"),
    ("op_partial_substituted", "algebra free u; let H = u^3; algebra weyl n=1; check chain(H, (q + p), q, p);", "PASS"),
    ("cyclic_variational", "algebra free x1, x2; print cyclic(x1*x2, x1);", "x2"),
    ("necklace", "algebra free x, y; print necklace(x*y - y*x + 2*x);", "<x>: 2"),
    ("is_commutator_sum", "algebra free x, y; check commsum(x*y*x - x*x*y);", "PASS"),
    // brackets
    ("poisson", "algebra weyl n=1; print {p^2, q^2};", "4*q*p"),
    ("normal_symbol", "algebra weyl n=1; print nsymbol(p*q);", "q*p + h"),
    ("smbl", "algebra weyl n=1; print smbl(p*q);", "q*p"),
    ("normal_quantize", "algebra weyl n=1; print quantize(q*p);", "q p"),
    ("star_normal", "algebra weyl n=1; print star(p, q);", "q*p + h"),
    ("theta_table", "algebra commutator u1, u2 with [u1, u2] = 1; theta 2;", "theta[(1,1),(1,1)] = -2"),
    ("bracket_expansion_theta", "algebra commutator u1, u2 with [u1, u2] = 1; print expand_theta(u1^2, u2);", "2 u1"),
    ("bracket_expansion_pair", "algebra weyl n=1; print expand(p^2, q^2);", "4 q p + 2*h"),
    ("symmetric_form", "algebra weyl n=1; print symmetric(p, q);", "q p"),
    ("dagger", "algebra weyl n=1; print dag(q*p);", "-q p - h"),
    ("res", "algebra weyl n=1; print res(p*q*q);", "2*h*q"),
    ("res_form", "algebra weyl n=1; print resform(q, q);", "q^2"),
    ("divergence_witness", "coords q1, q2; divergence q1*q2, 0;", "g1 = 1/2*q1^2*q2"),
    ("check_divergence", "coords q1, q2; divergence q1*q2, 0;", "verified = true"),
    // canon
    ("jacobian", "context polar; algebra diffop; map x = r*c, y = r*s; jacobian;", "det J = r"),
    ("det_bareiss", "context polar; algebra diffop; map x = r*c, y = r*s; print det();", "r"),
    ("adjugate", "context polar; algebra diffop; map x = r*c, y = r*s; jacobian;", "J^-1 row 2 = (-r^-1*s, r^-1*c)"),
    ("classical_lift", "context polar; algebra diffop; map x = r*c, y = r*s; lift classical;", "p_x = c*p_r - r^-1*s*p_theta"),
    ("gauge_lift_classical", "coords q; algebra diffop p; map Q = q; gauge classical q^2;", "p_Q = p - 2*q"),
    ("lift_right", "context polar; algebra diffop; map x = r*c, y = r*s; lift right;", "p_x = c p_r - r^-1*s p_theta"),
    ("lift_left", "context polar; algebra diffop; map x = r*c, y = r*s; lift left;", "p_y = s p_r + r^-1*c p_theta - h*r^-1*s"),
    ("gauge_lift", "coords q1, q2; algebra diffop p1, p2; map Q1 = q1, Q2 = q2; gauge -q1*q2;", "p_Q1 = p1 + q2"),
    ("grad_log_det", "context polar; algebra diffop; map x = r*c, y = r*s; gradlogdet;", "d/dr ln det J = r^-1"),
    ("grad_log_det_routes", "context polar; algebra diffop; map x = r*c, y = r*s; check gradlogdet;", "PASS"),
    ("psi_defect", "context polar; algebra diffop; map x = r*c, y = r*s; psi;", "Psi(p_r) = p_r + h*r^-1"),
    ("lift_difference_residual", "context polar; algebra diffop; map x = r*c, y = r*s; check liftdiff;", "PASS"),
    ("check_canonical_quantum", "context polar; algebra diffop; map x = r*c, y = r*s; check canonical left;", "PASS"),
    ("check_canonical_classical", "context polar; algebra diffop; map x = r*c, y = r*s; check classical;", "PASS"),
    ("mechanical_lr", "context polar; algebra diffop; map x = r*c, y = r*s; mechanical;", "H^lr = p_r p_r + r^-2 p_theta p_theta"),
    ("identity_matrix", "context polar; algebra diffop; map x = r*c, y = r*s; print hrl();", "p_r p_r + r^-2 p_theta p_theta"),
    ("naive_transformed_hamiltonian", "context polar; algebra diffop; map x = r*c, y = r*s; naive right;", "H = p_r p_r + r^-2 p_theta p_theta + h*r^-1 p_r"),
    ("lr_difference", "context polar; algebra diffop; map x = r*c, y = r*s; check lrdiff;", "PASS"),
    ("attempt_inverse", "coords q1, q2; algebra diffop p1, p2; map Q1 = q1, Q2 = q2 + q1^2; inverse 2;", "q2 = -Q1^2 + Q2"),
    ("attempt_inverse_polys", "coords q1, q2; algebra diffop p1, p2; map Q1 = q1, Q2 = q2 + q1^2; inverse 1;", "no inverse of degree <= 1"),
    ("attempt_inverse_pair", "coords q; algebra diffop p; map Q = 2*q; inverse classical 1;", "p = 2*p_Q"),
    ("symbol_to_poly", "coords q; algebra diffop p; map Q = 2*q; check inverse classical 1;", "PASS"),
    ("map_polys", "coords q; algebra diffop p; map Q = 2*q; check inverse 1;", "q = 1/2*Q"),
    ("compose_polys", "coords q; algebra diffop p; map Q = 2*q; check inverse 1;", "residual G(F)_1 - q = 0"),
    ("format_inverse", "coords q; algebra diffop p; map Q = 2*q + 1; inverse;", "q = 1/2*Q - 1/2"),
    ("nc_jacobian", "algebra free x1, x2; ncjacobian x1*x2;", "dF1/dx1 = x2"),
    ("abelianize", "algebra free x, y; print abelianize(x*y - y*x + 2*x*x);", "2*x^2"),
];

/// Public functions that only support tests, benchmarks or other library code.
const NOT_SCRIPTED: &[&str] = &[
    "random_element", "partial_raw", "det_cofactor", "mat_mul", "linear_polys", "random_unimodular", "random_triangular",
    "random_tame", "corpus",
];

#[test]
fn every_operation_runs_from_a_script() {
    let mut bad = Vec::new();
    for (op, src, needle) in AUDIT {
        let r = run_script(src);
        let text = emit_text(&r);
        if r.entries.iter().any(|e| e.status == Status::Error) || !text.contains(needle) {
            bad.push(format!("{op}: expected `{needle}` in\n{text}"));
        }
    }
    assert!(bad.is_empty(), "{}", bad.join("\n"));
}

#[test]
fn audit_lists_every_public_function() {
    let sources = [
        include_str!("../../core/src/ncalg.rs"),
        include_str!("../../core/src/calculus.rs"),
        include_str!("../../core/src/brackets.rs"),
        include_str!("../../core/src/canon.rs"),
    ];
    let audited: BTreeSet<&str> = AUDIT.iter().map(|(op, _, _)| *op).chain(NOT_SCRIPTED.iter().copied()).collect();
    let mut missing = Vec::new();
    for src in sources {
        for line in src.lines() {
            if let Some(rest) = line.strip_prefix("pub fn ") {
                let name: String = rest.chars().take_while(|c| c.is_alphanumeric() || *c == '_').collect();
                if !audited.contains(name.as_str()) {
                    missing.push(name);
                }
            }
        }
    }
    assert!(missing.is_empty(), "not reachable from scripts: {missing:?}");
}
