#![allow(dead_code)]

/// Scripts exercising every statement form and operator.
pub const CORPUS: &[&str] = &[
    "algebra weyl n=1; let H = p^2; print normalize(H * q);",
    "algebra weyl n=2; print [p1^2, q1^2], [p2, q2], [p1, q2];",
    "algebra weyl (x, y) (px, py); print px*x, {px^2, x^2};",
    "algebra weyl n=1; print (q+p)*(q-p), -q^2, -(q*p), q^-0, 2^-1*q;",
    "algebra weyl n=1; print expand(p^3, q^2), smbl(p*q), nsymbol(p*q*p);",
    "algebra weyl n=1; print star(p^2, q^2), quantize(star(p, q));",
    "algebra weyl n=1; print dag(q*p*p), res(p*q), resform(p, q*p), symmetric(q, p);",
    "algebra weyl n=1; check equal dag(dag(q*p)), q*p; check zero [q, q];",
    "algebra weyl n=1; print diff(q^3*p, q), diff(q^3*p, p, q), diffmulti(q^2*p^2, 2, 1);",
    "algebra weyl n=1; print truncate(p^3*q^3, 1), hzero(nsymbol(p*q)), normalize(p*p*q, 3);",
    "algebra commutator u1, u2 with [u2, u1] = 1; print expand_theta(u1^2, u2^2), adgen(u1*u2, u1);",
    "algebra commutator a, b, c with [a, b] = 2, [b, c] = -1/3; theta 2; check ideal(a, b, c, a, b);",
    "algebra free x1, x2; print cyclic(x1*x2*x1, x1), necklace(x1*x2*x1), commsum(x1*x2 - x2*x1);",
    "algebra free x1, x2; let w = differential(x1*x2*x1); print w, pairing(w, x2, x1);",
    "algebra free x, y; print derive(x*y, y, x), euler(x*y*x), ad(x, y), opdiff(x*y*x, x, y);",
    "algebra free u1, u2; let H = u1*u2; algebra weyl n=1; print subst(H, q, p), chain(H, (q, p), q, p);",
    "algebra free x1, x2; ncjacobian x1*x2, x2 + x1^2;",
    "coords q; algebra diffop; print diff(q^2, q)*p_q, (1/(3*q^2 + 1))*p_q;",
    "coords q; funcs f; deriv f / q = f; algebra diffop p; print [p, f], diff(f^2, q);",
    "coords r, theta; funcs s, c; deriv s / theta = c; deriv c / theta = -s; relation s^2 = 1 - c^2; print s^2 + c^2;",
    "context polar; algebra diffop; map x = r*c, y = r*s; jacobian; lift right; lift left;",
    "context polar; algebra diffop; map x = r*c, y = r*s; naive left; naive right; mechanical;",
    "context polar; algebra diffop; map x = r*c, y = r*s; check canonical right; check canonical left; check psi;",
    "context polar; algebra diffop; map x = r*c, y = r*s; check liftdiff; check lrdiff; check gradlogdet; gradlogdet;",
    "coords q1, q2; algebra diffop p1, p2; map Q1 = q1, Q2 = q2 + q1^2; inverse; check inverse 2; inverse classical 3;",
    "coords q1, q2; algebra diffop p1, p2; map Q1 = 2*q1 + q2, Q2 = q1 + q2; lift classical; gauge -q1*q2; gauge classical q1;",
    "coords q1, q2; algebra diffop p1, p2; map Q1 = q1, Q2 = q2; check canonical gauge q1*q2; check classical; check classical gauge q2^2;",
    "coords q1, q2; algebra diffop p1, p2; map Q1 = q1, Q2 = q2*(1 + q1^2); mechanical ((1, 0), (0, 1 + Q1^2)), Q1; lrdiff;",
    "coords q; algebra diffop p; map Q = q^3 + q; psi; liftdiff; print left(1), right(1), gaugep(q, 1), classical(1), target(1), det(), jac(1, 1), glogdet(1), psimap(1), naive_left(), naive_right(), hlr(), hrl();",
    "coords q; algebra diffop p; divergence q^2, q; check canonical pair (p), (q); check classical pair (2*p), (q/2); check equal(p, p); context bare;",
];
