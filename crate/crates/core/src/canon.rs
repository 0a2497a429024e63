//! Point transformations and their lifts to phase space.
//!
//! A [`PointMap`] `q ↦ Q(q)` lives over a differential-operator algebra on
//! the source coordinates; quantum momenta are elements of that algebra
//! with coefficients to the left.

use std::fmt;
use std::sync::Arc;

use num_traits::{One, Zero};
use rand::Rng;

use crate::brackets::{dagger, poisson, CommutativeSymbol};
use crate::calculus::op_partial;
use crate::error::{Error, Result};
use crate::ncalg::{AlgebraSpec, Mode, NCPoly, Word};
use crate::poly::{format_poly, int, Monomial, Poly, Rational};
use crate::scalar::{Scalar, ScalarContext};

pub type Matrix = Vec<Vec<Scalar>>;

/// Jacobian `J_ij = ∂Q_i/∂q_j` with determinant, adjugate and inverse.
#[derive(Clone, Debug)]
pub struct JacobianMatrix {
    pub entries: Matrix,
    pub det: Scalar,
    pub adj: Matrix,
    pub inv: Matrix,
}

impl JacobianMatrix {
    pub fn n(&self) -> usize {
        self.entries.len()
    }

    pub fn from_entries(ctx: &ScalarContext, entries: Matrix) -> Result<Self> {
        let det = det_bareiss(ctx, &entries)?;
        if det.is_zero() {
            return Err(Error::SingularJacobian);
        }
        let adj = adjugate(ctx, &entries);
        let dinv = ctx.inv(&det)?;
        let inv = adj.iter().map(|row| row.iter().map(|x| ctx.mul(x, &dinv)).collect()).collect();
        Ok(JacobianMatrix { entries, det, adj, inv })
    }
}

/// Fraction-free (Bareiss) elimination with row pivoting.
pub fn det_bareiss(ctx: &ScalarContext, m: &Matrix) -> Result<Scalar> {
    let n = m.len();
    if n == 0 {
        return Ok(ctx.one());
    }
    let mut a = m.clone();
    let mut sign = false;
    let mut prev = ctx.one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                Some(r) => {
                    a.swap(k, r);
                    sign = !sign;
                }
                None => return Ok(ctx.zero()),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = ctx.sub(&ctx.mul(&a[k][k], &a[i][j]), &ctx.mul(&a[i][k], &a[k][j]));
                a[i][j] = ctx.div(&num, &prev)?;
            }
            a[i][k] = ctx.zero();
        }
        prev = a[k][k].clone();
    }
    let d = a[n - 1][n - 1].clone();
    Ok(if sign { ctx.neg(&d) } else { d })
}

/// Laplace expansion along the first row.
pub fn det_cofactor(ctx: &ScalarContext, m: &Matrix) -> Scalar {
    let n = m.len();
    match n {
        0 => ctx.one(),
        1 => m[0][0].clone(),
        _ => {
            let mut acc = ctx.zero();
            for j in 0..n {
                if m[0][j].is_zero() {
                    continue;
                }
                let t = ctx.mul(&m[0][j], &det_cofactor(ctx, &minor(m, 0, j)));
                acc = if j % 2 == 0 { ctx.add(&acc, &t) } else { ctx.sub(&acc, &t) };
            }
            acc
        }
    }
}

fn minor(m: &Matrix, row: usize, col: usize) -> Matrix {
    m.iter()
        .enumerate()
        .filter(|(i, _)| *i != row)
        .map(|(_, r)| r.iter().enumerate().filter(|(j, _)| *j != col).map(|(_, x)| x.clone()).collect())
        .collect()
}

/// `adj(A)_ij = (−1)^{i+j} det(A without row j, column i)`.
pub fn adjugate(ctx: &ScalarContext, m: &Matrix) -> Matrix {
    let n = m.len();
    if n == 1 {
        return vec![vec![ctx.one()]];
    }
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let d = det_cofactor(ctx, &minor(m, j, i));
                    if (i + j) % 2 == 0 {
                        d
                    } else {
                        ctx.neg(&d)
                    }
                })
                .collect()
        })
        .collect()
}

pub fn mat_mul(ctx: &ScalarContext, a: &Matrix, b: &Matrix) -> Matrix {
    let n = a.len();
    let m = b.first().map_or(0, Vec::len);
    (0..n)
        .map(|i| (0..m).map(|j| ctx.sum(&(0..b.len()).map(|k| ctx.mul(&a[i][k], &b[k][j])).collect::<Vec<_>>())).collect())
        .collect()
}

/// `q ↦ Q(q)`.
#[derive(Clone)]
pub struct PointMap {
    alg: Arc<AlgebraSpec>,
    targets: Vec<Scalar>,
    target_ctx: Arc<ScalarContext>,
    jac: JacobianMatrix,
}

impl fmt::Debug for PointMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PointMap({})", self.describe())
    }
}

impl PointMap {
    /// `alg` must be a differential-operator algebra over the source
    /// coordinates; `targets[i]` is `Q_i` in its scalar context.
    pub fn new<S: AsRef<str>>(alg: &Arc<AlgebraSpec>, target_names: &[S], targets: Vec<Scalar>) -> Result<Self> {
        alg.require_mode(Mode::WeylDiffOp)?;
        let ctx = alg.ctx();
        let n = ctx.ncoords();
        if targets.len() != n || target_names.len() != n {
            return Err(Error::Dimension(format!("{} target expressions for {} coordinates", targets.len(), n)));
        }
        let entries = targets.iter().map(|t| (0..n).map(|j| ctx.diff(t, j)).collect::<Result<Vec<_>>>()).collect::<Result<Matrix>>()?;
        let jac = JacobianMatrix::from_entries(ctx, entries)?;
        let target_ctx = Arc::new(ScalarContext::with_coordinates(target_names)?);
        Ok(PointMap { alg: alg.clone(), targets, target_ctx, jac })
    }

    /// Polynomial map over fresh coordinates `q1..qN`, momenta `p1..pN`.
    pub fn polynomial(targets: &[Poly]) -> Result<Self> {
        let n = targets.len();
        let names: Vec<String> = (1..=n).map(|i| format!("q{i}")).collect();
        let ctx = Arc::new(ScalarContext::with_coordinates(&names)?);
        let momenta: Vec<String> = (1..=n).map(|i| format!("p{i}")).collect();
        let alg = AlgebraSpec::diffop(ctx.clone(), Some(&momenta))?;
        let shift: Vec<usize> = (1..=n).collect();
        let vals = targets.iter().map(|p| ctx.from_poly(p.remap(n + 1, &shift))).collect();
        let tnames: Vec<String> = (1..=n).map(|i| format!("Q{i}")).collect();
        Self::new(&alg, &tnames, vals)
    }

    /// `(x, y) = (r c, r s)` over the polar context.
    pub fn polar() -> Self {
        let ctx = Arc::new(ScalarContext::polar());
        let alg = AlgebraSpec::diffop(ctx.clone(), None).expect("polar algebra");
        let r = ctx.symbol("r").unwrap();
        let x = ctx.mul(&r, &ctx.symbol("c").unwrap());
        let y = ctx.mul(&r, &ctx.symbol("s").unwrap());
        Self::new(&alg, &["x", "y"], vec![x, y]).expect("det = r")
    }

    pub fn alg(&self) -> &Arc<AlgebraSpec> {
        &self.alg
    }

    pub fn ctx(&self) -> &Arc<ScalarContext> {
        self.alg.ctx()
    }

    pub fn n(&self) -> usize {
        self.targets.len()
    }

    pub fn targets(&self) -> &[Scalar] {
        &self.targets
    }

    /// Context in which functions of the target coordinates are written.
    pub fn target_ctx(&self) -> &Arc<ScalarContext> {
        &self.target_ctx
    }

    pub fn jacobian(&self) -> &JacobianMatrix {
        &self.jac
    }

    pub fn describe(&self) -> String {
        let names = self.target_ctx.coordinate_names();
        self.targets.iter().zip(names).map(|(t, n)| format!("{n} = {}", self.ctx().format(t))).collect::<Vec<_>>().join(", ")
    }

    /// `f(Q(q))` for `f` written in the target coordinates.
    pub fn compose(&self, f: &Scalar) -> Result<Scalar> {
        self.ctx().compose(&self.target_ctx, f, &self.targets)
    }

    fn momentum(&self, a: usize) -> NCPoly {
        NCPoly::gen(&self.alg, a)
    }

    fn targets_nc(&self) -> Vec<NCPoly> {
        self.targets.iter().map(|t| NCPoly::scalar(&self.alg, t.clone())).collect()
    }
}

/// Convenience: `jacobian(Φ)`.
pub fn jacobian(map: &PointMap) -> &JacobianMatrix {
    map.jacobian()
}

#[derive(Clone, Debug, PartialEq)]
pub struct QuantumPair {
    pub p: Vec<NCPoly>,
    pub q: Vec<NCPoly>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ClassicalPair {
    pub p: Vec<CommutativeSymbol>,
    pub q: Vec<CommutativeSymbol>,
}

/// `P_i = Σ_α (J⁻¹)_{αi} p_α`, read commutatively.
pub fn classical_lift(map: &PointMap) -> Result<ClassicalPair> {
    gauge_lift_classical(map, &map.ctx().zero())
}

/// `P = (J⁻¹)^t (p − ∇f)`, `Q = Q(q)`.
pub fn gauge_lift_classical(map: &PointMap, f: &Scalar) -> Result<ClassicalPair> {
    let layout = map.alg.require_weyl()?;
    let ctx = map.ctx();
    let n = map.n();
    let inv = &map.jac.inv;
    let mut ps = Vec::with_capacity(n);
    for i in 0..n {
        let mut pi = CommutativeSymbol::zero(layout);
        for a in 0..n {
            let shifted = CommutativeSymbol::p(layout, a).sub(&CommutativeSymbol::scalar(layout, ctx.diff(f, a)?))?;
            pi = pi.add(&shifted.scale(&inv[a][i]))?;
        }
        ps.push(pi);
    }
    let qs = map.targets.iter().map(|t| CommutativeSymbol::scalar(layout, t.clone())).collect();
    Ok(ClassicalPair { p: ps, q: qs })
}

/// `Φ_r(p_i) = Σ_α (J⁻¹)_{αi} p_α`.
pub fn lift_right(map: &PointMap) -> Result<QuantumPair> {
    gauge_lift(map, &map.ctx().zero())
}

/// `Φ_ℓ(p_i) = Σ_α p_α (J⁻¹)_{αi}`, normalized.
pub fn lift_left(map: &PointMap) -> Result<QuantumPair> {
    let n = map.n();
    let mut ps = Vec::with_capacity(n);
    for i in 0..n {
        let mut pi = NCPoly::zero(&map.alg);
        for a in 0..n {
            let coeff = NCPoly::scalar(&map.alg, map.jac.inv[a][i].clone());
            pi = pi.checked_add(&map.momentum(a).checked_mul(&coeff)?)?;
        }
        ps.push(pi);
    }
    Ok(QuantumPair { p: ps, q: map.targets_nc() })
}

/// Right lift followed by the gauge shift `p ↦ p − ∇f`:
/// `P_i = Σ_α (J⁻¹)_{αi} (p_α − f,_α)`.
pub fn gauge_lift(map: &PointMap, f: &Scalar) -> Result<QuantumPair> {
    let ctx = map.ctx();
    let n = map.n();
    let grad: Vec<Scalar> = (0..n).map(|a| ctx.diff(f, a)).collect::<Result<_>>()?;
    let mut ps = Vec::with_capacity(n);
    for i in 0..n {
        let mut pi = NCPoly::zero(&map.alg);
        for a in 0..n {
            let inv = &map.jac.inv[a][i];
            pi.add_term(Word(vec![a]), inv.clone());
            pi.add_term(Word::empty(), ctx.neg(&ctx.mul(inv, &grad[a])));
        }
        ps.push(pi);
    }
    Ok(QuantumPair { p: ps, q: map.targets_nc() })
}

/// `Tr(J⁻¹ ∂J/∂q_i)`.
pub fn grad_log_det(map: &PointMap, i: usize) -> Result<Scalar> {
    let ctx = map.ctx();
    let j = &map.jac;
    let mut acc = ctx.zero();
    for a in 0..map.n() {
        for b in 0..map.n() {
            acc = ctx.add(&acc, &ctx.mul(&j.inv[a][b], &ctx.diff(&j.entries[b][a], i)?));
        }
    }
    Ok(acc)
}

/// The gradient of `ln det J` by three routes: `Tr(J⁻¹ J,_i)`,
/// `Tr(adj(J) J,_i)/det J`, and `(det J),_i / det J`.
pub fn grad_log_det_routes(map: &PointMap, i: usize) -> Result<[Scalar; 3]> {
    let ctx = map.ctx();
    let j = &map.jac;
    let trace = grad_log_det(map, i)?;
    let mut adj_trace = ctx.zero();
    for a in 0..map.n() {
        for b in 0..map.n() {
            adj_trace = ctx.add(&adj_trace, &ctx.mul(&j.adj[a][b], &ctx.diff(&j.entries[b][a], i)?));
        }
    }
    let via_adj = ctx.div(&adj_trace, &j.det)?;
    let direct = ctx.div(&ctx.diff(&j.det, i)?, &j.det)?;
    Ok([trace, via_adj, direct])
}

/// `Ψ(p_i) = Σ (J⁻¹)_{αβ} p_α J_{βi}` against `p_i + h (ln det J),_i`.
#[derive(Clone, Debug)]
pub struct PsiDefect {
    pub psi: Vec<NCPoly>,
    pub expected: Vec<NCPoly>,
    pub residual: Vec<NCPoly>,
}

impl PsiDefect {
    pub fn is_zero(&self) -> bool {
        self.residual.iter().all(NCPoly::is_zero)
    }
}

pub fn psi_defect(map: &PointMap) -> Result<PsiDefect> {
    let ctx = map.ctx();
    let n = map.n();
    let j = &map.jac;
    let (mut psi, mut expected, mut residual) = (Vec::new(), Vec::new(), Vec::new());
    for i in 0..n {
        let mut v = NCPoly::zero(&map.alg);
        for a in 0..n {
            for b in 0..n {
                let left = NCPoly::scalar(&map.alg, j.inv[a][b].clone());
                let right = NCPoly::scalar(&map.alg, j.entries[b][i].clone());
                v = v.checked_add(&left.checked_mul(&map.momentum(a))?.checked_mul(&right)?)?;
            }
        }
        let mut e = map.momentum(i);
        e.add_term(Word::empty(), ctx.mul(&ctx.h(), &grad_log_det(map, i)?));
        residual.push(v.checked_sub(&e)?);
        psi.push(v);
        expected.push(e);
    }
    Ok(PsiDefect { psi, expected, residual })
}

/// `Φ_r(p_i) − Φ_ℓ(p_i) − h Σ_α (J⁻¹)_{αi} (ln det J),_α`; zero for every map.
pub fn lift_difference_residual(map: &PointMap) -> Result<Vec<NCPoly>> {
    let ctx = map.ctx();
    let r = lift_right(map)?;
    let l = lift_left(map)?;
    let grads: Vec<Scalar> = (0..map.n()).map(|a| grad_log_det(map, a)).collect::<Result<_>>()?;
    (0..map.n())
        .map(|i| {
            let s = ctx.sum(&(0..map.n()).map(|a| ctx.mul(&map.jac.inv[a][i], &grads[a])).collect::<Vec<_>>());
            let expected = NCPoly::scalar(&map.alg, ctx.mul(&ctx.h(), &s));
            r.p[i].checked_sub(&l.p[i])?.checked_sub(&expected)
        })
        .collect()
}

/// One named commutator or bracket residual.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Residual {
    pub label: String,
    pub value: String,
    pub zero: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct CanonicalReport {
    pub residuals: Vec<Residual>,
}

impl CanonicalReport {
    pub fn is_canonical(&self) -> bool {
        self.residuals.iter().all(|r| r.zero)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Residual> {
        self.residuals.iter().filter(|r| !r.zero)
    }
}

/// Residuals of `[Q_i,Q_j]`, `[P_i,P_j]` and `[P_i,Q_j] − hδ_ij`.
pub fn check_canonical_quantum(pair: &QuantumPair) -> Result<CanonicalReport> {
    let n = pair.p.len();
    if pair.q.len() != n {
        return Err(Error::Dimension(format!("{} momenta and {} coordinates", n, pair.q.len())));
    }
    let Some(first) = pair.p.first().or(pair.q.first()) else {
        return Ok(CanonicalReport::default());
    };
    let alg = first.alg().clone();
    let mut report = CanonicalReport::default();
    let mut push = |label: String, v: NCPoly| {
        report.residuals.push(Residual { label, zero: v.is_zero(), value: v.format() });
    };
    for i in 0..n {
        for j in i + 1..n {
            push(format!("[Q{},Q{}]", i + 1, j + 1), pair.q[i].commutator(&pair.q[j])?);
            push(format!("[P{},P{}]", i + 1, j + 1), pair.p[i].commutator(&pair.p[j])?);
        }
    }
    for i in 0..n {
        for j in 0..n {
            let mut v = pair.p[i].commutator(&pair.q[j])?;
            if i == j {
                v = v.checked_sub(&NCPoly::h(&alg))?;
            }
            push(format!("[P{},Q{}] - h*delta", i + 1, j + 1), v);
        }
    }
    Ok(report)
}

/// Residuals of `{Q_i,Q_j}`, `{P_i,P_j}` and `{P_i,Q_j} − δ_ij`.
pub fn check_canonical_classical(pair: &ClassicalPair) -> Result<CanonicalReport> {
    let n = pair.p.len();
    if pair.q.len() != n {
        return Err(Error::Dimension(format!("{} momenta and {} coordinates", n, pair.q.len())));
    }
    let mut report = CanonicalReport::default();
    let mut push = |label: String, v: CommutativeSymbol| {
        report.residuals.push(Residual { label, zero: v.is_zero(), value: v.format() });
    };
    for i in 0..n {
        for j in i + 1..n {
            push(format!("{{Q{},Q{}}}", i + 1, j + 1), poisson(&pair.q[i], &pair.q[j])?);
            push(format!("{{P{},P{}}}", i + 1, j + 1), poisson(&pair.p[i], &pair.p[j])?);
        }
    }
    for i in 0..n {
        for j in 0..n {
            let mut v = poisson(&pair.p[i], &pair.q[j])?;
            if i == j {
                v = v.sub(&v.constant_like(v.ctx().one()))?;
            }
            push(format!("{{P{},Q{}}} - delta", i + 1, j + 1), v);
        }
    }
    Ok(report)
}

/// `H^{ℓr} = Σ P^ℓ_i a^{ij}(Q) P^r_j + V(Q)` and
/// `H^{rℓ} = Σ P^r_i a^{ij}(Q) P^ℓ_j + V(Q)`.
pub fn mechanical_lr(map: &PointMap, a: &Matrix, v: &Scalar) -> Result<(NCPoly, NCPoly)> {
    let n = map.n();
    check_symmetric(map, a)?;
    let left = lift_left(map)?;
    let right = lift_right(map)?;
    let vq = NCPoly::scalar(&map.alg, map.compose(v)?);
    let mut hlr = vq.clone();
    let mut hrl = vq;
    for i in 0..n {
        for j in 0..n {
            let aij = map.compose(&a[i][j])?;
            if aij.is_zero() {
                continue;
            }
            let aij = NCPoly::scalar(&map.alg, aij);
            hlr = hlr.checked_add(&left.p[i].checked_mul(&aij)?.checked_mul(&right.p[j])?)?;
            hrl = hrl.checked_add(&right.p[i].checked_mul(&aij)?.checked_mul(&left.p[j])?)?;
        }
    }
    Ok((hlr, hrl))
}

fn check_symmetric(map: &PointMap, a: &Matrix) -> Result<()> {
    let n = map.n();
    if a.len() != n || a.iter().any(|r| r.len() != n) {
        return Err(Error::Dimension(format!("coefficient matrix must be {n}x{n}")));
    }
    let tctx = map.target_ctx();
    for i in 0..n {
        for j in 0..n {
            if !tctx.equal(&a[i][j], &a[j][i]) {
                return Err(Error::Malformed("coefficient matrix is not symmetric".into()));
            }
        }
    }
    Ok(())
}

pub fn identity_matrix(ctx: &ScalarContext, n: usize) -> Matrix {
    (0..n).map(|i| (0..n).map(|j| if i == j { ctx.one() } else { ctx.zero() }).collect()).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

/// `Σ_i P_i P_i` for the chosen lift, and its defect `H − H†`.
pub fn naive_transformed_hamiltonian(map: &PointMap, side: Side) -> Result<(NCPoly, NCPoly)> {
    let pair = match side {
        Side::Left => lift_left(map)?,
        Side::Right => lift_right(map)?,
    };
    let mut h = NCPoly::zero(&map.alg);
    for p in &pair.p {
        h = h.checked_add(&p.checked_mul(p)?)?;
    }
    let defect = h.checked_sub(&dagger(&h)?)?;
    Ok((h, defect))
}

/// Both routes to `h⁻²(H^{ℓr} − H^{rℓ})`.
#[derive(Clone, Debug)]
pub struct LrDifference {
    pub direct: NCPoly,
    pub closed_form: NCPoly,
    pub residual: NCPoly,
    /// `−Σ_μ (J⁻¹)_{μj,μ} − Σ_ψ (ln det J),_ψ (J⁻¹)_{ψj}` for each `j`.
    pub divergence_identity: Vec<Scalar>,
}

impl LrDifference {
    pub fn agrees(&self) -> bool {
        self.residual.is_zero() && self.divergence_identity.iter().all(Scalar::is_zero)
    }
}

pub fn lr_difference(map: &PointMap, a: &Matrix) -> Result<LrDifference> {
    let ctx = map.ctx();
    let n = map.n();
    let (hlr, hrl) = mechanical_lr(map, a, &map.target_ctx.zero())?;
    let direct = hlr.checked_sub(&hrl)?.div_h_power(2)?;
    let inv = &map.jac.inv;
    let grads: Vec<Scalar> = (0..n).map(|k| grad_log_det(map, k)).collect::<Result<_>>()?;
    let aq: Vec<Vec<Scalar>> = a.iter().map(|r| r.iter().map(|x| map.compose(x)).collect::<Result<_>>()).collect::<Result<_>>()?;
    let mut closed = ctx.zero();
    for b in 0..n {
        for i in 0..n {
            let mut inner = ctx.zero();
            for j in 0..n {
                for psi in 0..n {
                    inner = ctx.add(&inner, &ctx.mul(&ctx.mul(&grads[psi], &inv[psi][j]), &aq[i][j]));
                }
            }
            closed = ctx.add(&closed, &ctx.mul(&inv[b][i], &ctx.diff(&inner, b)?));
        }
    }
    let closed_form = NCPoly::scalar(&map.alg, closed);
    let residual = direct.checked_sub(&closed_form)?;
    let mut divergence_identity = Vec::with_capacity(n);
    for j in 0..n {
        let mut lhs = ctx.zero();
        for mu in 0..n {
            lhs = ctx.sub(&lhs, &ctx.diff(&inv[mu][j], mu)?);
        }
        let rhs = ctx.sum(&(0..n).map(|psi| ctx.mul(&grads[psi], &inv[psi][j])).collect::<Vec<_>>());
        divergence_identity.push(ctx.sub(&lhs, &rhs));
    }
    Ok(LrDifference { direct, closed_form, residual, divergence_identity })
}

/// Outcome of the bounded inverse search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum InverseSearch {
    Found(Vec<Poly>),
    /// No inverse of degree at most the bound; says nothing beyond it.
    NoneUpTo(u32),
}

/// Searches for polynomials `G_i` of degree at most `bound` with
/// `G_i(F_1, …, F_m) = x_i`. All polynomials are in `m` variables.
pub fn attempt_inverse_polys(f: &[Poly], bound: u32) -> Result<InverseSearch> {
    if bound < 1 {
        return Err(Error::DegreeBound);
    }
    let m = f.len();
    if f.iter().any(|p| p.nvars() != m) {
        return Err(Error::Dimension("each component must use exactly the map's variables".into()));
    }
    let monos = monomials_up_to(m, bound);
    // Column k holds F^{monos[k]}, expanded in the source variables.
    let mut cols: Vec<Poly> = Vec::with_capacity(monos.len());
    for mono in &monos {
        let mut acc = Poly::one(m);
        for (i, &e) in mono.exponents().iter().enumerate() {
            if e > 0 {
                acc = &acc * &f[i].pow(e);
            }
        }
        cols.push(acc);
    }
    let mut rows: Vec<Monomial> = cols.iter().flat_map(|c| c.terms().map(|(mo, _)| mo.clone())).collect();
    for i in 0..m {
        rows.push(Monomial::var(m, i));
    }
    rows.sort();
    rows.dedup();
    let mut system: Vec<Vec<Rational>> = rows
        .iter()
        .map(|r| {
            let mut row: Vec<Rational> = cols.iter().map(|c| c.coeff(r)).collect();
            for i in 0..m {
                row.push(if *r == Monomial::var(m, i) { Rational::one() } else { Rational::zero() });
            }
            row
        })
        .collect();
    let pivots = rref(&mut system, monos.len());
    let mut out = Vec::with_capacity(m);
    for i in 0..m {
        let rhs = monos.len() + i;
        if system.iter().any(|row| row[..monos.len()].iter().all(Zero::is_zero) && !row[rhs].is_zero()) {
            return Ok(InverseSearch::NoneUpTo(bound));
        }
        let mut g = Poly::zero(m);
        for (r, &col) in pivots.iter().enumerate() {
            g.add_term(monos[col].clone(), system[r][rhs].clone());
        }
        out.push(g);
    }
    if !compose_polys(&out, f).iter().enumerate().all(|(i, p)| *p == Poly::var(m, i)) {
        return Ok(InverseSearch::NoneUpTo(bound));
    }
    Ok(InverseSearch::Found(out))
}

/// `G(F)`: substitutes `f` into each `g`.
pub fn compose_polys(g: &[Poly], f: &[Poly]) -> Vec<Poly> {
    let m = f.first().map_or(0, Poly::nvars);
    g.iter()
        .map(|gi| {
            let mut acc = Poly::zero(m);
            for (mono, c) in gi.terms() {
                let mut t = Poly::constant(m, c.clone());
                for (i, &e) in mono.exponents().iter().enumerate() {
                    if e > 0 {
                        t = &t * &f[i].pow(e);
                    }
                }
                acc = &acc + &t;
            }
            acc
        })
        .collect()
}

/// Monomials of total degree at most `bound`, ascending in degree and
/// then ascending in the monomial order.
fn monomials_up_to(m: usize, bound: u32) -> Vec<Monomial> {
    let mut out = Vec::new();
    for d in 0..=bound {
        let mut level: Vec<Monomial> = crate::brackets::compositions(m, d).into_iter().map(Monomial::from_exponents).collect();
        level.sort();
        out.extend(level);
    }
    out
}

/// Reduced row echelon form over the first `ncols` columns; returns the
/// pivot column of each nonzero row.
fn rref(a: &mut Vec<Vec<Rational>>, ncols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..a.len()).find(|&i| !a[i][c].is_zero()) else { continue };
        a.swap(r, p);
        let inv = Rational::one() / a[r][c].clone();
        for x in a[r].iter_mut() {
            *x = &*x * &inv;
        }
        for i in 0..a.len() {
            if i != r && !a[i][c].is_zero() {
                let k = a[i][c].clone();
                let pivot_row = a[r].clone();
                for (x, y) in a[i].iter_mut().zip(pivot_row) {
                    *x -= &k * y;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == a.len() {
            break;
        }
    }
    pivots
}

/// Strips a point map down to polynomials in its coordinates.
pub fn map_polys(map: &PointMap) -> Result<Vec<Poly>> {
    let ctx = map.ctx();
    let n = map.n();
    let mut idx = vec![0usize; ctx.nvars()];
    for i in 0..n {
        idx[1 + i] = i;
    }
    map.targets
        .iter()
        .map(|t| {
            let poly_ok = t.denom().is_constant()
                && !t.numer().contains_var(ScalarContext::H)
                && (1 + n..ctx.nvars()).all(|v| !t.numer().contains_var(v));
            if !poly_ok {
                return Err(Error::NotPolynomial(ctx.format(t)));
            }
            let den = t.denom().constant_term();
            Ok(t.numer().remap(n, &idx).scale(&(Rational::one() / den)))
        })
        .collect()
}

pub fn attempt_inverse(map: &PointMap, bound: u32) -> Result<InverseSearch> {
    attempt_inverse_polys(&map_polys(map)?, bound)
}

/// Inverse of a classical candidate pair with polynomial components, in
/// the variables `(q_1..q_N, p_1..p_N)`.
pub fn attempt_inverse_pair(pair: &ClassicalPair, bound: u32) -> Result<InverseSearch> {
    let n = pair.p.len();
    let mut polys = Vec::with_capacity(2 * n);
    for s in pair.q.iter().chain(&pair.p) {
        polys.push(symbol_to_poly(s, n)?);
    }
    attempt_inverse_polys(&polys, bound)
}

/// A polynomial symbol as a polynomial in `(q_1..q_N, p_1..p_N)`.
pub fn symbol_to_poly(s: &CommutativeSymbol, n: usize) -> Result<Poly> {
    let ctx = s.ctx();
    let mut out = Poly::zero(2 * n);
    for (pm, c) in s.terms() {
        if !c.denom().is_constant() || c.numer().contains_var(ScalarContext::H) || (1 + n..ctx.nvars()).any(|v| c.numer().contains_var(v)) {
            return Err(Error::NotPolynomial(ctx.format(c)));
        }
        let dinv = Rational::one() / c.denom().constant_term();
        for (qm, k) in c.numer().terms() {
            let mut e = vec![0u32; 2 * n];
            for i in 0..n {
                e[i] = qm.exp(1 + i);
                e[n + i] = pm.exp(i);
            }
            out.add_term(Monomial::from_exponents(e), k * &dinv);
        }
    }
    Ok(out)
}

pub fn format_inverse(g: &[Poly], names: &[String]) -> Vec<String> {
    g.iter().map(|p| format_poly(p, names)).collect()
}

/// Operator-valued Jacobian `∂~F_i/∂x_j` together with the variational
/// matrix of cyclic derivatives.
#[derive(Clone, Debug)]
pub struct NcJacobian {
    pub f: Vec<NCPoly>,
    pub variational: Vec<Vec<NCPoly>>,
}

impl NcJacobian {
    /// `∂~F_i/∂x_j (x)`.
    pub fn apply(&self, i: usize, j: usize, x: &NCPoly) -> Result<NCPoly> {
        op_partial(&self.f[i], j, x)
    }
}

pub fn nc_jacobian(f: &[NCPoly]) -> Result<NcJacobian> {
    let Some(first) = f.first() else {
        return Ok(NcJacobian { f: Vec::new(), variational: Vec::new() });
    };
    let alg = first.alg().clone();
    alg.require_mode(Mode::Free)?;
    let variational = f
        .iter()
        .map(|fi| (0..alg.ngens()).map(|j| crate::calculus::cyclic_variational(fi, j)).collect::<Result<Vec<_>>>())
        .collect::<Result<_>>()?;
    Ok(NcJacobian { f: f.to_vec(), variational })
}

/// Commutative image of a free-algebra element with constant coefficients.
pub fn abelianize(x: &NCPoly) -> Result<Poly> {
    let m = x.alg().ngens();
    let mut out = Poly::zero(m);
    for (w, c) in x.terms() {
        let k = c.as_constant().ok_or_else(|| Error::NotPolynomial(x.ctx().format(c)))?;
        let mut e = vec![0u32; m];
        for &g in w.letters() {
            e[g] += 1;
        }
        out.add_term(Monomial::from_exponents(e), k);
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Test-map corpus

fn poly_var(n: usize, i: usize) -> Poly {
    Poly::var(n, i)
}

/// `A·q` for an integer matrix.
pub fn linear_polys(a: &[Vec<i64>]) -> Vec<Poly> {
    let n = a.len();
    a.iter()
        .map(|row| {
            let mut p = Poly::zero(n);
            for (j, &k) in row.iter().enumerate() {
                if k != 0 {
                    p = &p + &poly_var(n, j).scale(&int(k));
                }
            }
            p
        })
        .collect()
}

/// A random unimodular integer matrix: a signed permutation times
/// elementary row operations.
pub fn random_unimodular<R: Rng>(rng: &mut R, n: usize) -> Vec<Vec<i64>> {
    let mut a: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect();
    for _ in 0..(2 * n) {
        if n < 2 {
            break;
        }
        let i = rng.gen_range(0..n);
        let mut j = rng.gen_range(0..n);
        if i == j {
            j = (j + 1) % n;
        }
        let k = rng.gen_range(-2..=2);
        for c in 0..n {
            a[i][c] += k * a[j][c];
        }
    }
    if rng.gen_bool(0.5) {
        a[0].iter_mut().for_each(|x| *x = -*x);
    }
    a
}

/// `q_i ↦ q_i + f_i(q_1..q_{i−1})` with small random `f_i` of degree ≤ `deg`.
pub fn random_triangular<R: Rng>(rng: &mut R, n: usize, deg: u32) -> Vec<Poly> {
    (0..n)
        .map(|i| {
            let mut p = poly_var(n, i);
            if i > 0 {
                for _ in 0..rng.gen_range(1..=2) {
                    let mut e = vec![0u32; n];
                    let d = rng.gen_range(1..=deg.max(1));
                    for _ in 0..d {
                        e[rng.gen_range(0..i)] += 1;
                    }
                    let k = [-2, -1, 1, 2][rng.gen_range(0..4)];
                    p.add_term(Monomial::from_exponents(e), int(k));
                }
            }
            p
        })
        .collect()
}

/// Composite `L ∘ T` of a unimodular linear map and a triangular map.
pub fn random_tame<R: Rng>(rng: &mut R, n: usize, deg: u32) -> Vec<Poly> {
    let t = random_triangular(rng, n, deg);
    let l = linear_polys(&random_unimodular(rng, n));
    compose_polys(&l, &t)
}

/// Deterministic corpus: linear, triangular, composite and non-unimodular
/// polynomial maps plus the polar map.
pub fn corpus() -> Vec<PointMap> {
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(2024);
    let mut out = vec![PointMap::polar()];
    let x = |n, i| poly_var(n, i);
    let fixed: Vec<Vec<Poly>> = vec![
        vec![&x(1, 0).pow(3) + &x(1, 0)],
        vec![x(1, 0).scale(&int(3))],
        vec![&x(2, 0).pow(2) + &x(2, 0), x(2, 1)],
        vec![x(2, 0).pow(3), &x(2, 1) + &x(2, 0)],
        vec![&(&x(2, 0) * &x(2, 1)) + &x(2, 0), x(2, 1)],
        vec![&x(2, 0) + &x(2, 1).pow(2), &x(2, 1) + &x(2, 1).pow(3)],
        vec![x(3, 0), &x(3, 1) + &x(3, 0).pow(2), &x(3, 2) + &(&x(3, 0) * &x(3, 1))],
    ];
    for f in fixed {
        out.push(PointMap::polynomial(&f).expect("corpus maps are invertible"));
    }
    for k in 0..14 {
        let n = 2 + k % 2;
        let f = match k % 3 {
            0 => linear_polys(&random_unimodular(&mut rng, n)),
            1 => random_triangular(&mut rng, n, 3),
            _ => random_tame(&mut rng, n, 2),
        };
        out.push(PointMap::polynomial(&f).expect("tame maps are invertible"));
    }
    out
}
