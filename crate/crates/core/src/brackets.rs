//! Commutators against Poisson brackets: symbols and normal quantization,
//! the θ-coefficient and paired-operator expansions of `h⁻¹[H, F]`, the
//! normal star product, the dagger antiinvolution and the residue form.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_traits::{One, Zero};

use crate::calculus::partial;
use crate::error::{Error, Result};
use crate::ncalg::{factorial, normalize, AlgebraSpec, Factor, Mode, NCPoly, RawTerm, Var, WeylLayout, Word};
use crate::poly::{format_monomial, int, join_terms, Monomial, Poly, Rational};
use crate::scalar::{Scalar, ScalarContext};

/// Commutative polynomial in the momenta with coefficients in the
/// phase-space scalar context (whose coordinates are the `q_i`).
#[derive(Clone, PartialEq, Eq)]
pub struct CommutativeSymbol {
    ctx: Arc<ScalarContext>,
    momenta: Arc<Vec<String>>,
    terms: BTreeMap<Monomial, Scalar>,
}

impl CommutativeSymbol {
    pub fn zero(layout: &WeylLayout) -> Self {
        CommutativeSymbol {
            ctx: layout.phase.clone(),
            momenta: Arc::new(layout.momentum_names.clone()),
            terms: BTreeMap::new(),
        }
    }

    fn empty_like(&self) -> Self {
        CommutativeSymbol { ctx: self.ctx.clone(), momenta: self.momenta.clone(), terms: BTreeMap::new() }
    }

    pub fn scalar(layout: &WeylLayout, s: Scalar) -> Self {
        let mut out = Self::zero(layout);
        out.add_term(Monomial::one(layout.n()), s);
        out
    }

    pub fn q(layout: &WeylLayout, i: usize) -> Self {
        Self::scalar(layout, layout.phase.coordinate(i))
    }

    pub fn p(layout: &WeylLayout, i: usize) -> Self {
        let mut out = Self::zero(layout);
        out.add_term(Monomial::var(layout.n(), i), layout.phase.one());
        out
    }

    /// The scalar `s` as a symbol over the same phase space.
    pub fn constant_like(&self, s: Scalar) -> Self {
        let mut out = self.empty_like();
        out.add_term(Monomial::one(self.n()), s);
        out
    }

    pub fn ctx(&self) -> &Arc<ScalarContext> {
        &self.ctx
    }

    pub fn momentum_names(&self) -> &[String] {
        &self.momenta
    }

    pub fn n(&self) -> usize {
        self.momenta.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms by descending momentum monomial.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Scalar)> {
        self.terms.iter().rev()
    }

    pub fn add_term(&mut self, m: Monomial, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(x) => {
                *x = self.ctx.add(x, &c);
                if x.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if self.ctx == other.ctx && self.momenta == other.momenta {
            Ok(())
        } else {
            Err(Error::SpecMismatch)
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn neg(&self) -> Self {
        self.scale(&self.ctx.integer(-1))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn scale(&self, s: &Scalar) -> Self {
        let mut out = self.empty_like();
        for (m, c) in &self.terms {
            out.add_term(m.clone(), self.ctx.mul(c, s));
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let mut out = self.empty_like();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(ma.mul(mb), self.ctx.mul(ca, cb));
            }
        }
        Ok(out)
    }

    pub fn diff_p(&self, i: usize) -> Self {
        let mut out = self.empty_like();
        for (m, c) in &self.terms {
            let e = m.exp(i);
            if e > 0 {
                out.add_term(m.with_exp(i, e - 1), self.ctx.scale(c, &int(e as i64)));
            }
        }
        out
    }

    pub fn diff_q(&self, i: usize) -> Result<Self> {
        let mut out = self.empty_like();
        for (m, c) in &self.terms {
            out.add_term(m.clone(), self.ctx.diff(c, i)?);
        }
        Ok(out)
    }

    pub fn at_h_zero(&self) -> Result<Self> {
        let mut out = self.empty_like();
        for (m, c) in &self.terms {
            out.add_term(m.clone(), self.ctx.at_h_zero(c)?);
        }
        Ok(out)
    }

    /// Highest total momentum degree.
    pub fn p_degree(&self) -> u32 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    pub fn format(&self) -> String {
        let mut parts = Vec::new();
        for (m, c) in self.terms() {
            let e: Vec<i64> = m.exponents().iter().map(|&x| x as i64).collect();
            let Some(mono) = format_monomial(&e, &self.momenta) else {
                parts.extend(self.ctx.format_parts(c));
                continue;
            };
            let (neg, body) = self.ctx.format_signed(c);
            parts.push(if body == "1" { (neg, mono) } else { (neg, format!("{body}*{mono}")) });
        }
        join_terms(parts)
    }
}

impl fmt::Display for CommutativeSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.format())
    }
}

impl fmt::Debug for CommutativeSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Symbol({})", self.format())
    }
}

/// `{H, F} = Σ_i ∂H/∂p_i ∂F/∂q_i − ∂H/∂q_i ∂F/∂p_i`.
pub fn poisson(a: &CommutativeSymbol, b: &CommutativeSymbol) -> Result<CommutativeSymbol> {
    a.check_same(b)?;
    let mut out = a.empty_like();
    for i in 0..a.n() {
        out = out.add(&a.diff_p(i).mul(&b.diff_q(i)?)?)?;
        out = out.sub(&a.diff_q(i)?.mul(&b.diff_p(i))?)?;
    }
    Ok(out)
}

/// Coefficient of a constant-mode Weyl element (a function of `h` only)
/// moved into the phase-space context.
fn bare_to_phase(layout: &WeylLayout, c: &Scalar) -> Result<Scalar> {
    let nv = layout.phase.nvars();
    layout.phase.from_fraction(c.numer().remap(nv, &[0]), c.denom().remap(nv, &[0]))
}

fn q_index(layout: &WeylLayout, g: usize) -> Option<usize> {
    layout.q.iter().position(|v| *v == Var::Gen(g))
}

fn p_index(layout: &WeylLayout, g: usize) -> Option<usize> {
    layout.p.iter().position(|v| *v == Var::Gen(g))
}

/// Reads a normal-ordered element as a commutative symbol, keeping `h`.
pub fn normal_symbol(x: &NCPoly) -> Result<CommutativeSymbol> {
    let alg = x.alg();
    let layout = alg.require_weyl()?;
    let phase = &layout.phase;
    let n = layout.n();
    let mut out = CommutativeSymbol::zero(layout);
    for (w, c) in x.terms() {
        let mut pe = vec![0u32; n];
        let mut coeff = if alg.mode() == Mode::WeylDiffOp { c.clone() } else { bare_to_phase(layout, c)? };
        for &g in w.letters() {
            if let Some(i) = p_index(layout, g) {
                pe[i] += 1;
            } else if let Some(i) = q_index(layout, g) {
                coeff = phase.mul(&coeff, &phase.coordinate(i));
            }
        }
        out.add_term(Monomial::from_exponents(pe), coeff);
    }
    Ok(out)
}

/// The symbol of `H`: normal form read commutatively at `h = 0`.
pub fn smbl(x: &NCPoly) -> Result<CommutativeSymbol> {
    normal_symbol(x)?.at_h_zero()
}

/// Normal quantization: `q^σ p^τ` becomes the word with all `q`s left.
pub fn normal_quantize(a: &CommutativeSymbol, alg: &Arc<AlgebraSpec>) -> Result<NCPoly> {
    let layout = alg.require_weyl()?;
    if a.ctx != layout.phase || a.n() != layout.n() {
        return Err(Error::SpecMismatch);
    }
    let mut out = NCPoly::zero(alg);
    let p_word = |m: &Monomial| -> Vec<usize> {
        let mut w = Vec::new();
        for (i, &e) in m.exponents().iter().enumerate() {
            let Var::Gen(g) = layout.p[i] else { unreachable!("momenta are generators") };
            w.extend(std::iter::repeat_n(g, e as usize));
        }
        w
    };
    if alg.mode() == Mode::WeylDiffOp {
        for (m, c) in a.terms() {
            let mut w = p_word(m);
            w.sort_unstable();
            out.add_term(Word(w), c.clone());
        }
        return Ok(out);
    }
    let bare = alg.ctx();
    let nq = layout.n();
    for (m, c) in a.terms() {
        if (1..=nq).any(|v| c.denom().contains_var(v)) {
            return Err(Error::NotPolynomial(format!("{} is not polynomial in the coordinates", a.ctx.format(c))));
        }
        let den = c.denom().remap(1, &vec![0; c.nvars()]);
        for (mono, k) in c.numer().terms() {
            let h_part = Poly::term(Monomial::from_exponents(vec![mono.exp(0)]), k.clone());
            let coeff = bare.from_fraction(h_part, den.clone())?;
            let mut w = Vec::new();
            for i in 0..nq {
                let Var::Gen(g) = layout.q[i] else { unreachable!("coordinates are generators") };
                w.extend(std::iter::repeat_n(g, mono.exp(1 + i) as usize));
            }
            w.extend(p_word(m));
            w.sort_unstable();
            out.add_term(Word(w), coeff);
        }
    }
    Ok(out)
}

pub(crate) fn compositions(n: usize, s: u32) -> Vec<Vec<u32>> {
    if n == 0 {
        return if s == 0 { vec![Vec::new()] } else { Vec::new() };
    }
    let mut out = Vec::new();
    for first in (0..=s).rev() {
        for mut rest in compositions(n - 1, s - first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

fn multi_factorial(k: &[u32]) -> Rational {
    k.iter().fold(Rational::one(), |acc, &x| acc * factorial(x))
}

/// `a ⋆ b = Σ_κ h^{|κ|}/κ! ∂_p^κ a ∂_q^κ b`, the commutative image of
/// the normal-ordered product.
pub fn star_normal(a: &CommutativeSymbol, b: &CommutativeSymbol) -> Result<CommutativeSymbol> {
    a.check_same(b)?;
    let ctx = a.ctx.clone();
    let mut out = a.empty_like();
    for s in 0..=a.p_degree() {
        let hs = ctx.pow(&ctx.h(), s as i64)?;
        for kappa in compositions(a.n(), s) {
            let mut da = a.clone();
            let mut db = b.clone();
            for (i, &k) in kappa.iter().enumerate() {
                for _ in 0..k {
                    da = da.diff_p(i);
                    db = db.diff_q(i)?;
                }
            }
            if da.is_zero() || db.is_zero() {
                continue;
            }
            let w = ctx.scale(&hs, &(Rational::one() / multi_factorial(&kappa)));
            out = out.add(&da.mul(&db)?.scale(&w))?;
        }
    }
    Ok(out)
}

/// Largest number of momentum letters in a word.
fn p_degree(x: &NCPoly) -> Result<u32> {
    let layout = x.alg().require_weyl()?;
    Ok(x.terms().map(|(w, _)| w.letters().iter().filter(|&&g| p_index(layout, g).is_some()).count() as u32).max().unwrap_or(0))
}

fn iterated(x: &NCPoly, vars: &[Var], kappa: &[u32]) -> Result<NCPoly> {
    let mut out = x.clone();
    for (v, &k) in vars.iter().zip(kappa) {
        for _ in 0..k {
            if out.is_zero() {
                return Ok(out);
            }
            out = partial(&out, *v)?;
        }
    }
    Ok(out)
}

/// `(𝒪_HF)^s (HF) / s! = Σ_{|κ|=s} (1/κ!) ∂_p^κ H · ∂_q^κ F`.
fn o_power_over_factorial(a: &NCPoly, b: &NCPoly, s: u32) -> Result<NCPoly> {
    let layout = a.alg().require_weyl()?;
    let mut out = NCPoly::zero(a.alg());
    for kappa in compositions(layout.n(), s) {
        let da = iterated(a, &layout.p, &kappa)?;
        if da.is_zero() {
            continue;
        }
        let db = iterated(b, &layout.q, &kappa)?;
        if db.is_zero() {
            continue;
        }
        let w = Rational::one() / multi_factorial(&kappa);
        out = out.checked_add(&da.checked_mul(&db)?.scale_rational(&w))?;
    }
    Ok(out)
}

fn minus_h_power(ctx: &ScalarContext, k: u32) -> Result<Scalar> {
    ctx.pow(&ctx.neg(&ctx.h()), k as i64)
}

/// `Σ_{s≥1} (−h)^{s−1}/s! ((𝒪_HF)^s(HF) − (𝒪_FH)^s(FH))`.
pub fn bracket_expansion_pair(a: &NCPoly, b: &NCPoly) -> Result<NCPoly> {
    let alg = a.alg().clone();
    alg.require_weyl()?;
    if !crate::ncalg::same_alg(&alg, b.alg()) {
        return Err(Error::SpecMismatch);
    }
    let ctx = alg.ctx();
    let top = p_degree(a)?.max(p_degree(b)?);
    let mut out = NCPoly::zero(&alg);
    for s in 1..=top {
        let term = o_power_over_factorial(a, b, s)?.checked_sub(&o_power_over_factorial(b, a, s)?)?;
        out = out.checked_add(&term.scale(&minus_h_power(ctx, s - 1)?))?;
    }
    Ok(out)
}

/// `(H, F) = Σ_{s≥0} (−h)^s/s! (𝒪_HF)^s(HF)`.
pub fn symmetric_form(a: &NCPoly, b: &NCPoly) -> Result<NCPoly> {
    let alg = a.alg().clone();
    alg.require_weyl()?;
    if !crate::ncalg::same_alg(&alg, b.alg()) {
        return Err(Error::SpecMismatch);
    }
    let ctx = alg.ctx();
    let mut out = NCPoly::zero(&alg);
    for s in 0..=p_degree(a)? {
        let term = o_power_over_factorial(a, b, s)?;
        out = out.checked_add(&term.scale(&minus_h_power(ctx, s)?))?;
    }
    Ok(out)
}

/// `θ_{σσ'}`: coefficient of `λ^σ μ^σ'` in `(Σ c_ij λ_i μ_j)^s`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThetaTable {
    pub m: usize,
    pub s_max: u32,
    pub entries: BTreeMap<(Vec<u32>, Vec<u32>), Rational>,
}

impl ThetaTable {
    pub fn get(&self, sigma: &[u32], sigma2: &[u32]) -> Rational {
        self.entries.get(&(sigma.to_vec(), sigma2.to_vec())).cloned().unwrap_or_else(Rational::zero)
    }
}

pub fn theta_table(c: &[Vec<Rational>], s_max: u32) -> Result<ThetaTable> {
    let m = c.len();
    for i in 0..m {
        if c[i].len() != m {
            return Err(Error::InvalidAlgebra(format!("commutator table must be {m}x{m}")));
        }
        for j in 0..m {
            if c[i][j] != -c[j][i].clone() {
                return Err(Error::InvalidAlgebra(format!("table is not antisymmetric at ({i}, {j})")));
            }
        }
    }
    // λ_i is variable i, μ_j is variable m + j.
    let nv = 2 * m;
    let mut pairing = Poly::zero(nv);
    for i in 0..m {
        for j in 0..m {
            if !c[i][j].is_zero() {
                let mut e = vec![0u32; nv];
                e[i] += 1;
                e[m + j] += 1;
                pairing.add_term(Monomial::from_exponents(e), c[i][j].clone());
            }
        }
    }
    let mut entries = BTreeMap::new();
    let mut power = Poly::one(nv);
    for _ in 1..=s_max {
        power = &power * &pairing;
        for (mono, k) in power.terms() {
            let e = mono.exponents();
            entries.insert((e[..m].to_vec(), e[m..].to_vec()), k.clone());
        }
    }
    Ok(ThetaTable { m, s_max, entries })
}

/// `Σ_{s≥1} (−h)^{s−1}/s! Σ θ_{σσ'} ∂^σH ∂^σ'F` in a constant-commutator
/// algebra.
pub fn bracket_expansion_theta(a: &NCPoly, b: &NCPoly) -> Result<NCPoly> {
    let alg = a.alg().clone();
    alg.require_mode(Mode::ConstantCommutator)?;
    if !crate::ncalg::same_alg(&alg, b.alg()) {
        return Err(Error::SpecMismatch);
    }
    let ctx = alg.ctx();
    let top = a.degree().min(b.degree()) as u32;
    let table = theta_table(alg.table(), top)?;
    let vars: Vec<Var> = (0..alg.ngens()).map(Var::Gen).collect();
    let mut derived_a: BTreeMap<Vec<u32>, NCPoly> = BTreeMap::new();
    let mut derived_b: BTreeMap<Vec<u32>, NCPoly> = BTreeMap::new();
    let mut out = NCPoly::zero(&alg);
    for ((sigma, sigma2), theta) in &table.entries {
        let s: u32 = sigma.iter().sum();
        if !derived_a.contains_key(sigma) {
            derived_a.insert(sigma.clone(), iterated(a, &vars, sigma)?);
        }
        if !derived_b.contains_key(sigma2) {
            derived_b.insert(sigma2.clone(), iterated(b, &vars, sigma2)?);
        }
        let (da, db) = (&derived_a[sigma], &derived_b[sigma2]);
        if da.is_zero() || db.is_zero() {
            continue;
        }
        let w = ctx.scale(&minus_h_power(ctx, s - 1)?, &(theta.clone() / factorial(s)));
        out = out.checked_add(&da.checked_mul(db)?.scale(&w))?;
    }
    Ok(out)
}

/// The antiinvolution fixing `q` and `h`, negating `p`, reversing products.
pub fn dagger(x: &NCPoly) -> Result<NCPoly> {
    let alg = x.alg().clone();
    let layout = alg.require_weyl()?;
    let ctx = alg.ctx();
    let mut raw = Vec::with_capacity(x.len());
    for (w, c) in x.terms() {
        let np = w.letters().iter().filter(|&&g| p_index(layout, g).is_some()).count();
        let coeff = if np % 2 == 1 { ctx.neg(c) } else { c.clone() };
        let mut factors: Vec<Factor> = w.letters().iter().rev().map(|&g| Factor::Gen(g)).collect();
        if alg.mode() == Mode::WeylDiffOp {
            factors.push(Factor::Scalar(c.clone()));
            raw.push(RawTerm { coeff: if np % 2 == 1 { ctx.integer(-1) } else { ctx.one() }, factors });
        } else {
            raw.push(RawTerm { coeff, factors });
        }
    }
    normalize(&alg, &raw)
}

/// Momentum-free part of a normal-ordered element, as a phase-space scalar.
pub fn res(x: &NCPoly) -> Result<Scalar> {
    Ok(normal_symbol(x)?.terms.get(&Monomial::one(x.alg().require_weyl()?.n())).cloned().unwrap_or_else(|| {
        x.alg().weyl_layout().unwrap().phase.zero()
    }))
}

/// `Res(H F†)`.
pub fn res_form(a: &NCPoly, b: &NCPoly) -> Result<Scalar> {
    res(&a.checked_mul(&dagger(b)?)?)
}

/// Witnesses `g_i` with `a − b = Σ_i ∂g_i/∂q_i`, obtained by integrating
/// the whole difference in `q_1`.
pub fn divergence_witness(ctx: &ScalarContext, a: &Scalar, b: &Scalar) -> Result<Vec<Scalar>> {
    let d = ctx.sub(a, b);
    let n = ctx.ncoords();
    if d.is_zero() {
        return Ok(vec![ctx.zero(); n]);
    }
    if n == 0 {
        return Err(Error::Dimension("no coordinates to integrate in".into()));
    }
    if !d.denom().is_constant() {
        return Err(Error::NotPolynomial(ctx.format(&d)));
    }
    if (1 + n..ctx.nvars()).any(|v| d.numer().contains_var(v)) {
        return Err(Error::NotPolynomial(format!("{} involves function symbols", ctx.format(&d))));
    }
    let g1 = ctx.from_fraction(d.numer().integrate(ctx.coord_var(0)), d.denom().clone())?;
    let mut out = vec![ctx.zero(); n];
    out[0] = g1;
    Ok(out)
}

/// Checks `a − b = Σ_i ∂g_i/∂q_i`.
pub fn check_divergence(ctx: &ScalarContext, a: &Scalar, b: &Scalar, g: &[Scalar]) -> Result<bool> {
    let mut div = ctx.zero();
    for (i, gi) in g.iter().enumerate() {
        div = ctx.add(&div, &ctx.diff(gi, i)?);
    }
    Ok(ctx.equal(&ctx.sub(a, b), &div))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::int;

    fn weyl1() -> (Arc<AlgebraSpec>, NCPoly, NCPoly) {
        let w = AlgebraSpec::weyl(1);
        let q = NCPoly::gen(&w, 0);
        let p = NCPoly::gen(&w, 1);
        (w, q, p)
    }

    #[test]
    fn poisson_examples() {
        let (w, _, _) = weyl1();
        let l = w.weyl_layout().unwrap();
        let p = CommutativeSymbol::p(l, 0);
        let q = CommutativeSymbol::q(l, 0);
        assert_eq!(poisson(&p, &q).unwrap().format(), "1");
        let pb = poisson(&p.mul(&p).unwrap(), &q.mul(&q).unwrap()).unwrap();
        assert_eq!(pb.format(), "4*q*p");
    }

    #[test]
    fn theta_small_tables() {
        let c = vec![vec![int(0), int(1)], vec![int(-1), int(0)]];
        let t = theta_table(&c, 2).unwrap();
        assert_eq!(t.get(&[1, 0], &[0, 1]), int(1));
        assert_eq!(t.get(&[2, 0], &[0, 2]), int(1));
        assert_eq!(t.get(&[1, 1], &[1, 1]), int(-2));
        assert!(theta_table(&[vec![int(0)]], 3).unwrap().entries.is_empty());
    }

    #[test]
    fn expansions_on_p2_q2() {
        let (_, q, p) = weyl1();
        let hh = &p * &p;
        let ff = &q * &q;
        let direct = hh.commutator(&ff).unwrap().div_h_power(1).unwrap();
        assert_eq!(direct.format(), "4 q p + 2*h");
        assert_eq!(bracket_expansion_theta(&hh, &ff).unwrap(), direct);
        assert_eq!(bracket_expansion_pair(&hh, &ff).unwrap(), direct);
    }

    #[test]
    fn symmetric_form_and_dagger() {
        let (w, q, p) = weyl1();
        assert_eq!(symmetric_form(&p, &q).unwrap(), &q * &p);
        assert_eq!(dagger(&q).unwrap(), q);
        assert_eq!(dagger(&(&q * &p)).unwrap().format(), "-q p - h");
        assert_eq!(res(&(&p * &q)).unwrap(), w.weyl_layout().unwrap().phase.h());
    }

    #[test]
    fn star_of_p_and_q() {
        let (w, q, p) = weyl1();
        let l = w.weyl_layout().unwrap();
        let a = smbl(&p).unwrap();
        let b = smbl(&q).unwrap();
        let ab = star_normal(&a, &b).unwrap();
        assert_eq!(ab.format(), "q*p + h");
        assert_eq!(normal_quantize(&ab, &w).unwrap(), &p * &q);
        let one = CommutativeSymbol::scalar(l, l.phase.one());
        assert_eq!(star_normal(&a, &one).unwrap(), a);
    }

    #[test]
    fn res_form_small() {
        let (w, q, p) = weyl1();
        let phase = &w.weyl_layout().unwrap().phase;
        assert_eq!(res_form(&q, &q).unwrap(), phase.mul(&phase.coordinate(0), &phase.coordinate(0)));
        assert!(res_form(&p, &p).unwrap().is_zero());
        let one = NCPoly::one(&w);
        assert!(res_form(&one, &one).unwrap().is_one());
    }

    #[test]
    fn witness_integrates_in_first_coordinate() {
        let ctx = ScalarContext::with_coordinates(&["q1", "q2"]).unwrap();
        let two_q1 = ctx.scale(&ctx.coordinate(0), &int(2));
        let g = divergence_witness(&ctx, &two_q1, &ctx.zero()).unwrap();
        assert_eq!(ctx.format(&g[0]), "q1^2");
        assert!(g[1].is_zero());
        assert!(check_divergence(&ctx, &two_q1, &ctx.zero(), &g).unwrap());
    }
}
