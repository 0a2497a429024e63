//! Noncommutative polynomials over a [`ScalarContext`].
//!
//! Three kinds of algebra are supported:
//!
//! * free algebras (no relations),
//! * constant-commutator algebras `[u_i, u_j] = h c_ij`, whose normal words
//!   have non-decreasing generator indices,
//! * Weyl differential-operator algebras, where momentum generators `p_i`
//!   act on scalar coefficients through `p_i f = f p_i + h ∂f/∂q_i` and
//!   every element is written with coefficients to the left of momenta.
//!
//! Elements are always stored in normal form, so equality of [`NCPoly`]
//! values is equality in the algebra.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_traits::{One, Zero};
use rand::Rng;

use crate::error::{Error, Result};
use crate::poly::{int, Rational};
use crate::scalar::{Scalar, ScalarContext};

/// A word in the generators, compared degree-first.
///
/// Within one degree the order is reversed lexicographic so that the
/// descending iteration used for printing lists earlier generators first.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Word(pub Vec<usize>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn letters(&self) -> &[usize] {
        &self.0
    }

    pub fn count(&self, g: usize) -> usize {
        self.0.iter().filter(|&&x| x == g).count()
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.0.len().cmp(&other.0.len()).then_with(|| other.0.cmp(&self.0))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Free,
    ConstantCommutator,
    WeylDiffOp,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::Free => "a free algebra",
            Mode::ConstantCommutator => "a constant-commutator algebra",
            Mode::WeylDiffOp => "a Weyl differential-operator algebra",
        }
    }
}

/// A variable that partial derivatives can be taken with respect to:
/// a generator, or (in differential-operator mode) a coefficient coordinate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Var {
    Gen(usize),
    Coord(usize),
}

/// Identifies which variables play the role of `q_i` and `p_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeylLayout {
    pub q: Vec<Var>,
    pub p: Vec<Var>,
    /// Context of commutative phase-space functions: its coordinates are
    /// the `q_i`.
    pub phase: Arc<ScalarContext>,
    pub momentum_names: Vec<String>,
}

impl WeylLayout {
    pub fn n(&self) -> usize {
        self.q.len()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgebraSpec {
    mode: Mode,
    generators: Vec<String>,
    ctx: Arc<ScalarContext>,
    /// `c[i][j]` with `[u_i, u_j] = h c[i][j]`; empty unless constant mode.
    table: Vec<Vec<Rational>>,
    weyl: Option<WeylLayout>,
}

fn check_names(names: &[String], ctx: &ScalarContext) -> Result<()> {
    for (i, n) in names.iter().enumerate() {
        if names[..i].contains(n) {
            return Err(Error::InvalidAlgebra(format!("generator `{n}` declared twice")));
        }
        if ctx.var_index(n).is_some() {
            return Err(Error::InvalidAlgebra(format!("generator `{n}` clashes with a scalar symbol")));
        }
    }
    Ok(())
}

impl AlgebraSpec {
    pub fn free<S: AsRef<str>>(names: &[S], ctx: Arc<ScalarContext>) -> Result<Arc<Self>> {
        let generators: Vec<String> = names.iter().map(|s| s.as_ref().to_string()).collect();
        check_names(&generators, &ctx)?;
        Ok(Arc::new(AlgebraSpec { mode: Mode::Free, generators, ctx, table: Vec::new(), weyl: None }))
    }

    /// `[u_i, u_j] = h·table[i][j]` with an antisymmetric rational table.
    pub fn constant<S: AsRef<str>>(names: &[S], table: Vec<Vec<Rational>>, ctx: Arc<ScalarContext>) -> Result<Arc<Self>> {
        let generators: Vec<String> = names.iter().map(|s| s.as_ref().to_string()).collect();
        check_names(&generators, &ctx)?;
        check_antisymmetric(&table, generators.len())?;
        Ok(Arc::new(AlgebraSpec {
            mode: Mode::ConstantCommutator,
            generators,
            ctx,
            table,
            weyl: None,
        }))
    }

    /// The polynomial Weyl algebra on `q_1..q_n, p_1..p_n` as a
    /// constant-commutator algebra with `[p_i, q_i] = h`.
    pub fn weyl(n: usize) -> Arc<Self> {
        let (qs, ps): (Vec<String>, Vec<String>) = if n == 1 {
            (vec!["q".into()], vec!["p".into()])
        } else {
            ((1..=n).map(|i| format!("q{i}")).collect(), (1..=n).map(|i| format!("p{i}")).collect())
        };
        Self::weyl_named(&qs, &ps).expect("generated names are distinct")
    }

    pub fn weyl_named<S: AsRef<str>>(qs: &[S], ps: &[S]) -> Result<Arc<Self>> {
        let n = qs.len();
        if ps.len() != n {
            return Err(Error::InvalidAlgebra("need as many momenta as coordinates".into()));
        }
        let mut names: Vec<String> = qs.iter().map(|s| s.as_ref().to_string()).collect();
        names.extend(ps.iter().map(|s| s.as_ref().to_string()));
        let mut table = vec![vec![Rational::zero(); 2 * n]; 2 * n];
        for i in 0..n {
            table[n + i][i] = Rational::one();
            table[i][n + i] = -Rational::one();
        }
        let ctx = Arc::new(ScalarContext::bare());
        check_names(&names, &ctx)?;
        let phase = Arc::new(ScalarContext::with_coordinates(&names[..n])?);
        let weyl = WeylLayout {
            q: (0..n).map(Var::Gen).collect(),
            p: (0..n).map(|i| Var::Gen(n + i)).collect(),
            phase,
            momentum_names: names[n..].to_vec(),
        };
        Ok(Arc::new(AlgebraSpec {
            mode: Mode::ConstantCommutator,
            generators: names,
            ctx,
            table,
            weyl: Some(weyl),
        }))
    }

    /// Differential operators over `ctx`: one momentum per coordinate,
    /// named `p_<coordinate>` unless names are given.
    pub fn diffop(ctx: Arc<ScalarContext>, momenta: Option<&[String]>) -> Result<Arc<Self>> {
        let n = ctx.ncoords();
        let names: Vec<String> = match momenta {
            Some(m) if m.len() != n => {
                return Err(Error::InvalidAlgebra(format!("{} momenta for {} coordinates", m.len(), n)))
            }
            Some(m) => m.to_vec(),
            None => ctx.coordinate_names().iter().map(|c| format!("p_{c}")).collect(),
        };
        check_names(&names, &ctx)?;
        let weyl = WeylLayout {
            q: (0..n).map(Var::Coord).collect(),
            p: (0..n).map(Var::Gen).collect(),
            phase: ctx.clone(),
            momentum_names: names.clone(),
        };
        Ok(Arc::new(AlgebraSpec { mode: Mode::WeylDiffOp, generators: names, ctx, table: Vec::new(), weyl: Some(weyl) }))
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn ctx(&self) -> &Arc<ScalarContext> {
        &self.ctx
    }

    pub fn generators(&self) -> &[String] {
        &self.generators
    }

    pub fn ngens(&self) -> usize {
        self.generators.len()
    }

    pub fn table(&self) -> &[Vec<Rational>] {
        &self.table
    }

    pub fn weyl_layout(&self) -> Option<&WeylLayout> {
        self.weyl.as_ref()
    }

    pub fn require_weyl(&self) -> Result<&WeylLayout> {
        self.weyl.as_ref().ok_or(Error::WrongMode { expected: "a Weyl algebra", found: self.mode.name() })
    }

    pub fn require_mode(&self, mode: Mode) -> Result<()> {
        if self.mode == mode {
            Ok(())
        } else {
            Err(Error::WrongMode { expected: mode.name(), found: self.mode.name() })
        }
    }

    pub fn gen_index(&self, name: &str) -> Option<usize> {
        self.generators.iter().position(|g| g == name)
    }

    pub fn check_gen(&self, g: usize) -> Result<()> {
        if g < self.ngens() {
            Ok(())
        } else {
            Err(Error::InvalidGenerator { index: g, count: self.ngens() })
        }
    }

    pub fn check_var(&self, v: Var) -> Result<()> {
        match v {
            Var::Gen(g) => self.check_gen(g),
            Var::Coord(j) if self.mode == Mode::WeylDiffOp && j < self.ctx.ncoords() => Ok(()),
            Var::Coord(j) => Err(Error::UnknownCoordinate(format!("#{j}"))),
        }
    }

    /// `[u_i, u_j] / h` in constant mode.
    pub fn structure_constant(&self, i: usize, j: usize) -> Rational {
        if self.mode == Mode::ConstantCommutator {
            self.table[i][j].clone()
        } else {
            Rational::zero()
        }
    }

    pub fn is_normal(&self, w: &[usize]) -> bool {
        match self.mode {
            Mode::Free => true,
            _ => w.windows(2).all(|p| p[0] <= p[1]),
        }
    }

    pub fn var_name(&self, v: Var) -> String {
        match v {
            Var::Gen(g) => self.generators[g].clone(),
            Var::Coord(j) => self.ctx.coordinate_names()[j].clone(),
        }
    }

    /// Resolves a generator or (differential-operator mode) coordinate name.
    pub fn var_by_name(&self, name: &str) -> Option<Var> {
        if let Some(g) = self.gen_index(name) {
            return Some(Var::Gen(g));
        }
        if self.mode == Mode::WeylDiffOp {
            return self.ctx.coordinate_index(name).ok().map(Var::Coord);
        }
        None
    }

    pub fn all_vars(&self) -> Vec<Var> {
        let mut v: Vec<Var> = (0..self.ngens()).map(Var::Gen).collect();
        if self.mode == Mode::WeylDiffOp {
            v.extend((0..self.ctx.ncoords()).map(Var::Coord));
        }
        v
    }
}

fn check_antisymmetric(table: &[Vec<Rational>], m: usize) -> Result<()> {
    if table.len() != m || table.iter().any(|r| r.len() != m) {
        return Err(Error::InvalidAlgebra(format!("commutator table must be {m}x{m}")));
    }
    for i in 0..m {
        for j in 0..m {
            if table[i][j] != -table[j][i].clone() {
                return Err(Error::InvalidAlgebra(format!("table is not antisymmetric at ({i}, {j})")));
            }
        }
    }
    Ok(())
}

/// Sparse element of an algebra, always in normal form.
#[derive(Clone)]
pub struct NCPoly {
    alg: Arc<AlgebraSpec>,
    terms: BTreeMap<Word, Scalar>,
}

impl PartialEq for NCPoly {
    fn eq(&self, other: &Self) -> bool {
        same_alg(&self.alg, &other.alg) && self.terms == other.terms
    }
}

impl Eq for NCPoly {}

pub(crate) fn same_alg(a: &Arc<AlgebraSpec>, b: &Arc<AlgebraSpec>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

impl NCPoly {
    pub fn zero(alg: &Arc<AlgebraSpec>) -> Self {
        NCPoly { alg: alg.clone(), terms: BTreeMap::new() }
    }

    pub fn one(alg: &Arc<AlgebraSpec>) -> Self {
        Self::scalar(alg, alg.ctx.one())
    }

    pub fn constant(alg: &Arc<AlgebraSpec>, c: Rational) -> Self {
        Self::scalar(alg, alg.ctx.constant(c))
    }

    pub fn scalar(alg: &Arc<AlgebraSpec>, s: Scalar) -> Self {
        let mut p = Self::zero(alg);
        p.add_term(Word::empty(), s);
        p
    }

    pub fn h(alg: &Arc<AlgebraSpec>) -> Self {
        Self::scalar(alg, alg.ctx.h())
    }

    pub fn gen(alg: &Arc<AlgebraSpec>, g: usize) -> Self {
        assert!(g < alg.ngens(), "generator index out of range");
        let mut p = Self::zero(alg);
        p.add_term(Word(vec![g]), alg.ctx.one());
        p
    }

    /// A generator, or in differential-operator mode a coordinate as scalar.
    pub fn var(alg: &Arc<AlgebraSpec>, v: Var) -> Self {
        match v {
            Var::Gen(g) => Self::gen(alg, g),
            Var::Coord(j) => Self::scalar(alg, alg.ctx.coordinate(j)),
        }
    }

    pub fn q(alg: &Arc<AlgebraSpec>, i: usize) -> Result<Self> {
        Ok(Self::var(alg, alg.require_weyl()?.q[i]))
    }

    pub fn p(alg: &Arc<AlgebraSpec>, i: usize) -> Result<Self> {
        Ok(Self::var(alg, alg.require_weyl()?.p[i]))
    }

    /// Builds from terms whose words are already normal.
    pub fn from_normal_terms(alg: &Arc<AlgebraSpec>, terms: impl IntoIterator<Item = (Word, Scalar)>) -> Self {
        let mut p = Self::zero(alg);
        for (w, c) in terms {
            debug_assert!(alg.is_normal(&w.0));
            p.add_term(w, c);
        }
        p
    }

    pub fn alg(&self) -> &Arc<AlgebraSpec> {
        &self.alg
    }

    pub fn ctx(&self) -> &ScalarContext {
        &self.alg.ctx
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in printing order: highest degree first.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Word, &Scalar)> {
        self.terms.iter().rev()
    }

    pub fn coeff(&self, w: &Word) -> Scalar {
        self.terms.get(w).cloned().unwrap_or_else(|| self.alg.ctx.zero())
    }

    /// Maximal word length.
    pub fn degree(&self) -> usize {
        self.terms.keys().map(Word::len).max().unwrap_or(0)
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut lens = self.terms.keys().map(Word::len);
        match lens.next() {
            None => true,
            Some(l) => lens.all(|x| x == l),
        }
    }

    /// The scalar value if the element has no generator content.
    pub fn as_scalar(&self) -> Option<Scalar> {
        match self.terms.len() {
            0 => Some(self.alg.ctx.zero()),
            1 => self.terms.get(&Word::empty()).cloned(),
            _ => None,
        }
    }

    pub(crate) fn add_term(&mut self, w: Word, c: Scalar) {
        if c.is_zero() {
            return;
        }
        let ctx = self.alg.ctx.clone();
        match self.terms.get_mut(&w) {
            Some(x) => {
                *x = ctx.add(x, &c);
                if x.is_zero() {
                    self.terms.remove(&w);
                }
            }
            None => {
                self.terms.insert(w, c);
            }
        }
    }

    fn check_same(&self, other: &NCPoly) -> Result<()> {
        if same_alg(&self.alg, &other.alg) {
            Ok(())
        } else {
            Err(Error::SpecMismatch)
        }
    }

    pub fn checked_add(&self, other: &NCPoly) -> Result<NCPoly> {
        self.check_same(other)?;
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_term(w.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &NCPoly) -> Result<NCPoly> {
        self.checked_add(&other.neg())
    }

    pub fn neg(&self) -> NCPoly {
        let ctx = &self.alg.ctx;
        NCPoly { alg: self.alg.clone(), terms: self.terms.iter().map(|(w, c)| (w.clone(), ctx.neg(c))).collect() }
    }

    /// Left multiplication by a scalar.
    pub fn scale(&self, s: &Scalar) -> NCPoly {
        let ctx = &self.alg.ctx;
        let mut out = NCPoly::zero(&self.alg);
        for (w, c) in &self.terms {
            out.add_term(w.clone(), ctx.mul(s, c));
        }
        out
    }

    pub fn scale_rational(&self, q: &Rational) -> NCPoly {
        self.scale(&self.alg.ctx.constant(q.clone()))
    }

    /// Divides every coefficient by the central scalar `s`.
    pub fn div_scalar(&self, s: &Scalar) -> Result<NCPoly> {
        let ctx = &self.alg.ctx;
        let inv = ctx.inv(s)?;
        Ok(self.scale(&inv))
    }

    /// Multiplies through by `h^{-k}`.
    pub fn div_h_power(&self, k: u32) -> Result<NCPoly> {
        let ctx = &self.alg.ctx;
        let hk = ctx.pow(&ctx.h(), k as i64)?;
        self.div_scalar(&hk)
    }

    /// Coefficients truncated to `h`-degree at most `order`, for display.
    pub fn truncate_h(&self, order: u32) -> NCPoly {
        let mut out = NCPoly::zero(&self.alg);
        for (w, c) in &self.terms {
            out.add_term(w.clone(), self.alg.ctx.truncate_h(c, order));
        }
        out
    }

    /// Applies `f` to every coefficient, keeping words.
    pub fn map_coeffs(&self, mut f: impl FnMut(&Scalar) -> Result<Scalar>) -> Result<NCPoly> {
        let mut out = NCPoly::zero(&self.alg);
        for (w, c) in &self.terms {
            out.add_term(w.clone(), f(c)?);
        }
        Ok(out)
    }

    /// Normal-form product.
    pub fn checked_mul(&self, other: &NCPoly) -> Result<NCPoly> {
        self.check_same(other)?;
        Ok(match self.alg.mode {
            Mode::Free => self.mul_free(other),
            Mode::ConstantCommutator => self.mul_constant(other),
            Mode::WeylDiffOp => self.mul_diffop(other)?,
        })
    }

    pub fn pow(&self, e: u32) -> Result<NCPoly> {
        let mut out = NCPoly::one(&self.alg);
        for _ in 0..e {
            out = out.checked_mul(self)?;
        }
        Ok(out)
    }

    fn mul_free(&self, other: &NCPoly) -> NCPoly {
        let ctx = &self.alg.ctx;
        let mut out = NCPoly::zero(&self.alg);
        for (wa, ca) in &self.terms {
            for (wb, cb) in &other.terms {
                let mut w = wa.0.clone();
                w.extend_from_slice(&wb.0);
                out.add_term(Word(w), ctx.mul(ca, cb));
            }
        }
        out
    }

    /// Right multiplication by one generator in a constant-commutator
    /// algebra. For a normal word `a·b` with letters of `a` at most `g` and
    /// letters of `b` above `g`:
    /// `a b u_g = a u_g b + h Σ_t c(b_t, g) a (b without b_t)`,
    /// and every word on the right is again normal.
    fn mul_constant_gen(&self, g: usize) -> NCPoly {
        let ctx = &self.alg.ctx;
        let h = ctx.h();
        let mut out = NCPoly::zero(&self.alg);
        for (w, c) in &self.terms {
            let k = w.0.partition_point(|&x| x <= g);
            let mut moved = Vec::with_capacity(w.len() + 1);
            moved.extend_from_slice(&w.0[..k]);
            moved.push(g);
            moved.extend_from_slice(&w.0[k..]);
            out.add_term(Word(moved), c.clone());
            for t in k..w.len() {
                let s = &self.alg.table[w.0[t]][g];
                if s.is_zero() {
                    continue;
                }
                let mut shorter = w.0.clone();
                shorter.remove(t);
                out.add_term(Word(shorter), ctx.scale(&ctx.mul(c, &h), s));
            }
        }
        out
    }

    fn mul_constant(&self, other: &NCPoly) -> NCPoly {
        let ctx = &self.alg.ctx;
        let mut out = NCPoly::zero(&self.alg);
        for (wb, cb) in &other.terms {
            let mut acc = self.clone();
            for &g in &wb.0 {
                acc = acc.mul_constant_gen(g);
            }
            for (w, c) in acc.terms {
                out.add_term(w, ctx.mul(&c, cb));
            }
        }
        out
    }

    /// `(f p^σ)(g p^τ) = Σ_{β≤σ} C(σ,β) h^{|β|} f (∂^β g) p^{σ-β+τ}`.
    fn mul_diffop(&self, other: &NCPoly) -> Result<NCPoly> {
        let ctx = self.alg.ctx.clone();
        let n = self.alg.ngens();
        let mut out = NCPoly::zero(&self.alg);
        let mut cache: HashMap<(Vec<u32>, usize), Scalar> = HashMap::new();
        let terms_b: Vec<(Vec<u32>, &Scalar, usize)> =
            other.terms.iter().enumerate().map(|(i, (w, c))| (word_to_exps(w, n), c, i)).collect();
        for (wa, fa) in &self.terms {
            let sigma = word_to_exps(wa, n);
            for beta in multi_indices_below(&sigma) {
                let weight = multi_binomial(&sigma, &beta);
                let order: u32 = beta.iter().sum();
                let hk = ctx.pow(&ctx.h(), order as i64)?;
                let factor = ctx.mul(&ctx.scale(&hk, &weight), fa);
                for (tau, g, idx) in &terms_b {
                    let key = (beta.clone(), *idx);
                    let dg = match cache.get(&key) {
                        Some(d) => d.clone(),
                        None => {
                            let mut d = (*g).clone();
                            for (j, &k) in beta.iter().enumerate() {
                                for _ in 0..k {
                                    d = ctx.diff(&d, j)?;
                                }
                            }
                            cache.insert(key, d.clone());
                            d
                        }
                    };
                    if dg.is_zero() {
                        continue;
                    }
                    let exps: Vec<u32> = sigma.iter().zip(&beta).zip(tau).map(|((s, b), t)| s - b + t).collect();
                    out.add_term(exps_to_word(&exps), ctx.mul(&factor, &dg));
                }
            }
        }
        Ok(out)
    }

    pub fn commutator(&self, other: &NCPoly) -> Result<NCPoly> {
        let ab = self.checked_mul(other)?;
        let ba = other.checked_mul(self)?;
        ab.checked_sub(&ba)
    }

    pub fn format(&self) -> String {
        let ctx = &self.alg.ctx;
        let mut parts: Vec<(bool, String)> = Vec::new();
        for (w, c) in self.terms() {
            if w.is_empty() {
                parts.extend(ctx.format_parts(c));
                continue;
            }
            let word = w.0.iter().map(|&g| self.alg.generators[g].as_str()).collect::<Vec<_>>().join(" ");
            let (neg, body) = ctx.format_signed(c);
            let body = if body == "1" {
                word
            } else {
                format!("{body} {word}")
            };
            parts.push((neg, body));
        }
        crate::poly::join_terms(parts)
    }
}

pub(crate) fn word_to_exps(w: &Word, n: usize) -> Vec<u32> {
    let mut e = vec![0u32; n];
    for &g in &w.0 {
        e[g] += 1;
    }
    e
}

pub(crate) fn exps_to_word(e: &[u32]) -> Word {
    let mut w = Vec::new();
    for (g, &k) in e.iter().enumerate() {
        for _ in 0..k {
            w.push(g);
        }
    }
    Word(w)
}

/// All multi-indices `β` with `β ≤ σ` componentwise.
pub(crate) fn multi_indices_below(sigma: &[u32]) -> Vec<Vec<u32>> {
    let mut out = vec![Vec::new()];
    for &s in sigma {
        let mut next = Vec::new();
        for prefix in &out {
            for b in 0..=s {
                let mut v = prefix.clone();
                v.push(b);
                next.push(v);
            }
        }
        out = next;
    }
    out
}

pub(crate) fn binomial(n: u32, k: u32) -> Rational {
    let mut r = Rational::one();
    for i in 0..k {
        r = r * int((n - i) as i64) / int((i + 1) as i64);
    }
    r
}

pub(crate) fn multi_binomial(sigma: &[u32], beta: &[u32]) -> Rational {
    sigma.iter().zip(beta).fold(Rational::one(), |acc, (&s, &b)| acc * binomial(s, b))
}

pub(crate) fn factorial(n: u32) -> Rational {
    (1..=n).fold(Rational::one(), |acc, k| acc * int(k as i64))
}

impl fmt::Display for NCPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.format())
    }
}

impl fmt::Debug for NCPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "NCPoly({})", self.format())
    }
}

// Operator sugar. These panic when the operands live in different algebras;
// use the `checked_*` methods where that can happen.
impl<'a> Add<&'a NCPoly> for &'a NCPoly {
    type Output = NCPoly;
    fn add(self, rhs: &NCPoly) -> NCPoly {
        self.checked_add(rhs).expect("operands from the same algebra")
    }
}

impl<'a> Sub<&'a NCPoly> for &'a NCPoly {
    type Output = NCPoly;
    fn sub(self, rhs: &NCPoly) -> NCPoly {
        self.checked_sub(rhs).expect("operands from the same algebra")
    }
}

impl<'a> Mul<&'a NCPoly> for &'a NCPoly {
    type Output = NCPoly;
    fn mul(self, rhs: &NCPoly) -> NCPoly {
        self.checked_mul(rhs).expect("operands from the same algebra")
    }
}

impl Neg for &NCPoly {
    type Output = NCPoly;
    fn neg(self) -> NCPoly {
        NCPoly::neg(self)
    }
}

// ---------------------------------------------------------------------------
// Rewriting normalizer

/// One factor of an unnormalized product.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Factor {
    Gen(usize),
    Scalar(Scalar),
}

/// An unnormalized term `coeff · f_1 f_2 … f_k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RawTerm {
    pub coeff: Scalar,
    pub factors: Vec<Factor>,
}

impl RawTerm {
    pub fn word(ctx: &ScalarContext, letters: &[usize]) -> Self {
        RawTerm { coeff: ctx.one(), factors: letters.iter().map(|&g| Factor::Gen(g)).collect() }
    }
}

/// Order in which redexes are rewritten.
pub enum Strategy<'a> {
    /// Highest (length, inversions) term first with like terms merged;
    /// leftmost redex within a term.
    Merged,
    /// Uniformly random term and redex, no merging.
    Random(&'a mut dyn rand::RngCore),
}

fn is_redex(alg: &AlgebraSpec, x: &Factor, y: &Factor) -> bool {
    match (x, y) {
        (Factor::Scalar(_), Factor::Scalar(_)) => true,
        (Factor::Gen(_), Factor::Scalar(_)) => true,
        (Factor::Gen(a), Factor::Gen(b)) => alg.mode != Mode::Free && a > b,
        (Factor::Scalar(_), Factor::Gen(_)) => false,
    }
}

fn inversions(alg: &AlgebraSpec, f: &[Factor]) -> usize {
    let mut n = 0;
    for i in 0..f.len() {
        for j in i + 1..f.len() {
            if is_redex(alg, &f[i], &f[j]) {
                n += 1;
            }
        }
    }
    n
}

/// Rewrites the pair at position `i`; returns the resulting terms.
fn rewrite_at(alg: &AlgebraSpec, coeff: &Scalar, f: &[Factor], i: usize) -> Result<Vec<(Scalar, Vec<Factor>)>> {
    let ctx = &alg.ctx;
    let splice = |mid: Vec<Factor>| -> Vec<Factor> {
        let mut v = f[..i].to_vec();
        v.extend(mid);
        v.extend_from_slice(&f[i + 2..]);
        v
    };
    let mut out = Vec::new();
    match (&f[i], &f[i + 1]) {
        (Factor::Scalar(a), Factor::Scalar(b)) => {
            out.push((coeff.clone(), splice(vec![Factor::Scalar(ctx.mul(a, b))])));
        }
        (Factor::Gen(g), Factor::Scalar(s)) => {
            out.push((coeff.clone(), splice(vec![Factor::Scalar(s.clone()), Factor::Gen(*g)])));
            if alg.mode == Mode::WeylDiffOp {
                let d = ctx.diff(s, *g)?;
                if !d.is_zero() {
                    out.push((coeff.clone(), splice(vec![Factor::Scalar(ctx.mul(&ctx.h(), &d))])));
                }
            }
        }
        (Factor::Gen(a), Factor::Gen(b)) => {
            out.push((coeff.clone(), splice(vec![Factor::Gen(*b), Factor::Gen(*a)])));
            let c = alg.structure_constant(*a, *b);
            if !c.is_zero() {
                out.push((ctx.scale(&ctx.mul(coeff, &ctx.h()), &c), splice(Vec::new())));
            }
        }
        (Factor::Scalar(_), Factor::Gen(_)) => unreachable!("not a redex"),
    }
    Ok(out)
}

fn emit(alg: &Arc<AlgebraSpec>, out: &mut NCPoly, coeff: &Scalar, f: &[Factor]) {
    let ctx = &alg.ctx;
    let mut c = coeff.clone();
    let mut w = Vec::with_capacity(f.len());
    for x in f {
        match x {
            Factor::Scalar(s) => c = ctx.mul(&c, s),
            Factor::Gen(g) => w.push(*g),
        }
    }
    out.add_term(Word(w), c);
}

fn check_factors(alg: &AlgebraSpec, terms: &[RawTerm]) -> Result<()> {
    for t in terms {
        for f in &t.factors {
            match f {
                Factor::Gen(g) => alg.check_gen(*g)?,
                Factor::Scalar(s) if s.nvars() != alg.ctx.nvars() => {
                    return Err(Error::Malformed("scalar factor from another context".into()))
                }
                Factor::Scalar(_) => {}
            }
        }
    }
    Ok(())
}

/// Normal form of a sum of raw products, by rewriting with the algebra's
/// relations.
pub fn normalize(alg: &Arc<AlgebraSpec>, terms: &[RawTerm]) -> Result<NCPoly> {
    normalize_with(alg, terms, Strategy::Merged)
}

pub fn normalize_with(alg: &Arc<AlgebraSpec>, terms: &[RawTerm], strategy: Strategy<'_>) -> Result<NCPoly> {
    check_factors(alg, terms)?;
    match strategy {
        Strategy::Merged => normalize_merged(alg, terms),
        Strategy::Random(rng) => normalize_random(alg, terms, rng),
    }
}

fn normalize_merged(alg: &Arc<AlgebraSpec>, terms: &[RawTerm]) -> Result<NCPoly> {
    let ctx = alg.ctx.clone();
    let mut out = NCPoly::zero(alg);
    let mut coeffs: HashMap<Vec<Factor>, Scalar> = HashMap::new();
    let mut buckets: BTreeMap<(usize, usize), Vec<Vec<Factor>>> = BTreeMap::new();
    let push = |coeffs: &mut HashMap<Vec<Factor>, Scalar>,
                    buckets: &mut BTreeMap<(usize, usize), Vec<Vec<Factor>>>,
                    c: Scalar,
                    f: Vec<Factor>| {
        if c.is_zero() {
            return;
        }
        if let Some(x) = coeffs.get_mut(&f) {
            *x = ctx.add(x, &c);
            return;
        }
        let key = (f.len(), inversions(alg, &f));
        buckets.entry(key).or_default().push(f.clone());
        coeffs.insert(f, c);
    };
    for t in terms {
        push(&mut coeffs, &mut buckets, t.coeff.clone(), t.factors.clone());
    }
    // Pop the largest (length, inversions) first: every rewrite strictly
    // lowers that key, so all contributions to a term are merged before it
    // is processed.
    while let Some(mut entry) = buckets.last_entry() {
        let f = entry.get_mut().pop().expect("buckets are never left empty");
        if entry.get().is_empty() {
            entry.remove();
        }
        let c = coeffs.remove(&f).expect("pending term has a coefficient");
        if c.is_zero() {
            continue;
        }
        match (0..f.len().saturating_sub(1)).find(|&i| is_redex(alg, &f[i], &f[i + 1])) {
            None => emit(alg, &mut out, &c, &f),
            Some(i) => {
                for (c2, f2) in rewrite_at(alg, &c, &f, i)? {
                    push(&mut coeffs, &mut buckets, c2, f2);
                }
            }
        }
    }
    Ok(out)
}

fn normalize_random(alg: &Arc<AlgebraSpec>, terms: &[RawTerm], rng: &mut dyn rand::RngCore) -> Result<NCPoly> {
    let mut out = NCPoly::zero(alg);
    let mut stack: Vec<(Scalar, Vec<Factor>)> = terms.iter().map(|t| (t.coeff.clone(), t.factors.clone())).collect();
    while !stack.is_empty() {
        let k = rng.gen_range(0..stack.len());
        let (c, f) = stack.swap_remove(k);
        let redexes: Vec<usize> = (0..f.len().saturating_sub(1)).filter(|&i| is_redex(alg, &f[i], &f[i + 1])).collect();
        if redexes.is_empty() {
            emit(alg, &mut out, &c, &f);
            continue;
        }
        let i = redexes[rng.gen_range(0..redexes.len())];
        stack.extend(rewrite_at(alg, &c, &f, i)?);
    }
    Ok(out)
}

/// Raw terms of an element (its normal words as factor lists).
pub fn to_raw(x: &NCPoly) -> Vec<RawTerm> {
    x.terms
        .iter()
        .map(|(w, c)| RawTerm { coeff: c.clone(), factors: w.0.iter().map(|&g| Factor::Gen(g)).collect() })
        .collect()
}

/// Sends a polynomial Weyl element (constant-commutator representation) to
/// the differential-operator representation over `target`, reading normal
/// words `q^σ p^τ` as the coefficient `q^σ` times the momentum word `p^τ`.
pub fn embed_weyl(x: &NCPoly, target: &Arc<AlgebraSpec>) -> Result<NCPoly> {
    let src = x.alg().require_weyl()?;
    x.alg().require_mode(Mode::ConstantCommutator)?;
    target.require_mode(Mode::WeylDiffOp)?;
    let dst = target.require_weyl()?;
    if src.n() != dst.n() {
        return Err(Error::Dimension(format!("{} vs {} degrees of freedom", src.n(), dst.n())));
    }
    let tctx = target.ctx();
    let mut out = NCPoly::zero(target);
    for (w, c) in x.terms() {
        let mut coeff = tctx.compose(x.ctx(), c, &[])?;
        let mut pw = Vec::new();
        for &g in &w.0 {
            if let Some(i) = src.q.iter().position(|v| *v == Var::Gen(g)) {
                coeff = tctx.mul(&coeff, &tctx.coordinate(i));
            } else {
                let i = src.p.iter().position(|v| *v == Var::Gen(g)).expect("generator is q or p");
                pw.push(i);
            }
        }
        pw.sort_unstable();
        out.add_term(Word(pw), coeff);
    }
    Ok(out)
}

/// Uniform random element generator used by property suites.
pub fn random_element<R: Rng>(alg: &Arc<AlgebraSpec>, rng: &mut R, max_deg: usize, max_terms: usize) -> NCPoly {
    let ctx = alg.ctx();
    let nterms = rng.gen_range(1..=max_terms.max(1));
    let mut raw = Vec::with_capacity(nterms);
    for _ in 0..nterms {
        let len = rng.gen_range(0..=max_deg);
        let letters: Vec<usize> = (0..len).map(|_| rng.gen_range(0..alg.ngens())).collect();
        let k = rng.gen_range(-3i64..=3);
        let mut coeff = ctx.integer(if k == 0 { 1 } else { k });
        if rng.gen_bool(0.25) {
            coeff = ctx.mul(&coeff, &ctx.h());
        }
        raw.push(RawTerm { coeff, factors: letters.into_iter().map(Factor::Gen).collect() });
    }
    normalize(alg, &raw).expect("random letters are valid generators")
}
