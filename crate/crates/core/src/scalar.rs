//! Commutative coefficient ring: rational functions over ℚ in the central
//! parameter `h`, coordinate symbols, and function symbols that carry a
//! derivative table and optional polynomial relations.
//!
//! Variable layout inside every [`Poly`] of a context is
//! `[h, coordinates..., function symbols...]`, and the monomial order is
//! degree-lexicographic in that declaration order.

use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::poly::{format_monomial, format_poly, format_rational, format_term, join_terms, Monomial, Poly, Rational};

/// A rewrite rule `lead → replacement` on polynomials.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Relation {
    pub lead: Monomial,
    pub replacement: Poly,
}

/// Rational function `num / den` in canonical form for its context.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Scalar {
    num: Poly,
    den: Poly,
}

impl Scalar {
    pub fn numer(&self) -> &Poly {
        &self.num
    }

    pub fn denom(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    /// Rational constant value, if the scalar does not depend on any symbol.
    pub fn as_constant(&self) -> Option<Rational> {
        (self.num.is_constant() && self.den.is_one()).then(|| self.num.constant_term())
    }

    pub fn nvars(&self) -> usize {
        self.num.nvars()
    }

    /// True when the scalar is `± c·m` or `± c·m / m'` for monomials `m, m'`.
    pub fn is_atomic(&self) -> bool {
        self.num.len() <= 1 && self.den.is_monomial()
    }

    /// Sign of the leading numerator coefficient.
    pub fn is_negative(&self) -> bool {
        self.num.leading_coeff().is_negative()
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:?})/({:?})", self.num, self.den)
    }
}

#[derive(Clone, Debug)]
pub struct ScalarContext {
    names: Vec<String>,
    ncoords: usize,
    /// `derivs[f][j]` is the derivative of function symbol `f` w.r.t. coordinate `j`.
    derivs: Vec<Vec<Scalar>>,
    relations: Vec<Relation>,
}

impl PartialEq for ScalarContext {
    fn eq(&self, other: &Self) -> bool {
        self.names == other.names
            && self.ncoords == other.ncoords
            && self.derivs == other.derivs
            && self.relations == other.relations
    }
}

impl Eq for ScalarContext {}

impl ScalarContext {
    pub const H: usize = 0;

    /// A context with the given coordinate and function symbols, all
    /// function derivatives zero and no relations.
    pub fn new<S: AsRef<str>>(coords: &[S], funcs: &[S]) -> Result<Self> {
        let mut names = vec!["h".to_string()];
        for n in coords.iter().chain(funcs) {
            let n = n.as_ref().to_string();
            if names.contains(&n) {
                return Err(Error::InvalidContext(format!("symbol `{n}` declared twice")));
            }
            names.push(n);
        }
        let nvars = names.len();
        let zero = Scalar { num: Poly::zero(nvars), den: Poly::one(nvars) };
        Ok(ScalarContext {
            ncoords: coords.len(),
            derivs: vec![vec![zero; coords.len()]; funcs.len()],
            names,
            relations: Vec::new(),
        })
    }

    pub fn with_coordinates<S: AsRef<str>>(coords: &[S]) -> Result<Self> {
        Self::new(coords, &[])
    }

    /// Only the central parameter `h`.
    pub fn bare() -> Self {
        Self::new::<&str>(&[], &[]).expect("empty context is valid")
    }

    /// Polar coordinates `(r, theta)` with `s = sin theta`, `c = cos theta`,
    /// `ds/dtheta = c`, `dc/dtheta = -s` and the rule `s^2 -> 1 - c^2`.
    pub fn polar() -> Self {
        let mut ctx = Self::new(&["r", "theta"], &["s", "c"]).expect("valid symbols");
        let s = ctx.symbol("s").unwrap();
        let c = ctx.symbol("c").unwrap();
        ctx.set_derivative("s", "theta", c.clone()).unwrap();
        ctx.set_derivative("c", "theta", ctx.neg(&s)).unwrap();
        let one = ctx.one();
        let repl = ctx.sub(&one, &ctx.mul(&c, &c)).num;
        let lead = Monomial::from_exponents(vec![0, 0, 0, 2, 0]);
        ctx.add_relation(lead, repl).unwrap();
        ctx.validate().expect("polar context is consistent");
        ctx
    }

    pub fn nvars(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn ncoords(&self) -> usize {
        self.ncoords
    }

    pub fn coordinate_names(&self) -> &[String] {
        &self.names[1..1 + self.ncoords]
    }

    pub fn function_names(&self) -> &[String] {
        &self.names[1 + self.ncoords..]
    }

    pub fn relations(&self) -> &[Relation] {
        &self.relations
    }

    pub fn coord_var(&self, j: usize) -> usize {
        1 + j
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn coordinate_index(&self, name: &str) -> Result<usize> {
        self.coordinate_names()
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| Error::UnknownCoordinate(name.to_string()))
    }

    fn function_index(&self, name: &str) -> Result<usize> {
        self.function_names()
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| Error::UnknownSymbol(name.to_string()))
    }

    pub fn set_derivative(&mut self, func: &str, coord: &str, value: Scalar) -> Result<()> {
        let f = self.function_index(func)?;
        let j = self.coordinate_index(coord)?;
        if value.nvars() != self.nvars() {
            return Err(Error::InvalidContext("derivative value from another context".into()));
        }
        self.derivs[f][j] = value;
        Ok(())
    }

    pub fn derivative_of(&self, func: &str, coord: &str) -> Result<&Scalar> {
        let f = self.function_index(func)?;
        let j = self.coordinate_index(coord)?;
        Ok(&self.derivs[f][j])
    }

    /// Adds the rewrite rule `lead → replacement`. Every term of the
    /// replacement must be strictly smaller than `lead`.
    pub fn add_relation(&mut self, lead: Monomial, replacement: Poly) -> Result<()> {
        if lead.nvars() != self.nvars() || replacement.nvars() != self.nvars() {
            return Err(Error::InvalidContext("relation has the wrong number of variables".into()));
        }
        if lead.is_one() {
            return Err(Error::InvalidContext("relation head must be a non-constant monomial".into()));
        }
        if lead.exp(Self::H) > 0 {
            return Err(Error::InvalidContext("relation head may not contain h".into()));
        }
        if let Some((m, _)) = replacement.leading() {
            if *m >= lead {
                return Err(Error::InvalidContext(format!(
                    "replacement leading monomial {} is not smaller than the head {}",
                    self.format_monomial(m),
                    self.format_monomial(&lead)
                )));
            }
        }
        self.relations.push(Relation { lead, replacement });
        Ok(())
    }

    /// Relation from a polynomial `p = 0`: the head is its leading monomial.
    pub fn add_relation_poly(&mut self, p: &Poly) -> Result<()> {
        let (lead, c) = p.leading().ok_or_else(|| Error::InvalidContext("trivial relation 0 = 0".into()))?;
        let lead = lead.clone();
        let c = c.clone();
        let replacement = &Poly::term(lead.clone(), Rational::one()) - &p.scale(&c.recip());
        self.add_relation(lead, replacement)
    }

    fn format_monomial(&self, m: &Monomial) -> String {
        let e: Vec<i64> = m.exponents().iter().map(|&x| x as i64).collect();
        format_monomial(&e, &self.names).unwrap_or_else(|| "1".into())
    }

    /// Checks local confluence of the relation rules and compatibility of
    /// every relation with the derivative tables.
    pub fn validate(&self) -> Result<()> {
        if let Some((i, j)) = self.critical_pair_failures().into_iter().next() {
            return Err(Error::InvalidContext(format!(
                "relations {i} and {j} are not locally confluent"
            )));
        }
        for (k, rel) in self.relations.iter().enumerate() {
            let p = &Poly::term(rel.lead.clone(), Rational::one()) - &rel.replacement;
            let s = Scalar { den: Poly::one(self.nvars()), num: p };
            for j in 0..self.ncoords {
                let d = self.diff(&s, j)?;
                if !d.is_zero() {
                    return Err(Error::InvalidContext(format!(
                        "relation {k} is not preserved by d/d{}",
                        self.coordinate_names()[j]
                    )));
                }
            }
        }
        Ok(())
    }

    /// Pairs of rules `(i, j)` whose overlap does not resolve to a common
    /// normal form.
    pub fn critical_pair_failures(&self) -> Vec<(usize, usize)> {
        let mut bad = Vec::new();
        for i in 0..self.relations.len() {
            for j in i..self.relations.len() {
                let (ri, rj) = (&self.relations[i], &self.relations[j]);
                if ri.lead.gcd(&rj.lead).is_one() && i != j {
                    continue;
                }
                let l = ri.lead.lcm(&rj.lead);
                let one = Rational::one();
                let a = ri.replacement.mul_term(&l.div(&ri.lead), &one);
                let b = rj.replacement.mul_term(&l.div(&rj.lead), &one);
                if self.reduce_poly(&a) != self.reduce_poly(&b) {
                    bad.push((i, j));
                }
            }
        }
        bad
    }

    /// Rewrites `p` to its normal form modulo the relation rules.
    pub fn reduce_poly(&self, p: &Poly) -> Poly {
        if self.relations.is_empty() {
            return p.clone();
        }
        let mut p = p.clone();
        loop {
            let hit = p.terms().find_map(|(m, c)| {
                self.relations
                    .iter()
                    .find(|r| r.lead.divides(m))
                    .map(|r| (m.clone(), c.clone(), r))
            });
            let Some((m, c, rule)) = hit else { break };
            p.add_term(m.clone(), -c.clone());
            let rest = rule.replacement.mul_term(&m.div(&rule.lead), &c);
            p = &p + &rest;
        }
        p
    }

    /// Canonical form of an arbitrary scalar under the relations.
    pub fn reduce(&self, a: &Scalar) -> Scalar {
        self.make(a.num.clone(), a.den.clone()).expect("canonical scalars have nonzero denominators")
    }

    /// Quadratic rules `v^2 → R` with `R` free of every rule head variable.
    /// When all rules have this shape, denominators can be made free of the
    /// head variables, which makes the fraction representation unique.
    fn quadratic_rules(&self) -> Option<Vec<(usize, &Poly)>> {
        let mut out = Vec::new();
        for r in &self.relations {
            let e = r.lead.exponents();
            let nz: Vec<usize> = (0..e.len()).filter(|&i| e[i] > 0).collect();
            if nz.len() != 1 || e[nz[0]] != 2 {
                return None;
            }
            out.push((nz[0], &r.replacement));
        }
        for (_, repl) in &out {
            if out.iter().any(|(v, _)| repl.contains_var(*v)) {
                return None;
            }
        }
        Some(out)
    }

    fn make(&self, num: Poly, den: Poly) -> Result<Scalar> {
        let n = self.nvars();
        let mut num = self.reduce_poly(&num);
        let mut den = self.reduce_poly(&den);
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if num.is_zero() {
            return Ok(Scalar { num, den: Poly::one(n) });
        }
        if !self.relations.is_empty() && !den.is_constant() {
            if let Some(rules) = self.quadratic_rules() {
                for (v, repl) in rules {
                    if !den.contains_var(v) {
                        continue;
                    }
                    // den = a + b·v, multiply through by the conjugate a − b·v.
                    let vm = Monomial::var(n, v);
                    let mut a = Poly::zero(n);
                    let mut b = Poly::zero(n);
                    for (m, c) in den.terms() {
                        if m.exp(v) == 0 {
                            a.add_term(m.clone(), c.clone());
                        } else {
                            b.add_term(m.div(&vm), c.clone());
                        }
                    }
                    let conj = &a - &b.mul_term(&vm, &Rational::one());
                    num = self.reduce_poly(&(&num * &conj));
                    den = self.reduce_poly(&(&(&a * &a) - &(&(&b * &b) * repl)));
                    if den.is_zero() {
                        return Err(Error::DivisionByZero);
                    }
                }
            }
        }
        if den.is_constant() {
            let c = den.constant_term();
            return Ok(Scalar { num: num.scale(&c.recip()), den: Poly::one(n) });
        }
        let g = num.gcd(&den);
        if !g.is_one() {
            num = num.div_exact(&g).expect("gcd divides numerator");
            den = den.div_exact(&g).expect("gcd divides denominator");
        }
        let dn = den.normalized();
        let k = den.leading_coeff() / dn.leading_coeff();
        Ok(Scalar { num: num.scale(&k.recip()), den: dn })
    }

    pub fn from_poly(&self, p: Poly) -> Scalar {
        assert_eq!(p.nvars(), self.nvars(), "polynomial from another context");
        self.make(p, Poly::one(self.nvars())).expect("unit denominator")
    }

    pub fn from_fraction(&self, num: Poly, den: Poly) -> Result<Scalar> {
        self.make(num, den)
    }

    pub fn zero(&self) -> Scalar {
        Scalar { num: Poly::zero(self.nvars()), den: Poly::one(self.nvars()) }
    }

    pub fn one(&self) -> Scalar {
        self.constant(Rational::one())
    }

    pub fn constant(&self, c: Rational) -> Scalar {
        Scalar { num: Poly::constant(self.nvars(), c), den: Poly::one(self.nvars()) }
    }

    pub fn integer(&self, k: i64) -> Scalar {
        self.constant(crate::poly::int(k))
    }

    pub fn h(&self) -> Scalar {
        self.var(Self::H)
    }

    pub fn var(&self, v: usize) -> Scalar {
        self.from_poly(Poly::var(self.nvars(), v))
    }

    pub fn coordinate(&self, j: usize) -> Scalar {
        self.var(self.coord_var(j))
    }

    pub fn symbol(&self, name: &str) -> Result<Scalar> {
        self.var_index(name)
            .map(|v| self.var(v))
            .ok_or_else(|| Error::UnknownSymbol(name.to_string()))
    }

    pub fn add(&self, a: &Scalar, b: &Scalar) -> Scalar {
        if a.is_zero() {
            return b.clone();
        }
        if b.is_zero() {
            return a.clone();
        }
        if a.den == b.den {
            if a.den.is_one() {
                return Scalar { num: &a.num + &b.num, den: a.den.clone() };
            }
            return self.make(&a.num + &b.num, a.den.clone()).expect("nonzero denominator");
        }
        let num = &(&a.num * &b.den) + &(&b.num * &a.den);
        self.make(num, &a.den * &b.den).expect("nonzero denominator")
    }

    pub fn neg(&self, a: &Scalar) -> Scalar {
        Scalar { num: -&a.num, den: a.den.clone() }
    }

    pub fn sub(&self, a: &Scalar, b: &Scalar) -> Scalar {
        self.add(a, &self.neg(b))
    }

    pub fn mul(&self, a: &Scalar, b: &Scalar) -> Scalar {
        if a.is_zero() || b.is_zero() {
            return self.zero();
        }
        if let Some(c) = a.as_constant() {
            return self.scale(b, &c);
        }
        if let Some(c) = b.as_constant() {
            return self.scale(a, &c);
        }
        if a.den.is_one() && b.den.is_one() {
            return Scalar { num: self.reduce_poly(&(&a.num * &b.num)), den: a.den.clone() };
        }
        self.make(&a.num * &b.num, &a.den * &b.den).expect("nonzero denominator")
    }

    pub fn scale(&self, a: &Scalar, c: &Rational) -> Scalar {
        if c.is_zero() {
            return self.zero();
        }
        Scalar { num: a.num.scale(c), den: a.den.clone() }
    }

    pub fn inv(&self, a: &Scalar) -> Result<Scalar> {
        if a.is_zero() {
            return Err(Error::DivisionByZero);
        }
        self.make(a.den.clone(), a.num.clone())
    }

    pub fn div(&self, a: &Scalar, b: &Scalar) -> Result<Scalar> {
        if b.is_zero() {
            return Err(Error::DivisionByZero);
        }
        self.make(&a.num * &b.den, &a.den * &b.num)
    }

    pub fn pow(&self, a: &Scalar, e: i64) -> Result<Scalar> {
        let base = if e < 0 { self.inv(a)? } else { a.clone() };
        let mut out = self.one();
        for _ in 0..e.unsigned_abs() {
            out = self.mul(&out, &base);
        }
        Ok(out)
    }

    pub fn sum<'a>(&self, items: impl IntoIterator<Item = &'a Scalar>) -> Scalar {
        items.into_iter().fold(self.zero(), |acc, x| self.add(&acc, x))
    }

    /// Exact equality in the quotient ring, independent of representation.
    pub fn equal(&self, a: &Scalar, b: &Scalar) -> bool {
        if a == b {
            return true;
        }
        self.reduce_poly(&(&(&a.num * &b.den) - &(&b.num * &a.den))).is_zero()
    }

    /// Derivative of a polynomial as a scalar, using the derivative tables.
    fn diff_poly(&self, p: &Poly, j: usize) -> Scalar {
        let coord_v = self.coord_var(j);
        let mut out = self.from_poly(p.derivative(coord_v));
        for (f, table) in self.derivs.iter().enumerate() {
            let dv = &table[j];
            if dv.is_zero() {
                continue;
            }
            let v = 1 + self.ncoords + f;
            if !p.contains_var(v) {
                continue;
            }
            let partial = self.from_poly(p.derivative(v));
            out = self.add(&out, &self.mul(&partial, dv));
        }
        out
    }

    /// Partial derivative with respect to coordinate `j`.
    pub fn diff(&self, a: &Scalar, j: usize) -> Result<Scalar> {
        if j >= self.ncoords {
            return Err(Error::UnknownCoordinate(format!("#{j}")));
        }
        let dn = self.diff_poly(&a.num, j);
        if a.den.is_one() {
            return Ok(dn);
        }
        let dd = self.diff_poly(&a.den, j);
        let den = self.from_poly(a.den.clone());
        let num = self.from_poly(a.num.clone());
        // (n' d - n d') / d^2
        let top = self.sub(&self.mul(&dn, &den), &self.mul(&num, &dd));
        self.div(&top, &self.mul(&den, &den))
    }

    pub fn diff_by_name(&self, a: &Scalar, coord: &str) -> Result<Scalar> {
        let j = self.coordinate_index(coord)?;
        self.diff(a, j)
    }

    /// The value at `h = 0`. Fails when the denominator depends on `h`.
    pub fn at_h_zero(&self, a: &Scalar) -> Result<Scalar> {
        if a.den.contains_var(Self::H) {
            return Err(Error::NotPolynomial(format!(
                "{} has h in its denominator",
                self.format(a)
            )));
        }
        let zero = Poly::zero(self.nvars());
        self.from_fraction(a.num.substitute(Self::H, &zero), a.den.clone())
    }

    /// Drops numerator terms of `h`-degree above `order`. Display only;
    /// a scalar with `h` in its denominator is returned unchanged.
    pub fn truncate_h(&self, a: &Scalar, order: u32) -> Scalar {
        if a.den.contains_var(Self::H) {
            return a.clone();
        }
        let mut num = Poly::zero(self.nvars());
        for (m, c) in a.num.terms() {
            if m.exp(Self::H) <= order {
                num.add_term(m.clone(), c.clone());
            }
        }
        Scalar { num, den: a.den.clone() }
    }

    /// Exact division of a scalar by `h^k`, used for `h^{-k}` rescaling.
    pub fn div_h_power(&self, a: &Scalar, k: u32) -> Result<Scalar> {
        let hk = self.pow(&self.h(), k as i64)?;
        self.div(a, &hk)
    }

    /// Evaluates a polynomial of `source` (a context with only `h` and
    /// coordinates) at the given scalars of `self`. `h` maps to `h`.
    pub fn eval_foreign_poly(&self, source: &ScalarContext, p: &Poly, values: &[Scalar]) -> Result<Scalar> {
        if !source.function_names().is_empty() {
            return Err(Error::Composition(
                "the substituted expression uses function symbols that do not reduce in the target context".into(),
            ));
        }
        if values.len() != source.ncoords {
            return Err(Error::Dimension(format!(
                "{} values for {} coordinates",
                values.len(),
                source.ncoords
            )));
        }
        let mut vals = vec![self.h()];
        vals.extend_from_slice(values);
        let mut out = self.zero();
        for (m, c) in p.terms() {
            let mut t = self.constant(c.clone());
            for (v, &e) in m.exponents().iter().enumerate() {
                if e > 0 {
                    t = self.mul(&t, &self.pow(&vals[v], e as i64)?);
                }
            }
            out = self.add(&out, &t);
        }
        Ok(out)
    }

    pub fn compose(&self, source: &ScalarContext, a: &Scalar, values: &[Scalar]) -> Result<Scalar> {
        let n = self.eval_foreign_poly(source, &a.num, values)?;
        let d = self.eval_foreign_poly(source, &a.den, values)?;
        self.div(&n, &d)
    }

    /// Deterministic text form, parseable by the script grammar.
    pub fn format(&self, a: &Scalar) -> String {
        if a.den.is_one() {
            return format_poly(&a.num, &self.names);
        }
        if a.den.is_monomial() {
            let (dm, _) = a.den.leading().unwrap();
            return join_terms(a.num.terms().map(|(m, c)| {
                let e: Vec<i64> = m
                    .exponents()
                    .iter()
                    .zip(dm.exponents())
                    .map(|(&x, &y)| x as i64 - y as i64)
                    .collect();
                format_term(c, format_monomial(&e, &self.names))
            }));
        }
        let num = format_poly(&a.num, &self.names);
        let den = format_poly(&a.den, &self.names);
        let num = if a.num.len() > 1 { format!("({num})") } else { num };
        format!("{num}/({den})")
    }

    /// Signed terms of `a` for use inside a longer sum: one part per
    /// numerator term when the denominator is a monomial, otherwise a
    /// single part.
    pub fn format_parts(&self, a: &Scalar) -> Vec<(bool, String)> {
        if a.den.is_monomial() {
            let (dm, _) = a.den.leading().unwrap();
            return a
                .num
                .terms()
                .map(|(m, c)| {
                    let e: Vec<i64> = m.exponents().iter().zip(dm.exponents()).map(|(&x, &y)| x as i64 - y as i64).collect();
                    format_term(c, format_monomial(&e, &self.names))
                })
                .collect();
        }
        if a.num.len() == 1 {
            let neg = a.is_negative();
            let abs = if neg { self.neg(a) } else { a.clone() };
            return vec![(neg, self.format(&abs))];
        }
        vec![(false, self.format(a))]
    }

    /// Formats `a` as a signed term body: `(negative, body)` for atomic
    /// scalars, `(false, "(...)")` otherwise.
    pub fn format_signed(&self, a: &Scalar) -> (bool, String) {
        if a.is_atomic() {
            let neg = a.is_negative();
            let abs = if neg { self.neg(a) } else { a.clone() };
            (neg, self.format(&abs))
        } else {
            (false, format!("({})", self.format(a)))
        }
    }

    pub fn format_rational(c: &Rational) -> String {
        format_rational(c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{int, rat};

    fn q_ctx() -> ScalarContext {
        ScalarContext::with_coordinates(&["q"]).unwrap()
    }

    #[test]
    fn rational_constants_add() {
        let ctx = ScalarContext::bare();
        let a = ctx.constant(rat(1, 2));
        let b = ctx.constant(rat(1, 3));
        assert_eq!(ctx.add(&a, &b), ctx.constant(rat(5, 6)));
    }

    #[test]
    fn polar_relation_rewrites_sine_square() {
        let ctx = ScalarContext::polar();
        let s = ctx.symbol("s").unwrap();
        let c = ctx.symbol("c").unwrap();
        let expect = ctx.sub(&ctx.one(), &ctx.mul(&c, &c));
        assert_eq!(ctx.mul(&s, &s), expect);
        // s^2 c -> c - c^3
        let s2c = ctx.mul(&ctx.mul(&s, &s), &c);
        let c3 = ctx.pow(&c, 3).unwrap();
        assert_eq!(s2c, ctx.sub(&c, &c3));
        // s^4 -> (1 - c^2)^2
        let s4 = ctx.pow(&s, 4).unwrap();
        assert_eq!(s4, ctx.pow(&expect, 2).unwrap());
        let sum = ctx.add(&ctx.mul(&s, &s), &ctx.mul(&c, &c));
        assert!(sum.is_one());
        assert!(ctx.critical_pair_failures().is_empty());
    }

    #[test]
    fn reduce_is_idempotent() {
        let ctx = ScalarContext::polar();
        let s = ctx.symbol("s").unwrap();
        let x = ctx.add(&ctx.pow(&s, 5).unwrap(), &ctx.symbol("r").unwrap());
        assert_eq!(ctx.reduce(&x), x);
        assert_eq!(ctx.reduce(&ctx.reduce(&x)), ctx.reduce(&x));
    }

    #[test]
    fn polar_derivatives() {
        let ctx = ScalarContext::polar();
        let c = ctx.symbol("c").unwrap();
        let s = ctx.symbol("s").unwrap();
        assert_eq!(ctx.diff_by_name(&c, "theta").unwrap(), ctx.neg(&s));
        assert!(ctx.diff_by_name(&c, "r").unwrap().is_zero());
        let circle = ctx.add(&ctx.mul(&s, &s), &ctx.mul(&c, &c));
        assert!(ctx.diff_by_name(&circle, "theta").unwrap().is_zero());
    }

    #[test]
    fn polynomial_derivative() {
        let ctx = q_ctx();
        let q = ctx.symbol("q").unwrap();
        let f = ctx.add(&ctx.pow(&q, 3).unwrap(), &q);
        let df = ctx.diff(&f, 0).unwrap();
        let expect = ctx.add(&ctx.scale(&ctx.pow(&q, 2).unwrap(), &int(3)), &ctx.one());
        assert_eq!(df, expect);
    }

    #[test]
    fn division_round_trip() {
        let ctx = q_ctx();
        let q = ctx.symbol("q").unwrap();
        let f = ctx.add(&ctx.scale(&ctx.pow(&q, 2).unwrap(), &int(3)), &ctx.one());
        let d = ctx.div(&f, &q).unwrap();
        assert_eq!(ctx.mul(&d, &q), f);
        assert_eq!(ctx.div(&f, &ctx.zero()), Err(Error::DivisionByZero));
    }

    #[test]
    fn fractions_cancel_common_factors() {
        let ctx = q_ctx();
        let q = ctx.symbol("q").unwrap();
        let one = ctx.one();
        let a = ctx.mul(&ctx.add(&q, &one), &ctx.sub(&q, &one));
        let x = ctx.div(&a, &ctx.add(&q, &one)).unwrap();
        assert_eq!(x, ctx.sub(&q, &one));
    }

    #[test]
    fn conjugate_rationalization_is_canonical() {
        // s/(1 - c) and (1 + c)/s are equal on the circle.
        let ctx = ScalarContext::polar();
        let s = ctx.symbol("s").unwrap();
        let c = ctx.symbol("c").unwrap();
        let one = ctx.one();
        let a = ctx.div(&s, &ctx.sub(&one, &c)).unwrap();
        let b = ctx.div(&ctx.add(&one, &c), &s).unwrap();
        assert_eq!(a, b);
        assert!(ctx.equal(&a, &b));
    }

    #[test]
    fn rejects_increasing_rule() {
        let mut ctx = ScalarContext::new(&["t"], &["c", "s"]).unwrap();
        // with c declared first, c^2 outranks s^2 so s^2 -> 1 - c^2 is not decreasing
        let c = ctx.symbol("c").unwrap();
        let repl = ctx.sub(&ctx.one(), &ctx.mul(&c, &c));
        let lead = Monomial::from_exponents(vec![0, 0, 0, 2]);
        assert!(ctx.add_relation(lead, repl.numer().clone()).is_err());
    }

    #[test]
    fn formats_negative_powers() {
        let ctx = ScalarContext::polar();
        let r = ctx.symbol("r").unwrap();
        let x = ctx.neg(&ctx.div(&ctx.h(), &r).unwrap());
        assert_eq!(ctx.format(&x), "-h*r^-1");
        let y = ctx.div(&ctx.one(), &ctx.add(&r, &ctx.one())).unwrap();
        assert_eq!(ctx.format(&y), "1/(r + 1)");
    }
}
