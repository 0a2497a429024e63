//! Sparse multivariate polynomials over ℚ.
//!
//! Terms are kept in a `BTreeMap` keyed by [`Monomial`], whose order is
//! degree-lexicographic with variable 0 as the most significant variable.
//! The leading term is therefore the last entry of the map.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Rational = BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    BigRational::from_integer(BigInt::from(n))
}

/// Exponent vector of a commutative monomial.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn var(nvars: usize, v: usize) -> Self {
        let mut e = vec![0; nvars];
        e[v] = 1;
        Monomial(e)
    }

    pub fn from_exponents(exps: Vec<u32>) -> Self {
        Monomial(exps)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn exp(&self, v: usize) -> u32 {
        self.0[v]
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// `self / other`, assuming `other` divides `self`.
    pub fn div(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| *a.max(b)).collect())
    }

    pub fn gcd(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| *a.min(b)).collect())
    }

    pub fn with_exp(&self, v: usize, e: u32) -> Monomial {
        let mut m = self.clone();
        m.0[v] = e;
        m
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    nvars: usize,
    terms: BTreeMap<Monomial, Rational>,
}

impl Poly {
    pub fn zero(nvars: usize) -> Self {
        Poly { nvars, terms: BTreeMap::new() }
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, Rational::one())
    }

    pub fn constant(nvars: usize, c: Rational) -> Self {
        let mut p = Self::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(Monomial::one(nvars), c);
        }
        p
    }

    pub fn var(nvars: usize, v: usize) -> Self {
        Self::term(Monomial::var(nvars, v), Rational::one())
    }

    pub fn term(m: Monomial, c: Rational) -> Self {
        let nvars = m.nvars();
        let mut p = Self::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(m, c);
        }
        p
    }

    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Monomial, Rational)>) -> Self {
        let mut p = Self::zero(nvars);
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self.terms.iter().next().is_some_and(|(m, c)| m.is_one() && c.is_one())
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(Monomial::is_one)
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    /// Constant term (the coefficient of the unit monomial).
    pub fn constant_term(&self) -> Rational {
        self.terms.get(&Monomial::one(self.nvars)).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in descending monomial order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Rational)> {
        self.terms.iter().rev()
    }

    pub fn coeff(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn leading(&self) -> Option<(&Monomial, &Rational)> {
        self.terms.iter().next_back()
    }

    pub fn leading_coeff(&self) -> Rational {
        self.leading().map(|(_, c)| c.clone()).unwrap_or_else(Rational::zero)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    pub fn degree_in(&self, v: usize) -> u32 {
        self.terms.keys().map(|m| m.exp(v)).max().unwrap_or(0)
    }

    pub fn contains_var(&self, v: usize) -> bool {
        self.terms.keys().any(|m| m.exp(v) > 0)
    }

    pub fn add_term(&mut self, m: Monomial, c: Rational) {
        debug_assert_eq!(m.nvars(), self.nvars);
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(existing) => {
                *existing += c;
                if existing.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn scale(&self, c: &Rational) -> Poly {
        if c.is_zero() {
            return Poly::zero(self.nvars);
        }
        Poly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, x)| (m.clone(), x * c)).collect(),
        }
    }

    pub fn mul_term(&self, m: &Monomial, c: &Rational) -> Poly {
        if c.is_zero() {
            return Poly::zero(self.nvars);
        }
        Poly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(k, x)| (k.mul(m), x * c)).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut result = Poly::one(self.nvars);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        result
    }

    /// Formal partial derivative with respect to variable `v`.
    pub fn derivative(&self, v: usize) -> Poly {
        let mut out = Poly::zero(self.nvars);
        for (m, c) in &self.terms {
            let e = m.exp(v);
            if e > 0 {
                out.add_term(m.with_exp(v, e - 1), c * Rational::from_integer(BigInt::from(e)));
            }
        }
        out
    }

    /// Antiderivative in `v` with zero constant of integration.
    pub fn integrate(&self, v: usize) -> Poly {
        let mut out = Poly::zero(self.nvars);
        for (m, c) in &self.terms {
            let e = m.exp(v);
            out.add_term(m.with_exp(v, e + 1), c / Rational::from_integer(BigInt::from(e + 1)));
        }
        out
    }

    /// Substitutes the polynomial `value` for variable `v`.
    pub fn substitute(&self, v: usize, value: &Poly) -> Poly {
        let mut powers: Vec<Poly> = vec![Poly::one(self.nvars)];
        let mut out = Poly::zero(self.nvars);
        for (m, c) in &self.terms {
            let e = m.exp(v) as usize;
            while powers.len() <= e {
                let next = powers.last().map(|p| p * value).unwrap_or_else(|| Poly::one(self.nvars));
                powers.push(next);
            }
            let rest = Poly::term(m.with_exp(v, 0), c.clone());
            out = &out + &(&rest * &powers[e]);
        }
        out
    }

    /// Re-embeds into a ring with `nvars` variables, sending variable `i`
    /// to variable `map[i]`.
    pub fn remap(&self, nvars: usize, map: &[usize]) -> Poly {
        let mut out = Poly::zero(nvars);
        for (m, c) in &self.terms {
            let mut e = vec![0u32; nvars];
            for (i, &x) in m.exponents().iter().enumerate() {
                if x > 0 {
                    e[map[i]] += x;
                }
            }
            out.add_term(Monomial(e), c.clone());
        }
        out
    }

    /// Rational content: positive, such that `self / content` has coprime
    /// integer coefficients.
    pub fn content(&self) -> Rational {
        let mut num = BigInt::zero();
        let mut den = BigInt::one();
        for c in self.terms.values() {
            num = num.gcd(c.numer());
            den = den.lcm(c.denom());
        }
        if num.is_zero() {
            return Rational::one();
        }
        Rational::new(num, den)
    }

    /// Primitive integer form with positive leading coefficient.
    pub fn normalized(&self) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        let mut c = self.content();
        if self.leading_coeff().is_negative() {
            c = -c;
        }
        self.scale(&c.recip())
    }

    pub fn monic(&self) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(&self.leading_coeff().recip())
    }

    /// Exact division; `None` when `d` does not divide `self`.
    pub fn div_exact(&self, d: &Poly) -> Option<Poly> {
        let (dm, dc) = d.leading()?;
        if d.is_constant() {
            return Some(self.scale(&dc.recip()));
        }
        let (dm, dc) = (dm.clone(), dc.clone());
        let mut r = self.clone();
        let mut q = Poly::zero(self.nvars);
        while let Some((rm, rc)) = r.leading() {
            if !dm.divides(rm) {
                return None;
            }
            let tm = rm.div(&dm);
            let tc = rc / &dc;
            r = &r - &d.mul_term(&tm, &tc);
            q.add_term(tm, tc);
        }
        Some(q)
    }

    fn to_univariate(&self, v: usize) -> Vec<Poly> {
        let deg = self.degree_in(v) as usize;
        let mut coeffs = vec![Poly::zero(self.nvars); deg + 1];
        for (m, c) in &self.terms {
            coeffs[m.exp(v) as usize].add_term(m.with_exp(v, 0), c.clone());
        }
        coeffs
    }

    fn from_univariate(nvars: usize, v: usize, coeffs: &[Poly]) -> Poly {
        let mut out = Poly::zero(nvars);
        for (e, c) in coeffs.iter().enumerate() {
            for (m, x) in &c.terms {
                out.add_term(m.with_exp(v, e as u32), x.clone());
            }
        }
        out
    }

    /// Greatest common divisor, normalized (see [`Poly::normalized`]).
    pub fn gcd(&self, other: &Poly) -> Poly {
        gcd(self, other)
    }
}

fn monomial_gcd(m: &Monomial, p: &Poly) -> Poly {
    let g = p.terms.keys().fold(m.clone(), |acc, k| acc.gcd(k));
    Poly::term(g, Rational::one())
}

fn gcd_many<'a>(nvars: usize, items: impl IntoIterator<Item = &'a Poly>) -> Poly {
    let mut g = Poly::zero(nvars);
    for p in items {
        if p.is_zero() {
            continue;
        }
        g = gcd(&g, p);
        if g.is_one() {
            break;
        }
    }
    if g.is_zero() {
        Poly::one(nvars)
    } else {
        g
    }
}

fn gcd(a: &Poly, b: &Poly) -> Poly {
    if a.is_zero() {
        return b.normalized();
    }
    if b.is_zero() {
        return a.normalized();
    }
    if a.is_constant() || b.is_constant() {
        return Poly::one(a.nvars);
    }
    if a.is_monomial() {
        return monomial_gcd(a.leading().unwrap().0, b);
    }
    if b.is_monomial() {
        return monomial_gcd(b.leading().unwrap().0, a);
    }
    let nvars = a.nvars;
    // A variable present in only one operand only contributes through the
    // content of that operand.
    if let Some(v) = (0..nvars).find(|&v| a.contains_var(v) != b.contains_var(v)) {
        return if a.contains_var(v) {
            gcd(&gcd_many(nvars, &a.to_univariate(v)), b)
        } else {
            gcd(a, &gcd_many(nvars, &b.to_univariate(v)))
        };
    }
    let vars: Vec<usize> = (0..nvars).filter(|&v| a.contains_var(v)).collect();
    if vars.len() == 1 {
        return univariate_gcd(a, b, vars[0]);
    }
    let y = *vars
        .iter()
        .min_by_key(|&&v| (a.degree_in(v).min(b.degree_in(v)), v))
        .expect("non-constant polynomials contain a variable");
    dense_gcd(a, b, y).unwrap_or_else(|| prs_gcd(a, b, y))
}

/// Euclid over ℚ for polynomials in the single variable `v`.
fn univariate_gcd(a: &Poly, b: &Poly, v: usize) -> Poly {
    let coeffs = |p: &Poly| -> Vec<Rational> { p.to_univariate(v).iter().map(Poly::constant_term).collect() };
    let mut x = coeffs(a);
    let mut y = coeffs(b);
    if x.len() < y.len() {
        std::mem::swap(&mut x, &mut y);
    }
    while !y.is_empty() {
        let lc = y.last().expect("nonempty").clone();
        for c in y.iter_mut() {
            *c = &*c / &lc;
        }
        while x.len() >= y.len() {
            let lx = x.last().expect("nonempty").clone();
            let shift = x.len() - y.len();
            for (j, c) in y.iter().enumerate() {
                x[j + shift] = &x[j + shift] - &(&lx * c);
            }
            x.pop();
            while x.last().is_some_and(Zero::is_zero) {
                x.pop();
            }
        }
        std::mem::swap(&mut x, &mut y);
    }
    let mut out = Poly::zero(a.nvars);
    for (e, c) in x.into_iter().enumerate() {
        out.add_term(Monomial::one(a.nvars).with_exp(v, e as u32), c);
    }
    out.normalized()
}

/// Coefficients of `p` as polynomials in `y`, keyed by the remaining monomial.
fn split(p: &Poly, y: usize) -> BTreeMap<Monomial, Poly> {
    let mut out: BTreeMap<Monomial, Poly> = BTreeMap::new();
    for (m, c) in &p.terms {
        let key = m.with_exp(y, 0);
        let t = Monomial::one(p.nvars).with_exp(y, m.exp(y));
        out.entry(key).or_insert_with(|| Poly::zero(p.nvars)).add_term(t, c.clone());
    }
    out
}

fn eval_at(p: &Poly, y: usize, at: &Rational) -> Poly {
    p.substitute(y, &Poly::constant(p.nvars, at.clone()))
}

/// Newton interpolation; coefficients in ascending powers.
fn interpolate(xs: &[Rational], ys: &[Rational]) -> Vec<Rational> {
    let n = xs.len();
    let mut d = ys.to_vec();
    for k in 1..n {
        for i in (k..n).rev() {
            d[i] = (&d[i] - &d[i - 1]) / (&xs[i] - &xs[i - k]);
        }
    }
    let mut out = vec![d[n - 1].clone()];
    for k in (0..n - 1).rev() {
        // out = out * (y - xs[k]) + d[k]
        let mut next = vec![Rational::zero(); out.len() + 1];
        for (i, c) in out.iter().enumerate() {
            next[i + 1] = &next[i + 1] + c;
            next[i] = &next[i] - &(c * &xs[k]);
        }
        next[0] = &next[0] + &d[k];
        out = next;
    }
    out
}

/// Gcd by evaluating `y` at integer points, recursing on the images and
/// interpolating. `None` if no candidate verifies within the point budget.
fn dense_gcd(a: &Poly, b: &Poly, y: usize) -> Option<Poly> {
    let nvars = a.nvars;
    let (sa, sb) = (split(a, y), split(b, y));
    let ca = gcd_many(nvars, sa.values());
    let cb = gcd_many(nvars, sb.values());
    let content = gcd(&ca, &cb);
    let a = a.div_exact(&ca)?;
    let b = b.div_exact(&cb)?;
    let lca = split(&a, y).into_values().next_back()?;
    let lcb = split(&b, y).into_values().next_back()?;
    let gamma = gcd(&lca, &lcb);
    let bound = a.degree_in(y).min(b.degree_in(y)) as usize + gamma.degree_in(y) as usize;
    let mut lead: Option<Monomial> = None;
    let mut points: Vec<(Rational, Poly)> = Vec::new();
    for k in 1..=(4 * bound as i64 + 32) {
        let at = int(k);
        if eval_at(&lca, y, &at).is_zero() || eval_at(&lcb, y, &at).is_zero() {
            continue;
        }
        let g = gcd(&eval_at(&a, y, &at), &eval_at(&b, y, &at));
        if g.is_constant() {
            return Some(content);
        }
        let lm = g.leading().expect("nonzero").0.clone();
        match lead.as_ref().map(|l| lm.cmp(l)) {
            Some(Ordering::Greater) => continue,
            Some(Ordering::Equal) => {}
            _ => {
                lead = Some(lm);
                points.clear();
            }
        }
        let scale = eval_at(&gamma, y, &at).constant_term() / g.leading_coeff();
        points.push((at, g.scale(&scale)));
        if points.len() <= bound {
            continue;
        }
        let xs: Vec<Rational> = points.iter().map(|(x, _)| x.clone()).collect();
        let mut keys: Vec<&Monomial> = points.iter().flat_map(|(_, g)| g.terms.keys()).collect();
        keys.sort();
        keys.dedup();
        let mut cand = Poly::zero(nvars);
        for m in keys {
            let vals: Vec<Rational> = points.iter().map(|(_, g)| g.coeff(m)).collect();
            for (e, c) in interpolate(&xs, &vals).into_iter().enumerate() {
                cand.add_term(m.with_exp(y, e as u32), c);
            }
        }
        let cc = gcd_many(nvars, split(&cand, y).values());
        let cand = cand.div_exact(&cc)?;
        if a.div_exact(&cand).is_some() && b.div_exact(&cand).is_some() {
            return Some((&cand * &content).normalized());
        }
    }
    None
}

fn prs_gcd(a: &Poly, b: &Poly, v: usize) -> Poly {
    let nvars = a.nvars;
    let ua = a.to_univariate(v);
    let ub = b.to_univariate(v);
    let ca = gcd_many(nvars, &ua);
    let cb = gcd_many(nvars, &ub);
    let content = gcd(&ca, &cb);
    let mut pa = primitive_part(&ua, &ca);
    let mut pb = primitive_part(&ub, &cb);
    if pa.len() < pb.len() {
        std::mem::swap(&mut pa, &mut pb);
    }
    let g = subresultant_prs(pa, pb, nvars);
    let g = if g.len() == 1 {
        Poly::one(nvars)
    } else {
        let cg = gcd_many(nvars, &g);
        Poly::from_univariate(nvars, v, &primitive_part(&g, &cg))
    };
    (&g * &content).normalized()
}

/// Last nonzero remainder of the subresultant sequence of `a` and `b`
/// (`deg a ≥ deg b`), up to a factor free of the main variable.
fn subresultant_prs(mut a: Vec<Poly>, mut b: Vec<Poly>, nvars: usize) -> Vec<Poly> {
    let mut g = Poly::one(nvars);
    let mut hh = Poly::one(nvars);
    loop {
        let delta = (a.len() - b.len()) as u32;
        let r = prem(&a, &b);
        if r.is_empty() {
            return b;
        }
        if r.len() == 1 {
            return r;
        }
        let divisor = &g * &hh.pow(delta);
        let next: Vec<Poly> = r.iter().map(|c| c.div_exact(&divisor).expect("subresultant division is exact")).collect();
        a = b;
        b = next;
        g = a.last().expect("nonempty").clone();
        hh = if delta == 0 {
            hh
        } else {
            g.pow(delta).div_exact(&hh.pow(delta - 1)).expect("subresultant division is exact")
        };
    }
}

/// Divides out `content` and the common rational content of the coefficients.
fn primitive_part(coeffs: &[Poly], content: &Poly) -> Vec<Poly> {
    let parts: Vec<Poly> = coeffs
        .iter()
        .map(|c| c.div_exact(content).expect("content divides every coefficient"))
        .collect();
    let mut num = BigInt::zero();
    let mut den = BigInt::one();
    for c in parts.iter().flat_map(|p| p.terms.values()) {
        num = num.gcd(c.numer());
        den = den.lcm(c.denom());
    }
    if num.is_zero() {
        return parts;
    }
    let s = Rational::new(den, num);
    parts.into_iter().map(|p| p.scale(&s)).collect()
}

/// Pseudo-remainder `lc(b)^(deg a − deg b + 1)·a mod b` of univariate
/// polynomials with polynomial coefficients.
fn prem(a: &[Poly], b: &[Poly]) -> Vec<Poly> {
    let db = b.len() - 1;
    let lb = &b[db];
    let mut r: Vec<Poly> = a.to_vec();
    if r.len() <= db {
        trim(&mut r);
        return r;
    }
    for k in (db..r.len()).rev() {
        let lr = r[k].clone();
        for c in r[..=k].iter_mut() {
            *c = &*c * lb;
        }
        if !lr.is_zero() {
            let shift = k - db;
            for (j, bj) in b.iter().enumerate() {
                r[j + shift] = &r[j + shift] - &(&lr * bj);
            }
        }
        debug_assert!(r[k].is_zero());
    }
    trim(&mut r);
    r
}

fn trim(v: &mut Vec<Poly>) {
    while v.last().is_some_and(Poly::is_zero) {
        v.pop();
    }
}

impl<'a> Add<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let (mut big, small) = if self.len() >= rhs.len() { (self.clone(), rhs) } else { (rhs.clone(), self) };
        for (m, c) in &small.terms {
            big.add_term(m.clone(), c.clone());
        }
        big
    }
}

impl<'a> Sub<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }
}

impl<'a> Mul<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        let mut out = Poly::zero(self.nvars);
        if self.is_zero() || rhs.is_zero() {
            return out;
        }
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c.clone())).collect(),
        }
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = (0..self.nvars).map(|i| format!("x{i}")).collect();
        write!(f, "{}", format_poly(self, &names))
    }
}

pub(crate) fn format_rational(c: &Rational) -> String {
    if c.is_integer() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

/// Formats a monomial with the given exponents (negative exponents allowed),
/// `None` for the unit monomial.
pub(crate) fn format_monomial(exps: &[i64], names: &[String]) -> Option<String> {
    let parts: Vec<String> = exps
        .iter()
        .enumerate()
        .filter(|(_, &e)| e != 0)
        .map(|(i, &e)| if e == 1 { names[i].clone() } else { format!("{}^{}", names[i], e) })
        .collect();
    if parts.is_empty() {
        None
    } else {
        Some(parts.join("*"))
    }
}

/// Formats a coefficient-monomial pair as a signed term; returns
/// `(negative, body)`.
pub(crate) fn format_term(c: &Rational, mono: Option<String>) -> (bool, String) {
    let neg = c.is_negative();
    let a = c.abs();
    let body = match mono {
        None => format_rational(&a),
        Some(m) if a.is_one() => m,
        Some(m) => format!("{}*{}", format_rational(&a), m),
    };
    (neg, body)
}

pub(crate) fn join_terms(terms: impl IntoIterator<Item = (bool, String)>) -> String {
    let mut out = String::new();
    for (i, (neg, body)) in terms.into_iter().enumerate() {
        match (i, neg) {
            (0, false) => out.push_str(&body),
            (0, true) => {
                out.push('-');
                out.push_str(&body);
            }
            (_, false) => {
                out.push_str(" + ");
                out.push_str(&body);
            }
            (_, true) => {
                out.push_str(" - ");
                out.push_str(&body);
            }
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

pub fn format_poly(p: &Poly, names: &[String]) -> String {
    join_terms(p.terms().map(|(m, c)| {
        let exps: Vec<i64> = m.exponents().iter().map(|&e| e as i64).collect();
        format_term(c, format_monomial(&exps, names))
    }))
}
