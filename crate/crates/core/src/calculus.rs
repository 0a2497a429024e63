//! Noncommutative differential calculus: partial and operator-valued
//! derivatives, 1-forms, derivations, the chain rule and the cyclic
//! derivative.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::ncalg::{normalize, AlgebraSpec, Factor, Mode, NCPoly, RawTerm, Var, Word};
use crate::scalar::Scalar;

/// `∂H/∂v`: occurrence deletion for generators, coefficient derivative for
/// coordinates of a differential-operator algebra.
pub fn partial(h: &NCPoly, v: Var) -> Result<NCPoly> {
    let alg = h.alg().clone();
    alg.check_var(v)?;
    let ctx = alg.ctx().clone();
    let mut out = NCPoly::zero(&alg);
    match v {
        Var::Gen(k) => {
            for (w, c) in h.terms() {
                let n = w.count(k);
                if n == 0 {
                    continue;
                }
                if alg.mode() == Mode::Free {
                    for (i, &g) in w.0.iter().enumerate() {
                        if g == k {
                            let mut d = w.0.clone();
                            d.remove(i);
                            out.add_term(Word(d), c.clone());
                        }
                    }
                } else {
                    // Normal words are sorted, so every deletion gives the same word.
                    let i = w.0.iter().position(|&g| g == k).unwrap();
                    let mut d = w.0.clone();
                    d.remove(i);
                    out.add_term(Word(d), ctx.scale(c, &crate::poly::int(n as i64)));
                }
            }
        }
        Var::Coord(j) => {
            for (w, c) in h.terms() {
                out.add_term(w.clone(), ctx.diff(c, j)?);
            }
        }
    }
    Ok(out)
}

/// Occurrence-deletion derivative of an unnormalized sum, normalized
/// afterwards.
pub fn partial_raw(alg: &Arc<AlgebraSpec>, terms: &[RawTerm], k: usize) -> Result<NCPoly> {
    alg.check_gen(k)?;
    let mut out = Vec::new();
    for t in terms {
        for (i, f) in t.factors.iter().enumerate() {
            if *f == Factor::Gen(k) {
                let mut d = t.factors.clone();
                d.remove(i);
                out.push(RawTerm { coeff: t.coeff.clone(), factors: d });
            }
        }
    }
    normalize(alg, &out)
}

/// `∂~H/∂u_k (x)`: every occurrence of `u_k` replaced by `x` in turn.
pub fn op_partial(h: &NCPoly, k: usize, x: &NCPoly) -> Result<NCPoly> {
    let alg = h.alg().clone();
    alg.check_gen(k)?;
    let mut out = NCPoly::zero(&alg);
    for (w, c) in h.terms() {
        for (i, &g) in w.0.iter().enumerate() {
            if g != k {
                continue;
            }
            let left = NCPoly::from_normal_terms(&alg, [(Word(w.0[..i].to_vec()), c.clone())]);
            let right = word_element(&alg, &w.0[i + 1..]);
            out = out.checked_add(&left.checked_mul(x)?.checked_mul(&right)?)?;
        }
    }
    Ok(out)
}

fn word_element(alg: &Arc<AlgebraSpec>, letters: &[usize]) -> NCPoly {
    NCPoly::from_normal_terms(alg, [(Word(letters.to_vec()), alg.ctx().one())])
}

/// Iterated partial; `sigma` has one entry per variable of
/// [`AlgebraSpec::all_vars`].
pub fn partial_multi(h: &NCPoly, sigma: &[u32]) -> Result<NCPoly> {
    let vars = h.alg().all_vars();
    if sigma.len() != vars.len() {
        return Err(Error::Dimension(format!("multi-index of length {} for {} variables", sigma.len(), vars.len())));
    }
    let mut out = h.clone();
    for (v, &k) in vars.iter().zip(sigma) {
        for _ in 0..k {
            out = partial(&out, *v)?;
        }
    }
    Ok(out)
}

/// Iterated partial in an explicit order.
pub fn partial_seq(h: &NCPoly, vars: &[Var]) -> Result<NCPoly> {
    let mut out = h.clone();
    for v in vars {
        out = partial(&out, *v)?;
    }
    Ok(out)
}

/// A finite sum `Σ left · du_k · right`.
#[derive(Clone, Debug)]
pub struct OneForm {
    alg: Arc<AlgebraSpec>,
    terms: Vec<(NCPoly, usize, NCPoly)>,
}

impl OneForm {
    pub fn new(alg: &Arc<AlgebraSpec>) -> Self {
        OneForm { alg: alg.clone(), terms: Vec::new() }
    }

    pub fn alg(&self) -> &Arc<AlgebraSpec> {
        &self.alg
    }

    pub fn push(&mut self, left: NCPoly, k: usize, right: NCPoly) {
        if !left.is_zero() && !right.is_zero() {
            self.terms.push((left, k, right));
        }
    }

    pub fn terms(&self) -> &[(NCPoly, usize, NCPoly)] {
        &self.terms
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn format(&self) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        self.terms
            .iter()
            .map(|(l, k, r)| format!("({})·d{}·({})", l, self.alg.generators()[*k], r))
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

/// `dH = Σ_k ∂~H/∂u_k (du_k)`.
pub fn differential(h: &NCPoly) -> OneForm {
    let alg = h.alg().clone();
    let mut form = OneForm::new(&alg);
    for (w, c) in h.terms() {
        for (i, &g) in w.0.iter().enumerate() {
            let left = NCPoly::from_normal_terms(&alg, [(Word(w.0[..i].to_vec()), c.clone())]);
            form.push(left, g, word_element(&alg, &w.0[i + 1..]));
        }
    }
    form
}

/// A derivation, given by the images of the generators.
#[derive(Clone, Debug)]
pub struct DerivationSpec {
    pub images: Vec<NCPoly>,
}

impl DerivationSpec {
    pub fn new(alg: &Arc<AlgebraSpec>, images: Vec<NCPoly>) -> Result<Self> {
        if images.len() != alg.ngens() {
            return Err(Error::Dimension(format!("{} images for {} generators", images.len(), alg.ngens())));
        }
        if images.iter().any(|x| !crate::ncalg::same_alg(x.alg(), alg)) {
            return Err(Error::SpecMismatch);
        }
        Ok(DerivationSpec { images })
    }

    /// `u_k ↦ u_k`.
    pub fn radial(alg: &Arc<AlgebraSpec>) -> Self {
        DerivationSpec { images: (0..alg.ngens()).map(|k| NCPoly::gen(alg, k)).collect() }
    }
}

/// `⟨Σ φ du_k ψ, X⟩ = Σ φ X(u_k) ψ`.
pub fn pair(form: &OneForm, x: &DerivationSpec) -> Result<NCPoly> {
    let mut out = NCPoly::zero(&form.alg);
    for (l, k, r) in &form.terms {
        let img = x.images.get(*k).ok_or(Error::InvalidGenerator { index: *k, count: x.images.len() })?;
        out = out.checked_add(&l.checked_mul(img)?.checked_mul(r)?)?;
    }
    Ok(out)
}

/// `X(H) = Σ_k ∂~H/∂u_k (X(u_k))`.
pub fn apply_derivation(x: &DerivationSpec, h: &NCPoly) -> Result<NCPoly> {
    let mut out = NCPoly::zero(h.alg());
    for (k, img) in x.images.iter().enumerate() {
        out = out.checked_add(&op_partial(h, k, img)?)?;
    }
    Ok(out)
}

/// `Σ_k ∂~H/∂u_k (u_k)`; equals `ℓ·H` for `H` homogeneous of degree `ℓ`.
pub fn euler_operator(h: &NCPoly) -> Result<NCPoly> {
    apply_derivation(&DerivationSpec::radial(h.alg()), h)
}

/// `ad_F(H) = FH − HF`.
pub fn ad(f: &NCPoly, h: &NCPoly) -> Result<NCPoly> {
    f.commutator(h)
}

/// `Σ_k h c_ik ∂H/∂u_k`, which equals `ad_{u_i}(H)` in a
/// constant-commutator algebra.
pub fn ad_generator_formula(h: &NCPoly, i: usize) -> Result<NCPoly> {
    let alg = h.alg().clone();
    alg.require_mode(Mode::ConstantCommutator)?;
    alg.check_gen(i)?;
    let ctx = alg.ctx();
    let mut out = NCPoly::zero(&alg);
    for k in 0..alg.ngens() {
        let c = alg.structure_constant(i, k);
        if c.is_zero() {
            continue;
        }
        let d = partial(h, Var::Gen(k))?;
        out = out.checked_add(&d.scale(&ctx.scale(&ctx.h(), &c)))?;
    }
    Ok(out)
}

/// The free algebra on the same generators and scalars.
pub fn free_shadow(alg: &Arc<AlgebraSpec>) -> Result<Arc<AlgebraSpec>> {
    AlgebraSpec::free(alg.generators(), alg.ctx().clone())
}

/// Reads a free-algebra element as an unnormalized sum over `target`.
pub fn lift_words(x: &NCPoly) -> Vec<RawTerm> {
    crate::ncalg::to_raw(x)
}

/// Checks that `ad_F(φ·R·ψ)`, computed in the free algebra for the
/// defining relation `R = u_i u_j − u_j u_i − h c_ij`, vanishes in the
/// quotient. `f`, `φ` and `ψ` may be given in `alg` (their normal words are
/// read as free words) or in any free algebra on the same generators.
pub fn ideal_preserved(alg: &Arc<AlgebraSpec>, f: &NCPoly, phi: &NCPoly, psi: &NCPoly, i: usize, j: usize) -> Result<bool> {
    alg.require_mode(Mode::ConstantCommutator)?;
    alg.check_gen(i)?;
    alg.check_gen(j)?;
    let free = free_shadow(alg)?;
    let ctx = alg.ctx();
    let to_free = |x: &NCPoly| -> Result<NCPoly> {
        if !crate::ncalg::same_alg(x.alg(), alg) && x.alg().mode() != Mode::Free {
            return Err(Error::WrongMode { expected: Mode::Free.name(), found: x.alg().mode().name() });
        }
        if x.alg().ngens() != alg.ngens() || x.alg().ctx() != ctx {
            return Err(Error::SpecMismatch);
        }
        Ok(NCPoly::from_normal_terms(&free, x.terms().map(|(w, c)| (w.clone(), c.clone()))))
    };
    let (f, phi, psi) = (to_free(f)?, to_free(phi)?, to_free(psi)?);
    let ui = NCPoly::gen(&free, i);
    let uj = NCPoly::gen(&free, j);
    let hc = ctx.scale(&ctx.h(), &alg.structure_constant(i, j));
    let rel = (&ui * &uj).checked_sub(&(&uj * &ui))?.checked_sub(&NCPoly::scalar(&free, hc))?;
    let inner = phi.checked_mul(&rel)?.checked_mul(&psi)?;
    let image = ad(&f, &inner)?;
    Ok(normalize(alg, &lift_words(&image))?.is_zero())
}

/// Substitutes `images[k]` for generator `k` of `h`'s algebra.
pub fn substitute(h: &NCPoly, images: &[NCPoly], target: &Arc<AlgebraSpec>) -> Result<NCPoly> {
    check_substitution(h, images, target)?;
    let mut out = NCPoly::zero(target);
    for (w, c) in h.terms() {
        let mut term = NCPoly::scalar(target, c.clone());
        for &g in &w.0 {
            term = term.checked_mul(&images[g])?;
        }
        out = out.checked_add(&term)?;
    }
    Ok(out)
}

fn check_substitution(h: &NCPoly, images: &[NCPoly], target: &Arc<AlgebraSpec>) -> Result<()> {
    if images.len() != h.alg().ngens() {
        return Err(Error::Malformed(format!(
            "substitution gives {} images for {} generators",
            images.len(),
            h.alg().ngens()
        )));
    }
    if h.alg().ctx() != target.ctx() {
        return Err(Error::Malformed("substitution between different scalar contexts".into()));
    }
    if images.iter().any(|x| !crate::ncalg::same_alg(x.alg(), target)) {
        return Err(Error::SpecMismatch);
    }
    Ok(())
}

/// `∂~H/∂u_k (y)` with every other letter replaced by its image.
pub fn op_partial_substituted(h: &NCPoly, k: usize, y: &NCPoly, images: &[NCPoly], target: &Arc<AlgebraSpec>) -> Result<NCPoly> {
    check_substitution(h, images, target)?;
    let mut out = NCPoly::zero(target);
    for (w, c) in h.terms() {
        for (i, &g) in w.0.iter().enumerate() {
            if g != k {
                continue;
            }
            let mut term = NCPoly::scalar(target, c.clone());
            for (t, &l) in w.0.iter().enumerate() {
                term = term.checked_mul(if t == i { y } else { &images[l] })?;
            }
            out = out.checked_add(&term)?;
        }
    }
    Ok(out)
}

/// Compares `∂~(H∘u)/∂φ_α (x)` with `Σ_k ∂~H/∂u_k (∂~u_k/∂φ_α (x))`.
pub fn chain_rule_check(h: &NCPoly, u: &[NCPoly], alpha: usize, x: &NCPoly) -> Result<bool> {
    let target = x.alg().clone();
    let composed = substitute(h, u, &target)?;
    let lhs = op_partial(&composed, alpha, x)?;
    let mut rhs = NCPoly::zero(&target);
    for (k, uk) in u.iter().enumerate() {
        let inner = op_partial(uk, alpha, x)?;
        if inner.is_zero() {
            continue;
        }
        rhs = rhs.checked_add(&op_partial_substituted(h, k, &inner, u, &target)?)?;
    }
    Ok(lhs == rhs)
}

/// Cyclic derivative `δF/δx_j`: rotate each word so an occurrence of `x_j`
/// comes first, then delete it.
pub fn cyclic_variational(f: &NCPoly, j: usize) -> Result<NCPoly> {
    let alg = f.alg().clone();
    alg.require_mode(Mode::Free)?;
    alg.check_gen(j)?;
    let mut out = NCPoly::zero(&alg);
    for (w, c) in f.terms() {
        for (i, &g) in w.0.iter().enumerate() {
            if g == j {
                let mut r = w.0[i + 1..].to_vec();
                r.extend_from_slice(&w.0[..i]);
                out.add_term(Word(r), c.clone());
            }
        }
    }
    Ok(out)
}

fn min_rotation(w: &[usize]) -> Vec<usize> {
    (0..w.len().max(1))
        .map(|i| {
            let mut r = w[i.min(w.len())..].to_vec();
            r.extend_from_slice(&w[..i.min(w.len())]);
            r
        })
        .min()
        .unwrap_or_default()
}

/// Projection onto cyclic classes of words; its kernel is the span of
/// commutators.
pub fn necklace(x: &NCPoly) -> Result<BTreeMap<Vec<usize>, Scalar>> {
    x.alg().require_mode(Mode::Free)?;
    let ctx = x.ctx();
    let mut out: BTreeMap<Vec<usize>, Scalar> = BTreeMap::new();
    for (w, c) in x.terms() {
        let key = min_rotation(&w.0);
        let e = out.entry(key).or_insert_with(|| ctx.zero());
        *e = ctx.add(e, c);
    }
    out.retain(|_, c| !c.is_zero());
    Ok(out)
}

/// True iff `x` is a sum of commutators.
pub fn is_commutator_sum(x: &NCPoly) -> Result<bool> {
    Ok(necklace(x)?.is_empty())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::ScalarContext;

    fn free3() -> Arc<AlgebraSpec> {
        AlgebraSpec::free(&["u1", "u2", "u3"], Arc::new(ScalarContext::bare())).unwrap()
    }

    fn w(alg: &Arc<AlgebraSpec>, letters: &[usize]) -> NCPoly {
        word_element(alg, letters)
    }

    #[test]
    fn partial_counts_occurrences() {
        let a = free3();
        let x = w(&a, &[0, 1, 0]);
        let d = partial(&x, Var::Gen(0)).unwrap();
        assert_eq!(d, &w(&a, &[1, 0]) + &w(&a, &[0, 1]));
        let weyl = AlgebraSpec::weyl(1);
        let qp = &NCPoly::gen(&weyl, 0) * &NCPoly::gen(&weyl, 1);
        assert_eq!(partial(&qp, Var::Gen(1)).unwrap(), NCPoly::gen(&weyl, 0));
    }

    #[test]
    fn partial_well_defined_on_quotient() {
        let weyl = AlgebraSpec::weyl(1);
        let raw = [RawTerm::word(weyl.ctx(), &[1, 1, 0, 0])];
        let before = partial_raw(&weyl, &raw, 1).unwrap();
        let after = partial(&normalize(&weyl, &raw).unwrap(), Var::Gen(1)).unwrap();
        assert_eq!(before, after);
    }

    #[test]
    fn op_partial_insertions() {
        let a = free3();
        let x = w(&a, &[2]);
        assert_eq!(op_partial(&w(&a, &[0, 1]), 1, &x).unwrap(), w(&a, &[0, 2]));
        assert_eq!(op_partial(&w(&a, &[0, 0]), 0, &x).unwrap(), &w(&a, &[2, 0]) + &w(&a, &[0, 2]));
    }

    #[test]
    fn euler_operator_reading() {
        let a = free3();
        let h = w(&a, &[0, 1]);
        let two = NCPoly::constant(&a, crate::poly::int(2));
        assert_eq!(euler_operator(&h).unwrap(), &two * &h);
        // The left-multiplication reading Σ u_k ∂H/∂u_k gives u1 u2 + u2 u1.
        let left: NCPoly = (0..3)
            .map(|k| &NCPoly::gen(&a, k) * &partial(&h, Var::Gen(k)).unwrap())
            .fold(NCPoly::zero(&a), |acc, t| &acc + &t);
        assert_ne!(left, &two * &h);
    }

    #[test]
    fn differential_and_pairing() {
        let a = free3();
        let form = differential(&w(&a, &[0, 1]));
        assert_eq!(form.terms().len(), 2);
        assert!(differential(&NCPoly::one(&a)).is_empty());
        let mut omega = OneForm::new(&a);
        omega.push(w(&a, &[1]), 0, w(&a, &[2]));
        let x = DerivationSpec::new(&a, vec![w(&a, &[0, 0]), NCPoly::zero(&a), NCPoly::zero(&a)]).unwrap();
        assert_eq!(pair(&omega, &x).unwrap(), w(&a, &[1, 0, 0, 2]));
    }

    #[test]
    fn cyclic_examples() {
        let a = free3();
        assert_eq!(cyclic_variational(&w(&a, &[0, 1]), 0).unwrap(), w(&a, &[1]));
        let two = NCPoly::constant(&a, crate::poly::int(2));
        assert_eq!(cyclic_variational(&w(&a, &[0, 0]), 0).unwrap(), &two * &w(&a, &[0]));
        assert!(cyclic_variational(&NCPoly::one(&a), 0).unwrap().is_zero());
        assert!(is_commutator_sum(&(&w(&a, &[0, 1]) - &w(&a, &[1, 0]))).unwrap());
    }

    #[test]
    fn chain_rule_square() {
        let u = AlgebraSpec::free(&["u"], Arc::new(ScalarContext::bare())).unwrap();
        let phi = AlgebraSpec::free(&["f"], Arc::new(ScalarContext::bare())).unwrap();
        let h = w(&u, &[0, 0]);
        let sub = vec![w(&phi, &[0, 0])];
        assert!(chain_rule_check(&h, &sub, 0, &NCPoly::one(&phi)).unwrap());
    }

    #[test]
    fn ad_formula_and_ideal() {
        let weyl = AlgebraSpec::weyl(1);
        let q = NCPoly::gen(&weyl, 0);
        let p = NCPoly::gen(&weyl, 1);
        let h = &(&p * &p) * &(&q * &q);
        for i in 0..2 {
            let lhs = ad(&NCPoly::gen(&weyl, i), &h).unwrap();
            assert_eq!(lhs, ad_generator_formula(&h, i).unwrap());
        }
        let free = free_shadow(&weyl).unwrap();
        let f = w(&free, &[1, 1]);
        assert!(ideal_preserved(&weyl, &f, &w(&free, &[0]), &w(&free, &[1, 0]), 1, 0).unwrap());
    }
}
