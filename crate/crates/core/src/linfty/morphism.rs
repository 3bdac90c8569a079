//! L∞[1] morphisms and the residual of their defining identity.

use std::fmt;

use crate::error::{Error, Result};
use crate::graded::{sym_sign_odd, unshuffles, FreeModule, ModuleElement, Scalar};
use crate::linfty::algebra::{generators, LInftyOneAlgebra, Residual, SymmetricBrackets};
use crate::linfty::table::{canonical_tuples, BracketTable, Symmetry};

/// The codomain of a morphism: an L∞[1] algebra presented by how its
/// brackets act on its own elements.
pub trait LInftyOneTarget {
    type Elem: Clone + PartialEq + fmt::Debug;

    fn zero(&self) -> Self::Elem;

    fn add_scaled(&self, acc: &mut Self::Elem, x: &Self::Elem, s: &Scalar);

    fn is_zero(&self, x: &Self::Elem) -> bool;

    /// `ℓ'_l(args)` with `l = args.len() ≥ 1`.
    fn bracket(&self, args: &[Self::Elem]) -> Self::Elem;
}

impl LInftyOneTarget for LInftyOneAlgebra {
    type Elem = ModuleElement;

    fn zero(&self) -> ModuleElement {
        ModuleElement::zero()
    }

    fn add_scaled(&self, acc: &mut ModuleElement, x: &ModuleElement, s: &Scalar) {
        acc.add_scaled(x, s);
    }

    fn is_zero(&self, x: &ModuleElement) -> bool {
        x.is_zero()
    }

    fn bracket(&self, args: &[ModuleElement]) -> ModuleElement {
        SymmetricBrackets::bracket(self, args)
    }
}

/// Ordered compositions of `n` into positive parts.
pub fn compositions(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for first in 1..=n {
        for mut rest in compositions(n - first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

fn factorial(l: usize) -> i64 {
    (1..=l as i64).product()
}

/// Left minus right side of the morphism identity on every canonical
/// generator tuple of arity `n`:
///
/// `Σ_{i+j=n} Σ_{σ ∈ Sh(i,j)} α(σ, v) f_{j+1}(ℓ_i(v_σ(1), …, v_σ(i)), v_σ(i+1), …, v_σ(n))`
/// minus
/// `Σ_l (1/l!) Σ_{k_1+⋯+k_l=n} Σ_{σ ∈ Sh(k_1,…,k_l)} α(σ, v) ℓ'_l(f_{k_1}(…), …, f_{k_l}(…))`.
///
/// The right side runs over ordered compositions with a `1/l!`, which
/// equals the sum over unordered block sizes with unshuffles that keep
/// equal-size blocks in order.
pub fn morphism_residual_with<S, T, F>(source: &S, target: &T, n: usize, f: F) -> Result<Residual<T::Elem>>
where
    S: SymmetricBrackets + ?Sized,
    T: LInftyOneTarget + ?Sized,
    F: Fn(&[ModuleElement]) -> T::Elem,
{
    if n > source.arity_cap() {
        return Err(Error::ArityOverflow { arity: n, cap: source.arity_cap() });
    }
    let module = source.carrier();
    let mut out = Vec::new();
    for tuple in canonical_tuples(Symmetry::Symmetric, n, module.degrees()) {
        let args = generators(module, &tuple);
        let degrees: Vec<i64> = tuple.iter().map(|&g| module.degree(g)).collect();
        let mut total = target.zero();
        for i in 1..=n {
            for sigma in unshuffles(&[i, n - i]) {
                let v = sigma.permute(&args);
                let inner = source.bracket(&v[..i]);
                if inner.is_zero() {
                    continue;
                }
                let mut outer = vec![inner];
                outer.extend_from_slice(&v[i..]);
                let value = f(&outer);
                target.add_scaled(&mut total, &value, &Scalar::sign(sym_sign_odd(&sigma, &degrees)));
            }
        }
        for parts in compositions(n) {
            let l = parts.len();
            let weight = Scalar::ratio(-1, factorial(l))?;
            for sigma in unshuffles(&parts) {
                let v = sigma.permute(&args);
                let mut start = 0;
                let mut values = Vec::with_capacity(l);
                for &k in &parts {
                    values.push(f(&v[start..start + k]));
                    start += k;
                }
                if values.iter().any(|x| target.is_zero(x)) {
                    continue;
                }
                let value = target.bracket(&values);
                let s = weight.clone().negate_if(sym_sign_odd(&sigma, &degrees));
                target.add_scaled(&mut total, &value, &s);
            }
        }
        if !target.is_zero(&total) {
            out.push((tuple, total));
        }
    }
    Ok(out)
}

/// A morphism of L∞[1] algebras between carriers over the same base:
/// graded symmetric, `A`-multilinear components `f_n` of degree 0.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LInftyMorphism {
    source: FreeModule,
    target: FreeModule,
    components: Vec<BracketTable>,
}

impl LInftyMorphism {
    /// All components zero, for arities `1..=cap`.
    pub fn new(source: FreeModule, target: FreeModule, cap: usize) -> Result<Self> {
        if source.base() != target.base() {
            return Err(Error::BaseMismatch("morphism carriers must share the base algebra".into()));
        }
        let components = (1..=cap).map(|n| BracketTable::new(n, 0, Symmetry::Symmetric)).collect();
        Ok(LInftyMorphism { source, target, components })
    }

    /// The identity morphism of a carrier.
    pub fn identity(carrier: &FreeModule, cap: usize) -> Result<Self> {
        let mut f = LInftyMorphism::new(carrier.clone(), carrier.clone(), cap)?;
        for g in 0..carrier.rank() {
            f.set(&[g], carrier.generator(g))?;
        }
        Ok(f)
    }

    pub fn arity_cap(&self) -> usize {
        self.components.len()
    }

    pub fn component(&self, n: usize) -> &BracketTable {
        &self.components[n - 1]
    }

    pub fn set(&mut self, tuple: &[usize], value: ModuleElement) -> Result<()> {
        let n = tuple.len();
        if n == 0 || n > self.components.len() {
            return Err(Error::ArityOverflow { arity: n, cap: self.components.len() });
        }
        self.components[n - 1].set_between(&self.source, &self.target, tuple, value)
    }

    /// `f_n(args)` with `n = args.len()`.
    pub fn apply(&self, args: &[ModuleElement]) -> ModuleElement {
        match args.len() {
            n if n >= 1 && n <= self.components.len() => {
                self.components[n - 1].apply_between(&self.source, &self.target, args)
            }
            _ => ModuleElement::zero(),
        }
    }

    /// The residual of the morphism identity from `l` to `l2` in arity `n`.
    pub fn residual(&self, l: &LInftyOneAlgebra, l2: &LInftyOneAlgebra, n: usize) -> Result<Residual<ModuleElement>> {
        if l.carrier() != &self.source || l2.carrier() != &self.target {
            return Err(Error::Invalid("morphism carriers do not match the algebras".into()));
        }
        morphism_residual_with(l, l2, n, |args| self.apply(args))
    }
}

/// The residual of the morphism identity for `f: l → l2` in arity `n`.
pub fn morphism_residual(
    f: &LInftyMorphism,
    l: &LInftyOneAlgebra,
    l2: &LInftyOneAlgebra,
    n: usize,
) -> Result<Residual<ModuleElement>> {
    f.residual(l, l2, n)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn composition_counts() {
        assert_eq!(compositions(1), vec![vec![1]]);
        assert_eq!(compositions(3).len(), 4);
        assert_eq!(compositions(4).len(), 8);
    }
}
