//! Multilinear maps on a free module, stored by their values on sorted
//! generator tuples.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::graded::{odd, skew_sign_odd, sym_sign_odd, AlgebraElement, BaseAlgebra, FreeModule, ModuleElement, Permutation};

/// How a table behaves under permutations of its arguments.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Symmetry {
    /// `T(σ·v) = α(σ, v) T(v)`.
    Symmetric,
    /// `T(σ·v) = χ(σ, v) T(v)`.
    Skew,
}

impl Symmetry {
    fn sign_odd(self, sigma: &Permutation, degrees: &[i64]) -> bool {
        match self {
            Symmetry::Symmetric => sym_sign_odd(sigma, degrees),
            Symmetry::Skew => skew_sign_odd(sigma, degrees),
        }
    }

    /// Whether a repeated argument of this degree forces the value to vanish.
    pub fn repeat_vanishes(self, degree: i64) -> bool {
        match self {
            Symmetry::Symmetric => odd(degree),
            Symmetry::Skew => !odd(degree),
        }
    }
}

/// Sorts a generator tuple. Returns the sorted tuple and whether
/// `T(tuple) = −T(sorted)`, or `None` when the value is forced to vanish.
pub fn canonicalize(symmetry: Symmetry, tuple: &[usize], degrees: &[i64]) -> Option<(Vec<usize>, bool)> {
    let mut order: Vec<usize> = (0..tuple.len()).collect();
    order.sort_by_key(|&i| tuple[i]);
    let sorted: Vec<usize> = order.iter().map(|&i| tuple[i]).collect();
    if sorted.windows(2).any(|w| w[0] == w[1] && symmetry.repeat_vanishes(degrees[w[0]])) {
        return None;
    }
    // tuple = σ·sorted with σ = order⁻¹
    let sigma = Permutation::from_images(order).expect("argsort is a permutation").inverse();
    let sorted_degrees: Vec<i64> = sorted.iter().map(|&g| degrees[g]).collect();
    Some((sorted.clone(), symmetry.sign_odd(&sigma, &sorted_degrees)))
}

/// Sorted tuples of length `n` over `rank` generators whose values are not
/// forced to vanish.
pub fn canonical_tuples(symmetry: Symmetry, n: usize, degrees: &[i64]) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(n);
    fn rec(sym: Symmetry, n: usize, from: usize, degrees: &[i64], cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        for g in from..degrees.len() {
            let next = if sym.repeat_vanishes(degrees[g]) { g + 1 } else { g };
            cur.push(g);
            rec(sym, n, next, degrees, cur, out);
            cur.pop();
        }
    }
    rec(symmetry, n, 0, degrees, &mut cur, &mut out);
    out
}

/// Expands `T(w_1, …, w_n)` for a map of degree `degree` that is
/// `A`-multilinear with the Koszul rule
/// `T(…, a v_k, …) = (−1)^{|a|(|T| + |v_1| + ⋯ + |v_{k−1}|)} a T(…, v_k, …)`.
/// Returns pairs `(signed coefficient, generator tuple)` such that
/// `T(w) = Σ c · T(tuple)`.
pub fn expand_arguments(
    base: &BaseAlgebra,
    module_degrees: &[i64],
    degree: i64,
    args: &[ModuleElement],
) -> Vec<(AlgebraElement, Vec<usize>)> {
    let mut stack: Vec<(AlgebraElement, Vec<usize>, i64)> = vec![(base.one(), Vec::new(), degree)];
    for w in args {
        let mut next = Vec::new();
        for (coeff, gens, passed) in &stack {
            for (g, a) in w.terms() {
                for (k, s) in a.terms() {
                    let flip = odd(base.degree(k)) && odd(*passed);
                    let c = base.mul(coeff, &AlgebraElement::term(k, s.clone().negate_if(flip)));
                    if c.is_zero() {
                        continue;
                    }
                    let mut gs = gens.clone();
                    gs.push(g);
                    next.push((c, gs, passed + module_degrees[g]));
                }
            }
        }
        stack = next;
    }
    stack.into_iter().map(|(c, g, _)| (c, g)).collect()
}

/// Values of an `n`-ary map on sorted generator tuples.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BracketTable {
    arity: usize,
    degree: i64,
    symmetry: Symmetry,
    values: BTreeMap<Vec<usize>, ModuleElement>,
}

impl BracketTable {
    pub fn new(arity: usize, degree: i64, symmetry: Symmetry) -> Self {
        BracketTable { arity, degree, symmetry, values: BTreeMap::new() }
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn degree(&self) -> i64 {
        self.degree
    }

    pub fn symmetry(&self) -> Symmetry {
        self.symmetry
    }

    pub fn is_zero(&self) -> bool {
        self.values.is_empty()
    }

    /// Stored values, keyed by sorted tuples.
    pub fn values(&self) -> impl Iterator<Item = (&Vec<usize>, &ModuleElement)> {
        self.values.iter()
    }

    /// Sets `T(tuple) = value`, storing the canonical form.
    pub fn set(&mut self, module: &FreeModule, tuple: &[usize], value: ModuleElement) -> Result<()> {
        self.set_between(module, module, tuple, value)
    }

    /// [`BracketTable::set`] for a map from `source` to `target`.
    pub fn set_between(&mut self, source: &FreeModule, target: &FreeModule, tuple: &[usize], value: ModuleElement) -> Result<()> {
        if tuple.len() != self.arity {
            return Err(Error::SizeMismatch { expected: self.arity, found: tuple.len() });
        }
        if let Some(&g) = tuple.iter().find(|&&g| g >= source.rank()) {
            return Err(Error::Index(format!("generator {g} outside rank {}", source.rank())));
        }
        let expected = tuple.iter().map(|&g| source.degree(g)).sum::<i64>() + self.degree;
        let found = target.degree_of(&value, expected)?;
        if found != expected {
            return Err(Error::Degree(format!("value on {tuple:?} has degree {found}, expected {expected}")));
        }
        match canonicalize(self.symmetry, tuple, source.degrees()) {
            None if value.is_zero() => Ok(()),
            None => Err(Error::Invalid(format!("value on {tuple:?} must vanish by symmetry"))),
            Some((key, flip)) => {
                let v = if flip { value.scale(&crate::graded::Scalar::from_int(-1)) } else { value };
                if v.is_zero() {
                    self.values.remove(&key);
                } else {
                    self.values.insert(key, v);
                }
                Ok(())
            }
        }
    }

    /// `T(g_{t_1}, …, g_{t_n})` for any order of the tuple.
    pub fn on_generators(&self, degrees: &[i64], tuple: &[usize]) -> ModuleElement {
        match canonicalize(self.symmetry, tuple, degrees) {
            None => ModuleElement::zero(),
            Some((key, flip)) => match self.values.get(&key) {
                None => ModuleElement::zero(),
                Some(v) if flip => v.scale(&crate::graded::Scalar::from_int(-1)),
                Some(v) => v.clone(),
            },
        }
    }

    /// The Koszul-multilinear extension to arbitrary arguments.
    pub fn apply(&self, module: &FreeModule, args: &[ModuleElement]) -> ModuleElement {
        self.apply_between(module, module, args)
    }

    /// [`BracketTable::apply`] for a map from `source` to `target`.
    pub fn apply_between(&self, source: &FreeModule, target: &FreeModule, args: &[ModuleElement]) -> ModuleElement {
        let mut out = ModuleElement::zero();
        if args.len() != self.arity {
            return out;
        }
        for (c, tuple) in expand_arguments(source.base(), source.degrees(), self.degree, args) {
            let v = self.on_generators(source.degrees(), &tuple);
            if !v.is_zero() {
                out.add_assign(&target.act(&c, &v));
            }
        }
        out
    }

    /// The same table with every value transformed, keeping the keys.
    pub fn map_values(&self, degree: i64, symmetry: Symmetry, mut f: impl FnMut(&[usize], &ModuleElement) -> ModuleElement) -> BracketTable {
        let values = self
            .values
            .iter()
            .map(|(k, v)| (k.clone(), f(k, v)))
            .filter(|(_, v)| !v.is_zero())
            .collect();
        BracketTable { arity: self.arity, degree, symmetry, values }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graded::Scalar;
    use std::sync::Arc;

    #[test]
    fn canonical_form_tracks_signs() {
        let degrees = [1, 1, 0];
        assert_eq!(canonicalize(Symmetry::Symmetric, &[1, 0], &degrees), Some((vec![0, 1], true)));
        assert_eq!(canonicalize(Symmetry::Skew, &[1, 0], &degrees), Some((vec![0, 1], false)));
        assert_eq!(canonicalize(Symmetry::Symmetric, &[0, 0], &degrees), None);
        assert_eq!(canonicalize(Symmetry::Skew, &[2, 2], &degrees), None);
        assert_eq!(canonicalize(Symmetry::Symmetric, &[2, 0, 2], &degrees), Some((vec![0, 2, 2], false)));
    }

    #[test]
    fn set_normalises_order() {
        let m = FreeModule::new(Arc::new(BaseAlgebra::ground()), vec![1, 1, 3]);
        let mut t = BracketTable::new(2, 1, Symmetry::Symmetric);
        t.set(&m, &[1, 0], ModuleElement::term(2, AlgebraElement::basis(0))).unwrap();
        let v = t.on_generators(m.degrees(), &[0, 1]);
        assert_eq!(v, ModuleElement::term(2, AlgebraElement::term(0, Scalar::from_int(-1))));
        assert!(t.set(&m, &[0, 0], ModuleElement::term(2, AlgebraElement::basis(0))).is_err());
    }
}
