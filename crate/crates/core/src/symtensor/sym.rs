//! The weight-truncated symmetric algebra `Ŝ_A(L, A)` on dual letters.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::graded::{odd, AlgebraElement, BaseAlgebra, FreeModule, ModuleElement, Scalar};

/// A sorted multiset of letter indices; its length is the weight.
///
/// Ordered by weight first, then lexicographically.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Word(Vec<usize>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    /// Sorts the letters; no sign bookkeeping is done here.
    pub fn from_letters(mut letters: Vec<usize>) -> Self {
        letters.sort_unstable();
        Word(letters)
    }

    pub fn letter(i: usize) -> Self {
        Word(vec![i])
    }

    pub fn letters(&self) -> &[usize] {
        &self.0
    }

    pub fn weight(&self) -> usize {
        self.0.len()
    }

    pub fn count(&self, letter: usize) -> usize {
        self.0.iter().filter(|&&l| l == letter).count()
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.0.len(), &self.0).cmp(&(other.0.len(), &other.0))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

/// `Σ c_w · w` with `c_w ∈ A` written to the left of the word `w`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SymElement {
    cap: usize,
    terms: BTreeMap<Word, AlgebraElement>,
}

impl SymElement {
    pub fn zero(cap: usize) -> Self {
        SymElement { cap, terms: BTreeMap::new() }
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &AlgebraElement)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, w: &Word) -> AlgebraElement {
        self.terms.get(w).cloned().unwrap_or_default()
    }

    /// Adds `c·w`, silently dropping words above the cap.
    pub fn add_term(&mut self, w: Word, c: &AlgebraElement) {
        if c.is_zero() || w.weight() > self.cap {
            return;
        }
        match self.terms.get_mut(&w) {
            Some(entry) => {
                entry.add_assign(c);
                if entry.is_zero() {
                    self.terms.remove(&w);
                }
            }
            None => {
                self.terms.insert(w, c.clone());
            }
        }
    }

    pub fn add_scaled(&mut self, other: &SymElement, s: &Scalar) {
        if s.is_zero() {
            return;
        }
        for (w, c) in other.terms() {
            self.add_term(w.clone(), &c.scale(s));
        }
    }

    pub fn add_assign(&mut self, other: &SymElement) {
        for (w, c) in other.terms() {
            self.add_term(w.clone(), c);
        }
    }

    pub fn sub_assign(&mut self, other: &SymElement) {
        self.add_scaled(other, &Scalar::from_int(-1));
    }

    pub fn add(&self, other: &SymElement) -> SymElement {
        let mut out = self.clone();
        out.add_assign(other);
        out
    }

    pub fn sub(&self, other: &SymElement) -> SymElement {
        let mut out = self.clone();
        out.sub_assign(other);
        out
    }

    pub fn scale(&self, s: &Scalar) -> SymElement {
        let mut out = SymElement::zero(self.cap);
        out.add_scaled(self, s);
        out
    }

    pub fn neg(&self) -> SymElement {
        self.scale(&Scalar::from_int(-1))
    }

    /// The weight-`r` component.
    pub fn component(&self, r: usize) -> SymElement {
        self.filter(|w| w.weight() == r)
    }

    /// Words satisfying the predicate.
    pub fn filter(&self, keep: impl Fn(&Word) -> bool) -> SymElement {
        SymElement {
            cap: self.cap,
            terms: self.terms.iter().filter(|(w, _)| keep(w)).map(|(w, c)| (w.clone(), c.clone())).collect(),
        }
    }

    /// Weights carrying a nonzero component.
    pub fn weights(&self) -> Vec<usize> {
        let mut ws: Vec<usize> = self.terms.keys().map(Word::weight).collect();
        ws.dedup();
        ws
    }

    pub fn min_weight(&self) -> Option<usize> {
        self.terms.keys().next().map(Word::weight)
    }

    /// The same element viewed with another cap (dropping words above it).
    pub fn with_cap(&self, cap: usize) -> SymElement {
        SymElement {
            cap,
            terms: self.terms.iter().filter(|(w, _)| w.weight() <= cap).map(|(w, c)| (w.clone(), c.clone())).collect(),
        }
    }
}

impl fmt::Debug for SymElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.terms().map(|(w, c)| format!("[{c:?}]x{w:?}")).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// The algebra `Ŝ_A(L, A)` truncated at weight `cap`, presented on letters
/// `x_i` dual to the generators `g_i` of `L`, with `|x_i| = −|g_i|`.
///
/// Words are graded commutative: `x_i x_j = (−1)^{|x_i||x_j|} x_j x_i`, and
/// coefficients are moved past letters with the Koszul sign.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymAlgebra {
    base: Arc<BaseAlgebra>,
    letter_degrees: Vec<i64>,
    letter_names: Vec<String>,
    cap: usize,
}

impl SymAlgebra {
    pub fn new(base: Arc<BaseAlgebra>, letter_degrees: Vec<i64>, cap: usize) -> Self {
        let letter_names = (0..letter_degrees.len()).map(|i| format!("x{i}")).collect();
        SymAlgebra { base, letter_degrees, letter_names, cap }
    }

    /// Letters dual to the generators of `module`, named `name^∨`.
    pub fn dual_of(module: &FreeModule, cap: usize) -> Self {
        SymAlgebra {
            base: module.base().clone(),
            letter_degrees: module.degrees().iter().map(|d| -d).collect(),
            letter_names: module.names().iter().map(|n| format!("{n}^")).collect(),
            cap,
        }
    }

    pub fn with_names(mut self, names: Vec<String>) -> Self {
        assert_eq!(names.len(), self.letter_degrees.len());
        self.letter_names = names;
        self
    }

    pub fn base(&self) -> &Arc<BaseAlgebra> {
        &self.base
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    pub fn rank(&self) -> usize {
        self.letter_degrees.len()
    }

    pub fn letter_degree(&self, i: usize) -> i64 {
        self.letter_degrees[i]
    }

    pub fn letter_degrees(&self) -> &[i64] {
        &self.letter_degrees
    }

    pub fn letter_name(&self, i: usize) -> &str {
        &self.letter_names[i]
    }

    /// Degrees of the generators `g_i` the letters are dual to.
    pub fn generator_degrees(&self) -> Vec<i64> {
        self.letter_degrees.iter().map(|d| -d).collect()
    }

    /// Same algebra with a different cap.
    pub fn with_cap(&self, cap: usize) -> SymAlgebra {
        SymAlgebra { cap, ..self.clone() }
    }

    pub fn zero(&self) -> SymElement {
        SymElement::zero(self.cap)
    }

    pub fn one(&self) -> SymElement {
        self.from_algebra(&self.base.one())
    }

    pub fn from_algebra(&self, a: &AlgebraElement) -> SymElement {
        let mut out = self.zero();
        out.add_term(Word::empty(), a);
        out
    }

    /// The letter `x_i`.
    pub fn letter(&self, i: usize) -> SymElement {
        self.monomial(&[i])
    }

    /// `x_{i_1} ⋯ x_{i_r}` in the order given (with the reordering sign).
    pub fn monomial(&self, letters: &[usize]) -> SymElement {
        let mut out = self.one();
        for &l in letters {
            let mut x = self.zero();
            x.add_term(Word::letter(l), &self.base.one());
            out = self.mul(&out, &x);
        }
        out
    }

    /// `c·w` for a sorted word.
    pub fn word(&self, w: Word, c: &AlgebraElement) -> SymElement {
        let mut out = self.zero();
        out.add_term(w, c);
        out
    }

    pub fn word_degree(&self, w: &Word) -> i64 {
        w.letters().iter().map(|&l| self.letter_degrees[l]).sum()
    }

    fn odd_letter(&self, l: usize) -> bool {
        odd(self.letter_degrees[l])
    }

    /// Whether a sorted word vanishes because an odd letter repeats.
    pub fn word_vanishes(&self, w: &Word) -> bool {
        w.letters().windows(2).any(|p| p[0] == p[1] && self.odd_letter(p[0]))
    }

    /// `w₁·w₂ = ±w` with `w` sorted; `None` when an odd letter repeats.
    pub fn merge(&self, w1: &Word, w2: &Word) -> Option<(Word, bool)> {
        let mut parity = false;
        for &j in w2.letters() {
            if !self.odd_letter(j) {
                continue;
            }
            for &i in w1.letters() {
                if i > j && self.odd_letter(i) {
                    parity = !parity;
                }
            }
        }
        let mut letters = Vec::with_capacity(w1.weight() + w2.weight());
        letters.extend_from_slice(w1.letters());
        letters.extend_from_slice(w2.letters());
        let w = Word::from_letters(letters);
        if self.word_vanishes(&w) {
            None
        } else {
            Some((w, parity))
        }
    }

    /// Total degree of each homogeneous part, keyed by degree.
    pub fn homogeneous_parts(&self, x: &SymElement) -> BTreeMap<i64, SymElement> {
        let mut parts: BTreeMap<i64, SymElement> = BTreeMap::new();
        for (w, c) in x.terms() {
            let wd = self.word_degree(w);
            for (k, s) in c.terms() {
                parts
                    .entry(self.base.degree(k) + wd)
                    .or_insert_with(|| self.zero())
                    .add_term(w.clone(), &AlgebraElement::term(k, s.clone()));
            }
        }
        parts
    }

    /// Degree of a homogeneous element; zero yields `fallback`.
    pub fn degree_of(&self, x: &SymElement, fallback: i64) -> Result<i64> {
        let parts = self.homogeneous_parts(x);
        match parts.len() {
            0 => Ok(fallback),
            1 => Ok(*parts.keys().next().unwrap()),
            _ => Err(Error::Inhomogeneous(self.display(x))),
        }
    }

    /// Product, with the cap of `self`. Use [`SymAlgebra::product`] for a
    /// checked variant.
    pub fn mul(&self, x: &SymElement, y: &SymElement) -> SymElement {
        let mut out = self.zero();
        for (w1, c1) in x.terms() {
            let d1 = self.word_degree(w1);
            for (w2, c2) in y.terms() {
                if w1.weight() + w2.weight() > self.cap {
                    continue;
                }
                let Some((w, parity)) = self.merge(w1, w2) else { continue };
                // c1 w1 · c2 w2 = (−1)^{|w1||c2|} c1 c2 · w1 w2
                let mut coeff = AlgebraElement::zero();
                for (k, s) in c2.terms() {
                    let flip = parity ^ (odd(d1) && odd(self.base.degree(k)));
                    let t = self.base.mul(c1, &AlgebraElement::term(k, s.clone()));
                    coeff.add_scaled(&t, &Scalar::sign(flip));
                }
                out.add_term(w, &coeff);
            }
        }
        out
    }

    fn check(&self, x: &SymElement) -> Result<()> {
        if x.cap != self.cap {
            return Err(Error::CapMismatch(x.cap, self.cap));
        }
        for (w, c) in x.terms() {
            if let Some(&l) = w.letters().iter().find(|&&l| l >= self.rank()) {
                return Err(Error::Index(format!("letter {l} outside rank {}", self.rank())));
            }
            if let Some((k, _)) = c.terms().find(|&(k, _)| k >= self.base.dim()) {
                return Err(Error::Index(format!("basis element {k} outside the base")));
            }
        }
        Ok(())
    }

    /// Checked product: both factors must belong to this algebra.
    pub fn product(&self, x: &SymElement, y: &SymElement) -> Result<SymElement> {
        self.check(x)?;
        self.check(y)?;
        Ok(self.mul(x, y))
    }

    /// Left multiplication by an algebra element.
    pub fn act(&self, a: &AlgebraElement, x: &SymElement) -> SymElement {
        self.mul(&self.from_algebra(a), x)
    }

    pub fn display(&self, x: &SymElement) -> String {
        if x.is_zero() {
            return "0".into();
        }
        x.terms().map(|(w, c)| self.display_term(w, c)).collect::<Vec<_>>().join(" + ")
    }

    pub fn display_word(&self, w: &Word) -> String {
        if w.weight() == 0 {
            return "1".into();
        }
        w.letters().iter().map(|&l| self.letter_names[l].as_str()).collect::<Vec<_>>().join("·")
    }

    pub fn display_term(&self, w: &Word, c: &AlgebraElement) -> String {
        format!("({})·{}", self.base.display(c), self.display_word(w))
    }

    /// All nonvanishing sorted words of weight exactly `r`.
    pub fn words_of_weight(&self, r: usize) -> Vec<Word> {
        let mut out = Vec::new();
        let mut cur = Vec::with_capacity(r);
        self.words_rec(r, 0, &mut cur, &mut out);
        out
    }

    fn words_rec(&self, r: usize, from: usize, cur: &mut Vec<usize>, out: &mut Vec<Word>) {
        if cur.len() == r {
            out.push(Word(cur.clone()));
            return;
        }
        for l in from..self.rank() {
            let next = if self.odd_letter(l) { l + 1 } else { l };
            cur.push(l);
            self.words_rec(r, next, cur, out);
            cur.pop();
        }
    }

    /// The spanning set `e_α · w` over all basis elements and words of weight ≤ cap.
    pub fn spanning_set(&self) -> Vec<SymElement> {
        let mut out = Vec::new();
        for r in 0..=self.cap {
            for w in self.words_of_weight(r) {
                for k in 0..self.base.dim() {
                    out.push(self.word(w.clone(), &AlgebraElement::basis(k)));
                }
            }
        }
        out
    }

    // ---------------------------------------------------------------
    // Multilinear-map view

    /// Value of the bare word `x_{w}` on generators `g_{h_1}, …, g_{h_r}`,
    /// computed from the product rule
    /// `(x·η)(v_1…v_m) = Σ_k (−1)^{|η||v_k| + |v_k|(|v_1|+…+|v_{k−1}|)} x(v_k) η(v̂_k)`.
    pub fn eval_word_on_generators(&self, w: &[usize], gens: &[usize]) -> Scalar {
        if w.len() != gens.len() {
            return Scalar::zero();
        }
        if w.is_empty() {
            return Scalar::one();
        }
        let (x, rest) = (w[0], &w[1..]);
        let rest_odd = odd(rest.iter().map(|&l| self.letter_degrees[l]).sum());
        let mut total = Scalar::zero();
        let mut before = 0i64;
        for (k, &h) in gens.iter().enumerate() {
            let hd = -self.letter_degrees[h];
            if h == x {
                let flip = (rest_odd && odd(hd)) ^ (odd(hd) && odd(before));
                let mut others = gens.to_vec();
                others.remove(k);
                let v = self.eval_word_on_generators(rest, &others);
                if !v.is_zero() {
                    total += &v.negate_if(flip);
                }
            }
            before += hd;
        }
        total
    }

    /// `η(g_{h_1}, …, g_{h_r})` for generator indices `h`.
    pub fn evaluate_on_generators(&self, eta: &SymElement, gens: &[usize]) -> AlgebraElement {
        let mut out = AlgebraElement::zero();
        let sorted = Word::from_letters(gens.to_vec());
        let Some(c) = eta.terms.get(&sorted) else { return out };
        let v = self.eval_word_on_generators(sorted.letters(), gens);
        if !v.is_zero() {
            out.add_scaled(c, &v);
        }
        out
    }

    /// `η(v_1, …, v_r)` for module elements, using
    /// `η(…, a v_k, …) = (−1)^{|a|(|η| + |v_1| + ⋯ + |v_{k−1}|)} a η(…, v_k, …)`.
    pub fn evaluate(&self, eta: &SymElement, args: &[ModuleElement]) -> Result<AlgebraElement> {
        let r = args.len();
        if r > self.cap {
            return Err(Error::WeightOverflow { weight: r, cap: self.cap });
        }
        let eta_r = eta.component(r);
        let mut out = AlgebraElement::zero();
        for (eta_deg, part) in self.homogeneous_parts(&eta_r) {
            // Expand every argument into monomials (basis coefficient, generator).
            let mut stack: Vec<(Vec<usize>, AlgebraElement, i64, bool)> =
                vec![(Vec::new(), self.base.one(), 0, false)];
            for v in args {
                let mut next = Vec::new();
                for (gens, coeff, gen_sum, parity) in &stack {
                    for (g, a) in v.terms() {
                        for (k, s) in a.terms() {
                            let ad = self.base.degree(k);
                            let flip = odd(ad) && odd(eta_deg + gen_sum);
                            let c = self.base.mul(coeff, &AlgebraElement::term(k, s.clone()));
                            if c.is_zero() {
                                continue;
                            }
                            let mut gs = gens.clone();
                            gs.push(g);
                            next.push((gs, c, gen_sum - self.letter_degrees[g], parity ^ flip));
                        }
                    }
                }
                stack = next;
            }
            for (gens, coeff, _, parity) in stack {
                let value = self.evaluate_on_generators(&part, &gens);
                if value.is_zero() {
                    continue;
                }
                out.add_scaled(&self.base.mul(&coeff, &value), &Scalar::sign(parity));
            }
        }
        Ok(out)
    }

    /// The unique weight-`r` element whose values on sorted generator tuples
    /// are given by `f`; `f` is only queried on sorted tuples without
    /// repeated odd generators.
    pub fn from_generator_values(&self, r: usize, mut f: impl FnMut(&[usize]) -> AlgebraElement) -> SymElement {
        let mut out = self.zero();
        for w in self.words_of_weight(r) {
            let value = f(w.letters());
            if value.is_zero() {
                continue;
            }
            let norm = self.eval_word_on_generators(w.letters(), w.letters());
            out.add_term(w, &value.scale(&norm.inv().expect("nonzero normalisation")));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graded::models;

    fn algebra() -> SymAlgebra {
        // letters: x0 even, x1 odd, x2 odd
        SymAlgebra::new(Arc::new(models::exterior(&["e"])), vec![0, -1, 1], 4)
    }

    #[test]
    fn unit_is_neutral_and_odd_squares_vanish() {
        let s = algebra();
        let x1 = s.letter(1);
        assert_eq!(s.mul(&s.one(), &x1), x1);
        assert!(s.mul(&x1, &x1).is_zero());
        let x0 = s.letter(0);
        assert!(!s.mul(&x0, &x0).is_zero());
    }

    #[test]
    fn graded_commutativity() {
        let s = algebra();
        let x1 = s.letter(1);
        let x2 = s.letter(2);
        assert_eq!(s.mul(&x1, &x2), s.mul(&x2, &x1).neg());
        let e = s.from_algebra(&AlgebraElement::basis(1));
        assert_eq!(s.mul(&e, &x1), s.mul(&x1, &e).neg());
        let x0 = s.letter(0);
        assert_eq!(s.mul(&e, &x0), s.mul(&x0, &e));
    }

    #[test]
    fn dual_letter_evaluates_to_one() {
        let s = algebra();
        let v = s.evaluate(&s.letter(1), &[ModuleElement::term(1, AlgebraElement::basis(0))]).unwrap();
        assert_eq!(v, AlgebraElement::basis(0));
    }

    #[test]
    fn swapping_odd_arguments_flips_sign() {
        let s = algebra();
        let eta = s.monomial(&[1, 2]);
        let g1 = ModuleElement::term(1, AlgebraElement::basis(0));
        let g2 = ModuleElement::term(2, AlgebraElement::basis(0));
        let a = s.evaluate(&eta, &[g1.clone(), g2.clone()]).unwrap();
        let b = s.evaluate(&eta, &[g2, g1]).unwrap();
        assert!(!a.is_zero());
        assert_eq!(a, b.neg());
    }

    #[test]
    fn even_square_normalisation() {
        let s = algebra();
        assert_eq!(s.eval_word_on_generators(&[0, 0], &[0, 0]), Scalar::from_int(2));
        let eta = s.from_generator_values(2, |_| AlgebraElement::basis(0));
        assert_eq!(s.evaluate_on_generators(&eta, &[0, 0]), AlgebraElement::basis(0));
    }

    #[test]
    fn truncation_drops_high_weights() {
        let s = SymAlgebra::new(Arc::new(BaseAlgebra::ground()), vec![0], 2);
        let x = s.letter(0);
        assert!(s.mul(&s.mul(&x, &x), &x).is_zero());
        assert!(s.product(&x, &SymElement::zero(3)).is_err());
    }
}
