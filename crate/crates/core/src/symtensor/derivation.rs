//! Derivations of `Ŝ_A(L, A)` stored by their values on generators.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::graded::{odd, AlgebraElement, FreeModule, Scalar};
use crate::symtensor::sym::{SymAlgebra, SymElement, Word};

/// A generator of `Ŝ_A(L, A)` as an algebra over the ground field.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Generator {
    /// The basis element `e_α` of `A`.
    Base(usize),
    /// The dual letter `x_i`.
    Letter(usize),
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Generator::Base(a) => write!(f, "e{a}"),
            Generator::Letter(i) => write!(f, "x{i}"),
        }
    }
}

/// A homogeneous derivation `D` of `Ŝ_A(L, A)`, determined by `D(e_α)` and
/// `D(x_i)`. Values on letters have weight at least one and values on `A`
/// weight at least zero, so `D` never lowers weight; the component `D_n`
/// raises weight by exactly `n`.
///
/// On a word the action is
/// `D(e_α x^I) = D(e_α) x^I + (−1)^{|D||e_α|} e_α D(x^I)` with `D(x^I)`
/// expanded letter by letter.
#[derive(Clone, PartialEq, Eq)]
pub struct Derivation {
    degree: i64,
    on_base: Vec<SymElement>,
    on_letters: Vec<SymElement>,
}

impl Derivation {
    /// The unique derivation extending the given values; checks sizes, caps,
    /// degrees and the weight lower bounds.
    pub fn new(sym: &SymAlgebra, degree: i64, on_base: Vec<SymElement>, on_letters: Vec<SymElement>) -> Result<Self> {
        let base = sym.base();
        if on_base.len() != base.dim() {
            return Err(Error::SizeMismatch { expected: base.dim(), found: on_base.len() });
        }
        if on_letters.len() != sym.rank() {
            return Err(Error::SizeMismatch { expected: sym.rank(), found: on_letters.len() });
        }
        for (g, v) in Self::pairs(&on_base, &on_letters) {
            if v.cap() != sym.cap() {
                return Err(Error::CapMismatch(v.cap(), sym.cap()));
            }
            let (expected, min_weight) = match g {
                Generator::Base(a) => (base.degree(a) + degree, 0),
                Generator::Letter(i) => (sym.letter_degree(i) + degree, 1),
            };
            let found = sym.degree_of(v, expected)?;
            if found != expected {
                return Err(Error::Degree(format!("value on {g} has degree {found}, expected {expected}")));
            }
            if v.min_weight().is_some_and(|w| w < min_weight) {
                return Err(Error::Invalid(format!("value on {g} lowers the weight")));
            }
        }
        Ok(Derivation { degree, on_base, on_letters })
    }

    fn pairs<'a>(on_base: &'a [SymElement], on_letters: &'a [SymElement]) -> impl Iterator<Item = (Generator, &'a SymElement)> {
        on_base
            .iter()
            .enumerate()
            .map(|(a, v)| (Generator::Base(a), v))
            .chain(on_letters.iter().enumerate().map(|(i, v)| (Generator::Letter(i), v)))
    }

    pub fn zero(sym: &SymAlgebra, degree: i64) -> Self {
        Derivation {
            degree,
            on_base: vec![sym.zero(); sym.base().dim()],
            on_letters: vec![sym.zero(); sym.rank()],
        }
    }

    /// The derivation induced by `d_A` on `A` and by the dual of `d_L` on
    /// letters: `(D₀ x)(v) = −(−1)^{|x|} x(d_L v)`.
    pub fn base_differential(sym: &SymAlgebra, module: &FreeModule) -> Result<Self> {
        if module.rank() != sym.rank() {
            return Err(Error::SizeMismatch { expected: sym.rank(), found: module.rank() });
        }
        let base = sym.base().clone();
        let on_base = (0..base.dim()).map(|a| sym.from_algebra(base.basis_differential(a))).collect();
        let on_letters = (0..sym.rank())
            .map(|k| {
                let xk = sym.letter_degree(k);
                sym.from_generator_values(1, |gens| {
                    let a = module.generator_differential(gens[0]).coeff(k);
                    dual_pairing(sym, &a, xk).negate_if(!odd(xk))
                })
            })
            .collect();
        Derivation::new(sym, 1, on_base, on_letters)
    }

    pub fn degree(&self) -> i64 {
        self.degree
    }

    pub fn cap(&self) -> usize {
        self.on_base.first().or(self.on_letters.first()).map_or(0, SymElement::cap)
    }

    pub fn on_base(&self) -> &[SymElement] {
        &self.on_base
    }

    pub fn on_letters(&self) -> &[SymElement] {
        &self.on_letters
    }

    pub fn value(&self, g: Generator) -> &SymElement {
        match g {
            Generator::Base(a) => &self.on_base[a],
            Generator::Letter(i) => &self.on_letters[i],
        }
    }

    /// All generator values in canonical order.
    pub fn values(&self) -> impl Iterator<Item = (Generator, &SymElement)> {
        Self::pairs(&self.on_base, &self.on_letters)
    }

    pub fn is_zero(&self) -> bool {
        self.values().all(|(_, v)| v.is_zero())
    }

    /// Generators with a nonzero value.
    pub fn nonzero_values(&self) -> Vec<(Generator, SymElement)> {
        self.values().filter(|(_, v)| !v.is_zero()).map(|(g, v)| (g, v.clone())).collect()
    }

    /// `D_n`: weight shift exactly `n`.
    pub fn component(&self, n: usize) -> Derivation {
        Derivation {
            degree: self.degree,
            on_base: self.on_base.iter().map(|v| v.component(n)).collect(),
            on_letters: self.on_letters.iter().map(|v| v.component(n + 1)).collect(),
        }
    }

    /// Weight shifts carrying a nonzero component.
    pub fn shifts(&self) -> Vec<usize> {
        let mut out: Vec<usize> = self
            .on_base
            .iter()
            .flat_map(|v| v.weights())
            .chain(self.on_letters.iter().flat_map(|v| v.weights().into_iter().map(|w| w - 1)))
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    pub fn add(&self, other: &Derivation) -> Result<Derivation> {
        self.combine(other, &Scalar::one())
    }

    pub fn sub(&self, other: &Derivation) -> Result<Derivation> {
        self.combine(other, &Scalar::from_int(-1))
    }

    fn combine(&self, other: &Derivation, s: &Scalar) -> Result<Derivation> {
        if self.degree != other.degree && !other.is_zero() && !self.is_zero() {
            return Err(Error::Degree(format!("cannot add derivations of degrees {} and {}", self.degree, other.degree)));
        }
        let degree = if self.is_zero() { other.degree } else { self.degree };
        let merge = |a: &[SymElement], b: &[SymElement]| -> Vec<SymElement> {
            a.iter()
                .zip(b)
                .map(|(x, y)| {
                    let mut z = x.clone();
                    z.add_scaled(y, s);
                    z
                })
                .collect()
        };
        Ok(Derivation {
            degree,
            on_base: merge(&self.on_base, &other.on_base),
            on_letters: merge(&self.on_letters, &other.on_letters),
        })
    }

    pub fn scale(&self, s: &Scalar) -> Derivation {
        Derivation {
            degree: self.degree,
            on_base: self.on_base.iter().map(|v| v.scale(s)).collect(),
            on_letters: self.on_letters.iter().map(|v| v.scale(s)).collect(),
        }
    }

    /// `D(x^I)` for a sorted word.
    fn apply_word(&self, sym: &SymAlgebra, w: &Word) -> SymElement {
        let letters = w.letters();
        let mut out = sym.zero();
        let mut before = 0i64;
        let one = sym.base().one();
        for (k, &l) in letters.iter().enumerate() {
            let dx = &self.on_letters[l];
            if !dx.is_zero() {
                let prefix = sym.word(Word::from_letters(letters[..k].to_vec()), &one);
                let suffix = sym.word(Word::from_letters(letters[k + 1..].to_vec()), &one);
                let term = sym.mul(&sym.mul(&prefix, dx), &suffix);
                out.add_scaled(&term, &Scalar::sign(odd(self.degree) && odd(before)));
            }
            before += sym.letter_degree(l);
        }
        out
    }

    /// `D(η)`, truncated at the cap.
    pub fn apply(&self, sym: &SymAlgebra, eta: &SymElement) -> SymElement {
        let mut out = sym.zero();
        for (w, c) in eta.terms() {
            let dw = self.apply_word(sym, w);
            let bare = sym.word(w.clone(), &sym.base().one());
            for (k, s) in c.terms() {
                let dc = &self.on_base[k];
                if !dc.is_zero() {
                    out.add_scaled(&sym.mul(dc, &bare), s);
                }
                if !dw.is_zero() {
                    let flip = odd(self.degree) && odd(sym.base().degree(k));
                    let ek = AlgebraElement::term(k, s.clone().negate_if(flip));
                    out.add_assign(&sym.act(&ek, &dw));
                }
            }
        }
        out
    }

    /// Checked [`Derivation::apply`].
    pub fn try_apply(&self, sym: &SymAlgebra, eta: &SymElement) -> Result<SymElement> {
        if eta.cap() != sym.cap() {
            return Err(Error::CapMismatch(eta.cap(), sym.cap()));
        }
        if self.cap() != sym.cap() {
            return Err(Error::CapMismatch(self.cap(), sym.cap()));
        }
        Ok(self.apply(sym, eta))
    }

    /// Graded commutator `[D, E] = DE − (−1)^{|D||E|} ED`, again a derivation.
    pub fn commutator(&self, sym: &SymAlgebra, other: &Derivation) -> Derivation {
        let flip = !(odd(self.degree) && odd(other.degree));
        let value = |v_self: &SymElement, v_other: &SymElement| {
            let mut z = self.apply(sym, v_other);
            z.add_scaled(&other.apply(sym, v_self), &Scalar::sign(flip));
            z
        };
        Derivation {
            degree: self.degree + other.degree,
            on_base: self.on_base.iter().zip(&other.on_base).map(|(a, b)| value(a, b)).collect(),
            on_letters: self.on_letters.iter().zip(&other.on_letters).map(|(a, b)| value(a, b)).collect(),
        }
    }

    /// `D∘D` on generators. For odd `D` this is the derivation `½[D, D]`.
    pub fn square(&self, sym: &SymAlgebra) -> Derivation {
        Derivation {
            degree: 2 * self.degree,
            on_base: self.on_base.iter().map(|v| self.apply(sym, v)).collect(),
            on_letters: self.on_letters.iter().map(|v| self.apply(sym, v)).collect(),
        }
    }

    /// For each weight shift `n`, the nonzero values of `Σ_{j+k=n} D_j D_k`
    /// on generators. Empty exactly when `D² = 0` up to the cap.
    pub fn square_components(&self, sym: &SymAlgebra) -> BTreeMap<usize, Vec<(Generator, SymElement)>> {
        let sq = self.square(sym);
        let mut out: BTreeMap<usize, Vec<(Generator, SymElement)>> = BTreeMap::new();
        for n in sq.shifts() {
            let comp = sq.component(n).nonzero_values();
            if !comp.is_empty() {
                out.insert(n, comp);
            }
        }
        out
    }

    /// Basis pairs `(a, b)` on which the values on `A` violate
    /// `D(e_a e_b) = D(e_a) e_b + (−1)^{|D||e_a|} e_a D(e_b)`. A nonempty
    /// list means the generator values do not define a derivation.
    pub fn base_defects(&self, sym: &SymAlgebra) -> Vec<(usize, usize, SymElement)> {
        let base = sym.base();
        let mut out = Vec::new();
        for a in 0..base.dim() {
            for b in 0..base.dim() {
                let ea = sym.from_algebra(&AlgebraElement::basis(a));
                let eb = sym.from_algebra(&AlgebraElement::basis(b));
                let mut r = self.apply(sym, &sym.from_algebra(base.basis_product(a, b)));
                r.sub_assign(&sym.mul(&self.on_base[a], &eb));
                let flip = odd(self.degree) && odd(base.degree(a));
                r.add_scaled(&sym.mul(&ea, &self.on_base[b]), &Scalar::sign(!flip));
                if !r.is_zero() {
                    out.push((a, b, r));
                }
            }
        }
        out
    }

    /// Restriction to a smaller cap.
    pub fn with_cap(&self, cap: usize) -> Derivation {
        Derivation {
            degree: self.degree,
            on_base: self.on_base.iter().map(|v| v.with_cap(cap)).collect(),
            on_letters: self.on_letters.iter().map(|v| v.with_cap(cap)).collect(),
        }
    }

    pub fn display(&self, sym: &SymAlgebra) -> String {
        let mut lines = Vec::new();
        for (g, v) in self.values() {
            if v.is_zero() {
                continue;
            }
            let name = match g {
                Generator::Base(a) => sym.base().name(a).to_string(),
                Generator::Letter(i) => sym.letter_name(i).to_string(),
            };
            lines.push(format!("D({name}) = {}", sym.display(v)));
        }
        if lines.is_empty() {
            "D = 0".into()
        } else {
            lines.join("\n")
        }
    }
}

impl fmt::Debug for Derivation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Derivation")
            .field("degree", &self.degree)
            .field("on_base", &self.on_base)
            .field("on_letters", &self.on_letters)
            .finish()
    }
}

/// `x(a·g) = (−1)^{|a||x|} a` for the letter `x` dual to `g`.
pub(crate) fn dual_pairing(sym: &SymAlgebra, a: &AlgebraElement, letter_degree: i64) -> AlgebraElement {
    let mut out = AlgebraElement::zero();
    for (k, s) in a.terms() {
        let flip = odd(letter_degree) && odd(sym.base().degree(k));
        out.add_term(k, &s.clone().negate_if(flip));
    }
    out
}
