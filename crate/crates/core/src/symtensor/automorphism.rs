//! Filtered automorphisms of `Ŝ_A(L, A)` that are the identity on the
//! associated weight-graded algebra.

use crate::error::{Error, Result};
use crate::graded::{AlgebraElement, Scalar};
use crate::symtensor::derivation::{Derivation, Generator};
use crate::symtensor::sym::{SymAlgebra, SymElement, Word};

/// A degree-0 algebra automorphism `Φ` given by `Φ(e_α)` and `Φ(x_i)`, with
/// `Φ(e_α) − e_α` of weight at least one and `Φ(x_i) − x_i` of weight at
/// least two.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FilteredAutomorphism {
    on_base: Vec<SymElement>,
    on_letters: Vec<SymElement>,
}

impl FilteredAutomorphism {
    /// Checks unipotence, degrees and multiplicativity on products of `A`.
    pub fn new(sym: &SymAlgebra, on_base: Vec<SymElement>, on_letters: Vec<SymElement>) -> Result<Self> {
        let base = sym.base();
        if on_base.len() != base.dim() {
            return Err(Error::SizeMismatch { expected: base.dim(), found: on_base.len() });
        }
        if on_letters.len() != sym.rank() {
            return Err(Error::SizeMismatch { expected: sym.rank(), found: on_letters.len() });
        }
        let phi = FilteredAutomorphism { on_base, on_letters };
        for (a, v) in phi.on_base.iter().enumerate() {
            let diff = v.sub(&sym.from_algebra(&AlgebraElement::basis(a)));
            if diff.min_weight() == Some(0) {
                return Err(Error::NotUnipotent(format!("weight-0 part of Φ({}) is not itself", base.name(a))));
            }
            check_degree(sym, v, base.degree(a), Generator::Base(a))?;
        }
        for (i, v) in phi.on_letters.iter().enumerate() {
            let diff = v.sub(&sym.letter(i));
            if diff.min_weight().is_some_and(|w| w < 2) {
                return Err(Error::NotUnipotent(format!("low-weight part of Φ({}) is not itself", sym.letter_name(i))));
            }
            check_degree(sym, v, sym.letter_degree(i), Generator::Letter(i))?;
        }
        for a in 0..base.dim() {
            for b in 0..base.dim() {
                let lhs = phi.apply(sym, &sym.from_algebra(base.basis_product(a, b)));
                let rhs = sym.mul(&phi.on_base[a], &phi.on_base[b]);
                if lhs != rhs {
                    return Err(Error::Invalid(format!(
                        "Φ is not multiplicative on {}·{}",
                        base.name(a),
                        base.name(b)
                    )));
                }
            }
        }
        Ok(phi)
    }

    pub fn identity(sym: &SymAlgebra) -> Self {
        FilteredAutomorphism {
            on_base: (0..sym.base().dim()).map(|a| sym.from_algebra(&AlgebraElement::basis(a))).collect(),
            on_letters: (0..sym.rank()).map(|i| sym.letter(i)).collect(),
        }
    }

    /// `exp(X) = Σ X^k / k!` for a degree-0 derivation `X` that raises weight.
    pub fn exp(sym: &SymAlgebra, x: &Derivation) -> Result<Self> {
        if x.degree() != 0 {
            return Err(Error::Degree(format!("exp needs a degree-0 derivation, got {}", x.degree())));
        }
        if x.shifts().first() == Some(&0) {
            return Err(Error::NotUnipotent("the derivation has a weight-preserving part".into()));
        }
        let series = |u: SymElement| {
            let mut out = u.clone();
            let mut term = u;
            for k in 1..=sym.cap() {
                term = x.apply(sym, &term).scale(&Scalar::ratio(1, k as i64).expect("nonzero"));
                if term.is_zero() {
                    break;
                }
                out.add_assign(&term);
            }
            out
        };
        let id = FilteredAutomorphism::identity(sym);
        FilteredAutomorphism::new(
            sym,
            id.on_base.into_iter().map(series).collect(),
            id.on_letters.into_iter().map(series).collect(),
        )
    }

    pub fn on_base(&self) -> &[SymElement] {
        &self.on_base
    }

    pub fn on_letters(&self) -> &[SymElement] {
        &self.on_letters
    }

    pub fn is_identity(&self, sym: &SymAlgebra) -> bool {
        *self == FilteredAutomorphism::identity(sym)
    }

    /// `Φ(η)`, truncated at the cap.
    pub fn apply(&self, sym: &SymAlgebra, eta: &SymElement) -> SymElement {
        let mut out = sym.zero();
        for (w, c) in eta.terms() {
            let mut image = self.image_of_word(sym, w);
            if image.is_zero() {
                continue;
            }
            let mut coeff = sym.zero();
            for (k, s) in c.terms() {
                coeff.add_scaled(&self.on_base[k], s);
            }
            image = sym.mul(&coeff, &image);
            out.add_assign(&image);
        }
        out
    }

    fn image_of_word(&self, sym: &SymAlgebra, w: &Word) -> SymElement {
        let mut out = sym.one();
        for &l in w.letters() {
            out = sym.mul(&out, &self.on_letters[l]);
        }
        out
    }

    /// `Φ⁻¹` by successive approximation `Ψ(u) = u − Ψ(Φ(u) − u)`, exact up
    /// to the cap.
    pub fn inverse(&self, sym: &SymAlgebra) -> FilteredAutomorphism {
        let id = FilteredAutomorphism::identity(sym);
        let mut psi = id.clone();
        for _ in 0..=sym.cap() {
            let step = |u: &SymElement, phi_u: &SymElement| u.sub(&psi.apply(sym, &phi_u.sub(u)));
            let on_base = id.on_base.iter().zip(&self.on_base).map(|(u, p)| step(u, p)).collect();
            let on_letters = id.on_letters.iter().zip(&self.on_letters).map(|(u, p)| step(u, p)).collect();
            psi = FilteredAutomorphism { on_base, on_letters };
        }
        psi
    }

    /// `Φ∘Ψ` on generators.
    pub fn compose(&self, sym: &SymAlgebra, psi: &FilteredAutomorphism) -> FilteredAutomorphism {
        FilteredAutomorphism {
            on_base: psi.on_base.iter().map(|v| self.apply(sym, v)).collect(),
            on_letters: psi.on_letters.iter().map(|v| self.apply(sym, v)).collect(),
        }
    }

    /// `Φ∘D∘Φ⁻¹`, again a derivation of the same degree.
    pub fn conjugate(&self, sym: &SymAlgebra, d: &Derivation) -> Result<Derivation> {
        if d.cap() != sym.cap() {
            return Err(Error::CapMismatch(d.cap(), sym.cap()));
        }
        let psi = self.inverse(sym);
        let value = |u: &SymElement| self.apply(sym, &d.apply(sym, u));
        Derivation::new(
            sym,
            d.degree(),
            psi.on_base.iter().map(value).collect(),
            psi.on_letters.iter().map(value).collect(),
        )
    }

    /// The connection form `ω = D₀ − Φ D₀ Φ⁻¹`, so that `Φ D₀ Φ⁻¹ = D₀ − ω`.
    pub fn connection_form(&self, sym: &SymAlgebra, d0: &Derivation) -> Result<Derivation> {
        d0.sub(&self.conjugate(sym, d0)?)
    }

    /// The Maurer–Cartan residual `D₀ω + ½[ω, ω]` of the connection form,
    /// where `D₀ω = [D₀, ω]` and `[ω, ω] = −[ω, ω]_c` is the bracket of
    /// vector fields, the negative of the graded commutator. It equals
    /// `D₀² − (D₀ − ω)²` and vanishes whenever `D₀² = 0`.
    pub fn mc_residual(&self, sym: &SymAlgebra, d0: &Derivation) -> Result<Derivation> {
        let omega = self.connection_form(sym, d0)?;
        let half = Scalar::ratio(1, 2)?;
        d0.commutator(sym, &omega).sub(&omega.commutator(sym, &omega).scale(&half))
    }
}

fn check_degree(sym: &SymAlgebra, v: &SymElement, expected: i64, g: Generator) -> Result<()> {
    let found = sym.degree_of(v, expected)?;
    if found != expected {
        return Err(Error::Degree(format!("Φ({g}) has degree {found}, expected {expected}")));
    }
    Ok(())
}
