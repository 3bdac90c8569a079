//! The Chevalley–Eilenberg differential of an algebroid and the inverse
//! extraction of an algebroid from a degree-one derivation.

use crate::algebroid::structure::AlgebroidStructure;
use crate::error::{Error, Result};
use crate::graded::{odd, AlgebraElement, AlgebraMap, FreeModule, ModuleElement};
use crate::linfty::{canonical_tuples, Symmetry};
use crate::symtensor::{dual_pairing, Derivation, SymAlgebra, SymElement};

/// A completed symmetric algebra `Ŝ_A(L, A)` together with a degree-one
/// derivation on it.
#[derive(Clone, Debug)]
pub struct CeAlgebra {
    pub sym: SymAlgebra,
    pub d: Derivation,
}

/// Builds `D = Σ D_n` on `Ŝ_A(L, A)` truncated at weight `w`:
///
/// * `(D_n a)(v_1, …, v_n) = (−1)^{|a|(|v_1|+⋯+|v_n|)} {v_1, …, v_n | a}`;
/// * `(D_n x)(v_1, …, v_{n+1}) = Σ_i (−1)^θ {v_1, …, v̂_i, …, v_{n+1} | x(v_i)} − (−1)^{|x|} x({v_1, …, v_{n+1}})`
///   with `θ = |x|(|v_1|+⋯+|v̂_i|+⋯) + |v_i|(|v_{i+1}|+⋯+|v_{n+1}|)`.
///
/// Both are determined by their values on generator tuples; `D_0` is the
/// differential induced by `d_A` and `d_L`.
pub fn ce_differential(s: &AlgebroidStructure, w: usize) -> Result<CeAlgebra> {
    if w < s.cap() {
        return Err(Error::WeightOverflow { weight: s.cap(), cap: w });
    }
    let carrier = s.carrier();
    let base = s.base().clone();
    let sym = SymAlgebra::dual_of(carrier, w).with_names(carrier.names().iter().map(|n| format!("{n}∨")).collect());
    let d0 = Derivation::base_differential(&sym, carrier)?;
    let mut on_base = d0.on_base().to_vec();
    let mut on_letters = d0.on_letters().to_vec();
    let degrees = carrier.degrees();
    for (a, value) in on_base.iter_mut().enumerate() {
        let ad = base.degree(a);
        for m in 1..=s.cap() {
            value.add_assign(&sym.from_generator_values(m, |t| {
                let td: i64 = t.iter().map(|&g| degrees[g]).sum();
                s.anchor_on_generators(t).images[a].clone().negate_if(odd(ad) && odd(td))
            }));
        }
    }
    for (j, value) in on_letters.iter_mut().enumerate() {
        let xd = sym.letter_degree(j);
        for n in 2..=s.cap() {
            value.add_assign(&sym.from_generator_values(n, |t| {
                let mut out = AlgebraElement::zero();
                for (i, &g) in t.iter().enumerate() {
                    if g != j {
                        continue;
                    }
                    let mut rest = t.to_vec();
                    rest.remove(i);
                    let others: i64 = rest.iter().map(|&h| degrees[h]).sum();
                    let later: i64 = t[i + 1..].iter().map(|&h| degrees[h]).sum();
                    let theta = (odd(xd) && odd(others)) ^ (odd(degrees[g]) && odd(later));
                    let v = s.anchor_on_generators(&rest).apply(&base.one());
                    out.add_assign(&v.negate_if(theta));
                }
                let bracket = s.table(n).on_generators(degrees, t);
                let paired = dual_pairing(&sym, &bracket.coeff(j), xd);
                out.add_assign(&paired.negate_if(!odd(xd)));
                out
            }));
        }
    }
    let d = Derivation::new(&sym, 1, on_base, on_letters)?;
    Ok(CeAlgebra { sym, d })
}

/// Checks that the weight-preserving part of `D` is the differential
/// induced by `d_A` and `d_L`.
fn check_linear_part(carrier: &FreeModule, sym: &SymAlgebra, d: &Derivation) -> Result<()> {
    let d0 = Derivation::base_differential(sym, carrier)?;
    let gr = d.component(0);
    for (a, (mine, expected)) in gr.on_base().iter().zip(d0.on_base()).enumerate() {
        if mine != expected {
            return Err(Error::BaseMismatch(format!("D_0 on basis element {a} is not d_A")));
        }
    }
    for (j, (mine, expected)) in gr.on_letters().iter().zip(d0.on_letters()).enumerate() {
        if mine != expected {
            return Err(Error::BaseMismatch(format!("D_0 on letter {j} is not induced by d_L")));
        }
    }
    Ok(())
}

/// `D_n` applied to a weight-zero element, as an element of weight `n`.
fn raise(sym: &SymAlgebra, d: &Derivation, a: &AlgebraElement, n: usize) -> SymElement {
    d.apply(sym, &sym.from_algebra(a)).component(n)
}

/// `{v_1, …, v_n}` as the unique module element with
/// `x({v}) = (−1)^{|x|} Σ_i (−1)^{|v_i|(|v_1|+⋯+|v_{i−1}|)} D_{n−1}(x(v_i))(v̂_i) − (−1)^{|x|} (D_{n−1} x)(v)`
/// for every letter `x`; arguments must be homogeneous.
pub fn bracket_from_derivation(
    carrier: &FreeModule,
    sym: &SymAlgebra,
    d: &Derivation,
    args: &[ModuleElement],
) -> Result<ModuleElement> {
    let n = args.len();
    if n == 0 || n > sym.cap() {
        return Err(Error::ArityOverflow { arity: n, cap: sym.cap() });
    }
    let degrees = args.iter().map(|v| carrier.degree_of(v, 0)).collect::<Result<Vec<_>>>()?;
    let mut out = ModuleElement::zero();
    for j in 0..carrier.rank() {
        let xd = sym.letter_degree(j);
        let mut value = AlgebraElement::zero();
        let mut before = 0i64;
        for (i, v) in args.iter().enumerate() {
            let pairing = dual_pairing(sym, &v.coeff(j), xd);
            if !pairing.is_zero() {
                let mut rest = args.to_vec();
                rest.remove(i);
                let term = sym.evaluate(&raise(sym, d, &pairing, n - 1), &rest)?;
                value.add_assign(&term.negate_if(odd(degrees[i]) && odd(before)));
            }
            before += degrees[i];
        }
        value.sub_assign(&sym.evaluate(&d.on_letters()[j].component(n), args)?);
        let value = value.negate_if(odd(xd));
        // x(c g) = (−1)^{|c||x|} c, so the coefficient is the pairing again
        out.add_term(j, &dual_pairing(sym, &value, xd));
    }
    Ok(out)
}

/// Reads off the algebroid encoded by `D`, with arity cap equal to the
/// weight cap:
///
/// * `{v_1, …, v_{n−1} | a} = (−1)^{|a|(|v_1|+⋯+|v_{n−1}|)} (D_{n−1} a)(v_1, …, v_{n−1})`;
/// * `ℓ_n` on generators from [`bracket_from_derivation`].
///
/// Fails when `D_0` is not the differential induced by `d_A` and `d_L`.
pub fn extract_structure(carrier: &FreeModule, sym: &SymAlgebra, d: &Derivation) -> Result<AlgebroidStructure> {
    if sym.base() != carrier.base() || sym.letter_degrees() != SymAlgebra::dual_of(carrier, sym.cap()).letter_degrees() {
        return Err(Error::BaseMismatch("symmetric algebra is not built on the carrier".into()));
    }
    if d.degree() != 1 {
        return Err(Error::Degree(format!("derivation has degree {}, expected 1", d.degree())));
    }
    check_linear_part(carrier, sym, d)?;
    let cap = sym.cap();
    let base = carrier.base().clone();
    let mut s = AlgebroidStructure::new(carrier.clone(), cap)?;
    for m in 1..=cap {
        for t in canonical_tuples(Symmetry::Symmetric, m, carrier.degrees()) {
            let td: i64 = t.iter().map(|&g| carrier.degree(g)).sum();
            let images: Vec<AlgebraElement> = (0..base.dim())
                .map(|a| {
                    let v = sym.evaluate_on_generators(&d.on_base()[a].component(m), &t);
                    v.negate_if(odd(base.degree(a)) && odd(td))
                })
                .collect();
            let map = AlgebraMap { degree: td + 1, images };
            if !map.is_zero() {
                s.set_anchor(&t, map)?;
            }
        }
    }
    for n in 2..=cap {
        for t in canonical_tuples(Symmetry::Symmetric, n, carrier.degrees()) {
            let args: Vec<ModuleElement> = t.iter().map(|&g| carrier.generator(g)).collect();
            let value = bracket_from_derivation(carrier, sym, d, &args)?;
            if !value.is_zero() {
                s.set_bracket(&t, value)?;
            }
        }
    }
    Ok(s)
}
