//! The defining identities of an algebroid as residuals on generators.

use crate::algebroid::ce::{bracket_from_derivation, ce_differential, CeAlgebra};
use crate::algebroid::structure::AlgebroidStructure;
use crate::error::{Error, Result};
use crate::graded::{odd, AlgebraElement, AlgebraMap, ModuleElement, Scalar};
use crate::linfty::{canonical_tuples, jacobi_residual, morphism_residual_with, DerivationTarget, Residual, Symmetry, SymmetricBrackets};

/// One failure of the Leibniz rule or of its prerequisites.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LeibnizDefect {
    /// `d_L(a g) − d_A(a) g − (−1)^{|a|} a d_L(g)`.
    Module { generator: usize, basis: usize, value: ModuleElement },
    /// `{t | ab} − {t | a} b − (−1)^{|a|(|t|+1)} a {t | b}`.
    Anchor { tuple: Vec<usize>, a: usize, b: usize, value: AlgebraElement },
    /// `{t, a g} − {t | a} g − (−1)^{|a|(|t|+1)} a {t, g}` with the left side
    /// read off the Chevalley–Eilenberg differential.
    Rule { tuple: Vec<usize>, generator: usize, basis: usize, value: ModuleElement },
}

/// The higher Jacobi identity of the brackets in arity `n`.
pub fn algebroid_jacobi_residual(s: &AlgebroidStructure, n: usize) -> Result<Residual<ModuleElement>> {
    jacobi_residual(s, n)
}

/// The Leibniz rule in arity `n` on generator tuples × basis elements of
/// `A`, together with the derivation property of the `(n−1)`-ary anchors.
/// For `n ≥ 2` the bracket `{t, a g}` is computed independently from the
/// Chevalley–Eilenberg differential of `s`.
pub fn leibniz_residual(s: &AlgebroidStructure, n: usize) -> Result<Vec<LeibnizDefect>> {
    if n == 0 || n > s.cap() {
        return Err(Error::ArityOverflow { arity: n, cap: s.cap() });
    }
    let carrier = s.carrier();
    let base = s.base().clone();
    let mut out = Vec::new();
    if n == 1 {
        for g in 0..carrier.rank() {
            for a in 0..base.dim() {
                let ea = AlgebraElement::basis(a);
                let mut r = carrier.d(&ModuleElement::term(g, ea.clone()));
                r.sub_assign(&ModuleElement::term(g, base.d(&ea)));
                let rest = carrier.act(&ea, &carrier.d(&carrier.generator(g)));
                r.add_scaled(&rest, &Scalar::sign(!odd(base.degree(a))));
                if !r.is_zero() {
                    out.push(LeibnizDefect::Module { generator: g, basis: a, value: r });
                }
            }
        }
        return Ok(out);
    }
    for (tuple, a, b, value) in s.anchor_derivation_defects(n - 1) {
        out.push(LeibnizDefect::Anchor { tuple, a, b, value });
    }
    let CeAlgebra { sym, d } = ce_differential(s, s.cap())?;
    for t in canonical_tuples(Symmetry::Symmetric, n - 1, carrier.degrees()) {
        let td: i64 = t.iter().map(|&g| carrier.degree(g)).sum();
        let mut args: Vec<ModuleElement> = t.iter().map(|&g| carrier.generator(g)).collect();
        let anchor = s.anchor_on_generators(&t);
        for g in 0..carrier.rank() {
            for a in 0..base.dim() {
                let ea = AlgebraElement::basis(a);
                args.push(ModuleElement::term(g, ea.clone()));
                let mut r = bracket_from_derivation(carrier, &sym, &d, &args)?;
                args.pop();
                r.sub_assign(&ModuleElement::term(g, anchor.apply(&ea)));
                args.push(carrier.generator(g));
                let plain = s.bracket(&args);
                args.pop();
                let flip = odd(base.degree(a)) && !odd(td);
                r.add_scaled(&carrier.act(&ea, &plain), &Scalar::sign(!flip));
                if !r.is_zero() {
                    out.push(LeibnizDefect::Rule { tuple: t.clone(), generator: g, basis: a, value: r });
                }
            }
        }
    }
    Ok(out)
}

/// The residual of the statement that the anchors `α_n = {v_1, …, v_n | −}`
/// form an L∞[1] morphism from the brackets to `Der(A)[1]`, in arity `n`.
pub fn anchor_morphism_residual(s: &AlgebroidStructure, n: usize) -> Result<Residual<AlgebraMap>> {
    let target = DerivationTarget::new(s.base().clone());
    morphism_residual_with(s, &target, n, |args| s.anchor(args))
}

/// All three residual families up to the arity cap; `true` when every one
/// of them vanishes.
pub fn all_residuals_vanish(s: &AlgebroidStructure) -> Result<bool> {
    for n in 1..=s.cap() {
        if !algebroid_jacobi_residual(s, n)?.is_empty()
            || !leibniz_residual(s, n)?.is_empty()
            || !anchor_morphism_residual(s, n)?.is_empty()
        {
            return Ok(false);
        }
    }
    Ok(true)
}
