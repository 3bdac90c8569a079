mod common;

use lrkit::algebroid::{
    algebroid_jacobi_residual, all_residuals_vanish, anchor_morphism_residual, ce_differential, extract_structure,
    leibniz_residual, AlgebroidStructure,
};
use lrkit::graded::{odd, sym_sign_odd, unshuffles, AlgebraElement, AlgebraMap, FreeModule, ModuleElement, Scalar};
use lrkit::linfty::SymmetricBrackets;
use lrkit::random;
use lrkit::symtensor::{Derivation, SymAlgebra};
use rand::Rng;

const CAP: usize = 3;

fn homogeneous_args(r: &mut impl Rng, m: &FreeModule, n: usize) -> Vec<ModuleElement> {
    (0..n)
        .map(|_| loop {
            let deg = r.gen_range(-1..=2);
            let v = random::module_element(r, m, deg, 0.6);
            if !v.is_zero() {
                break v;
            }
        })
        .collect()
}

/// A structure with vanishing residuals, read off `Φ D_0 Φ⁻¹`.
fn conjugated(r: &mut impl Rng, m: &FreeModule, cap: usize) -> (AlgebroidStructure, SymAlgebra, Derivation) {
    let sym = SymAlgebra::dual_of(m, cap);
    let d0 = Derivation::base_differential(&sym, m).unwrap();
    let phi = random::unipotent(r, &sym, 0.5).unwrap();
    let d = phi.conjugate(&sym, &d0).unwrap();
    let s = extract_structure(m, &sym, &d).unwrap();
    (s, sym, d)
}

#[test]
fn trivial_structure_gives_base_differential() {
    for m in common::modules() {
        let s = AlgebroidStructure::new(m.clone(), CAP).unwrap();
        let ce = ce_differential(&s, CAP).unwrap();
        assert_eq!(ce.d, Derivation::base_differential(&ce.sym, &m).unwrap());
        let base = m.base();
        for a in 0..base.dim() {
            assert_eq!(ce.d.apply(&ce.sym, &ce.sym.from_algebra(&AlgebraElement::basis(a))), ce.sym.from_algebra(base.basis_differential(a)));
        }
        assert!(all_residuals_vanish(&s).unwrap());
        assert!(ce.d.square_components(&ce.sym).is_empty());
    }
}

#[test]
fn weight_cap_must_hold_the_arity_cap() {
    let s = AlgebroidStructure::new(common::exterior_module(), 3).unwrap();
    assert!(ce_differential(&s, 2).is_err());
}

#[test]
fn structures_round_trip_through_the_derivation() {
    let mut r = common::rng(1);
    for k in 0..24 {
        let m = &common::modules()[k % 3];
        let s = random::algebroid_structure(&mut r, m, CAP, 0.5).unwrap();
        assert!(s.validate().is_ok());
        let ce = ce_differential(&s, CAP).unwrap();
        assert_eq!(extract_structure(m, &ce.sym, &ce.d).unwrap(), s, "sample {k}");
    }
}

#[test]
fn derivations_round_trip_through_the_structure() {
    let mut r = common::rng(2);
    for k in 0..24 {
        let m = &common::modules()[k % 3];
        let sym = SymAlgebra::dual_of(m, CAP);
        let d0 = Derivation::base_differential(&sym, m).unwrap();
        let d = random::perturbed_derivation(&mut r, &sym, &d0, 0.4).unwrap();
        let s = extract_structure(m, &sym, &d).unwrap();
        assert_eq!(ce_differential(&s, CAP).unwrap().d, d, "sample {k}");
    }
}

#[test]
fn extraction_rejects_a_wrong_linear_part() {
    let m = common::exterior_module();
    let sym = SymAlgebra::dual_of(&m, CAP);
    let d = Derivation::zero(&sym, 1);
    assert!(extract_structure(&m, &sym, &d).is_err());
}

/// The higher Chevalley–Eilenberg formula on arbitrary homogeneous
/// arguments, evaluated with the Leibniz-extended brackets and the
/// multilinear anchors:
/// `(D_n η)(v) = Σ_{Sh(n,r)} (−1)^{|η|(|v_σ(1)|+⋯+|v_σ(n)|)} α {v_σ(1..n) | η(v_σ(n+1..))}
///             − Σ_{Sh(n+1,r−1)} (−1)^{|η|} α η({v_τ(1..n+1)}, v_τ(n+2..))`.
#[test]
fn higher_ce_formula_holds_on_general_arguments() {
    let mut r = common::rng(3);
    let mut checked = 0;
    for k in 0..30 {
        let m = &common::modules()[k % 3];
        let s = random::algebroid_structure(&mut r, m, CAP, 0.5).unwrap();
        let ce = ce_differential(&s, CAP).unwrap();
        let sym = &ce.sym;
        let base = m.base();
        for n in 0..CAP {
            for weight in 0..=(CAP - n) {
                let eta_deg = r.gen_range(-2..=2);
                let eta = random::sym_element(&mut r, sym, eta_deg, weight, weight, 0.6);
                if eta.is_zero() || n + weight == 0 {
                    continue;
                }
                let args = homogeneous_args(&mut r, m, n + weight);
                let degrees: Vec<i64> = args.iter().map(|v| m.degree_of(v, 0).unwrap()).collect();
                let lhs = sym.evaluate(&ce.d.apply(sym, &eta).component(n + weight), &args).unwrap();
                let mut rhs = AlgebraElement::zero();
                for sigma in unshuffles(&[n, weight]) {
                    let v = sigma.permute(&args);
                    let head: i64 = v[..n].iter().map(|x| m.degree_of(x, 0).unwrap()).sum();
                    let inner = sym.evaluate(&eta, &v[n..]).unwrap();
                    let value = s.anchor_value(&v[..n], &inner);
                    let flip = (odd(eta_deg) && odd(head)) ^ sym_sign_odd(&sigma, &degrees);
                    rhs.add_scaled(&value, &Scalar::sign(flip));
                }
                if weight >= 1 {
                    for tau in unshuffles(&[n + 1, weight - 1]) {
                        let v = tau.permute(&args);
                        let mut outer = vec![s.bracket(&v[..n + 1])];
                        outer.extend_from_slice(&v[n + 1..]);
                        let value = sym.evaluate(&eta, &outer).unwrap();
                        let flip = odd(eta_deg) ^ sym_sign_odd(&tau, &degrees);
                        rhs.add_scaled(&value, &Scalar::sign(!flip));
                    }
                }
                assert_eq!(lhs, rhs, "sample {k}, n = {n}, weight {weight}: {}", base.display(&lhs.sub(&rhs)));
                checked += 1;
            }
        }
    }
    assert!(checked > 100);
}

#[test]
fn leibniz_rule_matches_the_derivation() {
    let mut r = common::rng(4);
    for k in 0..9 {
        let m = &common::modules()[k % 3];
        let s = random::algebroid_structure(&mut r, m, CAP, 0.5).unwrap();
        for n in 1..=CAP {
            assert!(leibniz_residual(&s, n).unwrap().is_empty(), "sample {k}, arity {n}");
        }
    }
}

#[test]
fn non_derivation_anchor_breaks_leibniz() {
    let m = common::exterior_module();
    let base = m.base().clone();
    let mut s = AlgebroidStructure::new(m, 2).unwrap();
    // {g0 | e} = 1 but {g0 | 1} = 1 as well, which no derivation does
    let mut map = AlgebraMap::zero(base.dim(), 1);
    map.images[0] = AlgebraElement::basis(1);
    s.set_anchor(&[0], map).unwrap();
    assert!(!s.validate().is_ok());
    assert!(!leibniz_residual(&s, 2).unwrap().is_empty());
}

#[test]
fn anchors_are_multilinear() {
    let mut r = common::rng(5);
    let m = common::two_generator_module();
    let s = random::algebroid_structure(&mut r, &m, CAP, 0.7).unwrap();
    let base = m.base().clone();
    let a = AlgebraElement::basis(1);
    for _ in 0..20 {
        let args = homogeneous_args(&mut r, &m, 2);
        let before = m.degree_of(&args[0], 0).unwrap();
        let mut scaled = args.clone();
        scaled[1] = m.act(&a, &args[1]);
        let lhs = s.anchor(&scaled);
        let rhs = s.anchor(&args).left_multiply(&base, &a, 1).scale(&Scalar::sign(!odd(before)));
        assert_eq!(lhs.images, rhs.images);
    }
}

#[test]
fn zero_anchors_give_a_morphism() {
    let mut r = common::rng(6);
    let m = common::exterior_module();
    let mut s = AlgebroidStructure::new(m.clone(), CAP).unwrap();
    for n in 1..=CAP {
        assert!(anchor_morphism_residual(&s, n).unwrap().is_empty());
    }
    // brackets alone never enter the anchor identity when the anchors vanish
    s.set_bracket(&[0, 1], random::module_element(&mut r, &m, 1, 1.0)).unwrap();
    for n in 1..=CAP {
        assert!(anchor_morphism_residual(&s, n).unwrap().is_empty());
    }
}

/// `D² = 0` exactly when the Jacobi, Leibniz and anchor residuals vanish,
/// with the weight of the square matched to the arity of the identity.
fn assert_equivalence(s: &AlgebroidStructure, label: &str) -> bool {
    let ce = ce_differential(s, s.cap()).unwrap();
    let square = ce.d.square(&ce.sym);
    let mut all_zero = true;
    for n in 1..=s.cap() {
        let letters_zero = square.component(n - 1).on_letters().iter().all(|v| v.is_zero());
        let base_zero = square.component(n).on_base().iter().all(|v| v.is_zero());
        let jacobi = algebroid_jacobi_residual(s, n).unwrap().is_empty();
        let anchor = anchor_morphism_residual(s, n).unwrap().is_empty();
        assert!(leibniz_residual(s, n).unwrap().is_empty());
        assert_eq!(letters_zero, jacobi, "{label}: letters vs Jacobi at arity {n}");
        assert_eq!(base_zero, anchor, "{label}: base vs anchor at arity {n}");
        all_zero &= jacobi && anchor;
    }
    assert_eq!(ce.d.square_components(&ce.sym).is_empty(), all_zero, "{label}");
    assert_eq!(all_residuals_vanish(s).unwrap(), all_zero);
    all_zero
}

#[test]
fn square_zero_iff_residuals_vanish_on_random_structures() {
    let mut r = common::rng(7);
    let mut failing = 0;
    for k in 0..12 {
        let m = &common::modules()[k % 3];
        let s = random::algebroid_structure(&mut r, m, CAP, 0.5).unwrap();
        if !assert_equivalence(&s, &format!("random {k}")) {
            failing += 1;
        }
    }
    assert!(failing >= 10);
}

#[test]
fn conjugated_structures_satisfy_every_identity() {
    let mut r = common::rng(8);
    for k in 0..9 {
        let m = &common::modules()[k % 3];
        let (s, sym, d) = conjugated(&mut r, m, CAP);
        assert!(d.square_components(&sym).is_empty());
        assert!(assert_equivalence(&s, &format!("conjugated {k}")));
        assert_eq!(ce_differential(&s, CAP).unwrap().d, d);
    }
}

/// Perturbing one bracket value or one anchor of an integrable structure
/// breaks `D² = 0` exactly when it breaks the identities. A perturbation can
/// happen to be compatible (e.g. a cocycle), so only most must break.
#[test]
fn single_entry_perturbations_break_both_sides() {
    let mut r = common::rng(9);
    let mut brackets = (0, 0);
    let mut anchors = (0, 0);
    for k in 0..9 {
        let m = &common::modules()[k % 3];
        let (s, _, _) = conjugated(&mut r, m, CAP);
        let t = [0usize, 0];
        let delta = random::module_element(&mut r, m, 2 * m.degree(0) + 1, 1.0);
        if !delta.is_zero() {
            let mut p = s.clone();
            let mut value = s.table(2).on_generators(m.degrees(), &t);
            value.add_assign(&delta);
            p.set_bracket(&t, value).unwrap();
            brackets.0 += 1;
            if !assert_equivalence(&p, &format!("bracket perturbation {k}")) {
                brackets.1 += 1;
            }
        }
        let target = m.degree(0) + 1;
        for delta in lrkit::graded::all_derivations(m.base()).iter().filter(|d| d.degree == target) {
            let mut q = s.clone();
            let mut map = s.anchor_on_generators(&[0]);
            map.add_scaled(delta, &Scalar::one());
            q.set_anchor(&[0], map).unwrap();
            anchors.0 += 1;
            if !assert_equivalence(&q, &format!("anchor perturbation {k}")) {
                anchors.1 += 1;
            }
        }
    }
    assert!(brackets.0 >= 6);
    assert!(3 * brackets.1 >= 2 * brackets.0, "{brackets:?}");
    assert!(anchors.0 >= 3 && anchors.1 >= 1, "{anchors:?}");
}
