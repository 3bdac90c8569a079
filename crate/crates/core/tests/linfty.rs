mod common;

use std::collections::BTreeMap;
use std::sync::Arc;

use lrkit::graded::{models, AlgebraElement, AlgebraMap, BaseAlgebra, FreeModule, ModuleElement, Scalar};
use lrkit::linfty::{
    build_shifted_der_dgla, canonical_tuples, morphism_residual, LInftyAlgebra, LInftyMorphism, LInftyOneAlgebra,
    Symmetry, SymmetricBrackets,
};
use lrkit::random;
use proptest::prelude::*;
use rand::Rng;

fn ground() -> Arc<BaseAlgebra> {
    Arc::new(BaseAlgebra::ground())
}

fn vector(terms: &[(usize, i64)]) -> ModuleElement {
    let mut v = ModuleElement::zero();
    for &(g, c) in terms {
        v.add_term(g, &AlgebraElement::term(0, Scalar::from_int(c)));
    }
    v
}

/// `gl(2)` in degree 0 with basis `E11, E12, E21, E22` and `l_2` the commutator.
fn gl2() -> LInftyAlgebra {
    let m = FreeModule::new(ground(), vec![0; 4]);
    let mut l = LInftyAlgebra::new(m, 3);
    let e = |i: usize, j: usize| 2 * i + j;
    for (a, b) in [(0, 0), (0, 1), (1, 0), (1, 1)] {
        for (c, d) in [(0, 0), (0, 1), (1, 0), (1, 1)] {
            if e(a, b) >= e(c, d) {
                continue;
            }
            // [E_ab, E_cd] = δ_bc E_ad − δ_da E_cb
            let mut terms = Vec::new();
            if b == c {
                terms.push((e(a, d), 1));
            }
            if d == a {
                terms.push((e(c, b), -1));
            }
            let mut v = ModuleElement::zero();
            for (g, s) in terms {
                v.add_term(g, &AlgebraElement::term(0, Scalar::from_int(s)));
            }
            l.set(&[e(a, b), e(c, d)], v).unwrap();
        }
    }
    l
}

fn random_value(r: &mut impl Rng, m: &FreeModule, degree: i64) -> ModuleElement {
    let mut v = ModuleElement::zero();
    for g in 0..m.rank() {
        if m.degree(g) == degree && r.gen_bool(0.6) {
            v.add_term(g, &AlgebraElement::term(0, random::scalar(r)));
        }
    }
    v
}

/// Random skew brackets of every arity up to the cap on a ground-field carrier.
fn random_skew(r: &mut impl Rng, degrees: Vec<i64>, cap: usize) -> LInftyAlgebra {
    let m = FreeModule::new(ground(), degrees);
    let mut l = LInftyAlgebra::new(m.clone(), cap);
    for n in 2..=cap {
        for t in canonical_tuples(Symmetry::Skew, n, m.degrees()) {
            let deg = t.iter().map(|&g| m.degree(g)).sum::<i64>() + 2 - n as i64;
            l.set(&t, random_value(r, &m, deg)).unwrap();
        }
    }
    l
}

#[test]
fn matrix_commutator_satisfies_jacobi() {
    let l = gl2();
    assert!(l.jacobi_residual_skew(3).unwrap().is_empty());
    assert!(l.jacobi_residual_skew(2).unwrap().is_empty());
    let shifted = l.decalage().unwrap();
    for n in 1..=3 {
        assert!(shifted.jacobi_residual(n).unwrap().is_empty(), "arity {n}");
    }
}

#[test]
fn perturbed_commutator_breaks_jacobi() {
    let mut l = gl2();
    // [E11, E12] = E12 + E22 instead of E12
    l.set(&[0, 1], vector(&[(1, 1), (3, 1)])).unwrap();
    assert!(!l.jacobi_residual_skew(3).unwrap().is_empty());
    assert!(!l.decalage().unwrap().jacobi_residual(3).unwrap().is_empty());
}

#[test]
fn chain_complex_has_no_residual() {
    let mut d = BTreeMap::new();
    d.insert(0, vector(&[(1, 1)]));
    let m = FreeModule::new(ground(), vec![0, 1]).with_differential(d).unwrap();
    let l = LInftyAlgebra::new(m, 4);
    for n in 1..=4 {
        assert!(l.jacobi_residual_skew(n).unwrap().is_empty());
        assert!(l.decalage().unwrap().jacobi_residual(n).unwrap().is_empty());
    }
    assert!(l.jacobi_residual_skew(5).is_err());
}

#[test]
fn decalage_of_binary_bracket() {
    // {v, w} = (−1)^{|v|} [v, w]
    let m = FreeModule::new(ground(), vec![1, 0, 1]);
    let mut l = LInftyAlgebra::new(m, 2);
    l.set(&[0, 1], vector(&[(2, 1)])).unwrap();
    let s = l.decalage().unwrap();
    assert_eq!(s.table(2).on_generators(s.carrier().degrees(), &[0, 1]), vector(&[(2, -1)]));
    l.set(&[1, 2], vector(&[(0, 1)])).unwrap();
    let s = l.decalage().unwrap();
    assert_eq!(s.table(2).on_generators(s.carrier().degrees(), &[1, 2]), vector(&[(0, 1)]));
}

#[test]
fn derivations_of_exterior_algebra() {
    let a = Arc::new(models::exterior(&["e"]));
    let dgla = build_shifted_der_dgla(a.clone(), 4).unwrap();
    let basis = dgla.basis();
    assert_eq!(basis.len(), 2);
    // ∂_e of degree −1 and e∂_e of degree 0
    let partial = basis.iter().position(|d| d.degree == -1).unwrap();
    let euler = basis.iter().position(|d| d.degree == 0).unwrap();
    assert_eq!(basis[partial].images[1], a.one().scale(&basis[partial].images[1].coeff(0)));
    // [∂_e, e∂_e] = ∂_e, so ℓ_2(∂_e, e∂_e) = (−1)^{−1} ∂_e
    let l = dgla.algebra();
    let v = l.bracket(&[l.carrier().generator(partial), l.carrier().generator(euler)]);
    assert_eq!(dgla.map_of(&v), basis[partial].scale(&Scalar::from_int(-1)));
    let w = l.bracket(&[l.carrier().generator(euler), l.carrier().generator(euler)]);
    assert!(w.is_zero());
    for n in 1..=4 {
        assert!(l.jacobi_residual(n).unwrap().is_empty(), "arity {n}");
    }
    // d_A = 0, so ℓ_1 vanishes; and [d_A, d_A] = 0 for every base
    assert!(l.bracket(&[l.carrier().generator(partial)]).is_zero());
}

#[test]
fn derivation_dglas_satisfy_jacobi() {
    for a in [models::twisted_dual_numbers(), models::exterior(&["a", "b"]), models::truncated_even(3)] {
        let a = Arc::new(a);
        let d = AlgebraMap::differential(&a);
        assert!(d.commutator(&d).is_zero());
        let dgla = build_shifted_der_dgla(a, 4).unwrap();
        for n in 1..=3 {
            assert!(dgla.algebra().jacobi_residual(n).unwrap().is_empty(), "arity {n}");
        }
        let unshifted = dgla.algebra().undecalage().unwrap();
        assert!(unshifted.jacobi_residual_skew(3).unwrap().is_empty());
    }
}

#[test]
fn abelian_base_gives_abelian_dgla() {
    // K[u]/(u²) with |u| = 2: the only derivation is u∂_u, which commutes with itself
    let a = Arc::new(models::truncated_even(2));
    let dgla = build_shifted_der_dgla(a, 3).unwrap();
    assert!(dgla.algebra().table(2).is_zero());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn decalage_round_trips(seed in any::<u64>()) {
        let mut r = common::rng(seed);
        let degrees: Vec<i64> = (0..3).map(|_| r.gen_range(-1..=2)).collect();
        let l = random_skew(&mut r, degrees, 3);
        let back = l.decalage().unwrap().undecalage().unwrap();
        prop_assert_eq!(back, l);
    }

    #[test]
    fn decalage_preserves_jacobi_vanishing(seed in any::<u64>()) {
        let mut r = common::rng(seed);
        let degrees: Vec<i64> = (0..3).map(|_| r.gen_range(-1..=2)).collect();
        let l = random_skew(&mut r, degrees, 3);
        let s = l.decalage().unwrap();
        for n in 1..=3 {
            prop_assert_eq!(l.jacobi_residual_skew(n).unwrap().is_empty(), s.jacobi_residual(n).unwrap().is_empty());
        }
    }
}

/// Transport of structure along a unipotent change of basis `f_1`.
#[test]
fn transported_structure_is_a_morphism_target() {
    let mut r = common::rng(11);
    let degrees = vec![0, 1, 1];
    let mut d = BTreeMap::new();
    d.insert(0, vector(&[(1, 1)]));
    let m = FreeModule::new(ground(), degrees.clone()).with_differential(d).unwrap();
    let mut l = LInftyOneAlgebra::new(m.clone(), 3);
    for n in 2..=3 {
        for t in canonical_tuples(Symmetry::Symmetric, n, m.degrees()) {
            let deg = t.iter().map(|&g| m.degree(g)).sum::<i64>() + 1;
            l.set(&t, random_value(&mut r, &m, deg)).unwrap();
        }
    }
    let f = |v: &ModuleElement| -> ModuleElement {
        let mut out = v.clone();
        out.add_scaled(&vector(&[(1, 2)]), &v.coeff(2).coeff(0));
        out
    };
    let f_inv = |v: &ModuleElement| -> ModuleElement {
        let mut out = v.clone();
        out.add_scaled(&vector(&[(1, -2)]), &v.coeff(2).coeff(0));
        out
    };
    let mut d2 = BTreeMap::new();
    for g in 0..3 {
        d2.insert(g, f(&m.d(&f_inv(&m.generator(g)))));
    }
    let m2 = FreeModule::new(ground(), degrees).with_differential(d2).unwrap();
    let mut l2 = LInftyOneAlgebra::new(m2.clone(), 3);
    for n in 2..=3 {
        for t in canonical_tuples(Symmetry::Symmetric, n, m2.degrees()) {
            let args: Vec<ModuleElement> = t.iter().map(|&g| f_inv(&m.generator(g))).collect();
            l2.set(&t, f(&l.bracket(&args))).unwrap();
        }
    }
    let mut phi = LInftyMorphism::new(m.clone(), m2.clone(), 3).unwrap();
    for g in 0..3 {
        phi.set(&[g], f(&m.generator(g))).unwrap();
    }
    for n in 1..=3 {
        assert!(morphism_residual(&phi, &l, &l2, n).unwrap().is_empty(), "arity {n}");
    }
    let id = LInftyMorphism::identity(&m, 3).unwrap();
    for n in 1..=3 {
        assert!(morphism_residual(&id, &l, &l, n).unwrap().is_empty());
    }
    let zero = LInftyMorphism::new(m.clone(), m2, 3).unwrap();
    assert!((1..=3).all(|n| morphism_residual(&zero, &l, &l2, n).unwrap().is_empty()));
    // the identity is not a morphism once one binary value changes
    let wrong = LInftyMorphism::identity(&m, 3).unwrap();
    assert!((1..=3).any(|n| !morphism_residual(&wrong, &l, &l_perturbed(&l), n).unwrap().is_empty()));
}

fn l_perturbed(l: &LInftyOneAlgebra) -> LInftyOneAlgebra {
    let mut p = l.clone();
    let old = p.table(2).on_generators(p.carrier().degrees(), &[0, 0]);
    let mut v = old;
    v.add_scaled(&vector(&[(1, 1)]), &Scalar::one());
    p.set(&[0, 0], v).unwrap();
    p
}
