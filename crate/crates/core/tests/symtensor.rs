mod common;

use lrkit::graded::{odd, sym_sign, unshuffles, AlgebraElement, FreeModule, ModuleElement, Permutation, Scalar};
use lrkit::random;
use lrkit::symtensor::{Derivation, FilteredAutomorphism, SymAlgebra, SymElement};
use proptest::prelude::*;
use rand::Rng;

use common::{modules, rng};

fn pick(index: usize) -> (FreeModule, SymAlgebra) {
    let m = modules().swap_remove(index % 3);
    let s = SymAlgebra::dual_of(&m, 4);
    (m, s)
}

/// Random homogeneous element of a random degree in `[-2, 2]`.
fn element(r: &mut impl Rng, s: &SymAlgebra) -> (SymElement, i64) {
    let degree = r.gen_range(-2..=2);
    (random::sym_element(r, s, degree, 0, s.cap(), 0.4), degree)
}

/// A random argument: a generator with a homogeneous coefficient of `A`.
fn argument(r: &mut impl Rng, m: &FreeModule) -> (ModuleElement, i64) {
    let g = r.gen_range(0..m.rank());
    let alg = m.base();
    let k = r.gen_range(0..alg.dim());
    let c = random::scalar(r);
    (ModuleElement::term(g, AlgebraElement::term(k, c)), alg.degree(k) + m.degree(g))
}

/// `(η·η′)(v) = Σ_{σ ∈ Sh(r, r′)} α(σ, v) (−1)^{|η′|(|v_σ(1)| + ⋯ + |v_σ(r)|)}
/// η(v_σ(1), …) η′(…, v_σ(n))`, computed directly from the two factors.
fn product_oracle(
    s: &SymAlgebra,
    eta: &SymElement,
    eta2: &SymElement,
    eta2_deg: i64,
    args: &[(ModuleElement, i64)],
) -> AlgebraElement {
    let n = args.len();
    let degrees: Vec<i64> = args.iter().map(|a| a.1).collect();
    let values: Vec<ModuleElement> = args.iter().map(|a| a.0.clone()).collect();
    let mut out = AlgebraElement::zero();
    for r in 0..=n {
        for sigma in unshuffles(&[r, n - r]) {
            let v = sigma.permute(&values);
            let first: i64 = sigma.images()[..r].iter().map(|&i| degrees[i]).sum();
            let sign = sym_sign(&sigma, &degrees).unwrap().negate_if(odd(eta2_deg) && odd(first));
            let left = s.evaluate(eta, &v[..r]).unwrap();
            let right = s.evaluate(eta2, &v[r..]).unwrap();
            out.add_scaled(&s.base().mul(&left, &right), &sign);
        }
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn product_is_associative_and_graded_commutative(seed in any::<u64>(), which in 0usize..3) {
        let (_, s) = pick(which);
        let mut r = rng(seed);
        let (a, da) = element(&mut r, &s);
        let (b, db) = element(&mut r, &s);
        let (c, _) = element(&mut r, &s);
        prop_assert_eq!(s.mul(&s.mul(&a, &b), &c), s.mul(&a, &s.mul(&b, &c)));
        prop_assert_eq!(s.mul(&a, &b), s.mul(&b, &a).scale(&Scalar::sign(odd(da) && odd(db))));
        prop_assert_eq!(s.mul(&s.one(), &a), a);
    }

    #[test]
    fn evaluation_of_products_matches_unshuffle_expansion(seed in any::<u64>(), which in 0usize..3, n in 0usize..=4) {
        let (m, s) = pick(which);
        let mut r = rng(seed);
        let (a, _) = element(&mut r, &s);
        let (b, db) = element(&mut r, &s);
        let args: Vec<_> = (0..n).map(|_| argument(&mut r, &m)).collect();
        let values: Vec<ModuleElement> = args.iter().map(|x| x.0.clone()).collect();
        let got = s.evaluate(&s.mul(&a, &b), &values).unwrap();
        prop_assert_eq!(got, product_oracle(&s, &a, &b, db, &args));
    }

    #[test]
    fn evaluation_is_graded_symmetric(seed in any::<u64>(), which in 0usize..3, n in 1usize..=4) {
        let (m, s) = pick(which);
        let mut r = rng(seed);
        let (a, _) = element(&mut r, &s);
        let args: Vec<_> = (0..n).map(|_| argument(&mut r, &m)).collect();
        let degrees: Vec<i64> = args.iter().map(|x| x.1).collect();
        let values: Vec<ModuleElement> = args.iter().map(|x| x.0.clone()).collect();
        let mut images: Vec<usize> = (0..n).collect();
        for i in (1..n).rev() {
            images.swap(i, r.gen_range(0..=i));
        }
        let sigma = Permutation::from_images(images).unwrap();
        let lhs = s.evaluate(&a, &sigma.permute(&values)).unwrap();
        let rhs = s.evaluate(&a, &values).unwrap().scale(&sym_sign(&sigma, &degrees).unwrap());
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn multilinear_form_round_trips(seed in any::<u64>(), which in 0usize..3) {
        let (_, s) = pick(which);
        let mut r = rng(seed);
        let (a, _) = element(&mut r, &s);
        for w in 0..=s.cap() {
            let back = s.from_generator_values(w, |gens| s.evaluate_on_generators(&a, gens));
            prop_assert_eq!(back, a.component(w));
        }
    }

    #[test]
    fn derivations_obey_leibniz(seed in any::<u64>(), which in 0usize..3, degree in -1i64..=1) {
        let (m, s) = pick(which);
        let mut r = rng(seed);
        let mut d = random::raising_derivation(&mut r, &s, degree, 0.4).unwrap();
        if degree == 1 {
            d = d.add(&Derivation::base_differential(&s, &m).unwrap()).unwrap();
        }
        prop_assert!(d.base_defects(&s).is_empty());
        let (a, da) = element(&mut r, &s);
        let (b, _) = element(&mut r, &s);
        let lhs = d.apply(&s, &s.mul(&a, &b));
        let mut rhs = s.mul(&d.apply(&s, &a), &b);
        rhs.add_scaled(&s.mul(&a, &d.apply(&s, &b)), &Scalar::sign(odd(degree) && odd(da)));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn application_respects_truncation(seed in any::<u64>(), which in 0usize..3) {
        let (m, s) = pick(which);
        let big = s.with_cap(5);
        let mut r = rng(seed);
        let d0 = Derivation::base_differential(&big, &m).unwrap();
        let d = random::perturbed_derivation(&mut r, &big, &d0, 0.3).unwrap();
        let (a, _) = element(&mut r, &big);
        let high = d.apply(&big, &a).with_cap(4);
        let low = d.with_cap(4).apply(&s, &a.with_cap(4));
        prop_assert_eq!(high, low);
    }

    #[test]
    fn conjugation_preserves_square_zero_and_gr(seed in any::<u64>(), which in 0usize..3) {
        let (m, s) = pick(which);
        let mut r = rng(seed);
        let d0 = Derivation::base_differential(&s, &m).unwrap();
        let phi = random::unipotent(&mut r, &s, 0.3).unwrap();
        let d = phi.conjugate(&s, &d0).unwrap();
        prop_assert!(d.square_components(&s).is_empty());
        prop_assert_eq!(d.component(0), d0.clone());
        prop_assert!(phi.mc_residual(&s, &d0).unwrap().is_zero());
        prop_assert!(phi.compose(&s, &phi.inverse(&s)).is_identity(&s));
    }
}

#[test]
fn base_differentials_square_to_zero() {
    for m in modules() {
        let s = SymAlgebra::dual_of(&m, 4);
        let d0 = Derivation::base_differential(&s, &m).unwrap();
        assert!(d0.square_components(&s).is_empty(), "{}", d0.display(&s));
        for k in 0..s.base().dim() {
            let e = AlgebraElement::basis(k);
            assert_eq!(d0.apply(&s, &s.from_algebra(&e)), s.from_algebra(&s.base().d(&e)));
        }
    }
}

#[test]
fn perturbation_breaks_the_square() {
    let mut hits = 0;
    for seed in 0..20 {
        let (m, s) = pick(seed as usize);
        let d0 = Derivation::base_differential(&s, &m).unwrap();
        let d = random::perturbed_derivation(&mut rng(seed), &s, &d0, 0.5).unwrap();
        if !d.square_components(&s).is_empty() {
            hits += 1;
        }
    }
    assert!(hits >= 15, "only {hits} of 20 perturbations broke D² = 0");
}

#[test]
fn identity_has_zero_connection_form() {
    let (m, s) = pick(0);
    let d0 = Derivation::base_differential(&s, &m).unwrap();
    let id = FilteredAutomorphism::identity(&s);
    assert!(id.connection_form(&s, &d0).unwrap().is_zero());
    assert!(id.mc_residual(&s, &d0).unwrap().is_zero());
}
