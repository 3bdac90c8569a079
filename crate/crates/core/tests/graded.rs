mod common;

use std::collections::BTreeMap;
use std::sync::Arc;

use lrkit::graded::{
    all_permutations, enumerate_unshuffles, models, odd, skew_sign, sym_sign, AlgebraElement, BaseAlgebra,
    BasisElement, FreeModule, ModuleElement, Permutation, Scalar,
};
use proptest::prelude::*;
use rand::Rng;

/// Sorts `σ·v` back to `v` by adjacent swaps, multiplying the per-swap
/// factor each time: `(−1)^{|a||b|}` for symmetric words, and an extra
/// `−1` for skew words.
fn bubble_oracle(sigma: &Permutation, degrees: &[i64], skew: bool) -> Scalar {
    let mut word: Vec<usize> = sigma.images().to_vec();
    let mut sign = Scalar::one();
    loop {
        let mut swapped = false;
        for p in 0..word.len().saturating_sub(1) {
            if word[p] > word[p + 1] {
                let both_odd = odd(degrees[word[p]]) && odd(degrees[word[p + 1]]);
                sign = sign.negate_if(both_odd ^ skew);
                word.swap(p, p + 1);
                swapped = true;
            }
        }
        if !swapped {
            return sign;
        }
    }
}

fn binomial(n: usize, k: usize) -> usize {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

#[test]
fn signs_match_bubble_sort_on_all_small_groups() {
    let mut r = common::rng(7);
    for n in 1..=5 {
        let perms = all_permutations(n);
        for _ in 0..20 {
            let degrees: Vec<i64> = (0..n).map(|_| r.gen_range(-2..=4)).collect();
            for sigma in &perms {
                assert_eq!(sym_sign(sigma, &degrees).unwrap(), bubble_oracle(sigma, &degrees, false));
                assert_eq!(skew_sign(sigma, &degrees).unwrap(), bubble_oracle(sigma, &degrees, true));
            }
        }
    }
}

#[test]
fn unshuffle_counts_are_binomial() {
    for i in 1..=6 {
        for j in 1..=6 {
            assert_eq!(enumerate_unshuffles(&[i as i64, j as i64]).unwrap().len(), binomial(i + j, i));
        }
    }
}

fn permutation(r: &mut impl Rng, n: usize) -> Permutation {
    let mut images: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        images.swap(i, r.gen_range(0..=i));
    }
    Permutation::from_images(images).unwrap()
}

proptest! {
    #[test]
    fn signs_compose(seed in any::<u64>(), n in 1usize..=6) {
        let mut r = common::rng(seed);
        let sigma = permutation(&mut r, n);
        let tau = permutation(&mut r, n);
        let v: Vec<i64> = (0..n).map(|_| r.gen_range(-2..=4)).collect();
        let tv = tau.permute(&v);
        let composed = tau.compose(&sigma);
        for f in [sym_sign, skew_sign] {
            prop_assert_eq!(f(&composed, &v).unwrap(), f(&sigma, &tv).unwrap() * f(&tau, &v).unwrap());
        }
        prop_assert_eq!(skew_sign(&sigma, &v).unwrap(), sigma.signature() * sym_sign(&sigma, &v).unwrap());
    }
}

#[test]
fn fabricated_odd_square_is_reported() {
    let basis = vec![
        BasisElement { name: "1".into(), degree: 0 },
        BasisElement { name: "e".into(), degree: 1 },
    ];
    let mut products = BTreeMap::new();
    products.insert((1, 1), AlgebraElement::basis(0));
    let alg = BaseAlgebra::new(basis, 0, products, BTreeMap::new()).unwrap();
    let report = alg.validate();
    assert!(!report.is_ok());
    assert!(report.violations().iter().any(|v| v.check == "graded commutativity" || v.check == "degree of products"));
}

#[test]
fn twisted_algebras_validate() {
    assert!(models::twisted_dual_numbers().validate().is_ok());
    assert!(models::twisted_dual_numbers_two().validate().is_ok());
    assert!(models::exterior(&["a", "b", "c"]).validate().is_ok());
}

#[test]
fn module_examples() {
    for m in common::modules() {
        assert!(m.validate().is_ok(), "{}", m.validate());
    }
    // rank one over Λ[e] with d g = e·g: d² g = e² g = 0
    let a = Arc::new(models::exterior(&["e"]));
    let mut d = BTreeMap::new();
    d.insert(0, ModuleElement::term(0, AlgebraElement::basis(1)));
    let m = FreeModule::new(a, vec![0]).with_differential(d).unwrap();
    assert!(m.validate().is_ok());
}
