//! Small dgas used as base algebras by fixtures and tests.

use std::collections::BTreeMap;

use crate::graded::{AlgebraElement, BaseAlgebra, BasisElement, Scalar};

fn mask_indices(mask: usize, k: usize) -> Vec<usize> {
    (0..k).filter(|i| mask >> i & 1 == 1).collect()
}

/// Exterior monomials ordered by length, then lexicographically.
fn exterior_masks(k: usize) -> Vec<usize> {
    let mut masks: Vec<usize> = (0..1usize << k).collect();
    masks.sort_by_key(|&m| (m.count_ones(), mask_indices(m, k)));
    masks
}

/// The exterior algebra `Λ[e_1, …, e_k]` on degree-one generators with
/// `d_A = 0`. Basis: monomials ordered by length, then lexicographically.
pub fn exterior(names: &[&str]) -> BaseAlgebra {
    exterior_with_differential(names, &[])
}

/// `(coefficient, generator indices)` monomials.
pub type Monomials = Vec<(i64, Vec<usize>)>;

/// `Λ[e_1, …, e_k]` with `d_A` prescribed on generators as sums of
/// `(coefficient, generator indices)` monomials of degree 2, extended by the
/// Leibniz rule. The caller is responsible for `d_A² = 0`.
pub fn exterior_with_differential(names: &[&str], d_generators: &[(usize, Monomials)]) -> BaseAlgebra {
    let k = names.len();
    let masks = exterior_masks(k);
    let index_of: BTreeMap<usize, usize> = masks.iter().enumerate().map(|(i, &m)| (m, i)).collect();
    let basis: Vec<BasisElement> = masks
        .iter()
        .map(|&m| {
            let name = if m == 0 {
                "1".to_string()
            } else {
                mask_indices(m, k).iter().map(|&i| names[i]).collect::<Vec<_>>().join("")
            };
            BasisElement { name, degree: m.count_ones() as i64 }
        })
        .collect();
    let mut products = BTreeMap::new();
    for &s in &masks {
        for &t in &masks {
            if s == 0 || t == 0 || s & t != 0 {
                continue;
            }
            let swaps: u32 = mask_indices(t, k).iter().map(|&j| (s >> (j + 1)).count_ones()).sum();
            let c = Scalar::sign(swaps % 2 == 1);
            products.insert((index_of[&s], index_of[&t]), AlgebraElement::term(index_of[&(s | t)], c));
        }
    }
    let plain = BaseAlgebra::new(basis.clone(), 0, products.clone(), BTreeMap::new()).expect("exterior algebra");
    let mut gen_diff = vec![AlgebraElement::zero(); k];
    for (g, terms) in d_generators {
        for (c, gens) in terms {
            let mut mono = plain.one();
            for &i in gens {
                mono = plain.mul(&mono, &AlgebraElement::basis(index_of[&(1 << i)]));
            }
            gen_diff[*g].add_scaled(&mono, &Scalar::from_int(*c));
        }
    }
    let mut differential = BTreeMap::new();
    for &m in &masks {
        // d(e_i · rest) = d(e_i)·rest − e_i·d(rest), with e_i the first letter.
        let idx = mask_indices(m, k);
        let mut value = AlgebraElement::zero();
        let mut prefix = plain.one();
        for (pos, &i) in idx.iter().enumerate() {
            let mut suffix = plain.one();
            for &j in &idx[pos + 1..] {
                suffix = plain.mul(&suffix, &AlgebraElement::basis(index_of[&(1 << j)]));
            }
            let term = plain.mul(&plain.mul(&prefix, &gen_diff[i]), &suffix);
            value.add_scaled(&term, &Scalar::sign(pos % 2 == 1));
            prefix = plain.mul(&prefix, &AlgebraElement::basis(index_of[&(1 << i)]));
        }
        if !value.is_zero() {
            differential.insert(index_of[&m], value);
        }
    }
    BaseAlgebra::new(basis, 0, products, differential).expect("exterior algebra")
}

/// `K[x]/(x²) ⊗ Λ[e]` with `|x| = 0`, `|e| = 1` and `d_A x = e·x`.
/// Basis: `1, x, e, ex`.
pub fn twisted_dual_numbers() -> BaseAlgebra {
    let basis = vec![
        BasisElement { name: "1".into(), degree: 0 },
        BasisElement { name: "x".into(), degree: 0 },
        BasisElement { name: "e".into(), degree: 1 },
        BasisElement { name: "ex".into(), degree: 1 },
    ];
    let mut products = BTreeMap::new();
    products.insert((1, 2), AlgebraElement::basis(3));
    products.insert((2, 1), AlgebraElement::basis(3));
    let mut differential = BTreeMap::new();
    differential.insert(1, AlgebraElement::basis(3));
    BaseAlgebra::new(basis, 0, products, differential).expect("twisted dual numbers")
}

/// `K[x]/(x²) ⊗ Λ[e, f]` with `|x| = 0`, `d_A x = e·x`, `d_A e = d_A f = 0`.
/// Basis: `1, x, e, f, ex, fx, ef, efx` (dimension 8).
pub fn twisted_dual_numbers_two() -> BaseAlgebra {
    let names = ["1", "x", "e", "f", "ex", "fx", "ef", "efx"];
    let degrees = [0, 0, 1, 1, 1, 1, 2, 2];
    // Encode basis elements as (has_x, exterior mask over {e, f}).
    let code = [(0, 0b00), (1, 0b00), (0, 0b01), (0, 0b10), (1, 0b01), (1, 0b10), (0, 0b11), (1, 0b11)];
    let index = |x: usize, m: usize| code.iter().position(|&c| c == (x, m)).unwrap();
    let basis = names
        .iter()
        .zip(degrees)
        .map(|(n, d)| BasisElement { name: n.to_string(), degree: d })
        .collect();
    let mut products = BTreeMap::new();
    for (a, &(xa, ma)) in code.iter().enumerate() {
        for (b, &(xb, mb)) in code.iter().enumerate() {
            if xa + xb > 1 || ma & mb != 0 {
                continue;
            }
            // Only e·f versus f·e needs a sign: e is bit 0, f is bit 1.
            let odd = ma == 0b10 && mb == 0b01;
            products.insert((a, b), AlgebraElement::term(index(xa + xb, ma | mb), Scalar::sign(odd)));
        }
    }
    let mut differential = BTreeMap::new();
    // d(x) = e·x; d(fx) = −f·e·x = e·f·x; d(others containing x) vanish.
    differential.insert(1, AlgebraElement::basis(4));
    differential.insert(5, AlgebraElement::basis(7));
    BaseAlgebra::new(basis, 0, products, differential).expect("twisted dual numbers")
}

/// `K[u]/(u³)` with `|u| = 2` and `d_A = 0`. Basis: `1, u, uu`.
pub fn truncated_even(power: usize) -> BaseAlgebra {
    let basis = (0..power)
        .map(|k| BasisElement { name: if k == 0 { "1".into() } else { "u".repeat(k) }, degree: 2 * k as i64 })
        .collect();
    let mut products = BTreeMap::new();
    for a in 1..power {
        for b in 1..power {
            if a + b < power {
                products.insert((a, b), AlgebraElement::basis(a + b));
            }
        }
    }
    BaseAlgebra::new(basis, 0, products, BTreeMap::new()).expect("truncated polynomial algebra")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_models_validate() {
        for a in [
            BaseAlgebra::ground(),
            exterior(&["e"]),
            exterior(&["a", "b", "c"]),
            exterior_with_differential(&["a", "b", "c"], &[(0, vec![(1, vec![1, 2])])]),
            twisted_dual_numbers(),
            twisted_dual_numbers_two(),
            truncated_even(3),
        ] {
            let r = a.validate();
            assert!(r.is_ok(), "{r}");
        }
    }

    #[test]
    fn exterior_differential_extends_by_leibniz() {
        let a = exterior_with_differential(&["a", "b", "c"], &[(0, vec![(1, vec![1, 2])])]);
        // basis: 1 a b c ab ac bc abc; d(ab) = d(a)·b = bcb = 0, d(ac) = bc·c = 0.
        assert_eq!(a.d(&AlgebraElement::basis(1)), AlgebraElement::basis(6));
        assert!(a.d(&AlgebraElement::basis(4)).is_zero());
        assert_eq!(a.name(7), "abc");
    }
}
