//! The finite-dimensional space of derivations of a base algebra.

use crate::graded::linalg::nullspace;
use crate::graded::{AlgebraElement, AlgebraMap, BaseAlgebra, Scalar};

/// A basis of the derivations of `A` of a fixed degree `k`: linear maps
/// `δ` of degree `k` with `δ(xy) = δ(x)y + (−1)^{k|x|} x δ(y)`.
pub fn derivation_basis(alg: &BaseAlgebra, degree: i64) -> Vec<AlgebraMap> {
    let n = alg.dim();
    // Unknowns: matrix entries (source α, target γ) with |γ| = |α| + k.
    let unknowns: Vec<(usize, usize)> = (0..n)
        .flat_map(|a| alg.basis_of_degree(alg.degree(a) + degree).into_iter().map(move |g| (a, g)))
        .collect();
    if unknowns.is_empty() {
        return Vec::new();
    }
    // Column u of the constraint matrix is the Leibniz defect of the
    // elementary map E_u, flattened over (a, b, γ).
    let columns: Vec<Vec<Scalar>> = unknowns
        .iter()
        .map(|&(src, tgt)| {
            let mut e = AlgebraMap::zero(n, degree);
            e.images[src] = AlgebraElement::basis(tgt);
            let mut flat = vec![Scalar::zero(); n * n * n];
            for (a, b, r) in e.derivation_defects(alg) {
                for (g, c) in r.terms() {
                    flat[(a * n + b) * n + g] = c.clone();
                }
            }
            flat
        })
        .collect();
    let rows: Vec<Vec<Scalar>> = (0..n * n * n)
        .map(|r| columns.iter().map(|col| col[r].clone()).collect::<Vec<_>>())
        .filter(|row| row.iter().any(|x| !x.is_zero()))
        .collect();
    nullspace(&rows, unknowns.len())
        .into_iter()
        .map(|v| {
            let mut m = AlgebraMap::zero(n, degree);
            for (&(src, tgt), c) in unknowns.iter().zip(&v) {
                m.images[src].add_term(tgt, c);
            }
            m
        })
        .collect()
}

/// Degrees in which `A` can carry a nonzero derivation.
pub fn derivation_degrees(alg: &BaseAlgebra) -> std::ops::RangeInclusive<i64> {
    let spread = alg.max_degree() - alg.min_degree();
    -spread..=spread
}

/// Derivations of every degree, grouped by ascending degree.
pub fn all_derivations(alg: &BaseAlgebra) -> Vec<AlgebraMap> {
    derivation_degrees(alg).flat_map(|k| derivation_basis(alg, k)).collect()
}
