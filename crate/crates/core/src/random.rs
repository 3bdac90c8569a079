//! Seeded random generators for test fixtures and negative controls.

use rand::Rng;

use crate::error::Result;
use crate::algebroid::AlgebroidStructure;
use crate::geometry::{GeometricModel, Splitting};
use crate::graded::{derivation_basis, derivation_degrees, AlgebraElement, AlgebraMap, BaseAlgebra, FreeModule, ModuleElement, Scalar};
use crate::linfty::{canonical_tuples, Symmetry};
use crate::symtensor::{Derivation, FilteredAutomorphism, SymAlgebra, SymElement};

/// A small nonzero integer or half-integer.
pub fn scalar<R: Rng + ?Sized>(rng: &mut R) -> Scalar {
    let mut n = rng.gen_range(1..=3i64);
    if rng.gen_bool(0.5) {
        n = -n;
    }
    if rng.gen_bool(0.2) {
        Scalar::ratio(n, 2).expect("nonzero denominator")
    } else {
        Scalar::from_int(n)
    }
}

/// A random element of `A` of the given degree, each basis element present
/// with probability `density`.
pub fn algebra_element<R: Rng + ?Sized>(rng: &mut R, alg: &BaseAlgebra, degree: i64, density: f64) -> AlgebraElement {
    let mut out = AlgebraElement::zero();
    for k in alg.basis_of_degree(degree) {
        if rng.gen_bool(density) {
            out.add_term(k, &scalar(rng));
        }
    }
    out
}

/// A random homogeneous element of total degree `degree` supported in
/// weights `min_weight..=max_weight`.
pub fn sym_element<R: Rng + ?Sized>(
    rng: &mut R,
    sym: &SymAlgebra,
    degree: i64,
    min_weight: usize,
    max_weight: usize,
    density: f64,
) -> SymElement {
    let mut out = sym.zero();
    for r in min_weight..=max_weight.min(sym.cap()) {
        for w in sym.words_of_weight(r) {
            let c = algebra_element(rng, sym.base(), degree - sym.word_degree(&w), density);
            out.add_term(w, &c);
        }
    }
    out
}

/// A random weight-raising derivation of the given degree, of the form
/// `X(a) = Σ y_i δ_i(a)` on `A` with `δ_i` derivations of `A` (so `X` is
/// compatible with the products of `A`), and an arbitrary element of
/// weight at least two on each letter.
pub fn raising_derivation<R: Rng + ?Sized>(rng: &mut R, sym: &SymAlgebra, degree: i64, density: f64) -> Result<Derivation> {
    let alg = sym.base();
    let mut on_base = vec![sym.zero(); alg.dim()];
    for k in derivation_degrees(alg) {
        for delta in derivation_basis(alg, k) {
            let y = sym_element(rng, sym, degree - k, 1, sym.cap(), density);
            if y.is_zero() {
                continue;
            }
            for (a, value) in on_base.iter_mut().enumerate() {
                value.add_assign(&sym.mul(&y, &sym.from_algebra(&delta.images[a])));
            }
        }
    }
    let on_letters = (0..sym.rank())
        .map(|i| sym_element(rng, sym, sym.letter_degree(i) + degree, 2, sym.cap(), density))
        .collect();
    Derivation::new(sym, degree, on_base, on_letters)
}

/// `exp(X)` for a random weight-raising `X` of degree 0.
pub fn unipotent<R: Rng + ?Sized>(rng: &mut R, sym: &SymAlgebra, density: f64) -> Result<FilteredAutomorphism> {
    let x = raising_derivation(rng, sym, 0, density)?;
    FilteredAutomorphism::exp(sym, &x)
}

/// `d0` plus random weight-raising components of degree one; generally
/// not squaring to zero.
pub fn perturbed_derivation<R: Rng + ?Sized>(rng: &mut R, sym: &SymAlgebra, d0: &Derivation, density: f64) -> Result<Derivation> {
    d0.add(&raising_derivation(rng, sym, 1, density)?)
}

/// A random module element of the given degree.
pub fn module_element<R: Rng + ?Sized>(rng: &mut R, module: &FreeModule, degree: i64, density: f64) -> ModuleElement {
    let mut out = ModuleElement::zero();
    for g in 0..module.rank() {
        let c = algebra_element(rng, module.base(), degree - module.degree(g), density);
        if !c.is_zero() {
            out.add_term(g, &c);
        }
    }
    out
}

/// A random algebroid structure: brackets with arbitrary values and
/// anchors of the form `Σ c_k δ_k` with `δ_k` derivations of `A`, so every
/// anchor is a derivation. Such a structure generally fails its identities.
pub fn algebroid_structure<R: Rng + ?Sized>(
    rng: &mut R,
    carrier: &FreeModule,
    cap: usize,
    density: f64,
) -> Result<AlgebroidStructure> {
    let base = carrier.base().clone();
    let derivations: Vec<AlgebraMap> =
        derivation_degrees(&base).into_iter().flat_map(|k| derivation_basis(&base, k)).collect();
    let mut s = AlgebroidStructure::new(carrier.clone(), cap)?;
    for m in 1..=cap {
        for t in canonical_tuples(Symmetry::Symmetric, m, carrier.degrees()) {
            let degree = t.iter().map(|&g| carrier.degree(g)).sum::<i64>() + 1;
            let mut map = AlgebraMap::zero(base.dim(), degree);
            for delta in &derivations {
                let c = algebra_element(rng, &base, degree - delta.degree, density);
                if !c.is_zero() {
                    map.add_scaled(&delta.left_multiply(&base, &c, degree - delta.degree), &Scalar::one());
                }
            }
            s.set_anchor(&t, map)?;
            if m >= 2 {
                s.set_bracket(&t, module_element(rng, carrier, degree, density))?;
            }
        }
    }
    Ok(s)
}

/// A random degree-zero derivation of `A` with coefficients in `A⁰`.
pub fn degree_zero_derivation<R: Rng + ?Sized>(rng: &mut R, alg: &BaseAlgebra, density: f64) -> AlgebraMap {
    let mut map = AlgebraMap::zero(alg.dim(), 0);
    for delta in derivation_basis(alg, 0) {
        let c = algebra_element(rng, alg, 0, density);
        if !c.is_zero() {
            map.add_scaled(&delta.left_multiply(alg, &c, 0), &Scalar::one());
        }
    }
    map
}

/// A random geometric model over `base` with tangent rank `t`, normal rank
/// `n` and the given cap: a sheared splitting of `Y = T ⊕ N`, random `∂̂`,
/// a random ambient connection from which `Γ` and `S_N` are read off,
/// random split curvature, and `β` induced by the splitting. The result
/// satisfies every consistency condition relating its tensors.
pub fn geometric_model<R: Rng + ?Sized>(
    rng: &mut R,
    base: &std::sync::Arc<BaseAlgebra>,
    t: usize,
    n: usize,
    cap: usize,
    density: f64,
) -> Result<GeometricModel> {
    let mut g = GeometricModel::trivial(base.clone(), t, n, cap)?;
    let shear: Vec<Vec<AlgebraElement>> =
        (0..n).map(|_| (0..t).map(|_| algebra_element(rng, base, 0, density)).collect()).collect();
    g.splitting = Splitting::sheared(base, t, &shear);
    let holo: Vec<AlgebraMap> = (0..t).map(|_| degree_zero_derivation(rng, base, density)).collect();
    g.holo_diff = (0..base.dim()).map(|e| holo.iter().map(|d| d.images[e].clone()).collect()).collect();
    g.connection = Some(
        (0..t + n)
            .map(|_| (0..t).map(|_| (0..t + n).map(|_| algebra_element(rng, base, 0, density)).collect()).collect())
            .collect(),
    );
    g.derive_normal_connection();
    g.beta = g.induced_beta()?;
    let sym = g.normal_sym();
    g.curvature_perp = (2..=cap).map(|w| (0..n).map(|_| sym_element(rng, &sym, 1, w, w, density)).collect()).collect();
    g.curvature_top = (2..=cap).map(|w| (0..t).map(|_| sym_element(rng, &sym, 1, w, w, density)).collect()).collect();
    Ok(g)
}
