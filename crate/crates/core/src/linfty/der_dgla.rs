//! The shifted dg Lie algebra `Der(A)[1]` of derivations of a base algebra.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::graded::linalg::solve;
use crate::graded::{all_derivations, odd, AlgebraElement, AlgebraMap, BaseAlgebra, FreeModule, ModuleElement, Scalar};
use crate::linfty::algebra::LInftyOneAlgebra;
use crate::linfty::morphism::LInftyOneTarget;

/// `Der(A)[1]` acting directly on derivation matrices: `ℓ_1 δ = [d_A, δ]`
/// and `ℓ_2(δ, δ') = (−1)^{|δ|} [δ, δ']` with `|δ|` the unshifted degree.
/// Elements may be `A`-multiples of derivations; their degree is the one
/// stored in the map.
#[derive(Clone, Debug)]
pub struct DerivationTarget {
    base: Arc<BaseAlgebra>,
    d_a: AlgebraMap,
}

impl DerivationTarget {
    pub fn new(base: Arc<BaseAlgebra>) -> Self {
        let d_a = AlgebraMap::differential(&base);
        DerivationTarget { base, d_a }
    }

    pub fn base(&self) -> &Arc<BaseAlgebra> {
        &self.base
    }
}

impl LInftyOneTarget for DerivationTarget {
    type Elem = AlgebraMap;

    fn zero(&self) -> AlgebraMap {
        AlgebraMap::zero(self.base.dim(), 0)
    }

    fn add_scaled(&self, acc: &mut AlgebraMap, x: &AlgebraMap, s: &Scalar) {
        if acc.is_zero() {
            acc.degree = x.degree;
        }
        acc.add_scaled(x, s);
    }

    fn is_zero(&self, x: &AlgebraMap) -> bool {
        x.is_zero()
    }

    fn bracket(&self, args: &[AlgebraMap]) -> AlgebraMap {
        match args {
            [x] => self.d_a.commutator(x),
            [x, y] => x.commutator(y).scale(&Scalar::sign(odd(x.degree))),
            _ => self.zero(),
        }
    }
}

/// `Der(A)[1]` in coordinates: a basis of all derivations of `A` as a
/// graded vector space, with the brackets of [`DerivationTarget`]
/// expressed in that basis.
#[derive(Clone, Debug)]
pub struct ShiftedDerDGLA {
    base: Arc<BaseAlgebra>,
    basis: Vec<AlgebraMap>,
    algebra: LInftyOneAlgebra,
}

impl ShiftedDerDGLA {
    pub fn base(&self) -> &Arc<BaseAlgebra> {
        &self.base
    }

    /// The basis derivations; the `i`-th generator of the carrier is
    /// `basis()[i]` placed in degree `|δ_i| − 1`.
    pub fn basis(&self) -> &[AlgebraMap] {
        &self.basis
    }

    pub fn algebra(&self) -> &LInftyOneAlgebra {
        &self.algebra
    }

    /// Coordinates of a homogeneous derivation in the basis.
    pub fn coordinates(&self, map: &AlgebraMap) -> Result<ModuleElement> {
        coordinates(&self.basis, map)
    }

    /// The derivation with the given coordinates.
    pub fn map_of(&self, v: &ModuleElement) -> AlgebraMap {
        let mut out = AlgebraMap::zero(self.base.dim(), 0);
        for (i, c) in v.terms() {
            if out.is_zero() {
                out.degree = self.basis[i].degree;
            }
            out.add_scaled(&self.basis[i], &c.coeff(0));
        }
        out
    }
}

fn coordinates(basis: &[AlgebraMap], map: &AlgebraMap) -> Result<ModuleElement> {
    let mut out = ModuleElement::zero();
    if map.is_zero() {
        return Ok(out);
    }
    let cols: Vec<usize> = (0..basis.len()).filter(|&i| basis[i].degree == map.degree).collect();
    let dim = map.images.len();
    let mut rows = Vec::new();
    let mut rhs = Vec::new();
    for src in 0..dim {
        for tgt in 0..dim {
            rows.push(cols.iter().map(|&i| basis[i].images[src].coeff(tgt)).collect::<Vec<_>>());
            rhs.push(map.images[src].coeff(tgt));
        }
    }
    let x = solve(&rows, &rhs, cols.len()).ok_or_else(|| Error::Invalid("map is not a derivation".into()))?;
    for (&i, c) in cols.iter().zip(x) {
        out.add_term(i, &AlgebraElement::term(0, c));
    }
    Ok(out)
}

/// Builds `Der(A)[1]` for the given base, with brackets up to arity `cap`
/// (only `ℓ_1` and `ℓ_2` are nonzero).
pub fn build_shifted_der_dgla(base: Arc<BaseAlgebra>, cap: usize) -> Result<ShiftedDerDGLA> {
    let basis = all_derivations(&base);
    let target = DerivationTarget::new(base.clone());
    let ground = Arc::new(BaseAlgebra::ground());
    let degrees: Vec<i64> = basis.iter().map(|d| d.degree - 1).collect();
    let mut differential = BTreeMap::new();
    for (i, delta) in basis.iter().enumerate() {
        differential.insert(i, coordinates(&basis, &target.bracket(std::slice::from_ref(delta)))?);
    }
    let names = (0..basis.len()).map(|i| format!("δ{i}")).collect();
    let carrier = FreeModule::new(ground, degrees).with_names(names)?.with_differential(differential)?;
    let mut algebra = LInftyOneAlgebra::new(carrier, cap.max(2));
    for i in 0..basis.len() {
        for j in i..basis.len() {
            let value = coordinates(&basis, &target.bracket(&[basis[i].clone(), basis[j].clone()]))?;
            if !value.is_zero() {
                algebra.set(&[i, j], value)?;
            }
        }
    }
    Ok(ShiftedDerDGLA { base, basis, algebra })
}
