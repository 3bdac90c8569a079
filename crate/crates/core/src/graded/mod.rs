//! Exact scalars, graded algebras and modules, permutations and signs.

mod algebra;
mod derivations;
pub mod linalg;
pub mod models;
mod module;
mod perm;
mod report;
mod scalar;

pub use algebra::{AlgebraElement, AlgebraMap, BaseAlgebra, BasisElement};
pub use derivations::{all_derivations, derivation_basis, derivation_degrees};
pub use module::{FreeModule, ModuleElement};
pub use perm::{
    all_permutations, combinations, enumerate_unshuffles, skew_sign, skew_sign_odd, sym_sign, sym_sign_odd,
    unshuffles, Permutation,
};
pub use report::{ValidationReport, Violation};
pub use scalar::Scalar;

/// `true` when the degree is odd (negative degrees included).
pub fn odd(d: i64) -> bool {
    d & 1 == 1
}
