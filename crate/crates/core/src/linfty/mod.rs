//! L∞ and L∞[1] structures on free modules, the décalage between them,
//! morphisms, and the shifted dg Lie algebra of derivations.

mod algebra;
mod der_dgla;
mod morphism;
mod table;

pub use algebra::{decalage_sign_odd, jacobi_residual, LInftyAlgebra, LInftyOneAlgebra, Residual, SymmetricBrackets};
pub use der_dgla::{build_shifted_der_dgla, DerivationTarget, ShiftedDerDGLA};
pub use morphism::{compositions, morphism_residual, morphism_residual_with, LInftyMorphism, LInftyOneTarget};
pub use table::{canonical_tuples, canonicalize, expand_arguments, BracketTable, Symmetry};
